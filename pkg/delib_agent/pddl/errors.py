class PDDLError(ValueError):
    """Base class for domain and problem errors."""


class PDDLSyntaxError(PDDLError):
    """Malformed input, with the position where parsing stopped.

    Args:
        message (str): What went wrong.
        line (int): 1-based line number.
        column (int): 1-based column number.
        expected (str): The token or construct that was expected there.

    """

    def __init__(self, message, line=None, column=None, expected=None):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownCategory(PDDLError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"Unknown category: {name}")


class UnknownPredicate(PDDLError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"Unknown predicate: {name}")


class UnsupportedRequirement(PDDLError):
    def __init__(self, flag):
        self.flag = flag
        super().__init__(f"Unsupported requirement: :{flag}")


class TypeMismatch(PDDLError):
    def __init__(self, obj, expected):
        self.obj = obj
        self.expected = expected
        super().__init__(f"Object {obj} is not of category {expected}")


class CyclicHierarchy(PDDLError):
    def __init__(self, cycle):
        self.cycle = cycle
        super().__init__(f"Category hierarchy has a cycle: {cycle}")


class GroundingExplosion(PDDLError):
    def __init__(self, count, cap):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} grounded actions exceed the cap of {cap}")


class UnboundVariable(PDDLError):
    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"Unbound variable: {variable}")


class PreconditionViolated(PDDLError):
    """Raised by `apply` with the literals that did not hold.

    Args:
        action (str): Printed grounded action.
        failed (:obj:`list` of :obj:`tuple`): Pairs of (atom, expected truth value).

    """

    def __init__(self, action, failed):
        self.action = action
        self.failed = failed
        super().__init__(f"Precondition of {action} violated: {failed}")

class ExecutorError(Exception):
    """Base class for episode control flow errors."""


class BudgetExhausted(ExecutorError):
    """A step or failure cap was hit.

    `scope` is "episode" for the global caps and "subgoal" for the
    per-subgoal step cap.
    """

    def __init__(self, cap, scope, value):
        self.cap = cap
        self.scope = scope
        self.value = value
        super().__init__(f"{cap} reached ({value}) for the {scope}")


class InvalidRunConfig(ExecutorError):
    def __init__(self, message):
        super().__init__(message)

"""S-expression reader that keeps line and column of every token."""
from dataclasses import dataclass
from typing import List, Union

from pyparsing import (
    CharsNotIn,
    Empty,
    Forward,
    Group,
    Located,
    ParseBaseException,
    StringEnd,
    Suppress,
    ZeroOrMore,
    col,
    lineno,
    rest_of_line,
)

from delib_agent.pddl.errors import PDDLSyntaxError


@dataclass
class SNode:
    """A token (``value`` is a str) or a list of child nodes."""

    value: Union[str, List["SNode"]]
    line: int
    column: int

    @property
    def is_token(self):
        return isinstance(self.value, str)

    @property
    def keyword(self):
        """Lower-cased head token of a list, or None."""
        if self.is_token or not self.value or not self.value[0].is_token:
            return None
        return self.value[0].value.lower()

    def __len__(self):
        return 0 if self.is_token else len(self.value)

    def __getitem__(self, i):
        return self.value[i]

    def __iter__(self):
        return iter([] if self.is_token else self.value)

    def fail(self, message, expected=None):
        raise PDDLSyntaxError(message, self.line, self.column, expected)

    def token(self, expected="a name"):
        if not self.is_token:
            self.fail(f"Expected {expected}", expected)
        return self.value

    def lowered(self, expected="a keyword"):
        return self.token(expected).lower()


def _grammar():
    token = Empty() + CharsNotIn("() \n\t\r;")
    nested = Forward()
    nested <<= Group(
        Located(Suppress("(") + ZeroOrMore(Group(Located(token)) | nested) + Suppress(")"))
    )
    document = nested + StringEnd()
    document.ignore(";" + rest_of_line)
    return document


_DOCUMENT = _grammar()


def _to_node(result, text):
    start = result.locn_start
    value = result.value
    line, column = lineno(start, text), col(start, text)
    if len(value) == 1 and isinstance(value[0], str):
        return SNode(value[0], line, column)
    return SNode([_to_node(child, text) for child in value], line, column)


def read_sexpr(text):
    """Parses one parenthesised document.

    Args:
        text (str): PDDL source.

    Returns:
        (SNode): The root list node.

    Raises:
        PDDLSyntaxError: Unbalanced parentheses or trailing content.

    """
    try:
        parsed = _DOCUMENT.parse_string(text, parse_all=True)
    except ParseBaseException as e:
        expected = e.msg.replace("Expected ", "") if e.msg else None
        raise PDDLSyntaxError(e.msg, e.lineno, e.col, expected) from None
    return _to_node(parsed[0], text)

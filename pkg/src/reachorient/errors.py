"""Exception hierarchy shared by the package and mapped to CLI exit codes."""

from __future__ import annotations


class ReachOrientError(Exception):
    pass


class GraphError(ReachOrientError, ValueError):
    """Malformed graph, weights or orientation."""


class ParseError(ReachOrientError, ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


class CapExceeded(ReachOrientError):
    """A configured enumeration or size cap would be exceeded."""


class UnsupportedInstance(ReachOrientError):
    """The input does not meet an operation's structural precondition."""

"""Exception hierarchy shared by the loaders, algorithms and the CLI."""

from __future__ import annotations


class DSDError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DSDError, ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class EmptyGraphError(DSDError, ValueError):
    """Raised when an algorithm or loader is handed a graph without edges/vertices."""


class EmptySubgraphError(DSDError, ZeroDivisionError):
    """Density of a vertex set of size zero was requested."""


class GraphSizeError(DSDError, ValueError):
    """Graph exceeds a configured hard cap (brute-force enumeration)."""


class InvariantError(DSDError, AssertionError):
    """An internal consistency check failed."""

"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class UpwardPlaneError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(UpwardPlaneError, ValueError):
    """Malformed input: duplicate ids, dangling endpoints, mismatched incidence."""

    def __init__(self, message: str, offending: str | None = None) -> None:
        super().__init__(message)
        self.offending = offending


class CycleError(StructuralError):
    """The directed graph contains a directed cycle."""

    def __init__(self, cycle: list[str]) -> None:
        super().__init__(f"directed cycle through edges {cycle}", offending=cycle[0] if cycle else None)
        self.cycle = cycle


class DomainError(UpwardPlaneError, ValueError):
    """Input is well formed but outside the operation's domain."""


class PreconditionError(UpwardPlaneError, ValueError):
    """A drawing failed validation where a valid one was required."""

    def __init__(self, message: str, report=None) -> None:
        super().__init__(message)
        self.report = report


class ParseError(UpwardPlaneError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class InternalError(UpwardPlaneError, AssertionError):
    """An invariant that the theory guarantees was violated; indicates a bug."""

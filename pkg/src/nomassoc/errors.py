"""Exception hierarchy for nomassoc.

Usage errors (bad flags, unknown subcommands) are handled by the CLI layer;
everything raised from the library itself derives from :class:`NomassocError`
so callers can distinguish data problems from programming errors.
"""

from __future__ import annotations


class NomassocError(Exception):
    """Base class for all errors raised by this package."""


class DataError(NomassocError, ValueError):
    """Input data violates an operation's contract (degenerate table,
    unknown variable, dimension mismatch, invalid mass, ...)."""


class ParseError(DataError):
    """A delimited input file could not be parsed; carries the line number."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class HierarchyInconsistencyError(NomassocError):
    """An equivalence hierarchy scan produced a non-monotone verdict chain,
    which indicates misconfigured tolerances rather than a data property."""


class DroppedLevelsWarning(UserWarning):
    """Response levels with zero mass were dropped from a computation."""

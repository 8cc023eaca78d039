"""Exception types shared across the package."""

from __future__ import annotations


class WsintError(Exception):
    """Base class for all errors raised by this package."""


class InvalidTableError(WsintError):
    """A repeated-measures table violates a structural invariant."""


class DegeneratePosteriorError(WsintError):
    """A posterior scale collapsed to zero; the data carry no residual variation."""


class ConvergenceError(WsintError):
    """The Gibbs sampler failed its split-chain convergence check."""

    def __init__(self, message: str, variance_ratios: tuple[float, ...] = ()):
        super().__init__(message)
        self.variance_ratios = variance_ratios


class DataFormatError(WsintError):
    """Base class for dataset ingestion failures."""


class MissingCellError(DataFormatError):
    """A (subject, condition) cell is absent from the input."""


class DuplicateCellError(DataFormatError):
    """A (subject, condition) cell appears more than once in the input."""


class DataParseError(DataFormatError):
    """A cell value could not be parsed as a number."""


class LayoutError(DataFormatError):
    """The file structure does not match the declared layout."""


class SimSpecError(WsintError):
    """A simulation specification is malformed."""

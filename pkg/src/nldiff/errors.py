"""Exception types raised across the package."""


class NldiffError(Exception):
    """Base class for all package errors."""


class FormatError(NldiffError, ValueError):
    """Malformed or unsupported input data (files, raw rasters)."""


class NumericalError(NldiffError, ArithmeticError):
    """A numerical precondition failed (e.g. loss of diagonal dominance)."""


class LPError(NumericalError):
    """Linear program could not be solved to a certified optimum."""


class LPUnboundedError(LPError):
    """The linear program is unbounded above."""


class LPInfeasibleError(LPError):
    """The linear program has an empty feasible set."""


class LPIterationError(LPError):
    """The simplex iteration cap was reached."""

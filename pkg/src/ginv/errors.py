"""Exception hierarchy shared by every ginv module."""


class GinvError(Exception):
    """Base class for errors raised by ginv."""


class DimensionError(GinvError, ValueError):
    """Operands have incompatible shapes."""


class ZeroMatrixError(GinvError, ValueError):
    """The input matrix is identically zero, so it has no rank-r structure."""


class ConfigError(GinvError, ValueError):
    """A configuration object or problem definition is invalid."""


class RankError(GinvError, ArithmeticError):
    """A rank condition needed by the algorithm could not be certified."""


class SizeCapError(GinvError):
    """An instance exceeds the size cap of a solver meant for small problems."""


class ConvergenceError(GinvError):
    """A solver stopped before reaching its tolerance."""


class BoundViolation(GinvError, AssertionError):
    """A proven bound failed to hold on computed data."""

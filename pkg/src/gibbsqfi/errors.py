"""Exception types raised by the library."""


class QFIError(ValueError):
    """Base class for domain errors."""


class NotHermitianError(QFIError):
    pass


class DimensionError(QFIError):
    pass


class RankDeficientError(QFIError):
    """A state has a population too small to invert."""


class DegeneracyError(QFIError):
    """A construction needs a nondegenerate level that is degenerate."""


class SingularMeasurementError(QFIError):
    pass


class SizeGuardError(QFIError):
    """Requested Hilbert space dimension exceeds the dense memory budget."""

"""Exception types raised across the package."""


class QmatopsError(Exception):
    """Base class for all package errors."""


class LayoutError(QmatopsError, ValueError):
    """Bad register layout or basis assignment."""


class NormError(QmatopsError, ArithmeticError):
    """A state lost unit norm after a unitary step."""


class DimensionError(QmatopsError, ValueError):
    """Operand shapes are incompatible."""


class QubitCapError(QmatopsError, ValueError):
    """The requested system exceeds the configured qubit cap."""


class GateError(QmatopsError, ValueError):
    """Malformed gate or out-of-range qubit index."""

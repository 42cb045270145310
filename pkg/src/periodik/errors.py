"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2,
runtime precondition violations and degenerate detections exit 3.
"""


class PeriodikError(Exception):
    """Base class for all package errors."""


class ConfigurationError(PeriodikError):
    """Incompatible or malformed configuration (scheme mismatch, bad constants)."""


class ParameterError(PeriodikError, ValueError):
    """A numeric argument lies outside its admissible domain."""


class InputLengthError(PeriodikError, ValueError):
    """A signal is shorter than the requested truncation length m."""


class KernelDecompositionError(PeriodikError):
    """The requested kernel has no supported (f, beta) decomposition."""


class DegenerateLocalizationError(PeriodikError):
    """Every grid point cleared the detection level: one full-circle arc.

    Carries the offending arc so callers can report it instead of
    fabricating endpoint indices that do not exist.
    """

    def __init__(self, arc, message="superlevel set covers the whole circle"):
        super().__init__(message)
        self.arc = arc

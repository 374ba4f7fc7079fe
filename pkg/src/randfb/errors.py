"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`RandFBError`.
Parameter errors additionally derive from :class:`ValueError`, I/O errors from
:class:`OSError`, so callers can catch either way.
"""


class RandFBError(Exception):
    """Base class for library errors."""


class InvalidLengthError(RandFBError, ValueError):
    pass


class InvalidFrequencyError(RandFBError, ValueError):
    pass


class InvalidParameterError(RandFBError, ValueError):
    pass


class DegenerateSignalError(RandFBError, ValueError):
    """The signal has zero energy (e.g. after mean removal) and cannot be normalized."""


class DomainError(RandFBError, ValueError):
    """A closed-form expression is evaluated outside its domain of validity."""


class InsufficientSamplingError(RandFBError, ValueError):
    pass


class WavError(RandFBError, OSError):
    """Base class for WAV ingestion failures."""


class WavReadError(WavError):
    """File missing, unreadable, or not a RIFF/WAVE container."""


class UnsupportedEncodingError(WavError):
    """WAV encoding other than 16-bit integer PCM or 32-bit float."""


class InsufficientSamplesError(WavError):
    pass


class SilentExcerptError(WavError):
    """The requested excerpt is all zeros."""


class ConvergenceError(RandFBError, ArithmeticError):
    """An iterative method hit its iteration cap.

    ``estimate`` holds the last iterate so the caller can decide what to do with it.
    """

    def __init__(self, message, estimate=None, iterations=None):
        super().__init__(message)
        self.estimate = estimate
        self.iterations = iterations

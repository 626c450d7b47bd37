"""Exception types raised across the package."""


class AcousticNavError(Exception):
    """Base class for every error raised by acoustic_nav."""


class InvalidInputError(AcousticNavError, ValueError):
    """An argument violates an operation's precondition."""


class UnsupportedFormatError(AcousticNavError):
    """Image file is not a binary PPM (P6)."""


class UnsupportedDepthError(AcousticNavError):
    """PPM maxval other than 255."""


class MalformedFileError(AcousticNavError):
    """Header or payload of an image file is damaged or truncated."""

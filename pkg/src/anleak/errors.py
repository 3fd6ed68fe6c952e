"""Exception types shared across the package."""


class AnleakError(Exception):
    """Base class for package-specific errors."""


class ConfigError(AnleakError):
    """A configuration file or CLI parameter set is malformed or inconsistent."""


class DegenerateChannelError(AnleakError):
    """A sampled or supplied channel matrix is numerically rank deficient.

    Raised when an operation that assumes full row rank (null-space
    extraction, zero-forcing pseudo-inverse) meets a matrix whose smallest
    singular value falls below the relative rank tolerance.
    """

"""Exception types shared across the package.

The CLI maps these onto exit codes, so extractors and trainers raise these
instead of bare ValueError/OSError wherever the failure is domain-specific.
"""


class WeedSvmError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(WeedSvmError, ValueError):
    """An argument is outside its documented domain."""


class DegenerateInputError(WeedSvmError, ValueError):
    """Input too small or empty for the requested operation."""


class OutOfBoundsError(WeedSvmError, IndexError):
    """A sampling neighborhood reaches outside the image."""


class ImageLoadError(WeedSvmError, OSError):
    """An image file could not be read."""


class UnsupportedFormatError(ImageLoadError):
    """An image file is in a format we cannot decode."""


class DatasetLayoutError(WeedSvmError):
    """The dataset directory does not have the expected class layout."""


class DatasetError(WeedSvmError):
    """The dataset layout is fine but its contents are unusable."""


class ExtractionError(WeedSvmError):
    """Feature extraction produced no usable rows."""


class ConfigurationError(WeedSvmError):
    """A requested configuration cannot be satisfied (e.g. missing columns)."""


class ModelFormatError(WeedSvmError):
    """A serialized model is truncated, malformed, or has an unknown version."""


class ConvergenceError(WeedSvmError):
    """Training did not converge and strict mode was requested."""

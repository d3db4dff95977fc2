"""Exception types shared across the library."""


class TscError(Exception):
    """Base class for all library errors."""


class DatasetFormatError(TscError, ValueError):
    """A dataset file is malformed (ragged lines, bad tokens, empty file)."""


class LengthMismatchError(TscError, ValueError):
    """Two series that must share a length do not."""


class ParameterError(TscError, ValueError):
    """A parameter is outside its valid range or grid."""


class SizeError(TscError, ValueError):
    """Requested split sizes are inconsistent with the available data."""

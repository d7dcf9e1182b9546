"""Exception hierarchy.

``ConfigError`` marks a bad parameter or configuration (a caller bug);
``DataError`` marks input data that cannot be used. The CLI maps the first
to exit code 1 and the second to exit code 2.
"""


class HsiError(Exception):
    pass


class ConfigError(HsiError, ValueError):
    pass


class DataError(HsiError, ValueError):
    pass


class FormatError(DataError):
    """A file could not be parsed."""


class MagicMismatchError(FormatError):
    pass


class TruncatedPayloadError(FormatError):
    pass


class NonFiniteValueError(FormatError):
    pass


class RaggedRowError(FormatError):
    pass


class BadValueError(FormatError):
    pass

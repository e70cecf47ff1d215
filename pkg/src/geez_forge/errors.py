"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``ConfigError`` -> 1, ``DataError`` -> 2,
``OSError`` -> 3.
"""


class GeezForgeError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(GeezForgeError, ValueError):
    """Invalid configuration or parameters."""


class DataError(GeezForgeError, ValueError):
    """Input data that violates a format or precondition."""


class FormatVersionError(DataError):
    pass


class InvariantError(DataError):
    """A loaded artifact breaks one of its structural invariants."""

"""Exception types shared across the package."""


class DataError(Exception):
    """Malformed input data, description metadata, or encoded database."""


class MissingValueError(DataError):
    """A row is missing a value for a declared column."""


class ConfigError(ValueError):
    """Invalid mining configuration or criteria weights."""

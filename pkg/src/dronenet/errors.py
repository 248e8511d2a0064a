"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A numeric argument is outside its admissible range."""


class ConfigError(ValueError):
    """A run configuration is malformed or inconsistent."""

"""Exception types shared across the package and mapped to CLI exit codes."""


class FloquetLabError(Exception):
    """Base class for package errors."""


class ConfigError(FloquetLabError):
    """Config file cannot be parsed or is structurally malformed (exit 2)."""


class ValidationError(FloquetLabError):
    """Config parsed but is semantically inconsistent (exit 3)."""


class NumericalFailure(FloquetLabError):
    """A numerical routine failed to converge or returned garbage (exit 4)."""


class UnconvergedSpectrumError(NumericalFailure):
    """An eigendecomposition did not meet the residual gate."""

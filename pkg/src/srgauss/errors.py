"""Exception types shared across the package.

``ConfigError`` subclasses ``ValueError`` so plain domain errors raised by
the math layer and explicit configuration failures travel the same path to
the command line (exit code 2).
"""


class ConfigError(ValueError):
    """Invalid parameter or configuration; message names the violated invariant."""


class NumericError(RuntimeError):
    """A numeric routine failed to converge or lost its bracket."""


class BudgetError(RuntimeError):
    """Requested computation exceeds the configured compute budget."""

"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: config problems exit with 2,
violated analytic hypotheses with 3 and numeric divergence with 4.
"""


class CflError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(CflError):
    """Invalid configuration, input file or argument."""

    exit_code = 2


class HypothesisViolation(CflError):
    """An analytic precondition of a bound or parameter recipe is not met."""

    exit_code = 3


class DivergenceError(CflError):
    """Non-finite values encountered while time stepping."""

    exit_code = 4

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class BudgetError(ConfigError):
    """A dense-matrix or lifted-state size budget would be exceeded."""

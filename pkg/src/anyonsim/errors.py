"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration/usage problems exit 2,
broken internal contracts exit 3.
"""


class ConfigurationError(ValueError):
    """A parameter is outside the configured operating range."""


class UsageError(ValueError):
    """An operation was called with incompatible arguments."""


class ContractError(RuntimeError):
    """A documented precondition or internal invariant was violated."""

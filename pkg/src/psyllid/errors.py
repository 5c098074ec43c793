"""Exception and warning types shared across the package."""


class PsyllidError(Exception):
    """Base class for all package errors."""


class ConfigError(PsyllidError, ValueError):
    """Malformed or inconsistent user configuration."""


class PreconditionError(PsyllidError, ValueError):
    """A model-level precondition does not hold (e.g. theta_M <= 1)."""


class NumericalError(PsyllidError, RuntimeError):
    """A numerical procedure failed (non-finite state, step underflow, ...)."""


class BracketError(NumericalError):
    """No sign-changing bracket could be established."""


class ConsistencyError(NumericalError):
    """Two independent routes to the same quantity disagree."""


class AssumptionWarning(UserWarning):
    """A biological modelling assumption is violated but no formula needs it."""


class DegenerateParametersWarning(UserWarning):
    """Parameters sit on a degenerate boundary (e.g. zero carrying capacity)."""

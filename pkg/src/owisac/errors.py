"""Exception types raised across the package."""


class OwisacError(Exception):
    """Base class for all package errors."""


class DomainError(OwisacError, ValueError):
    """Argument outside the documented domain of an operation."""


class InfeasibleConstraint(OwisacError, ValueError):
    """Harmonic-mean threshold below 1/B: no law on [A, B] satisfies it."""


class NonConvergence(OwisacError, RuntimeError):
    """An iterative solver failed to bracket or reach its tolerance."""


class AliasError(OwisacError, ValueError):
    """Beat frequency at or beyond the complex-baseband Nyquist limit."""


class WindowError(OwisacError, ValueError):
    """Estimation window crosses a chirp ramp boundary."""


class ConfigError(OwisacError, ValueError):
    """Experiment configuration violates the documented schema."""

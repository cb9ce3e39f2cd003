"""Typed errors shared across the package."""


class ExactCIError(Exception):
    """Base class for all package errors."""


class DegenerateArm(ExactCIError):
    """Observed table has an empty treatment or control arm."""


class SizeMismatch(ExactCIError):
    """Observed and potential tables describe different numbers of units."""


class InvalidLevel(ExactCIError):
    """Significance level alpha is outside (0, 1)."""


class ScaleGuard(ExactCIError):
    """Exact computation requested beyond the configured size limit."""


class EmptyAcceptance(ExactCIError):
    """No compatible table was accepted; indicates an internal bug."""

"""Exception types shared across the toolkit."""

from __future__ import annotations


class DomainError(ValueError):
    """A point lies outside the region where a map or operator is defined."""


class SingularPointError(DomainError):
    """A Jacobian determinant vanishes (or nearly so) at the requested point."""


class CapabilityError(NotImplementedError):
    """A map does not supply the derivative order an operation needs."""


class ConvergenceError(RuntimeError):
    """An iteration ran out of steps before meeting its tolerance.

    The last iterate and its residual are kept so callers can decide whether
    the answer is still usable.
    """

    def __init__(self, message, last_iterate=None, residual=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.residual = residual


class BranchError(ConvergenceError):
    """Newton landed on the wrong branch of a multivalued inverse."""

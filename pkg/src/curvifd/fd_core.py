"""
Uniform computational grids, difference stencils, forward Euler and error norms.

All non-uniformity lives in the coordinate map; the stencils here only ever
see equally spaced nodes in the mapped coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Grid1D",
    "Grid2D",
    "Field",
    "ErrorReport",
    "central_first",
    "upwind_first",
    "central_second",
    "mixed_central",
    "d1_central",
    "d1_upwind",
    "d2_central",
    "d2_mixed",
    "euler_step",
    "is_diverged",
    "trapezoid_weights",
    "error_norms",
    "DIVERGENCE_BOUND",
]

DIVERGENCE_BOUND = 1e6


def _uniform_nodes(lo, hi, M):
    # (lo*(M-i) + hi*i)/M is exactly antisymmetric when lo == -hi
    i = np.arange(M + 1, dtype=float)
    return (lo * (M - i) + hi * i) / M


@dataclass(frozen=True)
class Grid1D:
    """``M`` equal intervals on ``[lo, hi]`` (default the mapped interval [-1, 1])."""

    M: int
    lo: float = -1.0
    hi: float = 1.0

    def __post_init__(self):
        if self.M < 2:
            raise ValueError(f"M must be >= 2, got {self.M}")
        if not self.hi > self.lo:
            raise ValueError("hi must exceed lo")

    @property
    def d(self):
        return (self.hi - self.lo) / self.M

    @property
    def nodes(self):
        return _uniform_nodes(self.lo, self.hi, self.M)

    def __len__(self):
        return self.M + 1


@dataclass(frozen=True)
class Grid2D:
    """Tensor grid with ``M`` intervals in ξ and ``N`` in η.

    Arrays on this grid have shape ``(M + 1, N + 1)`` and are indexed ``[i, j]``.
    """

    M: int
    N: int
    xi_range: tuple = (0.0, 1.0)
    eta_range: tuple = (0.0, 1.0)

    def __post_init__(self):
        if self.M < 2 or self.N < 2:
            raise ValueError(f"M, N must be >= 2, got {self.M}, {self.N}")

    @property
    def dxi(self):
        return (self.xi_range[1] - self.xi_range[0]) / self.M

    @property
    def deta(self):
        return (self.eta_range[1] - self.eta_range[0]) / self.N

    @property
    def xi(self):
        return _uniform_nodes(*self.xi_range, self.M)

    @property
    def eta(self):
        return _uniform_nodes(*self.eta_range, self.N)

    def mesh(self):
        return np.meshgrid(self.xi, self.eta, indexing="ij")

    @property
    def shape(self):
        return (self.M + 1, self.N + 1)


@dataclass
class Field:
    """Nodal values at one instant."""

    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)

    def is_finite(self):
        return bool(np.all(np.isfinite(self.values)))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ErrorReport:
    l2: float
    linf: float
    n: int
    t: float = field(default=float("nan"))


def _check_interior(u, i):
    if not 1 <= i <= len(u) - 2:
        raise ValueError(f"index {i} is not an interior node of a {len(u)}-node field")


def central_first(u, i, d):
    """(u[i+1] - u[i-1]) / 2d."""
    _check_interior(u, i)
    return (u[i + 1] - u[i - 1]) / (2.0 * d)


def upwind_first(u, i, d, wind):
    """Two-point difference taken from the side the wind blows from."""
    _check_interior(u, i)
    if wind > 0:
        return (u[i] - u[i - 1]) / d
    return (u[i + 1] - u[i]) / d


def central_second(u, i, d):
    _check_interior(u, i)
    return (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (d * d)


def mixed_central(u, i, j, dxi, deta):
    """Four-point cross difference for u_xi_eta on a 2D array."""
    u = np.asarray(u)
    if not (1 <= i <= u.shape[0] - 2 and 1 <= j <= u.shape[1] - 2):
        raise ValueError(f"({i}, {j}) is not an interior node of a {u.shape} field")
    return (u[i + 1, j + 1] - u[i + 1, j - 1] - u[i - 1, j + 1] + u[i - 1, j - 1]) / (
        4.0 * dxi * deta)


# Vectorised forms over all interior nodes; results have length len(u) - 2.

def d1_central(u, d):
    return (u[2:] - u[:-2]) / (2.0 * d)


def d1_upwind(u, d, wind):
    back = (u[1:-1] - u[:-2]) / d
    fwd = (u[2:] - u[1:-1]) / d
    return np.where(wind > 0, back, fwd)


def d2_central(u, d):
    return (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (d * d)


def d2_mixed(u, dxi, deta):
    """Cross difference at all interior nodes of a 2D array."""
    return (u[2:, 2:] - u[2:, :-2] - u[:-2, 2:] + u[:-2, :-2]) / (4.0 * dxi * deta)


def euler_step(u, dudt, dt):
    """Forward Euler ``u + dt * dudt``; returns a new array.

    Boundary values are left to the caller.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    u = np.asarray(u, dtype=float)
    dudt = np.asarray(dudt, dtype=float)
    if u.shape != dudt.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {dudt.shape}")
    return u + dt * dudt


def is_diverged(u, bound=DIVERGENCE_BOUND):
    u = np.asarray(u)
    return bool(not np.all(np.isfinite(u)) or np.max(np.abs(u)) > bound)


def trapezoid_weights(n):
    w = np.ones(n)
    w[0] = w[-1] = 0.5
    return w


def error_norms(u, exact, weights=None, x=None, t=float("nan")):
    """Weighted RMS and max-norm of ``u - exact``.

    Parameters
    ----------
    u : array_like
    exact : array_like or callable
        A callable is evaluated at ``x``.
    weights : array_like, optional
        Quadrature weights; trapezoid weights by default. Zero weights drop
        nodes from both norms.
    """
    u = np.asarray(u, dtype=float)
    if callable(exact):
        if x is None:
            raise ValueError("a callable exact solution needs node coordinates x")
        exact = exact(x)
    err = u - np.asarray(exact, dtype=float)
    w = trapezoid_weights(u.shape[0]) if weights is None else np.asarray(weights, float)
    if w.shape != err.shape:
        w = np.broadcast_to(w, err.shape)
    keep = w > 0
    l2 = float(np.sqrt(np.sum(w * err ** 2) / np.sum(w)))
    linf = float(np.max(np.abs(err[keep]))) if np.any(keep) else 0.0
    return ErrorReport(l2=l2, linf=linf, n=int(np.count_nonzero(keep)), t=t)

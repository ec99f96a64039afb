"""
Linear convection-diffusion with a moving front on an adaptive moving mesh.

``u_t + U u_x = nu u_xx`` is solved at fixed mapped nodes ξ_i whose physical
positions ``x(ξ_i, τ)`` follow the front through an
:class:`~curvifd.coord1d.ErfMovingMap`. Because the nodes move, the advection
speed seen in mapped space is ``U - x_τ`` (the mesh velocity is subtracted).
With ``h = 0`` the scheme is plain FTCS / upwind on a fixed grid.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from curvifd import fd_core
from curvifd.coord1d import ErfMovingMap
from curvifd.fd_core import Field, Grid1D
from curvifd.oracles import CONVDIFF_EXACT

__all__ = [
    "ConvDiffConfig",
    "ConvDiffResult",
    "Snapshot1D",
    "convdiff_rhs",
    "run_convdiff",
    "front_position",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvDiffConfig:
    L: float = 8.0
    M: int = 80
    nu: float = 0.01
    dt: float = 0.0025
    U: float = 1.0
    x0: float = -2.0
    h: float = 0.9
    b: float = 10.0
    scheme: str = "central"
    t_end: float = 4.0
    snapshots: tuple = (0.0, 1.0, 2.0, 3.0, 4.0)
    u_left: float = 1.0
    u_right: float = 0.0
    # callable x -> u; None means the unit step closed on the left at x0
    initial: object = None
    # error norms are taken over |x| < norm_window * L
    norm_window: float = 0.9

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.nu < 0:
            raise ValueError("nu must be non-negative")
        if self.M < 4:
            raise ValueError("M must be >= 4")
        if self.scheme not in ("central", "upwind"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        self.map  # validates 1 + s - h > 0

    @property
    def map(self):
        return ErfMovingMap(L=self.L, h=self.h, b=self.b, x0=self.x0, U=self.U)

    @property
    def grid(self):
        return Grid1D(self.M)


@dataclass
class Snapshot1D:
    field: Field
    x: np.ndarray
    front: float
    error: fd_core.ErrorReport

    @property
    def t(self):
        return self.field.t


@dataclass
class ConvDiffResult:
    config: ConvDiffConfig
    xi: np.ndarray
    snapshots: list = field(default_factory=list)
    diverged: bool = False
    divergence_time: float | None = None
    boundary_drift: float = 0.0

    def exact(self, x, t):
        c = self.config
        return CONVDIFF_EXACT(x, t, c.U, c.nu, c.x0)

    @property
    def times(self):
        return np.array([s.t for s in self.snapshots])

    @property
    def fronts(self):
        return np.array([s.front for s in self.snapshots])

    def snapshot_at(self, t):
        for s in self.snapshots:
            if abs(s.t - t) < 1e-9:
                return s
        raise KeyError(t)


def convdiff_rhs(u, grid, cmap, tau, U, nu, scheme="central"):
    """Semi-discrete ``du/dτ`` at fixed ξ nodes; boundary entries are zero.

    Interior nodes get

        -((U - x_τ) / x_ξ) D1 u + nu / x_ξ² [D2 u - x_ξξ / x_ξ Dc u]

    with the upwind side of ``D1`` chosen by the sign of ``U - x_τ``.
    """
    u = np.asarray(u, dtype=float)
    d = grid.d
    xi = grid.nodes[1:-1]
    g = cmap.dx_dxi(xi, tau)
    g2 = cmap.d2x_dxi2(xi, tau)
    speed = U - cmap.dx_dtau(xi, tau)
    dc = fd_core.d1_central(u, d)
    conv = fd_core.d1_upwind(u, d, speed) if scheme == "upwind" else dc
    out = np.zeros_like(u)
    out[1:-1] = -speed / g * conv + nu / g ** 2 * (fd_core.d2_central(u, d) - g2 / g * dc)
    return out


def front_position(x, u, level=0.5):
    """First crossing of ``level`` scanning left to right (linear interpolation).

    Returns ``nan`` when the profile never drops through ``level``.
    """
    above = u >= level
    idx = np.flatnonzero(above[:-1] & ~above[1:])
    if idx.size == 0:
        return float("nan")
    i = idx[0]
    frac = (u[i] - level) / (u[i] - u[i + 1])
    return float(x[i] + frac * (x[i + 1] - x[i]))


def _norm_weights(cfg, x, g):
    w = fd_core.trapezoid_weights(len(x)) * g
    return np.where(np.abs(x) < cfg.norm_window * cfg.L, w, 0.0)


def run_convdiff(cfg, monitor=None):
    """March to ``cfg.t_end``, re-evaluating the moving map every step.

    Boundary values ``u_left`` / ``u_right`` are pinned at ξ = ∓1. Each
    snapshot records the node positions, the tracked front (u = 0.5) and the
    error against the erfc reference over ``|x| < norm_window * L``,
    weighted by physical length.
    """
    grid = cfg.grid
    cmap = cfg.map
    xi = grid.nodes

    x_init = cmap.x_of_xi(xi, 0.0)
    if cfg.initial is None:
        u = np.where(x_init <= cfg.x0, 1.0, 0.0)
    else:
        u = np.asarray(cfg.initial(x_init), dtype=float).copy()
    u[0], u[-1] = cfg.u_left, cfg.u_right

    res = ConvDiffResult(config=cfg, xi=xi)
    drift = abs(x_init[0] + cfg.L) + abs(x_init[-1] - cfg.L)
    n_steps = int(round(cfg.t_end / cfg.dt))
    snap_at = {int(round(t / cfg.dt)): t for t in cfg.snapshots
               if 0 <= int(round(t / cfg.dt)) <= n_steps}

    def record(k, u):
        t = snap_at[k]
        x = cmap.x_of_xi(xi, t)
        w = _norm_weights(cfg, x, cmap.dx_dxi(xi, t))
        err = fd_core.error_norms(u, res.exact(x, t), weights=w, t=t)
        res.snapshots.append(Snapshot1D(Field(u.copy(), t), x, front_position(x, u), err))

    if 0 in snap_at:
        record(0, u)
    if monitor is not None:
        monitor(0, 0.0, u)
    for k in range(1, n_steps + 1):
        tau = (k - 1) * cfg.dt
        u_new = fd_core.euler_step(
            u, convdiff_rhs(u, grid, cmap, tau, cfg.U, cfg.nu, cfg.scheme), cfg.dt)
        u_new[0], u_new[-1] = cfg.u_left, cfg.u_right
        if fd_core.is_diverged(u_new):
            res.diverged = True
            res.divergence_time = k * cfg.dt
            logger.info("convdiff run diverged at t=%.5f", k * cfg.dt)
            break
        u = u_new
        if monitor is not None:
            monitor(k, k * cfg.dt, u)
        if k in snap_at:
            record(k, u)
        xe = cmap.x_of_xi(np.array([-1.0, 1.0]), k * cfg.dt)
        drift = max(drift, abs(xe[0] + cfg.L) + abs(xe[1] - cfg.L))
    res.boundary_drift = float(drift)
    return res

"""
Viscous Burgers' equation with a stationary shock on a stretched mesh.

The equation ``u_t + u u_x = nu u_xx`` on ``-L < x < L`` is rewritten in the
mapped coordinate ξ of a :class:`~curvifd.coord1d.CubicStretchMap`, and
marched with forward Euler on a uniform ξ-grid. The initial ramp
``u = -x/L`` steepens into a shock at ``x = 0`` around ``t = L``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from curvifd import fd_core
from curvifd.coord1d import CubicStretchMap
from curvifd.fd_core import Field, Grid1D
from curvifd.oracles import BURGERS_STEADY

__all__ = ["BurgersConfig", "BurgersResult", "burgers_rhs", "run_burgers"]

logger = logging.getLogger(__name__)

SCHEMES = ("central", "upwind")


@dataclass(frozen=True)
class BurgersConfig:
    L: float = 8.0
    M: int = 80
    nu: float = 0.01
    dt: float = 0.00125
    t_end: float = 10.0
    snapshots: tuple = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)
    c: float = 0.2
    n_p: int = 3
    scheme: str = "central"

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.nu < 0:
            raise ValueError("nu must be non-negative")
        if self.M < 4:
            raise ValueError("M must be >= 4")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")

    @property
    def map(self):
        return CubicStretchMap(L=self.L, c=self.c, n_p=self.n_p)

    @property
    def grid(self):
        return Grid1D(self.M)


@dataclass
class BurgersResult:
    config: BurgersConfig
    xi: np.ndarray
    x: np.ndarray
    snapshots: list = field(default_factory=list)
    diverged: bool = False
    divergence_time: float | None = None
    last_finite: Field | None = None
    error: fd_core.ErrorReport | None = None

    def exact(self, t=None):
        """Steady reference profile on the nodes (``t`` is ignored)."""
        return BURGERS_STEADY(self.x, self.config.nu)


def burgers_rhs(u, grid, cmap, nu, scheme="central", metrics=None):
    """Semi-discrete ``du/dt`` on the ξ-grid; boundary entries are zero.

    Interior nodes get

        -(u / x_ξ) D1 u + nu [D2 u / x_ξ² - x_ξξ / x_ξ³ Dc u]

    where ``Dc`` is the central first difference, ``D2`` the central second
    difference and ``D1`` is ``Dc`` or the upwind difference (upwind side
    picked by the sign of ``u``). ``metrics = (x_ξ, x_ξξ)`` may be passed
    precomputed.
    """
    u = np.asarray(u, dtype=float)
    d = grid.d
    if metrics is None:
        xi = grid.nodes
        metrics = (cmap.dx_dxi(xi), cmap.d2x_dxi2(xi))
    g, g2 = (m[1:-1] for m in metrics)
    ui = u[1:-1]
    dc = fd_core.d1_central(u, d)
    conv = fd_core.d1_upwind(u, d, ui) if scheme == "upwind" else dc
    out = np.zeros_like(u)
    out[1:-1] = -ui * conv / g + nu * (fd_core.d2_central(u, d) / g ** 2 - g2 / g ** 3 * dc)
    return out


def _snapshot_steps(times, dt, n_steps):
    steps = {}
    for t in times:
        k = int(round(t / dt))
        if 0 <= k <= n_steps:
            steps[k] = t
    return steps


def run_burgers(cfg, monitor=None):
    """March to ``cfg.t_end`` and collect snapshots.

    Boundary nodes are held at ``u(-L) = +1`` and ``u(+L) = -1``. A run that
    produces a non-finite value or ``|u| > 1e6`` stops there and is returned
    with ``diverged=True``; that is a result, not an exception.

    ``monitor(step, t, u)`` is called after every step if given.
    """
    grid = cfg.grid
    cmap = cfg.map
    xi = grid.nodes
    x = cmap.x_of_xi(xi)
    metrics = (cmap.dx_dxi(xi), cmap.d2x_dxi2(xi))

    u = 1.0 - (x + cfg.L) / cfg.L
    u[0], u[-1] = 1.0, -1.0

    n_steps = int(round(cfg.t_end / cfg.dt))
    snap_at = _snapshot_steps(cfg.snapshots, cfg.dt, n_steps)
    res = BurgersResult(config=cfg, xi=xi, x=x)
    if 0 in snap_at:
        res.snapshots.append(Field(u.copy(), 0.0))
    if monitor is not None:
        monitor(0, 0.0, u)

    for k in range(1, n_steps + 1):
        t = k * cfg.dt
        u_new = fd_core.euler_step(u, burgers_rhs(u, grid, cmap, cfg.nu, cfg.scheme, metrics), cfg.dt)
        u_new[0], u_new[-1] = 1.0, -1.0
        if fd_core.is_diverged(u_new):
            res.diverged = True
            res.divergence_time = t
            logger.info("burgers run diverged at t=%.5f", t)
            break
        u = u_new
        if monitor is not None:
            monitor(k, t, u)
        if k in snap_at:
            res.snapshots.append(Field(u.copy(), snap_at[k]))

    t_last = res.divergence_time - cfg.dt if res.diverged else n_steps * cfg.dt
    res.last_finite = Field(u.copy(), t_last)
    if not res.diverged and cfg.nu > 0:
        res.error = steady_error(res)
    return res


def steady_error(res, field_=None):
    """Error against the steady shock, skipping the core ``|x| <= 2 min(dx)``."""
    f = res.last_finite if field_ is None else field_
    x = res.x
    core = 2.0 * np.min(np.diff(x))
    w = fd_core.trapezoid_weights(len(x)) * np.gradient(x)
    w = np.where(np.abs(x) > core, w, 0.0)
    return fd_core.error_norms(f.values, res.exact(), weights=w, t=f.t)

"""
Steady potential flow past a circular cylinder on a body-fitted grid.

The disturbance potential ``phi`` (total ``Phi = U x + phi``) satisfies the
Laplace equation, which on a uniform ``(xi, eta)`` grid becomes the 9-point
stencil of :func:`assemble_stencil`. Two geometries are supported, both in
the upper half plane:

``polar``
    ``a <= xi <= R``, ``0 <= eta <= pi``. Normal-flow condition on ``xi = a``,
    ``phi = 0`` on ``xi = R``, symmetry on ``eta = 0, pi``.
``joukowski``
    ``|xi| <= L``, ``0 <= eta <= B`` in the Joukowski plane. The cylinder is
    the slit ``|xi| < 2a`` on ``eta = 0``; every other edge is a zero-normal-
    derivative edge and ``phi`` is pinned to 0 at the corner ``(-L, 0)``.

The linear system is relaxed with SOR over a four-colour ordering (nodes
grouped by the parity of ``i`` and ``j``), which updates each colour in one
vectorised sweep and is valid for the full 9-point stencil.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from curvifd import fd_core
from curvifd.coord2d import JoukowskiMap, PolarMap, laplacian_coeffs, mapped_partials
from curvifd.fd_core import Grid2D
from curvifd.oracles import POLAR_TRUNCATED, POTENTIAL_EXACT

__all__ = [
    "PotentialConfig",
    "PotentialResult",
    "SurfaceProfile",
    "Discretization",
    "build_discretization",
    "assemble_stencil",
    "stencil_weights",
    "apply_boundary",
    "stencil_residual",
    "solve_potential",
    "surface_profiles",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PotentialConfig:
    geometry: str = "polar"
    a: float = 2.0
    R: float = 10.0
    L: float = 10.0
    B: float = 10.0
    M: int = 40
    N: int = 40
    U: float = 1.0
    omega: float = 1.5
    tol: float = 1e-8
    max_iter: int = 50_000

    def __post_init__(self):
        if self.geometry not in ("polar", "joukowski"):
            raise ValueError(f"unknown geometry {self.geometry!r}")
        if not 0.0 < self.omega < 2.0:
            raise ValueError("omega must lie in (0, 2)")
        if self.geometry == "polar" and not self.a < self.R:
            raise ValueError("polar geometry needs a < R")
        if self.geometry == "joukowski" and not (2.0 * self.a < self.L and self.B > 0):
            raise ValueError("joukowski geometry needs 2a < L and B > 0")
        if self.M < 4 or self.N < 4:
            raise ValueError("M and N must be >= 4")

    @property
    def map(self):
        return PolarMap(self.a, self.R) if self.geometry == "polar" else JoukowskiMap(self.a)

    @property
    def grid(self):
        if self.geometry == "polar":
            return Grid2D(self.M, self.N, (self.a, self.R), (0.0, math.pi))
        return Grid2D(self.M, self.N, (-self.L, self.L), (0.0, self.B))


@dataclass
class Discretization:
    """Everything about a geometry that does not depend on ``phi``."""

    config: PotentialConfig
    grid: Grid2D
    xi: np.ndarray
    eta: np.ndarray
    x: np.ndarray
    y: np.ndarray
    xi_x: np.ndarray
    xi_y: np.ndarray
    eta_x: np.ndarray
    eta_y: np.ndarray
    # weights[di + 1, dj + 1, i, j]; meaningful at interior nodes only
    weights: np.ndarray
    # Joukowski only: nodes of eta = 0 that lie on the cylinder
    body: np.ndarray | None = None


def stencil_weights(coeffs, dxi, deta):
    """3x3 (or 3x3xshape) weights of the central discretisation of the mapped Laplacian."""
    A, B, C, D, E = (np.asarray(v, float) for v in coeffs)
    w = np.zeros((3, 3) + A.shape)
    w[2, 1] = A / dxi ** 2 + D / (2 * dxi)
    w[0, 1] = A / dxi ** 2 - D / (2 * dxi)
    w[1, 2] = C / deta ** 2 + E / (2 * deta)
    w[1, 0] = C / deta ** 2 - E / (2 * deta)
    corner = B / (4 * dxi * deta)
    w[2, 2] = w[0, 0] = corner
    w[0, 2] = w[2, 0] = -corner
    w[1, 1] = -2 * A / dxi ** 2 - 2 * C / deta ** 2
    return w


def assemble_stencil(cmap, grid, i, j, xy=None):
    """Weights ``w[di + 1, dj + 1]`` at interior node ``(i, j)``.

    ``sum(w * phi[i-1:i+2, j-1:j+2])`` approximates the mapped Laplacian.
    """
    if not (1 <= i <= grid.M - 1 and 1 <= j <= grid.N - 1):
        raise ValueError(f"({i}, {j}) is not an interior node")
    mc = laplacian_coeffs(cmap, grid.xi[i], grid.eta[j], xy)
    return stencil_weights(mc.as_tuple(), grid.dxi, grid.deta)


def build_discretization(cfg):
    grid = cfg.grid
    cmap = cfg.map
    XI, ETA = grid.mesh()
    X, Y = cmap.to_physical(XI, ETA)
    if cfg.geometry == "polar":
        p = mapped_partials(cmap, XI, ETA)
        mc = laplacian_coeffs(cmap, XI[1:-1, 1:-1], ETA[1:-1, 1:-1])
        body = None
    else:
        p = cmap.inverse_partials(X, Y)
        mc = laplacian_coeffs(cmap, XI[1:-1, 1:-1], ETA[1:-1, 1:-1],
                              xy=(X[1:-1, 1:-1], Y[1:-1, 1:-1]))
        body = np.abs(grid.xi) < 2.0 * cfg.a * (1.0 - 1e-12)
    w = np.zeros((3, 3) + grid.shape)
    w[:, :, 1:-1, 1:-1] = stencil_weights(mc.as_tuple(), grid.dxi, grid.deta)
    return Discretization(cfg, grid, XI, ETA, X, Y,
                          *(np.broadcast_to(v, grid.shape).astype(float)
                            for v in (p.xi_x, p.xi_y, p.eta_x, p.eta_y)),
                          weights=w, body=body)


def _neighbour_sum(w, phi):
    """Sum over the 8 off-centre stencil entries at interior nodes."""
    M1, N1 = phi.shape
    s = np.zeros((M1 - 2, N1 - 2))
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            s += w[di + 1, dj + 1, 1:-1, 1:-1] * phi[1 + di:M1 - 1 + di, 1 + dj:N1 - 1 + dj]
    return s


def stencil_residual(disc, phi):
    """Stencil residual at interior nodes, scaled by the centre weight.

    The scaled value equals the Gauss-Seidel correction a node would receive,
    so it is measured in units of ``phi``.
    """
    wc = disc.weights[1, 1, 1:-1, 1:-1]
    raw = _neighbour_sum(disc.weights, phi) + wc * phi[1:-1, 1:-1]
    return raw / np.abs(wc)


def _one_sided(p1, p2, h, slope):
    # second-order one-sided first derivative (-3 p0 + 4 p1 - p2) / 2h = slope, solved for p0
    return (4.0 * p1 - p2 - 2.0 * h * slope) / 3.0


def apply_boundary(disc, phi, U=None):
    """Overwrite boundary nodes of ``phi`` in place from the interior values.

    In the Joukowski case the whole field is then shifted by a constant so
    that ``phi(-L, 0) = 0``.

    Neumann edges use second-order one-sided differences; the body condition
    is the normal-flow condition written through the inverse partials,
    ``(grad xi . n) phi_xi + (grad eta . n) phi_eta = -U n_x``, solved for the
    normal-direction derivative.
    """
    cfg = disc.config
    U = cfg.U if U is None else U
    g = disc.grid
    if cfg.geometry == "polar":
        # symmetry lines eta = 0, pi
        phi[1:-1, 0] = _one_sided(phi[1:-1, 1], phi[1:-1, 2], g.deta, 0.0)
        phi[1:-1, -1] = _one_sided(phi[1:-1, -2], phi[1:-1, -3], g.deta, 0.0)
        phi[-1, :] = 0.0
        # body xi = a: unit outward normal (x, y) / a
        nx, ny = disc.x[0] / cfg.a, disc.y[0] / cfg.a
        alpha = disc.xi_x[0] * nx + disc.xi_y[0] * ny
        beta = disc.eta_x[0] * nx + disc.eta_y[0] * ny
        phi_eta = np.gradient(phi[0], g.deta, edge_order=2)
        slope = (-U * nx - beta * phi_eta) / alpha
        phi[0, :] = _one_sided(phi[1, :], phi[2, :], g.dxi, slope)
        return phi

    # joukowski: far edges first, then the eta = 0 row
    phi[:, -1] = _one_sided(phi[:, -2], phi[:, -3], g.deta, 0.0)
    phi[0, 1:] = _one_sided(phi[1, 1:], phi[2, 1:], g.dxi, 0.0)
    phi[-1, 1:] = _one_sided(phi[-2, 1:], phi[-3, 1:], g.dxi, 0.0)
    body = disc.body
    row = phi[:, 0]
    row[~body] = _one_sided(phi[~body, 1], phi[~body, 2], g.deta, 0.0)
    nx, ny = disc.x[body, 0] / cfg.a, disc.y[body, 0] / cfg.a
    alpha = disc.xi_x[body, 0] * nx + disc.xi_y[body, 0] * ny
    beta = disc.eta_x[body, 0] * nx + disc.eta_y[body, 0] * ny
    phi_xi = np.gradient(row, g.dxi, edge_order=2)[body]
    slope = (-U * nx - alpha * phi_xi) / beta
    row[body] = _one_sided(phi[body, 1], phi[body, 2], g.deta, slope)
    # gauge: every condition is on a derivative, so shift the whole field to
    # put phi(-L, 0) = 0 (a constant shift leaves every stencil row unchanged)
    phi -= row[0]
    return phi


@dataclass
class SurfaceProfile:
    """Quantities along the cylinder, ordered by polar angle ``theta`` in [0, pi].

    ``u_n`` and ``u_s`` are the normal and tangential components of the total
    velocity; ``phi`` is the disturbance potential.
    """

    theta: np.ndarray
    phi: np.ndarray
    u_n: np.ndarray
    u_s: np.ndarray
    phi_exact: np.ndarray
    u_n_exact: np.ndarray
    u_s_exact: np.ndarray


@dataclass
class PotentialResult:
    config: PotentialConfig
    disc: Discretization
    phi: np.ndarray
    u: np.ndarray
    v: np.ndarray
    iterations: int
    residual: float
    converged: bool
    residual_history: list = field(default_factory=list)
    errors: dict = field(default_factory=dict)

    @property
    def x(self):
        return self.disc.x

    @property
    def y(self):
        return self.disc.y

    def exact(self):
        """``(phi, u, v)`` of the unbounded exact solution at the nodes."""
        _, phi, u, v = POTENTIAL_EXACT(self.disc.x, self.disc.y, self.config.U, self.config.a)
        return phi, u, v


def recover_velocity(disc, phi, U):
    """Total velocity from ``phi`` through the inverse partials.

    ``phi_xi`` and ``phi_eta`` use central differences inside and second-order
    one-sided differences on the edges.
    """
    g = disc.grid
    phi_xi = np.gradient(phi, g.dxi, axis=0, edge_order=2)
    phi_eta = np.gradient(phi, g.deta, axis=1, edge_order=2)
    u = U + disc.xi_x * phi_xi + disc.eta_x * phi_eta
    v = disc.xi_y * phi_xi + disc.eta_y * phi_eta
    # The inverse partials vanish at the slit endpoints (the stagnation
    # points), so the chain rule says nothing there; use the edge data
    # phi_x = -U, phi_y = 0 instead.
    det = disc.xi_x * disc.eta_y - disc.xi_y * disc.eta_x
    flat = np.abs(det) < 1e-12
    u[flat] = 0.0
    v[flat] = 0.0
    return u, v


def _relative(err, ref, w):
    num = np.sqrt(np.sum(w * err ** 2))
    den = np.sqrt(np.sum(w * ref ** 2))
    return float(num / den) if den > 0 else float(num)


def _error_table(res):
    w = np.outer(fd_core.trapezoid_weights(res.phi.shape[0]),
                 fd_core.trapezoid_weights(res.phi.shape[1]))
    phi_e, u_e, v_e = res.exact()
    U = res.config.U
    out = {}
    for name, num, ref in (("phi", res.phi, phi_e), ("u", res.u, u_e), ("v", res.v, v_e)):
        rep = fd_core.error_norms(num, ref, weights=w)
        out[name] = {"l2": rep.l2, "linf": rep.linf,
                     "rel_l2": _relative(num - ref, ref if name != "u" else ref - U, w)}
    # phi is only defined up to a constant when every edge is Neumann
    off = np.sum(w * (res.phi - phi_e)) / np.sum(w)
    out["phi"]["rel_l2_gauge_free"] = _relative(res.phi - phi_e - off, phi_e, w)
    if res.config.geometry == "polar":
        c = res.config
        ref = POLAR_TRUNCATED(res.disc.xi, res.disc.eta, c.U, c.a, c.R)
        out["phi_truncated"] = {"rel_l2": _relative(res.phi - ref, ref, w),
                                "linf": float(np.max(np.abs(res.phi - ref)))}
    return out


def solve_potential(cfg, phi0=None, record_history=True):
    """Relax the discrete system until the scaled residual drops below ``cfg.tol``.

    Returns a :class:`PotentialResult`; ``converged`` is False (not an
    exception) if ``cfg.max_iter`` sweeps were not enough.
    """
    disc = build_discretization(cfg)
    w = disc.weights
    M1, N1 = disc.grid.shape
    phi = np.zeros((M1, N1)) if phi0 is None else np.array(phi0, dtype=float)
    apply_boundary(disc, phi)
    history = []
    res = float(np.max(np.abs(stencil_residual(disc, phi))))
    history.append(res)
    it = 0
    wc = w[1, 1]
    colours = [(p, q) for q in (0, 1) for p in (0, 1)]
    while res > cfg.tol and it < cfg.max_iter:
        for p, q in colours:
            si = slice(1 + p, M1 - 1, 2)
            sj = slice(1 + q, N1 - 1, 2)
            acc = np.zeros_like(phi[si, sj])
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    if di == 0 and dj == 0:
                        continue
                    acc += w[di + 1, dj + 1][si, sj] * phi[
                        slice(1 + p + di, M1 - 1 + di, 2), slice(1 + q + dj, N1 - 1 + dj, 2)]
            phi[si, sj] += cfg.omega * (-acc / wc[si, sj] - phi[si, sj])
        apply_boundary(disc, phi)
        it += 1
        res = float(np.max(np.abs(stencil_residual(disc, phi))))
        if record_history:
            history.append(res)
    converged = res <= cfg.tol
    if not converged:
        logger.warning("potential solve stopped at %d sweeps, residual %.3e", it, res)
    u, v = recover_velocity(disc, phi, cfg.U)
    out = PotentialResult(cfg, disc, phi, u, v, it, res, converged, history)
    out.errors = _error_table(out)
    return out


def surface_profiles(result):
    """Disturbance potential and total velocity components along the cylinder."""
    cfg = result.config
    d = result.disc
    if cfg.geometry == "polar":
        sel = (0, slice(None))
    else:
        on = np.abs(d.grid.xi) <= 2.0 * cfg.a * (1.0 + 1e-12)
        sel = (on, 0)
    x, y = d.x[sel], d.y[sel]
    theta = np.arctan2(y, x)
    order = np.argsort(theta)
    x, y, theta = x[order], y[order], theta[order]
    phi = result.phi[sel][order]
    u, v = result.u[sel][order], result.v[sel][order]
    nx, ny = x / cfg.a, y / cfg.a
    Phi = cfg.U * x + phi
    u_s_num = np.gradient(Phi, cfg.a * theta, edge_order=2)
    u_n_num = u * nx + v * ny
    _, phi_e, ue, ve = POTENTIAL_EXACT(cfg.a * np.cos(theta), cfg.a * np.sin(theta), cfg.U, cfg.a)
    # unit tangent pointing towards increasing theta is (-ny, nx)
    return SurfaceProfile(theta, phi, u_n_num, u_s_num, phi_e,
                          ue * nx + ve * ny, -ue * ny + ve * nx)

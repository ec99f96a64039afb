r"""
Two-dimensional transformation algebra.

A map relates physical ``(x, y)`` to mapped ``(xi, eta)``. Either direction
may be the explicit one:

* forward-explicit maps (``explicit == "forward"``) give ``x(xi, eta)``,
  ``y(xi, eta)`` and their partials; the Jacobian ``g`` is then primary and
  the inverse partials follow by inverting ``g``;
* inverse-explicit maps (``explicit == "inverse"``) give ``xi(x, y)``,
  ``eta(x, y)`` and their partials directly (Jacobian ``G``).

:func:`laplacian_coeffs` reduces either kind to the coefficients of

.. math::

    A\phi_{\xi\xi} + B\phi_{\xi\eta} + C\phi_{\eta\eta} + D\phi_\xi + E\phi_\eta = 0,

the Laplace equation written in mapped coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from curvifd.errors import BranchError, CapabilityError, ConvergenceError, DomainError, SingularPointError

__all__ = [
    "Map2D",
    "IdentityMap2D",
    "PolarMap",
    "JoukowskiMap",
    "Jacobian2",
    "ForwardPartials",
    "InversePartials",
    "MetricCoeffs2D",
    "jacobian_forward",
    "jacobian_inverse",
    "invert_jacobian",
    "det_derivatives",
    "inverse_second_derivatives",
    "laplacian_coeffs",
    "polar_inverse",
    "joukowski_forward",
    "joukowski_inverse",
    "joukowski_partials",
    "SINGULAR_RADIUS",
]

SINGULAR_RADIUS = 1e-8
CRAMER_THRESHOLD = 1e-14


@dataclass(frozen=True)
class Jacobian2:
    """2x2 matrix ``[[a11, a12], [a21, a22]]``; entries may be arrays."""

    a11: object
    a12: object
    a21: object
    a22: object

    @property
    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def as_array(self):
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=float)

    def __matmul__(self, other):
        return Jacobian2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )


@dataclass(frozen=True)
class ForwardPartials:
    """First and second partials of ``(x, y)`` with respect to ``(xi, eta)``."""

    x_xi: object
    x_eta: object
    y_xi: object
    y_eta: object
    x_xixi: object = None
    x_xieta: object = None
    x_etaeta: object = None
    y_xixi: object = None
    y_xieta: object = None
    y_etaeta: object = None

    @property
    def has_second(self):
        return self.x_xixi is not None


@dataclass(frozen=True)
class InversePartials:
    """First and second partials of ``(xi, eta)`` with respect to ``(x, y)``."""

    xi_x: object
    xi_y: object
    eta_x: object
    eta_y: object
    xi_xx: object = None
    xi_xy: object = None
    xi_yy: object = None
    eta_xx: object = None
    eta_xy: object = None
    eta_yy: object = None

    @property
    def has_second(self):
        return self.xi_xx is not None

    @property
    def G(self):
        return Jacobian2(self.xi_x, self.xi_y, self.eta_x, self.eta_y)


@dataclass(frozen=True)
class MetricCoeffs2D:
    """Coefficients of the mapped Laplacian plus the first partials they came from.

    ``det`` is ``|G|`` (the determinant of the inverse Jacobian).
    """

    A: object
    B: object
    C: object
    D: object
    E: object
    xi_x: object
    xi_y: object
    eta_x: object
    eta_y: object
    det: object

    def as_tuple(self):
        return (self.A, self.B, self.C, self.D, self.E)


class Map2D:
    """Base class; see the module docstring for the two kinds of map."""

    explicit = "forward"

    def check_point(self, p, q):
        """Raise :class:`SingularPointError` near a singular point."""

    def to_physical(self, xi, eta):
        raise NotImplementedError

    def to_mapped(self, x, y):
        raise NotImplementedError

    def forward_partials(self, xi, eta):
        raise CapabilityError(f"{type(self).__name__} is not forward-explicit")

    def inverse_partials(self, x, y):
        raise CapabilityError(f"{type(self).__name__} is not inverse-explicit")


class IdentityMap2D(Map2D):
    explicit = "forward"

    def to_physical(self, xi, eta):
        return np.asarray(xi, float)[()], np.asarray(eta, float)[()]

    def to_mapped(self, x, y):
        return np.asarray(x, float)[()], np.asarray(y, float)[()]

    def forward_partials(self, xi, eta):
        one = np.ones_like(np.asarray(xi, float) + np.asarray(eta, float))[()]
        zero = 0.0 * one
        return ForwardPartials(one, zero, zero, one,
                               zero, zero, zero, zero, zero, zero)


class PolarMap(Map2D):
    """``x = xi cos(eta)``, ``y = xi sin(eta)`` on ``a <= xi <= R``, ``0 <= eta <= pi``.

    Forward-explicit. The closed-form inverse partials are also available,
    which lets the two routes to ``G`` be compared.
    """

    explicit = "forward"

    def __init__(self, a=2.0, R=10.0):
        if not 0 < a < R:
            raise ValueError(f"need 0 < a < R, got a={a}, R={R}")
        self.a = float(a)
        self.R = float(R)

    def check_point(self, xi, eta):
        if np.any(np.abs(xi) < SINGULAR_RADIUS):
            raise SingularPointError("polar map is singular at xi = 0")

    def to_physical(self, xi, eta):
        xi = np.asarray(xi, float)
        return (xi * np.cos(eta))[()], (xi * np.sin(eta))[()]

    def to_mapped(self, x, y):
        return polar_inverse(x, y)

    def forward_partials(self, xi, eta):
        xi = np.asarray(xi, float)
        c, s = np.cos(eta), np.sin(eta)
        c, s = c + 0.0 * xi, s + 0.0 * xi
        zero = 0.0 * xi
        return ForwardPartials(
            x_xi=c[()], x_eta=(-xi * s)[()], y_xi=s[()], y_eta=(xi * c)[()],
            x_xixi=zero[()], x_xieta=(-s)[()], x_etaeta=(-xi * c)[()],
            y_xixi=zero[()], y_xieta=c[()], y_etaeta=(-xi * s)[()],
        )

    def inverse_partials(self, x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        r2 = x * x + y * y
        if np.any(r2 < SINGULAR_RADIUS ** 2):
            raise SingularPointError("polar map is singular at the origin")
        r = np.sqrt(r2)
        r3 = r2 * r
        r4 = r2 * r2
        return InversePartials(
            xi_x=(x / r)[()], xi_y=(y / r)[()],
            eta_x=(-y / r2)[()], eta_y=(x / r2)[()],
            xi_xx=(y * y / r3)[()], xi_xy=(-x * y / r3)[()], xi_yy=(x * x / r3)[()],
            eta_xx=(2 * x * y / r4)[()], eta_xy=((y * y - x * x) / r4)[()],
            eta_yy=(-2 * x * y / r4)[()],
        )


class JoukowskiMap(Map2D):
    """``zeta = z + a**2 / z``: the circle ``|z| = a`` becomes the slit ``|xi| <= 2a``.

    Inverse-explicit: ``(xi, eta)`` is a closed-form function of ``(x, y)``;
    going back needs Newton's method (:func:`joukowski_inverse`).
    """

    explicit = "inverse"

    def __init__(self, a=2.0):
        if a <= 0:
            raise ValueError("a must be positive")
        self.a = float(a)

    def check_point(self, x, y):
        x = np.asarray(x, float)
        y = np.asarray(y, float)
        d = np.minimum(np.hypot(x - self.a, y), np.hypot(x + self.a, y))
        if np.any(d < SINGULAR_RADIUS):
            raise SingularPointError("Joukowski map is singular at z = +/-a")

    def to_physical(self, xi, eta, tol=1e-12, max_iter=50):
        return joukowski_inverse(xi, eta, self.a, tol=tol, max_iter=max_iter)

    def to_mapped(self, x, y):
        return joukowski_forward(x, y, self.a)

    def inverse_partials(self, x, y):
        return joukowski_partials(x, y, self.a)


def _require_nonsingular(det, scale, what):
    det = np.asarray(det, float)
    if np.any(np.abs(det) <= CRAMER_THRESHOLD * scale) or np.any(~np.isfinite(det)):
        raise SingularPointError(f"{what}: determinant vanishes")


def jacobian_forward(cmap, xi, eta):
    """``g = [[x_xi, x_eta], [y_xi, y_eta]]`` of a forward-explicit map."""
    cmap.check_point(xi, eta)
    p = cmap.forward_partials(xi, eta)
    g = Jacobian2(p.x_xi, p.x_eta, p.y_xi, p.y_eta)
    _require_nonsingular(g.det, 0.0, "g")
    return g


def jacobian_inverse(cmap, x, y):
    """``G = [[xi_x, xi_y], [eta_x, eta_y]]`` of a map with explicit inverse partials."""
    if cmap.explicit == "inverse":
        cmap.check_point(x, y)
    G = cmap.inverse_partials(x, y).G
    _require_nonsingular(G.det, 0.0, "G")
    return G


def invert_jacobian(J):
    """Inverse of a 2x2 Jacobian by the adjugate formula.

    Works on ``g`` (giving ``G``) and on ``G`` (giving ``g``) alike.
    """
    det = J.det
    scale = np.maximum.reduce([np.abs(np.asarray(v, float)) for v in
                               (J.a11, J.a12, J.a21, J.a22)]) ** 2
    _require_nonsingular(det, scale, "Jacobian")
    return Jacobian2(J.a22 / det, -J.a12 / det, -J.a21 / det, J.a11 / det)


def det_derivatives(cmap, p, q):
    """Derivatives of the Jacobian determinant.

    Forward-explicit maps: ``(d|g|/dxi, d|g|/deta)`` at ``(xi, eta) = (p, q)``.
    Inverse-explicit maps: ``(d|G|/dx, d|G|/dy)`` at ``(x, y) = (p, q)``.
    """
    if cmap.explicit == "forward":
        d = cmap.forward_partials(p, q)
        if not d.has_second:
            raise CapabilityError("map does not supply second partials")
        dg_dxi = (d.x_xixi * d.y_eta + d.x_xi * d.y_xieta
                  - d.x_xieta * d.y_xi - d.x_eta * d.y_xixi)
        dg_deta = (d.x_xieta * d.y_eta + d.x_xi * d.y_etaeta
                   - d.x_etaeta * d.y_xi - d.x_eta * d.y_xieta)
        return dg_dxi, dg_deta
    d = cmap.inverse_partials(p, q)
    if not d.has_second:
        raise CapabilityError("map does not supply second partials")
    dG_dx = (d.xi_xx * d.eta_y + d.xi_x * d.eta_xy
             - d.xi_xy * d.eta_x - d.xi_y * d.eta_xx)
    dG_dy = (d.xi_xy * d.eta_y + d.xi_x * d.eta_yy
             - d.xi_yy * d.eta_x - d.xi_y * d.eta_xy)
    return dG_dx, dG_dy


def _inverse_partials_from_forward(cmap, xi, eta):
    cmap.check_point(xi, eta)
    d = cmap.forward_partials(xi, eta)
    if not d.has_second:
        raise CapabilityError("map does not supply second partials")
    G = invert_jacobian(Jacobian2(d.x_xi, d.x_eta, d.y_xi, d.y_eta))
    xi_x, xi_y, eta_x, eta_y = G.a11, G.a12, G.a21, G.a22
    det = d.x_xi * d.y_eta - d.x_eta * d.y_xi
    dg_xi, dg_eta = det_derivatives(cmap, xi, eta)

    # d/dxi and d/deta of (y_eta/|g|), (y_xi/|g|), (x_eta/|g|), (x_xi/|g|)
    def quot(num_xi, num_eta, num):
        return (-dg_xi / det ** 2 * num + num_xi / det,
                -dg_eta / det ** 2 * num + num_eta / det)

    yeta_xi, yeta_eta = quot(d.y_xieta, d.y_etaeta, d.y_eta)
    yxi_xi, yxi_eta = quot(d.y_xixi, d.y_xieta, d.y_xi)
    xeta_xi, xeta_eta = quot(d.x_xieta, d.x_etaeta, d.x_eta)
    xxi_xi, xxi_eta = quot(d.x_xixi, d.x_xieta, d.x_xi)

    return InversePartials(
        xi_x=xi_x, xi_y=xi_y, eta_x=eta_x, eta_y=eta_y,
        xi_xx=xi_x * yeta_xi + eta_x * yeta_eta,
        eta_xx=-(xi_x * yxi_xi + eta_x * yxi_eta),
        xi_xy=xi_y * yeta_xi + eta_y * yeta_eta,
        eta_xy=-(xi_y * yxi_xi + eta_y * yxi_eta),
        xi_yy=-(xi_y * xeta_xi + eta_y * xeta_eta),
        eta_yy=xi_y * xxi_xi + eta_y * xxi_eta,
    )


def inverse_second_derivatives(cmap, xi, eta):
    """Second partials of ``(xi, eta)`` in ``(x, y)`` for a forward-explicit map.

    Returns ``(xi_xx, xi_xy, xi_yy, eta_xx, eta_xy, eta_yy)``, built from the
    inverted Jacobian and the derivatives of ``|g|`` (no differencing).
    """
    if cmap.explicit != "forward":
        raise CapabilityError("inverse_second_derivatives needs a forward-explicit map")
    p = _inverse_partials_from_forward(cmap, xi, eta)
    return p.xi_xx, p.xi_xy, p.xi_yy, p.eta_xx, p.eta_xy, p.eta_yy


def mapped_partials(cmap, xi, eta, xy=None):
    """Inverse partials at the mapped point ``(xi, eta)`` for either kind of map.

    Inverse-explicit maps first locate the physical point (``xy`` skips the
    Newton solve when already known).
    """
    if cmap.explicit == "forward":
        return _inverse_partials_from_forward(cmap, xi, eta)
    x, y = cmap.to_physical(xi, eta) if xy is None else xy
    cmap.check_point(x, y)
    return cmap.inverse_partials(x, y)


def laplacian_coeffs(cmap, xi, eta, xy=None):
    """Coefficients ``(A, B, C, D, E)`` of the Laplacian in mapped coordinates."""
    p = mapped_partials(cmap, xi, eta, xy)
    det = p.xi_x * p.eta_y - p.xi_y * p.eta_x
    _require_nonsingular(det, 0.0, "G")
    return MetricCoeffs2D(
        A=p.xi_x ** 2 + p.xi_y ** 2,
        B=2.0 * (p.xi_x * p.eta_x + p.xi_y * p.eta_y),
        C=p.eta_x ** 2 + p.eta_y ** 2,
        D=p.xi_xx + p.xi_yy,
        E=p.eta_xx + p.eta_yy,
        xi_x=p.xi_x, xi_y=p.xi_y, eta_x=p.eta_x, eta_y=p.eta_y,
        det=det,
    )


def polar_inverse(x, y):
    """``(sqrt(x² + y²), arccos(x / r))``; eta lies in ``[0, pi]`` (upper half plane)."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    r = np.hypot(x, y)
    if np.any(r == 0.0):
        raise DomainError("polar coordinates undefined at the origin")
    return r[()], np.arccos(np.clip(x / r, -1.0, 1.0))[()]


def joukowski_forward(x, y, a):
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    r2 = x * x + y * y
    if np.any(r2 == 0.0):
        raise DomainError("Joukowski map undefined at the origin")
    return (x + a * a * x / r2)[()], (y - a * a * y / r2)[()]


def joukowski_partials(x, y, a):
    """All first and second partials of ``(xi, eta)`` with respect to ``(x, y)``.

    ``xi`` and ``eta`` are harmonic: ``xi_yy = -xi_xx`` and ``eta_yy = -eta_xx``.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    r2 = x * x + y * y
    if np.any(r2 == 0.0):
        raise DomainError("Joukowski map undefined at the origin")
    a2 = a * a
    r4 = r2 * r2
    r6 = r4 * r2
    xi_x = 1.0 - a2 * (x * x - y * y) / r4
    xi_y = -2.0 * a2 * x * y / r4
    p = 2.0 * a2 * (x ** 3 - 3.0 * x * y * y) / r6
    q = 2.0 * a2 * (3.0 * x * x * y - y ** 3) / r6
    return InversePartials(
        xi_x=xi_x[()], xi_y=xi_y[()], eta_x=(-xi_y)[()], eta_y=xi_x[()],
        xi_xx=p[()], xi_xy=q[()], xi_yy=(-p)[()],
        eta_xx=(-q)[()], eta_xy=p[()], eta_yy=q[()],
    )


def _joukowski_newton(xi, eta, a, x, y, tol, max_iter):
    a2 = a * a
    bound = tol * max(1.0, math.hypot(xi, eta))
    for it in range(max_iter):
        r2 = x * x + y * y
        if r2 == 0.0:
            return x, y, math.inf, False
        r4 = r2 * r2
        f1 = xi - (x + a2 * x / r2)
        f2 = eta - (y - a2 * y / r2)
        res = math.hypot(f1, f2)
        j11 = 1.0 + a2 / r2 - 2.0 * a2 * x * x / r4
        j12 = -2.0 * a2 * x * y / r4
        j21 = 2.0 * a2 * x * y / r4
        j22 = 1.0 - a2 / r2 + 2.0 * a2 * y * y / r4
        det = j11 * j22 - j12 * j21
        if abs(det) < CRAMER_THRESHOLD:
            return x, y, res, res <= bound
        dx = (f1 * j22 - f2 * j12) / det
        dy = (j11 * f2 - j21 * f1) / det
        if res <= bound:
            # one polishing step: quadratic convergence makes it essentially free
            if math.hypot(dx, dy) <= bound:
                return x + dx, y + dy, res, True
        x += dx
        y += dy
    r2 = x * x + y * y
    res = math.hypot(xi - (x + a2 * x / r2), eta - (y - a2 * y / r2))
    return x, y, res, res <= bound


def _joukowski_inverse_scalar(xi, eta, a, tol, max_iter, restarts):
    if eta < 0:
        raise DomainError("joukowski_inverse expects eta >= 0 (upper half plane)")
    x0, y0 = float(xi), float(eta)
    if eta < a and abs(xi) < 2.0 * a:
        # near the slit the raw start sits inside the circle and the real axis
        # is invariant under the iteration; start above the arc instead
        x0, y0 = 0.5 * xi, a + eta
    x, y, res = x0, y0, math.inf
    for _ in range(restarts + 1):
        x, y, res, ok = _joukowski_newton(xi, eta, a, x0, y0, tol, max_iter)
        if ok and x * x + y * y >= a * a * (1.0 - 1e-10) and y >= -1e-12:
            return x, max(y, 0.0)
        # push the start outward, never closer than 1.5a to the origin
        grow = 1.5 * max(1.0, a / max(math.hypot(x0, y0), 1e-12))
        x0, y0 = x0 * grow, y0 * grow
    if x * x + y * y < a * a:
        raise BranchError(
            f"Newton landed inside the cylinder for zeta=({xi}, {eta})",
            last_iterate=(x, y), residual=res)
    raise ConvergenceError(
        f"joukowski_inverse did not converge for zeta=({xi}, {eta}); residual {res:.3e}",
        last_iterate=(x, y), residual=res)


def joukowski_inverse(xi, eta, a, tol=1e-12, max_iter=50, restarts=3):
    """Physical point ``(x, y)`` on the exterior branch with ``y >= 0``.

    Newton-Raphson on the forward map starting from ``(x, y) = (xi, eta)``.
    Near the slit (``eta < a``, ``|xi| < 2a``) the start is lifted to
    ``(xi/2, a + eta)`` so the iteration reaches the upper arc. An iterate that ends
    inside the circle is restarted from a guess pushed outward by 1.5x, at
    most ``restarts`` times.
    """
    xi_a = np.asarray(xi, float)
    eta_a = np.asarray(eta, float)
    xi_b, eta_b = np.broadcast_arrays(xi_a, eta_a)
    xs = np.empty(xi_b.shape)
    ys = np.empty(xi_b.shape)
    for idx in np.ndindex(xi_b.shape):
        xs[idx], ys[idx] = _joukowski_inverse_scalar(
            float(xi_b[idx]), float(eta_b[idx]), a, tol, max_iter, restarts)
    return xs[()], ys[()]

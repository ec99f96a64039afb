r"""
One-dimensional coordinate transformations.

A map :math:`x = x(\xi)` sends a uniform computational coordinate onto a
(possibly clustered) physical coordinate. Everything a finite-difference
solver needs follows from the map's :math:`\xi`-derivatives:

* :func:`inverse_derivatives` turns :math:`d^n x/d\xi^n` into
  :math:`d^n\xi/dx^n` for :math:`n \le 4`,
* :func:`transform_function_derivatives` turns :math:`d^n u/d\xi^n` into
  :math:`d^n u/dx^n` (chain rule / Faa di Bruno),
* :func:`invert_map_1d` recovers :math:`\xi` from :math:`x` by Newton's method.

Maps evaluate elementwise on scalars or numpy arrays. Error functions come
from :func:`scipy.special.erf` (double precision, abs. error well below 1e-15).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from curvifd.errors import CapabilityError, ConvergenceError, DomainError

__all__ = [
    "Map1D",
    "PolynomialMap",
    "CubicStretchMap",
    "ErfMovingMap",
    "FrozenMap",
    "ChainCoeffs1D",
    "BeamCoefficients",
    "inverse_derivatives",
    "transform_function_derivatives",
    "beam_coefficients",
    "cubic_map_derivatives",
    "erf_map_eval",
    "xi0_trajectory",
    "invert_map_1d",
]


class Map1D:
    """Analytic map :math:`x(\\xi)` with derivatives up to :attr:`max_order`.

    Subclasses override ``x_of_xi`` and the derivative methods they can
    provide. Derivatives above ``max_order`` raise :class:`CapabilityError`.
    ``scale`` is the factor used for the default Newton guess ``x / scale``.
    """

    max_order = 2
    scale = 1.0
    domain = (-1.0, 1.0)

    def x_of_xi(self, xi):
        raise NotImplementedError

    def dx_dxi(self, xi):
        raise NotImplementedError

    def d2x_dxi2(self, xi):
        raise NotImplementedError

    def d3x_dxi3(self, xi):
        raise CapabilityError(f"{type(self).__name__} does not provide d3x/dxi3")

    def d4x_dxi4(self, xi):
        raise CapabilityError(f"{type(self).__name__} does not provide d4x/dxi4")

    def derivative(self, xi, k):
        """Return :math:`d^k x/d\\xi^k` (``k = 0`` gives x itself)."""
        if k > self.max_order:
            raise CapabilityError(
                f"{type(self).__name__} provides derivatives up to order "
                f"{self.max_order}, {k} requested")
        return (self.x_of_xi, self.dx_dxi, self.d2x_dxi2,
                self.d3x_dxi3, self.d4x_dxi4)[k](xi)


class PolynomialMap(Map1D):
    """Polynomial map ``x = sum(coef[k] * xi**k)``; handy for checks.

    ``PolynomialMap([0, 1])`` is the identity.
    """

    max_order = 4

    def __init__(self, coef, domain=(-1.0, 1.0), scale=1.0):
        self.poly = np.polynomial.Polynomial(coef)
        self._derivs = [self.poly] + [self.poly.deriv(k) for k in range(1, 5)]
        self.domain = domain
        self.scale = scale

    def x_of_xi(self, xi):
        return self._derivs[0](xi)

    def dx_dxi(self, xi):
        return self._derivs[1](xi)

    def d2x_dxi2(self, xi):
        return self._derivs[2](xi)

    def d3x_dxi3(self, xi):
        return self._derivs[3](xi)

    def d4x_dxi4(self, xi):
        return self._derivs[4](xi)


def _falling_power(xi, n, k):
    # d^k/dxi^k of xi**n
    if k > n:
        return np.zeros_like(np.asarray(xi, dtype=float))[()]
    return math.perm(n, k) * np.asarray(xi, dtype=float) ** (n - k)


class CubicStretchMap(Map1D):
    r"""Odd-power stretching :math:`x = a(c\xi + L\xi^{n_p})`, :math:`a = L/(c+L)`.

    Nodes cluster around :math:`x = 0` where the slope is only :math:`ac`.
    The normalisation pins :math:`x(\pm 1) = \pm L` for every odd ``n_p``;
    ``c=0, n_p=1`` is the equal-spacing map :math:`x = L\xi`.
    """

    max_order = 4

    def __init__(self, L=8.0, c=0.2, n_p=3):
        if int(n_p) != n_p or n_p < 1 or n_p % 2 == 0:
            raise ValueError(f"n_p must be an odd integer >= 1, got {n_p}")
        if L <= 0:
            raise ValueError(f"L must be positive, got {L}")
        if c < 0 or (c == 0 and n_p > 1):
            raise ValueError(
                f"c must be > 0 (or 0 with n_p=1) for a monotone map, got c={c}, n_p={n_p}")
        self.L = float(L)
        self.c = float(c)
        self.n_p = int(n_p)
        self.a = self.L / (self.c + self.L)
        self.scale = self.L

    def x_of_xi(self, xi):
        xi = np.asarray(xi, dtype=float)
        return (self.a * (self.c * xi + self.L * xi ** self.n_p))[()]

    def dx_dxi(self, xi):
        return self.a * (self.c + self.L * _falling_power(xi, self.n_p, 1))

    def d2x_dxi2(self, xi):
        return self.a * self.L * _falling_power(xi, self.n_p, 2)

    def d3x_dxi3(self, xi):
        return self.a * self.L * _falling_power(xi, self.n_p, 3)

    def d4x_dxi4(self, xi):
        return self.a * self.L * _falling_power(xi, self.n_p, 4)

    def __repr__(self):
        return f"CubicStretchMap(L={self.L}, c={self.c}, n_p={self.n_p})"


class ErfMovingMap:
    r"""Time-dependent clustering map that follows a front moving at speed ``U``.

    .. math::

        x(\xi, \tau) = L\left[(1+s)\xi - s\,\mathrm{erf}(b(\xi - \xi_0(\tau)))\right],
        \qquad s = \frac{\sqrt{\pi}\,h}{2b}

    The slope :math:`L(1 + s - h e^{-b^2(\xi-\xi_0)^2})` dips by a factor
    ``h`` around the front :math:`\xi_0(\tau) = (x_0 + U\tau)/(L(1+s))`.
    With ``h = 0`` the map is exactly :math:`x = L\xi`.

    Every method takes ``(xi, tau)``; :meth:`at` freezes ``tau`` and returns
    an ordinary :class:`Map1D`.
    """

    max_order = 4

    def __init__(self, L=8.0, h=0.9, b=10.0, x0=-2.0, U=1.0):
        if L <= 0:
            raise ValueError(f"L must be positive, got {L}")
        if b <= 0:
            raise ValueError(f"b must be positive, got {b}")
        if h < 0:
            raise ValueError(f"h must be non-negative, got {h}")
        self.L = float(L)
        self.h = float(h)
        self.b = float(b)
        self.x0 = float(x0)
        self.U = float(U)
        self.s = math.sqrt(math.pi) * self.h / (2.0 * self.b)
        if 1.0 + self.s - self.h <= 0.0:
            raise DomainError(
                f"map folds: 1 + s - h = {1.0 + self.s - self.h:.3g} <= 0 "
                f"(h={h}, b={b})")
        self.scale = self.L
        self.domain = (-1.0, 1.0)

    def xi0(self, tau):
        return (self.x0 + self.U * tau) / (self.L * (1.0 + self.s))

    def dxi0_dtau(self, tau=0.0):
        return self.U / (self.L * (1.0 + self.s))

    def _z_gauss(self, xi, tau):
        z = np.asarray(xi, dtype=float) - self.xi0(tau)
        return z, np.exp(-(self.b * z) ** 2)

    def x_of_xi(self, xi, tau=0.0):
        z, _ = self._z_gauss(xi, tau)
        xi = np.asarray(xi, dtype=float)
        return (self.L * ((1.0 + self.s) * xi - self.s * erf(self.b * z)))[()]

    def dx_dxi(self, xi, tau=0.0):
        _, g = self._z_gauss(xi, tau)
        return (self.L * (1.0 + self.s - self.h * g))[()]

    def d2x_dxi2(self, xi, tau=0.0):
        z, g = self._z_gauss(xi, tau)
        return (2.0 * self.L * self.b ** 2 * self.h * g * z)[()]

    def d3x_dxi3(self, xi, tau=0.0):
        z, g = self._z_gauss(xi, tau)
        b2 = self.b ** 2
        return (2.0 * self.L * b2 * self.h * g * (1.0 - 2.0 * b2 * z * z))[()]

    def d4x_dxi4(self, xi, tau=0.0):
        z, g = self._z_gauss(xi, tau)
        b2 = self.b ** 2
        return (-4.0 * self.L * b2 * b2 * self.h * g * z * (3.0 - 2.0 * b2 * z * z))[()]

    def dx_dtau(self, xi, tau=0.0):
        """Mesh velocity: speed of the physical node sitting at fixed ``xi``."""
        _, g = self._z_gauss(xi, tau)
        return (self.L * self.h * g * self.dxi0_dtau(tau))[()]

    def at(self, tau):
        return FrozenMap(self, tau)

    def __repr__(self):
        return (f"ErfMovingMap(L={self.L}, h={self.h}, b={self.b}, "
                f"x0={self.x0}, U={self.U})")


class FrozenMap(Map1D):
    """A moving map evaluated at one fixed time."""

    def __init__(self, moving, tau):
        self.moving = moving
        self.tau = float(tau)
        self.max_order = moving.max_order
        self.scale = moving.scale
        self.domain = moving.domain

    def x_of_xi(self, xi):
        return self.moving.x_of_xi(xi, self.tau)

    def dx_dxi(self, xi):
        return self.moving.dx_dxi(xi, self.tau)

    def d2x_dxi2(self, xi):
        return self.moving.d2x_dxi2(xi, self.tau)

    def d3x_dxi3(self, xi):
        return self.moving.d3x_dxi3(xi, self.tau)

    def d4x_dxi4(self, xi):
        return self.moving.d4x_dxi4(xi, self.tau)


@dataclass(frozen=True)
class ChainCoeffs1D:
    """Derivatives of the inverse map, dξ/dx ... d⁴ξ/dx⁴ (``None`` if not computed)."""

    dxi_dx: object
    d2xi_dx2: object = None
    d3xi_dx3: object = None
    d4xi_dx4: object = None

    @property
    def order(self):
        return sum(v is not None for v in
                   (self.dxi_dx, self.d2xi_dx2, self.d3xi_dx3, self.d4xi_dx4))

    def as_tuple(self):
        return tuple(v for v in (self.dxi_dx, self.d2xi_dx2, self.d3xi_dx3,
                                 self.d4xi_dx4) if v is not None)


def _check_order(order):
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be 1..4, got {order}")


def inverse_derivatives(cmap, xi, order=2):
    """Derivatives of ξ(x) from those of x(ξ), up to fourth order.

    Parameters
    ----------
    cmap : Map1D
        Must supply :math:`d^k x/d\\xi^k` for ``k <= order``.
    xi : float or ndarray
    order : int
        Highest inverse derivative wanted (1..4).

    Returns
    -------
    ChainCoeffs1D
        Entries above ``order`` are ``None``.

    Raises
    ------
    DomainError
        If ``dx/dxi <= 0`` anywhere in ``xi`` (map not invertible there).
    """
    _check_order(order)
    x1 = np.asarray(cmap.dx_dxi(xi), dtype=float)
    if np.any(~(x1 > 0.0)):
        raise DomainError("dx/dxi <= 0: map is not monotone increasing at xi")
    inv = 1.0 / x1
    d1 = inv[()]
    d2 = d3 = d4 = None
    if order >= 2:
        x2 = cmap.derivative(xi, 2)
        d2 = (-x2 * inv ** 3)[()]
    if order >= 3:
        x3 = cmap.derivative(xi, 3)
        d3 = (-x3 * inv ** 4 + 3.0 * x2 * x2 * inv ** 5)[()]
    if order >= 4:
        x4 = cmap.derivative(xi, 4)
        d4 = (-x4 * inv ** 5 + 10.0 * x3 * x2 * inv ** 6
              - 15.0 * x2 ** 3 * inv ** 7)[()]
    return ChainCoeffs1D(d1, d2, d3, d4)


def transform_function_derivatives(u_xi, coeffs, order=None):
    """Map ``(du/dξ, d²u/dξ², ...)`` to ``(du/dx, d²u/dx², ...)``.

    ``u_xi`` holds at least ``order`` derivatives, lowest first. The result
    is a tuple of length ``order``.
    """
    if order is None:
        order = min(len(u_xi), coeffs.order)
    _check_order(order)
    if len(u_xi) < order:
        raise ValueError(f"need {order} u-derivatives, got {len(u_xi)}")
    if coeffs.order < order:
        raise ValueError(
            f"coefficients computed to order {coeffs.order}, {order} requested")
    p1, p2, p3, p4 = (coeffs.dxi_dx, coeffs.d2xi_dx2, coeffs.d3xi_dx3,
                      coeffs.d4xi_dx4)
    u1 = u_xi[0]
    out = [u1 * p1]
    if order >= 2:
        u2 = u_xi[1]
        out.append(u2 * p1 ** 2 + u1 * p2)
    if order >= 3:
        u3 = u_xi[2]
        out.append(u3 * p1 ** 3 + 3.0 * u2 * p1 * p2 + u1 * p3)
    if order >= 4:
        u4 = u_xi[3]
        out.append(u4 * p1 ** 4 + 6.0 * u3 * p2 * p1 ** 2
                   + u2 * (3.0 * p2 ** 2 + 4.0 * p1 * p3) + u1 * p4)
    return tuple(out)


@dataclass(frozen=True)
class BeamCoefficients:
    r"""Coefficients of the mapped beam operator.

    The physical operator :math:`d^2/dx^2 (EI\, d^2u/dx^2)` becomes
    ``(p D2 + q D1)[EI (p D2 + q D1) u]`` with ``p = (dξ/dx)²`` and
    ``q = d²ξ/dx²``; both blocks share the same pair.
    """

    outer: tuple
    inner: tuple


def beam_coefficients(cmap, xi):
    c = inverse_derivatives(cmap, xi, order=2)
    pair = (c.dxi_dx ** 2, c.d2xi_dx2)
    return BeamCoefficients(outer=pair, inner=pair)


def cubic_map_derivatives(cmap, xi):
    """``(x, dx/dξ, d²x/dξ²)`` for a :class:`CubicStretchMap`."""
    return cmap.x_of_xi(xi), cmap.dx_dxi(xi), cmap.d2x_dxi2(xi)


def erf_map_eval(cmap, xi, tau=0.0):
    """``(x, dx/dξ, d²x/dξ², dx/dτ)`` for an :class:`ErfMovingMap`."""
    return (cmap.x_of_xi(xi, tau), cmap.dx_dxi(xi, tau), cmap.d2x_dxi2(xi, tau),
            cmap.dx_dtau(xi, tau))


def xi0_trajectory(cmap, tau):
    """Mapped front position and its rate, ``(ξ0(τ), dξ0/dτ)``."""
    return cmap.xi0(tau), cmap.dxi0_dtau(tau)


def invert_map_1d(cmap, x, xi_guess=None, tol=1e-12, max_iter=50):
    """Solve ``cmap.x_of_xi(xi) = x`` for ``xi`` by Newton-Raphson.

    Works elementwise on arrays. The default starting point is
    ``x / cmap.scale`` (the inverse of the linear map). Convergence is
    declared when ``|x(xi) - x| <= tol * max(1, |x|)`` at every point.

    Raises
    ------
    ConvergenceError
        After ``max_iter`` corrections; carries the last iterate and residual.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = np.asarray(x, dtype=float)
    xi = x / cmap.scale if xi_guess is None else np.array(xi_guess, dtype=float)
    xi = np.broadcast_to(xi, x.shape).astype(float)
    bound = tol * np.maximum(1.0, np.abs(x))
    for _ in range(max_iter + 1):
        resid = x - cmap.x_of_xi(xi)
        if np.all(np.abs(resid) <= bound):
            return xi[()]
        xi = xi + resid / cmap.dx_dxi(xi)
    raise ConvergenceError(
        f"Newton inversion did not converge in {max_iter} iterations "
        f"(max residual {np.max(np.abs(resid)):.3e})",
        last_iterate=xi[()], residual=resid[()])

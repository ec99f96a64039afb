from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvifd import coord2d
from curvifd.coord2d import IdentityMap2D, Jacobian2, JoukowskiMap, PolarMap
from curvifd.errors import BranchError, CapabilityError, DomainError, SingularPointError
from curvifd.oracles import FD_PARTIALS_2D

A = 2.0
POLAR = PolarMap(A, 10.0)
JK = JoukowskiMap(A)
I2 = np.eye(2)[:, :, None]

INV_KEYS = dict(xi_x="u_p", xi_y="u_q", eta_x="v_p", eta_y="v_q", xi_xx="u_pp",
                xi_xy="u_pq", xi_yy="u_qq", eta_xx="v_pp", eta_xy="v_pq", eta_yy="v_qq")


def mp_polar_inverse(x, y):
    return mpmath.hypot(x, y), mpmath.atan2(y, x)


def mp_joukowski_forward(x, y):
    r2 = x * x + y * y
    return x + A * A * x / r2, y - A * A * y / r2


def mp_joukowski_inverse(p, q):
    # closed-form exterior branch z = (zeta + sqrt(zeta^2 - 4a^2)) / 2
    zeta = mpmath.mpc(p, q)
    z = (zeta + mpmath.sqrt(zeta - 2 * A) * mpmath.sqrt(zeta + 2 * A)) / 2
    return z.real, z.imag


def polar_samples(n, seed=0):
    rng = np.random.default_rng(seed)
    return rng.uniform(A, 10.0, n), rng.uniform(0.02, math.pi - 0.02, n)


def joukowski_samples(n, seed=0):
    rng = np.random.default_rng(seed)
    r = A * np.exp(rng.uniform(0.01, math.log(6.0), n))
    t = rng.uniform(0.02, math.pi - 0.02, n)
    return r * np.cos(t), r * np.sin(t)


def rel_err(got, ref):
    # pointwise relative error, floored where the reference crosses zero
    scale = np.maximum(np.abs(ref), 1e-6 * np.max(np.abs(ref)) + 1e-300)
    return float(np.max(np.abs(got - ref) / scale))


# -- Jacobians -----------------------------------------------------------------

def test_polar_g_examples():
    g = coord2d.jacobian_forward(POLAR, 2.0, 0.0)
    assert np.allclose(g.as_array(), [[1, 0], [0, 2]], atol=1e-15)
    assert g.det == pytest.approx(2.0)
    xi, eta = polar_samples(50)
    assert np.allclose(coord2d.jacobian_forward(POLAR, xi, eta).det, xi, rtol=1e-14)


def test_identity_jacobian():
    g = coord2d.jacobian_forward(IdentityMap2D(), 0.3, -1.2)
    assert np.allclose(g.as_array(), np.eye(2)) and g.det == 1.0
    assert coord2d.invert_jacobian(Jacobian2(1.0, 0.0, 0.0, 1.0)) == Jacobian2(1.0, -0.0, -0.0, 1.0)


def test_invert_polar_g():
    G = coord2d.invert_jacobian(coord2d.jacobian_forward(POLAR, 2.0, 0.0))
    assert np.allclose(G.as_array(), [[1, 0], [0, 0.5]], atol=1e-15)


def test_singular_jacobian():
    with pytest.raises(SingularPointError):
        coord2d.invert_jacobian(Jacobian2(1.0, 2.0, 2.0, 4.0))


@pytest.mark.parametrize("kind", ["polar", "joukowski"])
def test_gG_is_identity(kind):
    if kind == "polar":
        g = coord2d.jacobian_forward(POLAR, *polar_samples(1000))
        G = coord2d.invert_jacobian(g)
    else:
        G = coord2d.jacobian_inverse(JK, *joukowski_samples(1000))
        g = coord2d.invert_jacobian(G)
    assert np.max(np.abs((g @ G).as_array() - I2)) < 1e-12
    assert np.max(np.abs((G @ g).as_array() - I2)) < 1e-12


def test_polar_G_two_ways():
    xi, eta = polar_samples(200)
    G1 = coord2d.invert_jacobian(coord2d.jacobian_forward(POLAR, xi, eta))
    G2 = coord2d.jacobian_inverse(POLAR, *POLAR.to_physical(xi, eta))
    assert np.max(np.abs(G1.as_array() - G2.as_array())) < 1e-10


# -- determinant derivatives ---------------------------------------------------

def test_polar_det_derivatives():
    xi, eta = polar_samples(20)
    d_xi, d_eta = coord2d.det_derivatives(POLAR, xi, eta)
    assert np.allclose(d_xi, 1.0, atol=1e-14) and np.allclose(d_eta, 0.0, atol=1e-14)


def test_identity_det_derivatives():
    assert coord2d.det_derivatives(IdentityMap2D(), 0.5, 0.5) == (0.0, 0.0)


def test_joukowski_det_derivatives_against_differences():
    x, y = joukowski_samples(1000, seed=5)

    def detG(p, q):
        r2 = p * p + q * q
        r4 = r2 * r2
        xi_x = 1 - A * A * (p * p - q * q) / r4
        xi_y = -2 * A * A * p * q / r4
        return xi_x ** 2 + xi_y ** 2, 0

    fd = FD_PARTIALS_2D(detG, x, y)
    dx, dy = coord2d.det_derivatives(JK, x, y)
    assert rel_err(dx, fd["u_p"]) < 1e-6 and rel_err(dy, fd["u_q"]) < 1e-6


def test_polar_det_derivatives_against_differences():
    xi, eta = polar_samples(1000, seed=6)

    def detg(p, q):
        return p * mpmath.cos(q) ** 2 + p * mpmath.sin(q) ** 2, 0

    fd = FD_PARTIALS_2D(detg, xi, eta)
    d_xi, d_eta = coord2d.det_derivatives(POLAR, xi, eta)
    assert np.max(np.abs(d_xi - fd["u_p"])) < 1e-6 and np.max(np.abs(d_eta - fd["u_q"])) < 1e-6


def test_det_derivatives_capability():
    class FirstOnly(coord2d.Map2D):
        explicit = "forward"

        def forward_partials(self, xi, eta):
            return coord2d.ForwardPartials(1.0, 0.0, 0.0, 1.0)

    with pytest.raises(CapabilityError):
        coord2d.det_derivatives(FirstOnly(), 0.0, 0.0)


# -- inverse partials through the forward map -----------------------------------

def test_polar_inverse_laplacians():
    xi, eta = polar_samples(100)
    s = coord2d.inverse_second_derivatives(POLAR, xi, eta)
    assert np.allclose(s[0] + s[2], 1.0 / xi, rtol=1e-13)
    assert np.allclose(s[3] + s[5], 0.0, atol=1e-14)


def test_identity_second_derivatives():
    assert all(v == 0 for v in coord2d.inverse_second_derivatives(IdentityMap2D(), 0.1, 0.2))


def test_inverse_second_derivatives_needs_forward_map():
    with pytest.raises(CapabilityError):
        coord2d.inverse_second_derivatives(JK, 5.0, 1.0)


def test_polar_point_pi_over_3():
    s = coord2d.inverse_second_derivatives(POLAR, 2.0, math.pi / 3)
    x, y = POLAR.to_physical(2.0, math.pi / 3)
    fd = FD_PARTIALS_2D(mp_polar_inverse, x, y)
    want = [fd[k][0] for k in ("u_pp", "u_pq", "u_qq", "v_pp", "v_pq", "v_qq")]
    assert np.allclose(s, want, rtol=1e-5, atol=0)


def test_polar_inverse_partials_against_differences():
    xi, eta = polar_samples(1000, seed=1)
    p = coord2d.mapped_partials(POLAR, xi, eta)
    fd = FD_PARTIALS_2D(mp_polar_inverse, *POLAR.to_physical(xi, eta))
    for mine, theirs in INV_KEYS.items():
        assert rel_err(getattr(p, mine), fd[theirs]) < 1e-5, mine


def test_polar_forward_partials_against_differences():
    xi, eta = polar_samples(300, seed=2)
    p = POLAR.forward_partials(xi, eta)
    fd = FD_PARTIALS_2D(lambda r, t: (r * mpmath.cos(t), r * mpmath.sin(t)), xi, eta)
    pairs = dict(x_xi="u_p", x_eta="u_q", y_xi="v_p", y_eta="v_q", x_xixi="u_pp",
                 x_xieta="u_pq", x_etaeta="u_qq", y_xixi="v_pp", y_xieta="v_pq",
                 y_etaeta="v_qq")
    for mine, theirs in pairs.items():
        got = np.broadcast_to(getattr(p, mine), xi.shape)
        assert np.max(np.abs(got - fd[theirs])) < 1e-6 * max(1.0, np.max(np.abs(fd[theirs])))


# -- Joukowski ------------------------------------------------------------------

def test_joukowski_forward_examples():
    assert coord2d.joukowski_forward(2.0, 0.0, A) == (4.0, 0.0)
    assert coord2d.joukowski_forward(0.0, 2.0, A) == pytest.approx((0.0, 0.0), abs=1e-15)
    assert coord2d.joukowski_forward(10.0, 0.0, A) == pytest.approx((10.4, 0.0))
    with pytest.raises(DomainError):
        coord2d.joukowski_forward(0.0, 0.0, A)


def test_joukowski_partials_against_differences():
    x, y = joukowski_samples(1000, seed=3)
    p = coord2d.joukowski_partials(x, y, A)
    fd = FD_PARTIALS_2D(mp_joukowski_forward, x, y)
    for mine, theirs in INV_KEYS.items():
        assert rel_err(getattr(p, mine), fd[theirs]) < 1e-6, mine


def test_joukowski_forward_partials_from_inverse_against_closed_form():
    x, y = joukowski_samples(300, seed=4)
    xi, eta = coord2d.joukowski_forward(x, y, A)
    g = coord2d.invert_jacobian(coord2d.jacobian_inverse(JK, x, y))
    fd = FD_PARTIALS_2D(mp_joukowski_inverse, xi, eta)
    for got, key in ((g.a11, "u_p"), (g.a12, "u_q"), (g.a21, "v_p"), (g.a22, "v_q")):
        assert rel_err(got, fd[key]) < 1e-6


def test_joukowski_cauchy_riemann_and_axis():
    x, y = joukowski_samples(200)
    p = coord2d.joukowski_partials(x, y, A)
    assert np.array_equal(p.xi_x, p.eta_y) and np.array_equal(p.xi_y, -p.eta_x)
    assert np.allclose(p.xi_xx + p.xi_yy, 0) and np.allclose(p.eta_xx + p.eta_yy, 0)
    q = coord2d.joukowski_partials(np.array([3.0, -5.0]), np.zeros(2), A)
    assert np.all(q.xi_y == 0) and np.all(q.eta_x == 0)


def test_joukowski_far_field():
    p = coord2d.joukowski_partials(100.0, 0.0, A)
    assert p.xi_x == pytest.approx(0.9996, abs=1e-12)
    assert p.eta_y == pytest.approx(0.9996, abs=1e-12)


@pytest.mark.parametrize("zeta,z,tol", [
    ((10.4, 0.0), (10.0, 0.0), 1e-12),
    ((0.0, 0.0), (0.0, 2.0), 1e-12),
    # the segment end is a double root: Newton is only linear there
    ((4.0, 0.0), (2.0, 0.0), 1e-6),
])
def test_joukowski_inverse_examples(zeta, z, tol):
    got = coord2d.joukowski_inverse(*zeta, A)
    assert np.allclose(got, z, atol=tol)


def test_joukowski_inverse_round_trip():
    rng = np.random.default_rng(8)
    xi = rng.uniform(-10, 10, 100)
    eta = rng.uniform(0, 10, 100)
    x, y = coord2d.joukowski_inverse(xi, eta, A)
    assert np.all(x * x + y * y >= A * A * (1 - 1e-12))
    p, q = coord2d.joukowski_forward(x, y, A)
    assert np.max(np.abs(p - xi)) < 1e-10 and np.max(np.abs(q - eta)) < 1e-10


@settings(max_examples=80, deadline=None)
@given(xi=st.floats(-12, 12), eta=st.floats(0.0, 12))
def test_joukowski_inverse_exterior_branch(xi, eta):
    if abs(abs(xi) - 2 * A) < 1e-3 and eta < 1e-3:
        return  # too close to a segment end for a 1e-10 round trip
    x, y = coord2d.joukowski_inverse(xi, eta, A)
    assert x * x + y * y >= A * A * (1 - 1e-10) and y >= -1e-12
    p, q = coord2d.joukowski_forward(x, y, A)
    assert abs(p - xi) < 1e-10 and abs(q - eta) < 1e-10


def test_joukowski_inverse_reports_failure():
    with pytest.raises((BranchError, coord2d.ConvergenceError)):
        coord2d.joukowski_inverse(3.0, 0.5, A, max_iter=1, restarts=0)


def test_joukowski_singular_guard():
    with pytest.raises(SingularPointError):
        JK.check_point(2.0 + 1e-9, 0.0)
    with pytest.raises(SingularPointError):
        coord2d.jacobian_inverse(JK, -2.0, 0.0)


def test_polar_singular_guard():
    with pytest.raises(SingularPointError):
        coord2d.jacobian_forward(POLAR, 1e-9, 0.3)


# -- polar inverse ---------------------------------------------------------------

def test_polar_inverse_examples():
    assert coord2d.polar_inverse(2.0, 0.0) == (2.0, 0.0)
    assert coord2d.polar_inverse(0.0, 3.0) == pytest.approx((3.0, math.pi / 2))
    with pytest.raises(DomainError):
        coord2d.polar_inverse(0.0, 0.0)


def test_polar_round_trip():
    xi, eta = polar_samples(100)
    back = coord2d.polar_inverse(*POLAR.to_physical(xi, eta))
    assert np.max(np.abs(back[0] - xi)) < 1e-12 and np.max(np.abs(back[1] - eta)) < 1e-12


# -- Laplacian coefficients -------------------------------------------------------

def test_polar_coeffs_at_two():
    mc = coord2d.laplacian_coeffs(POLAR, 2.0, 0.7)
    assert mc.as_tuple() == pytest.approx((1.0, 0.0, 0.25, 0.5, 0.0), abs=1e-14)


def test_identity_coeffs():
    mc = coord2d.laplacian_coeffs(IdentityMap2D(), 0.3, 0.4)
    assert mc.as_tuple() == (1.0, 0.0, 1.0, 0.0, 0.0)


def test_polar_coeffs_everywhere():
    XI, ETA = np.meshgrid(np.linspace(2, 10, 41), np.linspace(0, math.pi, 41), indexing="ij")
    A_, B_, C_, D_, E_ = coord2d.laplacian_coeffs(POLAR, XI, ETA).as_tuple()
    assert np.max(np.abs(A_ - 1)) < 1e-10 and np.max(np.abs(B_)) < 1e-10
    assert np.max(np.abs(C_ - 1 / XI ** 2)) < 1e-10 and np.max(np.abs(D_ - 1 / XI)) < 1e-10
    assert np.max(np.abs(E_)) < 1e-10


def test_joukowski_coeffs_conformal():
    x, y = joukowski_samples(500)
    xi, eta = coord2d.joukowski_forward(x, y, A)
    mc = coord2d.laplacian_coeffs(JK, xi, eta, xy=(x, y))
    A_, B_, C_, D_, E_ = mc.as_tuple()
    big = np.maximum(A_, C_)
    assert np.all(np.abs(B_) <= 1e-10 * big)
    assert np.all(np.abs(D_) <= 1e-10 * big) and np.all(np.abs(E_) <= 1e-10 * big)
    assert np.all(np.abs(A_ - C_) <= 1e-10 * A_)


@pytest.mark.parametrize("cmap,pts", [
    (POLAR, polar_samples(200)),
    (JK, coord2d.joukowski_forward(*joukowski_samples(200), A)),
])
def test_coeff_invariants(cmap, pts):
    mc = coord2d.laplacian_coeffs(cmap, *pts)
    A_, B_, C_ = (np.asarray(v) for v in mc.as_tuple()[:3])
    assert np.all(A_ > 0) and np.all(C_ > 0)
    assert np.all(B_ ** 2 <= 4 * A_ * C_ * (1 + 1e-12))

from __future__ import annotations

import math

import numpy as np
import pytest

from curvifd.coord2d import IdentityMap2D
from curvifd.fd_core import Grid2D
from curvifd.oracles import POLAR_TRUNCATED, POTENTIAL_EXACT
from curvifd.potential import (
    PotentialConfig,
    apply_boundary,
    assemble_stencil,
    build_discretization,
    solve_potential,
    stencil_residual,
    surface_profiles,
)

POLAR = PotentialConfig(geometry="polar")
JOUK = PotentialConfig(geometry="joukowski")


@pytest.fixture(scope="module")
def polar():
    return solve_potential(POLAR)


@pytest.fixture(scope="module")
def jouk():
    return solve_potential(JOUK)


def exact_phi(disc, U=1.0, a=2.0):
    return POTENTIAL_EXACT(disc.x, disc.y, U, a)[1]


def raw_residual(disc, phi):
    return stencil_residual(disc, phi) * np.abs(disc.weights[1, 1, 1:-1, 1:-1])


# -- stencil ---------------------------------------------------------------------

@pytest.mark.parametrize("h", [0.1, 0.25])
def test_identity_five_point(h):
    g = Grid2D(8, 8, (0.0, 8 * h), (0.0, 8 * h))
    w = assemble_stencil(IdentityMap2D(), g, 3, 4) * h * h
    want = np.array([[0, 1, 0], [1, -4, 1], [0, 1, 0]], float)
    assert np.allclose(w, want, atol=1e-12)


def test_polar_corners_vanish():
    disc = build_discretization(POLAR)
    w = disc.weights[:, :, 1:-1, 1:-1]
    for c in ((0, 0), (0, 2), (2, 0), (2, 2)):
        assert np.max(np.abs(w[c])) <= 1e-12 * np.max(np.abs(w[1, 1]))


def test_stencil_rows_sum_to_zero():
    for cfg in (POLAR, JOUK):
        w = build_discretization(cfg).weights[:, :, 1:-1, 1:-1]
        total = w.sum(axis=(0, 1))
        assert np.max(np.abs(total)) <= 1e-10 * np.max(np.abs(w[1, 1]))


def test_assemble_matches_discretization():
    disc = build_discretization(POLAR)
    cmap, g = POLAR.map, POLAR.grid
    assert np.allclose(assemble_stencil(cmap, g, 5, 7), disc.weights[:, :, 5, 7], rtol=1e-13)
    with pytest.raises(ValueError):
        assemble_stencil(cmap, g, 0, 3)


def test_polar_exact_residual_second_order():
    maxes = []
    for M in (40, 80, 160):
        disc = build_discretization(PotentialConfig(M=M, N=M))
        maxes.append(np.max(np.abs(raw_residual(disc, exact_phi(disc)))))
    assert maxes[0] / maxes[1] >= 3.0 and maxes[1] / maxes[2] >= 3.4


def test_joukowski_exact_residual_second_order_away_from_endpoints():
    rms = []
    for M in (40, 80, 160):
        disc = build_discretization(PotentialConfig(geometry="joukowski", M=M, N=M))
        xi, eta = disc.xi[1:-1, 1:-1], disc.eta[1:-1, 1:-1]
        keep = np.abs(np.abs(xi) - 4.0) + eta > 2.0
        r = raw_residual(disc, exact_phi(disc))[keep]
        rms.append(np.sqrt(np.mean(r ** 2)))
    assert rms[0] / rms[1] >= 3.5 and rms[1] / rms[2] >= 3.5


# -- boundary conditions -----------------------------------------------------------

@pytest.mark.parametrize("cfg", [POLAR, JOUK])
def test_zero_data_keeps_zero(cfg):
    disc = build_discretization(cfg)
    phi = np.zeros(disc.grid.shape)
    apply_boundary(disc, phi, U=0.0)
    assert not np.any(phi)


def test_polar_exact_normal_derivative():
    # radial derivative of the reference potential at r = a is -U cos(eta)
    a, U, h = 2.0, 1.0, 1e-6
    eta = np.linspace(0, math.pi, 13)
    f = lambda r: POTENTIAL_EXACT(r * np.cos(eta), r * np.sin(eta), U, a)[1]  # noqa: E731
    assert np.allclose((f(a + 2 * h) - f(a)) / (2 * h), -U * np.cos(eta), atol=1e-5)


def test_polar_boundary_rows(polar):
    g = polar.disc.grid
    phi = polar.phi
    assert np.all(phi[-1] == 0.0)
    slope = (-3 * phi[0] + 4 * phi[1] - phi[2]) / (2 * g.dxi)
    # normal-flow condition on the body once converged
    assert np.allclose(slope, -np.cos(g.eta), atol=1e-6)
    edge = (-3 * phi[1:-1, 0] + 4 * phi[1:-1, 1] - phi[1:-1, 2]) / (2 * g.deta)
    assert np.max(np.abs(edge)) < 1e-12


def test_boundary_data_symmetry():
    disc = build_discretization(POLAR)
    rng = np.random.default_rng(3)
    phi = rng.normal(size=disc.grid.shape)
    phi = phi - phi[:, ::-1]
    apply_boundary(disc, phi)
    assert np.allclose(phi, -phi[:, ::-1], atol=1e-13)


def test_joukowski_gauge(jouk):
    assert jouk.phi[0, 0] == 0.0


# -- solves ------------------------------------------------------------------------

@pytest.mark.parametrize("geometry", ["polar", "joukowski"])
def test_zero_stream(geometry):
    res = solve_potential(PotentialConfig(geometry=geometry, U=0.0))
    assert res.iterations == 0 and res.converged
    assert not np.any(res.phi)


def test_polar_converges(polar):
    assert polar.converged and polar.residual <= POLAR.tol
    assert polar.residual_history[-1] == polar.residual
    assert len(polar.residual_history) == polar.iterations + 1


def test_polar_antisymmetry(polar):
    assert np.max(np.abs(polar.phi + polar.phi[:, ::-1])) <= 1e-8
    assert np.max(np.abs(polar.v[:, [0, -1]])) <= 1e-4


def test_gauss_seidel_monotone_after_first_sweep():
    res = solve_potential(PotentialConfig(M=20, N=20, omega=1.0))
    h = np.array(res.residual_history[1:])
    assert res.converged and np.all(np.diff(h) <= 0)


def test_polar_matches_truncated_annulus(polar):
    d = polar.disc
    ref = POLAR_TRUNCATED(d.xi, d.eta, 1.0, 2.0, 10.0)
    assert np.max(np.abs(polar.phi - ref)) < 0.05
    assert polar.errors["phi_truncated"]["rel_l2"] < 0.03


def test_polar_grid_convergence_against_truncated_annulus():
    e = [solve_potential(PotentialConfig(M=M, N=M)).errors["phi_truncated"]["rel_l2"]
         for M in (20, 40)]
    assert e[0] / e[1] >= 3.0


def test_unbounded_error_dominated_by_far_field(polar):
    # phi = 0 at r = R where the unbounded solution is U a^2 cos(eta) / R
    assert polar.errors["phi"]["linf"] == pytest.approx(0.4, abs=1e-9)


def test_surface_tangential_velocity_peak(polar):
    s = surface_profiles(polar)
    mid = np.argmin(np.abs(s.theta - math.pi / 2))
    assert abs(abs(s.u_s[mid]) - 2.0) <= 0.05 * 2.0
    assert s.phi_exact[0] == pytest.approx(2.0)


@pytest.mark.parametrize("name", ["polar", "jouk"])
def test_no_penetration(name, request):
    s = surface_profiles(request.getfixturevalue(name))
    assert np.max(np.abs(s.u_n)) < 1e-10
    assert np.max(np.abs(s.u_n_exact)) < 1e-12


def test_joukowski_surface_matches_polar(polar, jouk):
    # looser agreement: 15% of the peak speed 2U, away from the segment ends
    sp, sj = surface_profiles(polar), surface_profiles(jouk)
    mid = (sj.theta >= math.pi / 4) & (sj.theta <= 3 * math.pi / 4)
    ref = np.interp(sj.theta[mid], sp.theta, sp.u_s)
    assert np.max(np.abs(sj.u_s[mid] - ref)) <= 0.15 * 2.0


def test_joukowski_is_antisymmetric_up_to_gauge(jouk):
    phi = jouk.phi - jouk.phi[jouk.phi.shape[0] // 2, 0]
    assert np.max(np.abs(phi + phi[::-1])) < 1e-6


def test_joukowski_stagnation_points(jouk):
    d = jouk.disc
    ends = np.isclose(np.abs(d.xi[:, 0]), 4.0)
    assert np.all(jouk.u[ends, 0] == 0.0) and np.all(jouk.v[ends, 0] == 0.0)


def test_unconverged_is_flagged():
    res = solve_potential(PotentialConfig(max_iter=5))
    assert not res.converged and res.iterations == 5 and res.residual > res.config.tol


def test_warm_start_from_solution(polar):
    again = solve_potential(POLAR, phi0=polar.phi)
    assert again.iterations == 0
    assert np.array_equal(again.phi, polar.phi)


@pytest.mark.parametrize("kw", [
    dict(geometry="sphere"), dict(omega=0.0), dict(omega=2.0), dict(a=10.0, R=10.0),
    dict(geometry="joukowski", L=4.0), dict(geometry="joukowski", B=0.0), dict(M=3),
])
def test_config_errors(kw):
    with pytest.raises(ValueError):
        PotentialConfig(**kw)

"""
Fast self-checks behind the ``verify`` subcommand.

Each check returns a :class:`CheckResult`; none of them raises on failure.
The full property suites live in the test directory; these are the quick
versions a user can run from an installed package without pytest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from curvifd import coord1d, coord2d
from curvifd.oracles import (
    BURGERS_STEADY,
    CONVDIFF_EXACT,
    FD_INVERSE_1D,
    FD_PARTIALS_2D,
    POLAR_TRUNCATED,
    POTENTIAL_EXACT,
)

__all__ = ["CheckResult", "run_checks"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    limit: float

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name}: {self.value:.3e} (limit {self.limit:.1e})"


def _check(name, value, limit):
    value = float(value)
    return CheckResult(name, bool(value <= limit), value, limit)


def _oracle_checks():
    out = []
    for o in (BURGERS_STEADY, CONVDIFF_EXACT, POTENTIAL_EXACT, POLAR_TRUNCATED,
              FD_INVERSE_1D, FD_PARTIALS_2D):
        try:
            out.append(_check(f"oracle {o.name}", o.verify(), o.tolerance))
        except AssertionError:
            out.append(CheckResult(f"oracle {o.name}", False, float(o._residual), o.tolerance))
    return out


def _chain_rule_1d(n=200, seed=0):
    rng = np.random.default_rng(seed)
    cmap = coord1d.CubicStretchMap()
    xi = rng.uniform(-1.0, 1.0, n)
    ref = FD_INVERSE_1D(lambda s: cmap.a * (cmap.c * s + cmap.L * s ** 3), xi,
                        lambda s: cmap.a * (cmap.c + 3 * cmap.L * s ** 2))
    got = np.array(coord1d.inverse_derivatives(cmap, xi, order=4).as_tuple()).T
    rel = np.max(np.abs(got - ref) / np.abs(ref))
    return _check("1D inverse derivatives vs differences", rel, 1e-5)


def _round_trips():
    cmap = coord1d.CubicStretchMap()
    xi = np.linspace(-1, 1, 401)
    back = coord1d.invert_map_1d(cmap, cmap.x_of_xi(xi))
    out = [_check("1D Newton round trip", np.max(np.abs(back - xi)), 1e-10)]
    a = 2.0
    XI, ETA = np.meshgrid(np.linspace(-10, 10, 21), np.linspace(0.5, 10, 20), indexing="ij")
    x, y = coord2d.joukowski_inverse(XI, ETA, a)
    p, q = coord2d.joukowski_forward(x, y, a)
    out.append(_check("2D Newton round trip", max(np.max(np.abs(p - XI)), np.max(np.abs(q - ETA))),
                      1e-10))
    return out


def _gG_identity():
    worst = 0.0
    polar = coord2d.PolarMap(2.0, 10.0)
    XI, ETA = np.meshgrid(np.linspace(2, 10, 9), np.linspace(0, math.pi, 9), indexing="ij")
    g = coord2d.jacobian_forward(polar, XI, ETA)
    G = coord2d.invert_jacobian(g)
    worst = max(worst, np.max(np.abs((g @ G).as_array() - np.eye(2)[:, :, None, None])))
    jk = coord2d.JoukowskiMap(2.0)
    x, y = np.meshgrid(np.linspace(-6, 6, 13), np.linspace(0.5, 6, 12), indexing="ij")
    G = coord2d.jacobian_inverse(jk, x, y)
    g = coord2d.invert_jacobian(G)
    worst = max(worst, np.max(np.abs((g @ G).as_array() - np.eye(2)[:, :, None, None])))
    return _check("g G = I", worst, 1e-12)


def _polar_reduction():
    polar = coord2d.PolarMap(2.0, 10.0)
    XI, ETA = np.meshgrid(np.linspace(2, 10, 41), np.linspace(0, math.pi, 41), indexing="ij")
    mc = coord2d.laplacian_coeffs(polar, XI, ETA)
    want = (1.0, 0.0, 1.0 / XI ** 2, 1.0 / XI, 0.0)
    err = max(np.max(np.abs(np.asarray(v) - w)) for v, w in zip(mc.as_tuple(), want))
    return _check("polar Laplacian coefficients", err, 1e-10)


def run_checks():
    """Run every quick check and return the list of results."""
    return [*_oracle_checks(), _chain_rule_1d(), *_round_trips(), _gG_identity(),
            _polar_reduction()]

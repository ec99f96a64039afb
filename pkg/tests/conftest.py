from __future__ import annotations

import mpmath
import pytest

from curvifd import coord1d


def mp_cubic(cmap):
    """``(x(xi), dx/dxi)`` of a CubicStretchMap written out for mpmath."""
    a, c, L, n = cmap.a, cmap.c, cmap.L, cmap.n_p
    return (lambda s: a * (c * s + L * s ** n),
            lambda s: a * (c + n * L * s ** (n - 1)))


def mp_erf(emap, tau):
    """``(x(xi), dx/dxi)`` of an ErfMovingMap at time ``tau`` for mpmath."""
    L, s_, b, h = emap.L, emap.s, emap.b, emap.h
    x0 = emap.xi0(tau)
    return (lambda s: L * ((1 + s_) * s - s_ * mpmath.erf(b * (s - x0))),
            lambda s: L * (1 + s_ - h * mpmath.exp(-(b * (s - x0)) ** 2)))


@pytest.fixture
def cubic():
    return coord1d.CubicStretchMap(L=8.0, c=0.2, n_p=3)


@pytest.fixture
def erf_map():
    return coord1d.ErfMovingMap(L=8.0, h=0.9, b=10.0, x0=-2.0, U=1.0)


# -- acceptance report -------------------------------------------------------------

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion and print it."""

    def record(number, passed, text):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {number}: {text}"
        _ACCEPTANCE[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])

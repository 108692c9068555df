import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad
from scipy.special import i0

from bakryemery.model import sn
from bakryemery.numerics import (GridSpec, IntegrationError, Tolerance, cumulative_integral, integrate,
                                 panel_integral, rk4_fixed, solve_jacobi, sphere_area, sphere_average,
                                 sphere_nodes)
from bakryemery.oracles import run_oracles


def const_k(v):
    return lambda r: np.full_like(np.asarray(r, dtype=float), v)


def test_jacobi_flat_has_no_zero():
    sol = solve_jacobi(const_k(0.0), 5.0)
    r = np.linspace(0, 5, 101)
    assert np.allclose(sol.value(r), r, atol=1e-12)
    assert sol.first_zero is None


def test_jacobi_round_sphere_zero_at_pi():
    sol = solve_jacobi(const_k(1.0), 4.0)
    assert sol.first_zero == pytest.approx(math.pi, abs=1e-8)
    r = np.linspace(0, 3, 61)
    assert np.allclose(sol.value(r), np.sin(r), atol=1e-9)


@pytest.mark.parametrize("H", [-1.0, -0.25, 0.5, 2.0])
def test_jacobi_matches_sn(H):
    end = 0.9 * math.pi / math.sqrt(H) if H > 0 else 4.0
    sol = solve_jacobi(const_k(H), end)
    r = np.linspace(0, end, 500)
    ref = sn(H, r)
    assert np.max(np.abs(sol.value(r) - ref) / np.maximum(1, np.abs(ref))) < 1e-8


def test_jacobi_derivatives_consistent():
    k = lambda r: np.asarray(r, dtype=float)
    sol = solve_jacobi(k, 2.0)
    r = np.linspace(0.1, 1.9, 37)
    v, d, dd = sol(r)
    h = 1e-5
    fd = (sol.value(r + h) - sol.value(r - h)) / (2 * h)
    assert np.allclose(d, fd, atol=1e-8)
    assert np.allclose(dd, -r * v)


def test_airy_profile_dual_integrators():
    k = lambda r: np.asarray(r, dtype=float)
    v = float(solve_jacobi(k, 2.0).value(np.array([2.0]))[0])
    _, coarse = rk4_fixed(lambda t: t, 2.0, 1e-3)
    _, fine = rk4_fixed(lambda t: t, 2.0, 5e-4)
    assert abs(v - fine[-1, 0]) < 1e-8
    assert abs(coarse[-1, 0] - fine[-1, 0]) < 1e-8


def test_jacobi_rejects_bad_range():
    with pytest.raises(ValueError):
        solve_jacobi(const_k(0.0), 0.0)


@pytest.mark.parametrize("g,a,b,ref", [
    (lambda t: 1.0, 0, 3, 3.0),
    (math.sin, 0, math.pi, 2.0),
    (lambda t: t * math.exp(t), 0, 1, 1.0),
])
def test_integrate_library(g, a, b, ref):
    assert integrate(g, a, b) == pytest.approx(ref, abs=1e-12)


def test_integrate_order_and_failure():
    with pytest.raises(ValueError):
        integrate(math.sin, 1.0, 0.0)
    with pytest.raises(IntegrationError):
        integrate(lambda t: 1.0 / t, 0.0, 1.0)


@given(st.floats(0.1, 5.0), st.floats(0.1, 5.0))
def test_cumulative_integral_matches_quad(a, b):
    knots = np.linspace(0, a + b, 7)
    g = lambda r: np.exp(-np.asarray(r) / b) * np.cos(np.asarray(r) * a)
    got = cumulative_integral(g, knots)
    ref = [quad(lambda t: math.exp(-t / b) * math.cos(t * a), x, y, epsabs=1e-14)[0]
           for x, y in zip(knots[:-1], knots[1:])]
    assert np.allclose(got, ref, atol=1e-10)


def test_panel_integral_polynomial_exact():
    a, b = np.array([0.0, 1.0]), np.array([1.0, 3.0])
    got = panel_integral(lambda r: r ** 5, a, b)
    assert np.allclose(got, (b ** 6 - a ** 6) / 6, rtol=1e-14)


def test_sphere_examples():
    assert sphere_average(lambda c: np.ones_like(c), 3) == pytest.approx(4 * math.pi, rel=1e-14)
    assert abs(sphere_average(lambda c: c, 3)) < 1e-14
    # e^{-c} on S^1 against a dense trapezoid rule in the angle
    alpha = np.linspace(0, 2 * math.pi, 20001)[:-1]
    trap = np.exp(-np.cos(alpha)).sum() * (2 * math.pi / alpha.size)
    got = sphere_average(lambda c: np.exp(-c), 2)
    assert got == pytest.approx(trap, rel=1e-12)
    assert got == pytest.approx(2 * math.pi * i0(1.0), rel=1e-12)


@given(st.integers(2, 7), st.integers(0, 10))
def test_sphere_average_exact_on_monomials(n, d):
    got = sphere_average(lambda c: c ** d, n)
    exact = 0.0 if d % 2 else sphere_area(n - 1) * math.prod((2 * j + 1) / (n + 2 * j) for j in range(d // 2))
    assert got == pytest.approx(exact, abs=1e-12)


@given(st.integers(2, 8))
def test_sphere_nodes_weights(n):
    c, w = sphere_nodes(n)
    assert np.all(np.abs(c) <= 1)
    assert np.all(w > 0)
    assert w.sum() == pytest.approx(sphere_area(n - 1), rel=1e-13)


def test_sphere_area_known():
    assert sphere_area(1) == pytest.approx(2 * math.pi)
    assert sphere_area(2) == pytest.approx(4 * math.pi)
    assert sphere_area(3) == pytest.approx(2 * math.pi ** 2)


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(0.0, 1.0)
    with pytest.raises(ValueError):
        GridSpec(2.0, 1.0)
    with pytest.raises(ValueError):
        GridSpec(0.1, 1.0, count=1)
    with pytest.raises(ValueError):
        GridSpec(0.1, 1.0, spacing="cubic")
    g = GridSpec(0.1, 10.0, 5, "log")
    assert np.allclose(g.points(), [0.1, 10 ** -0.5, 1, 10 ** 0.5, 10])
    assert GridSpec.for_range(4.0, 10).r_min == pytest.approx(4e-3)


def test_tolerance_validation():
    with pytest.raises(ValueError):
        Tolerance(abs=0.0)
    with pytest.raises(ValueError):
        Tolerance(margin_floor=0.0)
    with pytest.raises(ValueError):
        Tolerance(volume_floor=1e-6)


def test_all_oracles_pass():
    rows = run_oracles()
    assert rows and all(r.ok for r in rows), [r for r in rows if not r.ok]
    with pytest.raises(ValueError):
        run_oracles("nope")

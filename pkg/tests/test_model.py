import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad, solve_ivp

from bakryemery.model import (DomainError, ModelParams, mean_curvature_model, model_ball_volumes,
                              model_radius, sn, sn_derivs, vol_model, vol_model_weighted)


def sn_by_ode(H, r):
    # independent oracle: integrate sn'' = -H sn from the pole
    sol = solve_ivp(lambda t, y: [y[1], -H * y[0]], (0.0, r), [0.0, 1.0], method="DOP853",
                    rtol=1e-13, atol=1e-14)
    return sol.y[0, -1]


def test_sn_examples():
    assert sn(0.0, 2.5) == 2.5
    assert sn(1.0, math.pi / 2) == pytest.approx(1.0, abs=1e-15)
    assert sn(-1.0, 1.0) == pytest.approx(sn_by_ode(-1.0, 1.0), abs=1e-10)
    assert sn(-1.0, 1.0) == pytest.approx(1.1752011936438014, rel=1e-14)


@pytest.mark.parametrize("H", [-2.0, -0.3, 0.0, 0.7, 1.0])
def test_sn_matches_ode_oracle(H):
    for r in (0.1, 0.9, 2.0):
        if H > 0 and r >= model_radius(H):
            continue
        assert sn(H, r) == pytest.approx(sn_by_ode(H, r), abs=1e-10)


@given(st.floats(-4, 4), st.floats(0, 3))
def test_sn_solves_jacobi_equation(H, r):
    s, c, d2 = sn_derivs(H, np.array([r]))
    assert d2[0] == pytest.approx(-H * s[0], abs=1e-12 * max(1.0, abs(s[0])))
    # first integral: sn'^2 + H sn^2 = 1
    assert c[0] ** 2 + H * s[0] ** 2 == pytest.approx(1.0, rel=1e-10)


@given(st.floats(0.01, 3))
def test_sn_continuous_through_flat(r):
    flat = sn(0.0, r)
    for H in (1e-9, -1e-9, 1e-12):
        assert sn(H, r) == pytest.approx(flat, rel=1e-7)


def test_mean_curvature_examples():
    assert mean_curvature_model(ModelParams(3, 0.0), 2.0) == pytest.approx(1.0)
    assert mean_curvature_model(ModelParams(2, 1.0), math.pi / 4) == pytest.approx(1.0)
    # 3 coth(1) = 3.93911..., computed from the ODE oracle for sn
    h = 1e-5
    d = (sn_by_ode(-1.0, 1 + h) - sn_by_ode(-1.0, 1 - h)) / (2 * h)
    ref = 3 * d / sn_by_ode(-1.0, 1.0)
    got = mean_curvature_model(ModelParams(4, -1.0), 1.0)
    assert got == pytest.approx(ref, rel=1e-8)
    assert got == pytest.approx(3.0 / math.tanh(1.0), rel=1e-14)


@given(st.integers(2, 8), st.floats(-2, 2), st.floats(1e-4, 1e-2))
def test_mean_curvature_small_r(n, H, r):
    # (n-1)/r - (n-1) H r / 3 + O(r^3)
    approx = (n - 1) / r - (n - 1) * H * r / 3
    assert mean_curvature_model(ModelParams(n, H), r) == pytest.approx(approx, abs=1e-5)


def test_mean_curvature_rejects_outside_domain():
    with pytest.raises(DomainError):
        mean_curvature_model(ModelParams(3, 1.0), math.pi)
    with pytest.raises(DomainError):
        mean_curvature_model(ModelParams(3, 0.0), 0.0)


def test_vol_model_examples():
    assert vol_model(ModelParams(2, 0.0), 0, 1) == pytest.approx(math.pi, rel=1e-14)
    assert vol_model(ModelParams(3, 0.0), 0, 2) == pytest.approx(32 * math.pi / 3, rel=1e-14)
    ref = 4 * math.pi * quad(lambda t: math.sin(t) ** 2, 0, math.pi)[0]
    assert vol_model(ModelParams(3, 1.0), 0, math.pi) == pytest.approx(ref, rel=1e-10)
    assert ref == pytest.approx(2 * math.pi ** 2, rel=1e-12)


def test_vol_weighted_examples():
    assert vol_model_weighted(ModelParams(3, 0.0, a=0.0), 0, 1) == pytest.approx(4 * math.pi / 3)
    ref = 2 * math.pi * quad(lambda t: t * math.exp(t), 0, 1)[0]
    assert vol_model_weighted(ModelParams(2, 0.0, a=1.0), 0, 1) == pytest.approx(ref, rel=1e-10)
    assert ref == pytest.approx(2 * math.pi, rel=1e-12)


@pytest.mark.parametrize("n_eff", [2.5, 3.7, 5.2])
@pytest.mark.parametrize("H", [-1.0, 0.0, 1.0])
def test_fractional_dimension_against_quad(n_eff, H):
    n = int(n_eff)
    p = ModelParams(n, H, dim_shift=n_eff - n)
    m = n_eff - 1
    omega = 2 * math.pi ** (n_eff / 2) / math.gamma(n_eff / 2)
    ref = omega * quad(lambda t: sn(H, t) ** m, 0.2, 1.5, epsabs=0, epsrel=1e-13)[0]
    assert vol_model(p, 0.2, 1.5) == pytest.approx(ref, rel=1e-10)


@given(st.integers(2, 6), st.floats(-1.5, 1.5), st.floats(0, 2), st.floats(0.05, 2.5), st.floats(0.05, 2.5))
def test_volume_monotone_and_additive(n, H, a, r1, r2):
    p = ModelParams(n, H, a)
    cap = model_radius(H)
    lo, hi = sorted((min(r1, 0.99 * cap), min(r2, 0.99 * cap)))
    whole = vol_model_weighted(p, 0, hi)
    parts = vol_model_weighted(p, 0, lo) + vol_model_weighted(p, lo, hi)
    assert parts == pytest.approx(whole, rel=1e-10)
    assert vol_model_weighted(p, 0, lo) <= whole * (1 + 1e-12)


@given(st.integers(2, 6), st.floats(0.1, 2.0))
def test_weighted_sandwich(n, r):
    # e^{a r} weighting only increases volume, and by at most e^{a r}
    p0, pa = ModelParams(n, 0.0), ModelParams(n, 0.0, a=0.8)
    v0, va = vol_model(p0, 0, r), vol_model_weighted(pa, 0, r)
    assert v0 <= va * (1 + 1e-12)
    assert va <= math.exp(0.8 * r) * v0 * (1 + 1e-12)


@given(st.floats(0.1, 2.0))
def test_volume_continuous_in_H(r):
    p = ModelParams(3, 0.0)
    v = vol_model(p, 0, r)
    for H in (1e-8, -1e-8):
        assert vol_model(ModelParams(3, H), 0, r) == pytest.approx(v, rel=1e-6)


def test_ball_volumes_pieces_sum():
    p = ModelParams(4, -1.0, a=0.3)
    radii = np.linspace(0.1, 3.0, 9)
    ball, pieces = model_ball_volumes(p, radii, weighted=True)
    assert ball[-1] == pytest.approx(vol_model_weighted(p, 0, 3.0), rel=1e-12)
    assert np.allclose(np.cumsum(pieces), ball)


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(1)
    with pytest.raises(ValueError):
        ModelParams(3, a=-1.0)
    with pytest.raises(ValueError):
        ModelParams(3, dim_shift=-0.5)
    assert ModelParams(3, 0.0).shifted(2.0).n_eff == 5.0

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from bakryemery.model import ModelParams, mean_curvature_model
from bakryemery.numerics import GridSpec, Tolerance
from bakryemery.space import builtin, generate_space, mean_curvature_f
from bakryemery.theorems import (CHECKS, ode_bound_rhs, check_linear_growth, check_mc_a, check_mc_appB,
                                 check_mc_b, check_mc_basic, check_mc_N, check_myers, check_vol_a,
                                 check_vol_b, check_vol_basic, euclidean_excess_check, excess_bound,
                                 gaussian_tail_integral, hypersurface_distance_check,
                                 linear_growth_constant, myers_bound, run_check, run_rigidity_suite)


def sample_at(rep, r, sub=None, c=None):
    cols = rep.columns
    m = np.isclose(cols["r"], r)
    if sub is not None:
        m &= cols["sub"] == sub
    if c is not None:
        m &= np.isclose(cols["c"], c)
    assert m.any()
    return int(np.nonzero(m)[0][0])


# -- mean curvature, basic form ---------------------------------------------------

def test_mc_basic_gaussian_margin_at_two():
    g = builtin("gaussian_soliton", lam=1.0, n=2)
    grid = GridSpec(1.0, 2.0, 11)
    rep = check_mc_basic(g, 1.0, r0=1.0, grid=grid)
    i = sample_at(rep, 2.0)
    assert rep.columns["lhs"][i] == pytest.approx(0.5 - 2.0)
    assert rep.columns["rhs"][i] == pytest.approx(-1.0)
    assert rep.columns["margin"][i] == pytest.approx(0.5)
    assert rep.passed


def test_mc_basic_flat_margin_is_monotone():
    s = builtin("constant_curvature", n=2, H=0.0)
    rep = check_mc_basic(s, 0.0, r0=1.0, grid=GridSpec(1.0, 5.0, 9))
    r = rep.columns["r"]
    assert np.allclose(rep.columns["margin"], (1 / 1.0 - 1 / r))


def test_mc_basic_falsification():
    el = builtin("euclidean_linear", n=3)
    rep = check_mc_basic(el, 0.1)
    assert not rep.precondition_ok and not rep.ran and rep.n_samples == 0
    rep = check_mc_basic(el, 0.1, falsify=True)
    assert rep.n_violations > 0
    assert rep.verdict == "precondition-failed+violations"


# -- slope-bounded weight --------------------------------------------------------

def test_mc_a_rigidity_golden_case():
    s = builtin("euclidean_linear_f", a=0.7, n=3)
    rep = check_mc_a(s, 0.0, 0.7)
    assert rep.passed
    assert np.max(np.abs(rep.columns["margin"])) < 1e-10
    assert np.allclose(rep.columns["lhs"], 0.7)
    assert rep.n_equality == rep.n_samples
    assert rep.extras["rigidity"] and all(x["verdict"] == "confirmed" for x in rep.extras["rigidity"])


def test_mc_a_gaussian_difference_is_minus_r():
    g = builtin("gaussian_soliton", lam=1.0, n=3)
    rep = check_mc_a(g, 0.0, 0.0)
    assert rep.passed
    assert np.allclose(rep.columns["lhs"], -rep.columns["r"])


def test_mc_a_euclidean_linear_attains_at_minus_one():
    el = builtin("euclidean_linear", n=3)
    rep = check_mc_a(el, 0.0, 1.0)
    assert rep.passed
    edge = np.isclose(rep.columns["c"], -1.0)
    assert edge.any()
    assert np.allclose(rep.columns["lhs"][edge], 1.0)
    assert np.max(np.abs(rep.columns["margin"][edge])) < 1e-12
    assert rep.min_margin == pytest.approx(0.0, abs=1e-12)


# -- bounded weight --------------------------------------------------------------

def test_mc_b_classical_reduction():
    s = builtin("constant_curvature", n=3, H=-1.0)
    rep = check_mc_b(s, -1.0, 0.0)
    assert rep.passed and rep.min_margin >= 0.0


def test_mc_b_perturbed_sphere_all_branches():
    s = builtin("sphere_perturbed", n=3, eps=0.5)
    rep = check_mc_b(s, 0.75, 0.5)
    assert rep.passed
    assert set(rep.columns["sub"]) == {"main", "h_pos_ext", "integrated", "integrated_dominance"}
    # closed form: m_f = 2 cot r + 0.5 sin r
    main = rep.columns["sub"] == "main"
    r = rep.columns["r"][main]
    assert np.allclose(rep.columns["lhs"][main], 2 / np.tan(r) + 0.5 * np.sin(r))


def test_mc_b_precondition_failure_path():
    s = builtin("euclidean_linear_f", a=1.0, n=3)
    rep = check_mc_b(s, 0.0, 0.5)
    assert not rep.precondition_ok and not rep.ran


def test_integrated_dominance_on_generated_b_spaces():
    for seed in range(10):
        s, _ = generate_space(3, 0.0, "f_bounded", 0.2, seed)
        rep = check_mc_b(s, 0.0, 0.2, grid=64)
        assert rep.passed
        assert rep.sub_margin("integrated_dominance") >= -1e-12


# -- linear ODE bound --------------------------------------------------------------

def test_ode_bound_flat_weight_trivial():
    s = builtin("constant_curvature", n=3, H=0.0)
    rep = check_mc_appB(s, 0.0, 0.0)
    assert rep.passed and rep.min_margin >= 0


def test_ode_bound_precondition_violation():
    rep = check_mc_appB(builtin("euclidean_linear_f", a=0.5, n=3), 0.0, 0.3)
    assert not rep.precondition_ok


def test_ode_bound_ratio_for_flat_model():
    s, _ = generate_space(3, 0.0, "f_bounded", 0.2, 3)
    rep = check_mc_appB(s, 0.0, 0.2, grid=64)
    assert rep.passed
    want = 4 * math.exp(0.4) * 2 / 2.8
    assert rep.extras["ode_to_main_ratio"] == pytest.approx(want)
    assert rep.extras["ode_tighter"] == 0
    r = np.array([0.5, 1, 3])
    assert np.allclose(ode_bound_rhs(3, 0.0, 0.2, r) * r, 4 * 2 * math.exp(0.4))


# -- N tensor ---------------------------------------------------------------------

@pytest.mark.parametrize("H", [-1.0, 0.0, 1.0])
def test_mc_N_classical(H):
    # unweighted: Ric_f^N = (n-1)H, so the certified bound is (n-1)H/(n+N-1) when H > 0
    s = builtin("constant_curvature", n=3, H=H)
    HN = H * 2 / 3.5 if H > 0 else H
    rep = check_mc_N(s, HN, 1.5)
    assert rep.passed and rep.min_margin >= 0


def test_mc_N_round_sphere_fails_precondition_at_full_H():
    rep = check_mc_N(builtin("constant_curvature", n=3, H=1.0), 1.0, 1.5)
    assert not rep.precondition_ok


def test_mc_N_gaussian_with_grid_minimum_H():
    from bakryemery.space import ric_f_N_radial
    g = builtin("gaussian_soliton", lam=1.0, n=3, r_max=3.0)
    r = np.linspace(3e-3, 3.0 * (1 - 1e-3), 512)
    H = float(np.min(ric_f_N_radial(g, r, N=1.0))) / 3.0
    rep = check_mc_N(g, H - 1e-9, 1.0)
    assert rep.precondition_ok and rep.passed


# -- volume ---------------------------------------------------------------------------

def test_gaussian_tail_integral_oracle():
    for C, lam, L in [(0.5, 1.0, 3.0), (2.0, 0.3, 5.0), (-1.0, 2.0, 1.5), (1.0, 0.0, 2.0), (0.3, -0.5, 2.0)]:
        ref = quad(lambda t: math.exp(C * t - lam * t * t / 2), 0, L, epsabs=0, epsrel=1e-13)[0]
        assert float(gaussian_tail_integral(C, lam, L)) == pytest.approx(ref, rel=1e-10)


def test_vol_basic_gaussian_finite_volume():
    g = builtin("gaussian_soliton", lam=1.0, n=2)
    rep = check_vol_basic(g, 1.0, r0=1.0)
    assert rep.passed
    assert rep.extras["volume_at_r_max"] == pytest.approx(2 * math.pi, rel=1e-8)


def test_vol_basic_flat_slack():
    rep = check_vol_basic(builtin("constant_curvature", n=2, H=0.0), 0.0, r0=1.0)
    assert rep.passed and rep.min_margin > 0


def test_vol_basic_falsification():
    rep = check_vol_basic(builtin("euclidean_linear", n=3), 0.1, falsify=True)
    assert rep.n_violations > 0


def test_vol_a_gaussian_degree_at_most_n():
    rep = check_vol_a(builtin("gaussian_soliton", lam=1.0, n=3), 0.0, 0.0)
    assert rep.passed


def test_vol_a_flat_equality():
    rep = check_vol_a(builtin("constant_curvature", n=3, H=0.0), 0.0, 0.0)
    assert rep.passed
    assert np.max(np.abs(rep.columns["margin"][rep.columns["sub"] == "density_monotone"])) < 1e-12


def test_vol_a_linear_weight_equality_and_rigidity():
    s = builtin("euclidean_linear_f", a=0.7, n=3)
    rep = check_vol_a(s, 0.0, 0.7)
    assert rep.passed
    # annuli against the weighted model are sharp; the ball bound is not
    ann = rep.columns["sub"] == "annulus_ratio"
    assert np.max(np.abs(rep.columns["margin"][ann])) < 1e-9
    assert rep.sub_margin("ball_ratio") > 0
    assert rep.extras["rigidity"] and all(x["verdict"] == "confirmed" for x in rep.extras["rigidity"])


def test_vol_b_flat_equality():
    rep = check_vol_b(builtin("constant_curvature", n=3, H=0.0), 0.0, 0.0)
    assert rep.passed
    ball = rep.columns["sub"] == "ball_ratio"
    assert np.max(np.abs(rep.columns["margin"][ball])) < 1e-9


def test_vol_b_falsification_locates_radius():
    rep = check_vol_b(builtin("euclidean_linear", n=3), 0.0, 0.5, falsify=True)
    assert rep.n_violations > 0
    r0 = rep.extras["first_violation_radius"]
    assert 0 < r0 < 40


def test_vol_b_generated():
    for seed in range(5):
        s, _ = generate_space(3, 0.0, "f_bounded", 0.25, seed)
        assert check_vol_b(s, 0.0, 0.25, grid=48).min_margin >= -1e-7


# -- global statements -------------------------------------------------------------

def test_linear_growth_constant_is_infimum():
    for n, k in [(3, 0.0), (3, 0.3), (5, 0.1)]:
        m = n + 4 * k
        t = np.geomspace(2.0, 1e4, 200001)
        direct = np.min((t - 1) ** m / (t * ((t + 1) ** m - (t - 1) ** m)))
        assert linear_growth_constant(n, k) == pytest.approx(direct, rel=1e-9)
        assert direct == pytest.approx(1 / (2 * (3 ** m - 1)), rel=1e-12)


def test_linear_growth_flat_and_gaussian():
    flat = builtin("constant_curvature", n=3, H=0.0, r_max=40.0)
    assert check_linear_growth(flat, k=0.0).passed
    rep = check_linear_growth(builtin("gaussian_soliton", lam=1.0, n=2), k=1.0)
    assert not rep.precondition_ok


def test_linear_growth_generated():
    for seed in range(4):
        s, _ = generate_space(3, 0.0, "f_bounded", 0.3, seed, length=60.0, min_length=40.0, slack=False)
        assert s.r_max >= 40
        assert check_linear_growth(s, k=0.3).passed


def test_myers_examples():
    rep = check_myers(builtin("constant_curvature", n=3, H=1.0), 1.0, 0.0)
    assert rep.passed and rep.min_margin == pytest.approx(0.0, abs=1e-12)
    rep = check_myers(builtin("sphere_perturbed", n=3, eps=0.5), 0.75, 0.5)
    assert rep.min_margin == pytest.approx(4.7823 - math.pi, abs=1e-4)
    h = 1 - 0.1 / 3
    want = math.pi / math.sqrt(h) + 0.4 / (3 * math.sqrt(h))
    assert myers_bound(4, h, 0.1) == pytest.approx(want, rel=1e-14)


def test_excess_examples():
    assert excess_bound(3, 0.0, 5 ** 0.5, 5 ** 0.5, 1.0) == pytest.approx(4.1544, abs=5e-5)
    assert excess_bound(3, 0.0, 2.0, 2.0, 1e-12) < 1e-5
    rep = euclidean_excess_check(3, 4.0, h_grid=[1.0])
    assert rep.columns["lhs"][0] == pytest.approx(2 * 5 ** 0.5 - 4)
    for n in (3, 4, 5):
        for d in (2.0, 4.0, 8.0):
            assert euclidean_excess_check(n, d).passed


@given(st.floats(0.01, 0.78))
def test_hypersurface_round_sphere_oracle(t):
    s = builtin("constant_curvature", n=3, H=1.0)
    rep = hypersurface_distance_check(s, 1.0, math.pi / 2 - t, math.pi / 2 + t)
    assert rep.extras["distance"] == pytest.approx(2 * t)
    # each level set has |m| = 2 tan t; bound (2 tan t + 2 tan t) / 2 = 2 tan t
    assert rep.extras["bound"] == pytest.approx(2 * math.tan(t), rel=1e-9)
    assert rep.passed


def test_hypersurface_equal_levels():
    s = builtin("sphere_perturbed", n=3, eps=0.2)
    rep = hypersurface_distance_check(s, 0.9, 1.5, 1.5)
    assert rep.extras["distance"] == 0 and rep.passed


# -- rigidity -----------------------------------------------------------------------

def test_rigidity_linear_weight():
    rep = run_rigidity_suite(builtin("euclidean_linear_f", a=0.7, n=3), "mc_a", {"H": 0.0, "a": 0.7})
    assert rep.passed


def test_rigidity_rejects_non_model():
    rep = run_rigidity_suite(builtin("sphere_perturbed", n=3, eps=0.5), "mc_a", {"H": 1.0, "a": 0.0})
    assert not rep.passed


def test_rigidity_flat_basic_not_flagged():
    rep = run_rigidity_suite(builtin("constant_curvature", n=2, H=0.0), "mc_basic", {"lam": 0.0})
    assert not rep.passed


def test_strict_slack_has_no_equality_points():
    s, _ = generate_space(3, 0.0, "f_slope", 0.5, 5, strict=0.2)
    for rep in (check_mc_a(s, 0.0, 0.5), check_mc_basic(s, 0.0)):
        assert rep.passed and rep.n_equality == 0
        assert not rep.extras.get("rigidity")


def test_rigidity_unknown_mode():
    with pytest.raises(ValueError):
        run_rigidity_suite(builtin("gaussian_soliton"), "splitting", {})


# -- registry -----------------------------------------------------------------------

def test_registry_parameters():
    s = builtin("sphere_perturbed", n=3, eps=0.5)
    assert run_check("myers", s, {"H": 0.75, "k": 0.5}).passed
    with pytest.raises(ValueError):
        run_check("myers", s, {"H": 0.75})
    with pytest.raises(ValueError):
        run_check("myers", s, {"H": 0.75, "k": 0.5, "x": 1})
    with pytest.raises(ValueError):
        run_check("nope", s, {})
    assert run_check("excess", None, {"n": 3, "d": 4.0}).passed
    assert set(CHECKS) >= {"mc_a", "mc_b", "vol_a", "vol_b", "myers", "excess"}


# -- properties -----------------------------------------------------------------------

@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.sampled_from([3, 4]), st.sampled_from([-1.0, 0.0, 1.0]))
def test_bounded_weight_checks_hold_on_random_spaces(seed, n, H):
    s, _ = generate_space(n, H, "f_bounded", 0.2, seed)
    for rep in (check_mc_b(s, H, 0.2, grid=48), check_vol_b(s, H, 0.2, grid=32)):
        assert rep.min_margin >= -1e-7


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.floats(0.0, 1.0))
def test_slope_checks_hold_on_random_spaces(seed, a):
    s, _ = generate_space(3, 0.0, "f_slope", a, seed)
    assert check_mc_a(s, 0.0, a, grid=48).min_margin >= -1e-7
    assert check_vol_a(s, 0.0, a, grid=32).min_margin >= -1e-7


@settings(max_examples=20)
@given(st.floats(-1, 1), st.floats(0.1, 3.0))
def test_larger_k_never_tightens(c, r):
    n, H = 3, 0.0
    assert myers_bound(n, 1.0, 0.3) >= myers_bound(n, 1.0, 0.1)
    assert linear_growth_constant(n, 0.3) <= linear_growth_constant(n, 0.1)


def test_margin_floor_respected():
    tol = Tolerance(margin_floor=-1e-3)
    el = builtin("euclidean_linear", n=3)
    rep = check_mc_a(el, 0.0, 0.999, falsify=True, tol=tol)
    assert rep.n_violations == 0 or rep.min_margin < -1e-3

import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, strategies as st

from bakryemery.expr import ParseError, compile_expr, derivative, parse, to_text

R = sp.Symbol("r")
POINTS = np.array([0.3, 0.7, 1.1, 1.9])


def sympy_of(text):
    return sp.sympify(text.replace("^", "**"), locals={"r": R, "e": sp.E, "pi": sp.pi})


def leaves():
    return st.sampled_from(["r", "2", "0.5", "pi", "3.25"])


def grow(children):
    unary = st.tuples(st.sampled_from(["sin", "cos", "exp", "sinh", "cosh"]), children).map(
        lambda t: f"{t[0]}(({t[1]}) / 4)")
    logs = children.map(lambda c: f"log(2 + sin({c}))")
    binary = st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(
        lambda t: f"({t[0]}) {t[1]} ({t[2]})")
    quot = st.tuples(children, children).map(lambda t: f"({t[0]}) / (2 + cos({t[1]}))")
    powers = st.tuples(children, st.integers(0, 3)).map(lambda t: f"({t[0]}) ^ {t[1]}")
    neg = children.map(lambda c: f"-({c})")
    return st.one_of(unary, logs, binary, quot, powers, neg)


expressions = st.recursive(leaves(), grow, max_leaves=8)


def values(text):
    return compile_expr(parse(text))(POINTS) * np.ones_like(POINTS)


def sympy_values(expr):
    f = sp.lambdify(R, expr, "numpy")
    return np.asarray(f(POINTS), dtype=float) * np.ones_like(POINTS)


@given(expressions)
def test_evaluation_matches_sympy(text):
    ref = sympy_values(sympy_of(text))
    assume(np.all(np.isfinite(ref)) and np.max(np.abs(ref)) < 1e8)
    assert np.allclose(values(text), ref, rtol=1e-11, atol=1e-11)


@given(expressions)
def test_derivative_matches_sympy(text):
    ref = sympy_values(sp.diff(sympy_of(text), R))
    assume(np.all(np.isfinite(ref)) and np.max(np.abs(ref)) < 1e8)
    got = compile_expr(derivative(parse(text)))(POINTS) * np.ones_like(POINTS)
    assert np.allclose(got, ref, rtol=1e-9, atol=1e-9)


@given(expressions)
def test_to_text_round_trip(text):
    e = parse(text)
    again = parse(to_text(e))
    a, b = values(text), compile_expr(again)(POINTS) * np.ones_like(POINTS)
    assume(np.all(np.isfinite(a)) and np.max(np.abs(a)) < 1e8)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


def test_basic_expressions():
    assert values("r^2 / 2")[1] == pytest.approx(0.245)
    assert values("2 ** r")[0] == pytest.approx(2 ** 0.3)
    assert values("-r^2")[2] == pytest.approx(-1.21)   # unary minus binds looser than ^
    assert values("e")[0] == pytest.approx(math.e)
    assert values("1e-3 * r")[3] == pytest.approx(1.9e-3)


def test_second_derivative_of_gaussian_weight():
    d2 = derivative(derivative(parse("r^2 / 2")))
    assert np.allclose(compile_expr(d2)(POINTS), 1.0)


@pytest.mark.parametrize("text,offset", [("sin(", 4), ("3 $ r", 2), ("foo(r)", 0), ("r +", 3), ("", 0),
                                         ("(r", 2)])
def test_parse_errors_report_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset
    assert f"offset {offset}" in str(info.value)

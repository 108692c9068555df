"""Radial profiles (value, first and second derivative in r) and directional weights."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import erf

from .. import expr as _expr
from ..numerics import JacobiSolution

__all__ = ["RadialProfile", "DirectionalWeight", "BumpSum", "from_expression",
           "from_knots", "from_jacobi", "constant", "sn_profile"]


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """r -> (value, d/dr, d^2/dr^2), vectorized over r."""

    evaluate: Callable[[np.ndarray], tuple]
    kind: str = "closed-form"      # closed-form | ode | spline
    source: object = None          # expression text, knot table, or generator data
    is_zero: bool = False
    value_fn: Callable | None = None   # optional value-only fast path

    def __call__(self, r):
        v, d1, d2 = self.evaluate(np.asarray(r, dtype=float))
        return np.asarray(v, dtype=float), np.asarray(d1, dtype=float), np.asarray(d2, dtype=float)

    def value(self, r):
        if self.value_fn is not None:
            return np.asarray(self.value_fn(np.asarray(r, dtype=float)), dtype=float)
        return self(r)[0]

    def d1(self, r):
        return self(r)[1]

    def d2(self, r):
        return self(r)[2]

    def shifted(self, const: float) -> "RadialProfile":
        ev = self.evaluate
        src = self.source
        if isinstance(src, str):
            src = f"({src}) + {const!r}"
        return RadialProfile(lambda r: (lambda t: (t[0] + const, t[1], t[2]))(ev(r)), self.kind, src,
                             value_fn=lambda r: self.value(r) + const)


def from_expression(text: str, params: dict | None = None) -> RadialProfile:
    """Compile an expression in r; derivatives are symbolic."""
    if params:
        for name, val in params.items():
            text = _substitute(text, name, val)
    e = _expr.parse(text)
    d1 = _expr.simplify(_expr.derivative(e))
    d2 = _expr.simplify(_expr.derivative(d1))
    f0, f1, f2 = (_expr.compile_expr(x) for x in (e, d1, d2))
    is_zero = e.op == "num" and e.value == 0.0
    return RadialProfile(lambda r: (f0(r), f1(r), f2(r)), "closed-form", text, is_zero, f0)


def _substitute(text: str, name: str, val: float) -> str:
    import re
    return re.sub(rf"\b{re.escape(name)}\b", f"({float(val)!r})", text)


def constant(v: float = 0.0) -> RadialProfile:
    return from_expression(repr(float(v)))


def sn_profile(H: float) -> RadialProfile:
    """sn_H as a closed-form expression profile."""
    import math
    if H == 0:
        return from_expression("r")
    if H > 0:
        q = math.sqrt(H)
        return from_expression(f"sin({q!r} * r) / {q!r}")
    q = math.sqrt(-H)
    return from_expression(f"sinh({q!r} * r) / {q!r}")


def from_knots(r_knots, values) -> RadialProfile:
    """C^2 cubic spline through the knots (natural end conditions)."""
    r_knots = np.asarray(r_knots, dtype=float)
    values = np.asarray(values, dtype=float)
    cs = CubicSpline(r_knots, values, bc_type="natural")
    d1, d2 = cs.derivative(1), cs.derivative(2)
    return RadialProfile(lambda r: (cs(r), d1(r), d2(r)), "spline",
                         {"r": r_knots.tolist(), "values": values.tolist()}, value_fn=cs)


def from_jacobi(sol: JacobiSolution, source=None) -> RadialProfile:
    return RadialProfile(sol, "ode", source, value_fn=sol.value)


@dataclass(frozen=True, eq=False)
class BumpSum:
    """sum_i a_i B_i(r) with smooth bumps; the generator's building block.

    ``kind='even'``: B(r) = (G(r - c) + G(r + c)) / 2 with G a unit Gaussian of
    width w, so the sum is even in r and |B| <= 1.
    ``kind='step'``: B(r) = int_0^r G(t - c) dt, so B' = G in [0, 1].
    """

    centers: np.ndarray
    widths: np.ndarray
    amps: np.ndarray
    kind: str = "even"
    slope: float = 0.0   # added linear term slope * r

    def __call__(self, r):
        r = np.asarray(r, dtype=float)[..., None]
        c, w, a = self.centers, self.widths, self.amps
        if self.kind == "even":
            def g(x):
                z = x / w
                e = np.exp(-0.5 * z * z)
                return e, -z / w * e, (z * z - 1.0) / (w * w) * e
            p = g(r - c)
            m = g(r + c)
            v = 0.5 * (p[0] + m[0])
            d1 = 0.5 * (p[1] + m[1])
            d2 = 0.5 * (p[2] + m[2])
        else:
            z = (r - c) / w
            e = np.exp(-0.5 * z * z)
            s2 = np.sqrt(2.0)
            v = w * np.sqrt(np.pi / 2) * (erf(z / s2) + erf(c / (w * s2)))
            d1 = e
            d2 = -z / w * e
        r0 = r[..., 0]
        return (v @ a + self.slope * r0, d1 @ a + self.slope, d2 @ a)

    def value(self, r):
        r = np.asarray(r, dtype=float)
        x = r[..., None]
        c, w = self.centers, self.widths
        if self.kind == "even":
            v = 0.5 * (np.exp(-0.5 * ((x - c) / w) ** 2) + np.exp(-0.5 * ((x + c) / w) ** 2))
        else:
            s2 = np.sqrt(2.0)
            v = w * np.sqrt(np.pi / 2) * (erf((x - c) / (w * s2)) + erf(c / (w * s2)))
        return v @ self.amps + self.slope * r

    def as_profile(self) -> RadialProfile:
        return RadialProfile(self, "closed-form", {"bumps": self.kind}, value_fn=self.value)


@dataclass(frozen=True, eq=False)
class DirectionalWeight:
    """f(r, c) = h(r) (radial) or f(r, c) = c g(r) + h(r) (axis-linear).

    c is the cosine between the initial direction of the radial geodesic and a
    fixed axis; along one radial geodesic c is constant.
    """

    h: RadialProfile
    g: RadialProfile | None = None

    @property
    def mode(self) -> str:
        return "radial" if self.g is None else "axis-linear"

    @property
    def is_radial(self) -> bool:
        return self.g is None

    @property
    def is_constant_zero(self) -> bool:
        return self.g is None and self.h.is_zero

    def __call__(self, r, c=0.0):
        """(f, d_r f, d_r^2 f) at (r, c) with numpy broadcasting."""
        hv, h1, h2 = self.h(r)
        if self.g is None:
            return hv, h1, h2
        gv, g1, g2 = self.g(r)
        c = np.asarray(c, dtype=float)
        return c * gv + hv, c * g1 + h1, c * g2 + h2

    def shifted(self, const: float) -> "DirectionalWeight":
        return DirectionalWeight(self.h.shifted(const), self.g)

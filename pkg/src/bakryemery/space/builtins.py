"""Closed-form spaces with known curvature and weight, used as worked examples and fixtures."""

from __future__ import annotations

import math

from .core import RotSymSpace
from .profiles import DirectionalWeight, constant, from_expression, sn_profile

__all__ = ["BUILTINS", "builtin", "builtin_names"]


def _gaussian_soliton(lam: float = 1.0, n: int = 2, r_max: float = 12.0):
    warp = from_expression("r")
    weight = DirectionalWeight(from_expression(f"{float(lam)!r} * r^2 / 2"))
    return RotSymSpace(int(n), warp, weight, r_max, label=f"gaussian_soliton(lam={lam:g}, n={n})")


def _hyperbolic_quadratic(n: int = 3, r_max: float = 8.0):
    warp = from_expression("sinh(r)")
    weight = DirectionalWeight(from_expression(f"{float(n - 1)!r} * r^2"))
    return RotSymSpace(int(n), warp, weight, r_max, label=f"hyperbolic_quadratic(n={n})")


def _euclidean_linear(n: int = 3, r_max: float = 40.0):
    # f(x) = x_1 = r c along the geodesic with direction cosine c
    warp = from_expression("r")
    weight = DirectionalWeight(constant(0.0), from_expression("r"))
    return RotSymSpace(int(n), warp, weight, r_max, label=f"euclidean_linear(n={n})")


def _euclidean_linear_f(a: float = 1.0, n: int = 3, r_max: float = 10.0):
    warp = from_expression("r")
    weight = DirectionalWeight(from_expression(f"-{float(a)!r} * r"))
    return RotSymSpace(int(n), warp, weight, r_max, label=f"euclidean_linear_f(a={a:g}, n={n})")


def _sphere_perturbed(n: int = 3, eps: float = 0.1):
    warp = from_expression("sin(r)")
    weight = DirectionalWeight(from_expression(f"{float(eps)!r} * cos(r)"))
    return RotSymSpace(int(n), warp, weight, math.pi, pole_closed=True,
                       label=f"sphere_perturbed(n={n}, eps={eps:g})")


def _constant_curvature(n: int = 3, H: float = 0.0, f0: float = 0.0, r_max: float | None = None):
    warp = sn_profile(H)
    weight = DirectionalWeight(constant(f0))
    closed = False
    if r_max is None:
        if H > 0:
            r_max, closed = math.pi / math.sqrt(H), True
        else:
            r_max = 10.0
    return RotSymSpace(int(n), warp, weight, float(r_max), pole_closed=closed,
                       label=f"constant_curvature(n={n}, H={H:g})")


BUILTINS = {
    "gaussian_soliton": _gaussian_soliton,
    "hyperbolic_quadratic": _hyperbolic_quadratic,
    "euclidean_linear": _euclidean_linear,
    "euclidean_linear_f": _euclidean_linear_f,
    "sphere_perturbed": _sphere_perturbed,
    "constant_curvature": _constant_curvature,
}


def builtin_names() -> list[str]:
    return sorted(BUILTINS)


def builtin(name: str, **params) -> RotSymSpace:
    """Construct a builtin space by name, e.g. ``builtin("gaussian_soliton", lam=1, n=3)``."""
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; known: {', '.join(builtin_names())}") from None
    s = factory(**params)
    s.meta["builtin"] = {"name": name, "params": dict(params)}
    return s

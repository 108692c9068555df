"""Constant-curvature model spaces M_H^n and the weighted model M^n_{H,a}."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .numerics import DEFAULT_TOL, Tolerance, cumulative_integral, sphere_area

__all__ = [
    "ModelParams",
    "DomainError",
    "sn",
    "sn_derivs",
    "model_radius",
    "mean_curvature_model",
    "vol_model",
    "vol_model_weighted",
    "model_ball_volumes",
]

# below this |H| r^2 the flat closed form is used (sn is analytic in H)
_FLAT_SWITCH = 1e-10


class DomainError(ValueError):
    """Argument outside the domain where the quantity is defined."""


@dataclass(frozen=True)
class ModelParams:
    n: int
    H: float = 0.0
    a: float = 0.0
    dim_shift: float = 0.0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n}")
        if self.a < 0:
            raise ValueError("weight slope a must be nonnegative")
        if self.dim_shift < 0:
            raise ValueError("dim_shift must be nonnegative")

    @property
    def n_eff(self) -> float:
        return self.n + self.dim_shift

    def shifted(self, dim_shift: float) -> "ModelParams":
        return ModelParams(self.n, self.H, self.a, dim_shift)


def model_radius(H: float) -> float:
    """pi / sqrt(H) for H > 0, else infinity."""
    return math.pi / math.sqrt(H) if H > 0 else math.inf


def sn_derivs(H: float, r):
    """sn_H, sn_H' and sn_H'' at r (arrays broadcast)."""
    r = np.asarray(r, dtype=float)
    if H == 0.0:
        return r.copy(), np.ones_like(r), np.zeros_like(r)
    small = np.abs(H) * r * r < _FLAT_SWITCH
    if H > 0:
        q = math.sqrt(H)
        s, c = np.sin(q * r) / q, np.cos(q * r)
    else:
        q = math.sqrt(-H)
        s, c = np.sinh(q * r) / q, np.cosh(q * r)
    s = np.where(small, r - H * r**3 / 6.0, s)
    c = np.where(small, 1.0 - H * r * r / 2.0, c)
    return s, c, -H * s


def sn(H: float, r):
    """Solution of sn'' + H sn = 0 with sn(0)=0, sn'(0)=1."""
    out = sn_derivs(H, r)[0]
    return float(out) if out.ndim == 0 else out


def _check_open(H: float, r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("model mean curvature is singular at r = 0")
    if H > 0 and np.any(r >= model_radius(H)):
        raise DomainError(f"r must stay below pi/sqrt(H) = {model_radius(H)}")
    return r


def mean_curvature_model(p: ModelParams, r):
    """(n_eff - 1) sn'/sn: mean curvature of the geodesic sphere of radius r."""
    r = _check_open(p.H, r)
    s, c, _ = sn_derivs(p.H, r)
    out = (p.n_eff - 1.0) * c / s
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=4096)
def _gj(beta: float, order: int = 40):
    return roots_jacobi(order, 0.0, beta)


def _head_integral(H: float, m: float, a: float, r: float) -> float:
    """int_0^r e^{a t} sn_H(t)^m dt via Gauss-Jacobi with weight t^m.

    sn_H(t) = t u(t) with u smooth and positive, so only u^m e^{at} is sampled.
    """
    if r == 0.0:
        return 0.0
    x, w = _gj(float(m))
    t = 0.5 * r * (1.0 + x)
    s = sn_derivs(H, t)[0]
    u = np.where(t > 0, s / np.where(t > 0, t, 1.0), 1.0)
    return float((0.5 * r) ** (m + 1.0) * np.dot(w, u**m * np.exp(a * t)))


_HEAD = 0.5


@lru_cache(maxsize=65536)
def _radial_integral(H: float, m: float, a: float, r1: float, r2: float) -> float:
    """int_{r1}^{r2} e^{a t} sn_H(t)^m dt."""
    if r2 <= r1:
        return 0.0
    total = 0.0
    lo = r1
    if r1 < _HEAD:
        head_end = min(r2, _HEAD)
        total += _head_integral(H, m, a, head_end) - _head_integral(H, m, a, r1)
        lo = head_end
    if r2 > lo:
        g = lambda t: np.exp(a * t) * sn_derivs(H, t)[0] ** m
        total += float(cumulative_integral(g, np.array([lo, r2]))[0])
    return total


def _check_interval(H: float, r1: float, r2: float):
    if not (0 <= r1 <= r2):
        raise DomainError(f"need 0 <= r1 <= r2, got ({r1}, {r2})")
    if H > 0 and r2 > model_radius(H) * (1 + 1e-12):
        raise DomainError(f"r2 exceeds pi/sqrt(H) = {model_radius(H)}")


def vol_model(p: ModelParams, r1: float, r2: float) -> float:
    """Volume of the annulus r1 <= d(., O) <= r2 in M_H^{n_eff} (ignores p.a)."""
    _check_interval(p.H, r1, r2)
    m = p.n_eff - 1.0
    omega = sphere_area(m)
    if p.H == 0.0 or abs(p.H) * r2 * r2 < _FLAT_SWITCH:
        return omega * (r2 ** p.n_eff - r1 ** p.n_eff) / p.n_eff
    return omega * _radial_integral(float(p.H), float(m), 0.0, float(r1), float(min(r2, model_radius(p.H))))


def vol_model_weighted(p: ModelParams, r1: float, r2: float) -> float:
    """e^{-h}-volume of the annulus in M^n_{H,a}, h = -a d(., O)."""
    _check_interval(p.H, r1, r2)
    if p.a == 0.0:
        return vol_model(p, r1, r2)
    m = p.n_eff - 1.0
    return sphere_area(m) * _radial_integral(float(p.H), float(m), float(p.a), float(r1),
                                             float(min(r2, model_radius(p.H))))


def model_ball_volumes(p: ModelParams, radii, weighted: bool = False,
                       tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Ball volumes at sorted ``radii`` and the annulus volumes between them.

    Returns (ball, pieces) where pieces[i] is the volume between radii[i-1]
    and radii[i] (pieces[0] is the ball of radius radii[0]).  Annuli built from
    ``pieces`` avoid subtracting nearly equal ball volumes.
    """
    radii = np.asarray(radii, dtype=float)
    knots = np.concatenate([[0.0], radii])
    f = vol_model_weighted if weighted else vol_model
    pieces = np.array([f(p, float(a), float(b)) for a, b in zip(knots[:-1], knots[1:])])
    return np.cumsum(pieces), pieces

"""Shared numerical kernels: Jacobi-equation integration, 1-D quadrature and
direction-sphere averaging.

The Jacobi solver exploits linearity of ``phi'' + k phi = 0``: every RK4 step is
a 2x2 propagator matrix, so all steps are built at once with numpy and chained
with a parallel prefix product.  Step-doubling gives both an error estimate and
a Richardson-extrapolated solution.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate as _spi
from scipy import optimize as _spo
from scipy.special import roots_jacobi, roots_legendre

__all__ = [
    "GridSpec",
    "Tolerance",
    "StepFailure",
    "IntegrationError",
    "JacobiSolution",
    "solve_jacobi",
    "rk4_fixed",
    "integrate",
    "cumulative_integral",
    "panel_integral",
    "sphere_nodes",
    "sphere_average",
    "sphere_area",
]


class StepFailure(RuntimeError):
    """The Jacobi integrator could not reach the requested tolerance."""


class IntegrationError(RuntimeError):
    """Adaptive quadrature did not converge."""


@dataclass(frozen=True)
class GridSpec:
    r_min: float
    r_max: float
    count: int = 200
    spacing: str = "uniform"

    def __post_init__(self):
        if not (self.r_min > 0):
            raise ValueError("grid must exclude r = 0")
        if not (self.r_min < self.r_max):
            raise ValueError(f"r_min={self.r_min} must be below r_max={self.r_max}")
        if self.count < 2:
            raise ValueError("grid needs at least two points")
        if self.spacing not in ("uniform", "log"):
            raise ValueError(f"unknown spacing {self.spacing!r}")

    def points(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.r_min, self.r_max, self.count)
        return np.linspace(self.r_min, self.r_max, self.count)

    @classmethod
    def for_range(cls, r_hi: float, count: int = 200, spacing: str = "uniform",
                  rel_min: float = 1e-3) -> "GridSpec":
        return cls(rel_min * r_hi, r_hi, count, spacing)

    def as_dict(self) -> dict:
        return {"r_min": self.r_min, "r_max": self.r_max,
                "count": self.count, "spacing": self.spacing}


@dataclass(frozen=True)
class Tolerance:
    abs: float = 1e-10
    rel: float = 1e-9
    margin_floor: float = -1e-7
    volume_floor: float = -1e-6   # relative, applied to volume ratios
    eq_tol: float = 1e-8
    eq_persist: int = 5
    rigidity: float = 1e-7

    def __post_init__(self):
        if self.abs <= 0 or self.rel <= 0:
            raise ValueError("tolerances must be positive")
        if self.margin_floor >= 0 or self.volume_floor >= 0:
            raise ValueError("margin floors are violation thresholds and must be negative")


DEFAULT_TOL = Tolerance()


# ---------------------------------------------------------------------------
# Jacobi equation
# ---------------------------------------------------------------------------

def _rk4_propagators(kv: np.ndarray, h: float) -> np.ndarray:
    """RK4 step matrices for y' = [[0, 1], [-k, 0]] y.

    ``kv`` holds k at t_0, t_0 + h/2, t_0 + h, ... (odd length 2N+1).
    """
    k0 = kv[0:-1:2]
    km = kv[1::2]
    k1 = kv[2::2]
    n = k0.size

    def amat(k):
        a = np.zeros((n, 2, 2))
        a[:, 0, 1] = 1.0
        a[:, 1, 0] = -k
        return a

    eye = np.broadcast_to(np.eye(2), (n, 2, 2))
    a0, am, a1 = amat(k0), amat(km), amat(k1)
    s1 = a0
    s2 = am @ (eye + 0.5 * h * s1)
    s3 = am @ (eye + 0.5 * h * s2)
    s4 = a1 @ (eye + h * s3)
    return eye + (h / 6.0) * (s1 + 2.0 * s2 + 2.0 * s3 + s4)


def _prefix_products(mats: np.ndarray) -> np.ndarray:
    """Inclusive prefix products P_i ... P_0 (Hillis-Steele scan)."""
    out = mats.copy()
    shift = 1
    n = out.shape[0]
    while shift < n:
        out[shift:] = out[shift:] @ out[:-shift]
        shift *= 2
    return out


def _propagate(k: Callable, r_end: float, steps: int, y0=(0.0, 1.0)) -> tuple[np.ndarray, np.ndarray]:
    h = r_end / steps
    t = np.linspace(0.0, r_end, 2 * steps + 1)
    kv = np.asarray(k(t), dtype=float) * np.ones_like(t)
    if not np.all(np.isfinite(kv)):
        raise StepFailure("curvature function is not finite on the integration interval")
    prods = _prefix_products(_rk4_propagators(kv, h))
    y0 = np.asarray(y0, dtype=float)
    ys = np.empty((steps + 1, 2))
    ys[0] = y0
    ys[1:] = prods @ y0
    return t[::2], ys


@dataclass(frozen=True, eq=False)
class JacobiSolution:
    """Dense solution of phi'' + k phi = 0, phi(0)=0, phi'(0)=1.

    Interpolation is quintic Hermite on uniform nodes using (phi, phi', phi'')
    with phi'' = -k phi, so second derivatives come from the ODE itself.
    """

    nodes: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    ddphi: np.ndarray
    k: Callable
    first_zero: float | None
    r_end: float
    error_estimate: float

    @property
    def step(self) -> float:
        return float(self.nodes[1] - self.nodes[0])

    def _hermite(self, r, with_der: bool):
        r = np.asarray(r, dtype=float)
        h = self.step
        rc = np.clip(r, 0.0, self.r_end)
        idx = np.minimum((rc / h).astype(int), self.nodes.size - 2)
        t = rc / h - idx
        y0, y1 = self.phi[idx], self.phi[idx + 1]
        d0, d1 = self.dphi[idx] * h, self.dphi[idx + 1] * h
        a0, a1 = self.ddphi[idx] * h * h, self.ddphi[idx + 1] * h * h
        t2, t3 = t * t, t * t * t
        t4, t5 = t3 * t, t3 * t2
        # quintic Hermite basis and its first derivative
        h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5
        h10 = t - 6 * t3 + 8 * t4 - 3 * t5
        h20 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5)
        h01 = 10 * t3 - 15 * t4 + 6 * t5
        h11 = -4 * t3 + 7 * t4 - 3 * t5
        h21 = 0.5 * (t3 - 2 * t4 + t5)
        val = h00 * y0 + h10 * d0 + h20 * a0 + h01 * y1 + h11 * d1 + h21 * a1
        if not with_der:
            return rc, val, None
        g00 = -30 * t2 + 60 * t3 - 30 * t4
        g10 = 1 - 18 * t2 + 32 * t3 - 15 * t4
        g20 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4)
        g01 = -g00
        g11 = -12 * t2 + 28 * t3 - 15 * t4
        g21 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4)
        der = (g00 * y0 + g10 * d0 + g20 * a0 + g01 * y1 + g11 * d1 + g21 * a1) / h
        return rc, val, der

    def value(self, r):
        return self._hermite(r, False)[1]

    def __call__(self, r):
        rc, val, der = self._hermite(r, True)
        kr = np.asarray(self.k(rc), dtype=float)
        return val, der, -kr * val


def solve_jacobi(k: Callable, r_max: float, tol: Tolerance = DEFAULT_TOL,
                 h0: float = 0.02, h_min: float = 1e-4, blowup: float = 1e12) -> JacobiSolution:
    """Integrate phi'' + k(r) phi = 0 from the pole with phi(0)=0, phi'(0)=1.

    Step halving continues until the step-doubling estimate meets ``tol``.
    The returned solution stops at ``r_max`` or where |phi'| exceeds ``blowup``.
    """
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    steps = max(2, int(math.ceil(r_max / h0)))
    while True:
        t, coarse = _propagate(k, r_max, steps)
        _, fine = _propagate(k, r_max, 2 * steps)
        fine = fine[::2]
        # stop comparing once phi' has blown up
        ok = np.all(np.isfinite(fine), axis=1) & (np.abs(fine[:, 1]) < blowup)
        stop = int(np.argmin(ok)) if not ok.all() else t.size
        scale = tol.abs + tol.rel * np.abs(fine[:stop])
        err = float(np.max(np.abs(fine[:stop] - coarse[:stop]) / (15.0 * scale))) if stop > 1 else 0.0
        if err <= 1.0:
            break
        if r_max / (2 * steps) < h_min:
            raise StepFailure(f"step {r_max / steps:.2e} reached h_min with error ratio {err:.2e}")
        steps *= 2
    y = fine + (fine - coarse) / 15.0
    t, y = t[:stop], y[:stop]
    r_end = float(t[-1])
    ddphi = -np.asarray(k(t), dtype=float) * y[:, 0]
    sol = JacobiSolution(t, y[:, 0].copy(), y[:, 1].copy(), ddphi, k, None, r_end, err)
    nonpos = np.nonzero(y[1:, 0] <= 0)[0]
    if nonpos.size:
        j = int(nonpos[0]) + 1
        a, b = t[j - 1], t[j]
        z = b if y[j, 0] == 0 else _spo.brentq(lambda r: float(sol(r)[0]), a, b, xtol=1e-14, rtol=1e-15)
        sol = JacobiSolution(t, sol.phi, sol.dphi, ddphi, k, float(z), r_end, err)
    return sol


def rk4_fixed(k: Callable, r_end: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Plain scalar RK4 for phi'' = -k phi; an independent oracle for solve_jacobi."""
    steps = int(round(r_end / h))
    h = r_end / steps
    y, v, t = 0.0, 1.0, 0.0
    ts = [0.0]
    ys = [(0.0, 1.0)]
    for _ in range(steps):
        k1y, k1v = v, -k(t) * y
        k2y, k2v = v + 0.5 * h * k1v, -k(t + 0.5 * h) * (y + 0.5 * h * k1y)
        k3y, k3v = v + 0.5 * h * k2v, -k(t + 0.5 * h) * (y + 0.5 * h * k2y)
        k4y, k4v = v + h * k3v, -k(t + h) * (y + h * k3y)
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y)
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        t += h
        ts.append(t)
        ys.append((y, v))
    return np.array(ts), np.array(ys)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

def integrate(g: Callable[[float], float], a: float, b: float, tol: Tolerance = DEFAULT_TOL,
              limit: int = 200) -> float:
    """Adaptive Gauss-Kronrod quadrature (QUADPACK) with a hard failure on non-convergence."""
    if a > b:
        raise ValueError(f"integration bounds out of order: {a} > {b}")
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = _spi.quad(g, a, b, epsabs=tol.abs, epsrel=tol.rel, limit=limit, full_output=1)
    val, err = out[0], out[1]
    if len(out) > 3 and err > max(tol.abs, tol.rel * abs(val)) * 10:
        raise IntegrationError(f"quadrature on [{a}, {b}] did not converge (err={err:.2e})")
    return float(val)


@lru_cache(maxsize=None)
def _gl(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(order)
    return x, w


def panel_integral(g: Callable, a: np.ndarray, b: np.ndarray, order: int = 16) -> np.ndarray:
    """Gauss-Legendre rule on each interval [a_i, b_i]; ``g`` is vectorized in r.

    ``g(r)`` may return extra trailing axes (e.g. one per direction node).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    x, w = _gl(order)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    r = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(g(r.ravel()), dtype=float)
    vals = vals.reshape(r.shape + vals.shape[1:])
    wv = w.reshape((1, -1) + (1,) * (vals.ndim - 2))
    return half.reshape((-1,) + (1,) * (vals.ndim - 2)) * np.sum(vals * wv, axis=1)


def cumulative_integral(g: Callable, knots: np.ndarray, tol: Tolerance = DEFAULT_TOL,
                        max_panel: float = 0.25, order: int = 16, max_refine: int = 6) -> np.ndarray:
    """Integrals of ``g`` over consecutive knot intervals (not cumulated).

    Each interval is split into panels no longer than ``max_panel``; the panel
    count doubles until two successive estimates agree to ``tol``.
    """
    knots = np.asarray(knots, dtype=float)
    lo, hi = knots[:-1], knots[1:]
    if np.any(hi < lo):
        raise ValueError("knots must be nondecreasing")
    m = np.maximum(1, np.ceil((hi - lo) / max_panel).astype(int))
    prev = None
    for _ in range(max_refine):
        a = np.repeat(lo, m) + np.concatenate([np.arange(mi) for mi in m]) * np.repeat((hi - lo) / m, m)
        b = a + np.repeat((hi - lo) / m, m)
        pv = panel_integral(g, a, b, order)
        owner = np.repeat(np.arange(lo.size), m)
        est = np.zeros((lo.size,) + pv.shape[1:])
        np.add.at(est, owner, pv)
        if prev is not None:
            diff = np.abs(est - prev)
            scale = tol.abs * 1e-2 + tol.rel * 1e-3 * np.abs(est)
            if np.all(diff <= scale):
                return est
        prev = est
        m = 2 * m
    raise IntegrationError("panel quadrature failed to converge")


# ---------------------------------------------------------------------------
# Direction sphere
# ---------------------------------------------------------------------------

def sphere_area(dim: float) -> float:
    """Surface measure of the unit ``dim``-sphere, 2 pi^{(d+1)/2} / Gamma((d+1)/2).

    Fractional ``dim`` is allowed (used for shifted model dimensions).
    """
    m = dim + 1.0
    return 2.0 * math.pi ** (m / 2.0) / math.gamma(m / 2.0)


@lru_cache(maxsize=None)
def sphere_nodes(n: int, order: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Direction-cosine nodes c and weights so that sum w g(c) = int_{S^{n-1}} g(<theta, e>).

    The marginal of c on S^{n-1} has density omega_{n-2} (1 - c^2)^{(n-3)/2};
    n = 2 takes omega_0 = 2 and recovers int_0^{2 pi} g(cos a) da.
    """
    if n < 2:
        raise ValueError("direction sphere needs n >= 2")
    alpha = (n - 3) / 2.0
    c, w = roots_jacobi(order, alpha, alpha)
    w = w * sphere_area(n - 2)
    c.flags.writeable = False
    w.flags.writeable = False
    return c, w


def sphere_average(g: Callable, n: int, order: int = 64) -> float:
    """Integral of g(<theta, e>) over the unit (n-1)-sphere (not normalized)."""
    c, w = sphere_nodes(n, order)
    return float(np.dot(w, np.asarray(g(c), dtype=float) * np.ones_like(c)))

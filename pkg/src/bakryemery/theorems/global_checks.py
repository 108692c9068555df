"""Global consequences: linear volume growth, diameter bound, excess and hypersurface distance."""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize_scalar

from ..model import DomainError
from ..numerics import DEFAULT_TOL, Tolerance
from ..space.certificates import verify_bound
from ..space.core import RotSymSpace, ball_volumes, direction_nodes, mean_curvature_f, vol_f
from .common import finish, skipped
from .report import CheckReport, SampleCollector, new_report

__all__ = [
    "linear_growth_constant",
    "check_linear_growth",
    "check_myers",
    "myers_bound",
    "excess_bound",
    "euclidean_excess_check",
    "hypersurface_distance_check",
]


def _growth_ratio(t, m: float):
    t = np.asarray(t, dtype=float)
    return (t - 1.0) ** m / (t * ((t + 1.0) ** m - (t - 1.0) ** m))


def linear_growth_constant(n: float, k: float = 0.0) -> float:
    """inf over t >= 2 of (t-1)^m / (t ((t+1)^m - (t-1)^m)) with m = n + 4k.

    The ratio tends to 1/(2m) as t grows; the infimum is taken over a log
    grid, refined locally, and compared with that limit.
    """
    m = float(n) + 4.0 * float(k)
    t = np.geomspace(2.0, 1e7, 4000)
    v = _growth_ratio(t, m)
    i = int(np.argmin(v))
    best = float(v[i])
    lo, hi = t[max(i - 1, 0)], t[min(i + 1, t.size - 1)]
    if hi > lo:
        res = minimize_scalar(lambda x: float(_growth_ratio(x, m)), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * hi})
        best = min(best, float(res.fun))
    return min(best, 1.0 / (2.0 * m))


def check_linear_growth(s: RotSymSpace, k: float | None = None, mode: str = "bounded", t_grid=None,
                        tol: Tolerance = DEFAULT_TOL, falsify: bool = False) -> CheckReport:
    """Vol_f(B(t-1)) >= c(n, k) Vol_f(B(1)) t under Ric_f >= 0.

    mode "bounded" needs |f| <= k; mode "convex" stands in for a convex weight
    whose critical point is the pole (f' >= 0 outward) and uses k = 0.
    """
    if mode not in ("bounded", "convex"):
        raise ValueError(f"unknown linear growth mode {mode!r}")
    if mode == "bounded" and k is None:
        raise ValueError("bounded mode needs k")
    kk = float(k) if mode == "bounded" else 0.0
    hi = s.r_max * (1 - 1e-3)
    certs = [verify_bound(s, 0.0, "ric_f", r_hi=hi, tol=tol)]
    if mode == "bounded":
        certs.append(verify_bound(s, 0.0, "f_bound", kk, r_hi=hi, tol=tol))
    else:
        certs.append(verify_bound(s, 0.0, "f_slope", 0.0, r_hi=hi, tol=tol))
    t = np.linspace(2.0, 0.9 * s.r_max, 40) if t_grid is None else np.asarray(t_grid, dtype=float)
    grid = {"t_min": float(t[0]), "t_max": float(t[-1]), "count": int(t.size), "spacing": "uniform"}
    rep = new_report("linear_growth", s.label, certs, None, falsify, tol)
    rep.grid = grid
    if s.pole_closed:
        rep.precondition_ok = False
        rep.notes.append("space is compact; linear growth concerns noncompact spaces")
    col = SampleCollector(tol)
    if not rep.precondition_ok and not falsify:
        return skipped(rep, col)
    if np.any(t < 2) or np.any(t - 1 > hi):
        raise DomainError(f"t grid must lie in [2, {hi + 1:.6g}]")
    const = linear_growth_constant(s.n, kk)
    v1 = vol_f(s, 0.0, 1.0, tol)
    order = np.argsort(t)
    lhs = np.empty_like(t)
    lhs[order] = ball_volumes(s, t[order] - 1.0, tol)[0]
    col.add("main", const * v1 * t, lhs, R=t, relative=True)
    half = t.size // 2
    slope = float(np.polyfit(t[half:], lhs[half:], 1)[0]) if t.size >= 4 else float("nan")
    rep.extras.update({"constant": const, "ball_volume_1": v1, "growth_slope": slope,
                       "model_dimension": s.n + 4.0 * kk, "mode": mode})
    if mode == "convex" and not s.weight.is_constant_zero:
        # a radial convex weight has an unbounded critical set only when it is constant
        rep.notes.append("convex mode only certifies d_r f >= 0 from the pole; an unbounded critical "
                         "set is not certified, so a pass is evidence on the sampled range only")
    return finish(rep, col)


def myers_bound(n: int, H: float, k: float) -> float:
    """pi/sqrt(H) + 4k/((n-1) sqrt(H))."""
    return math.pi / math.sqrt(H) + 4.0 * k / ((n - 1) * math.sqrt(H))


def check_myers(s: RotSymSpace, H: float, k: float, tol: Tolerance = DEFAULT_TOL,
                falsify: bool = False) -> CheckReport:
    """diameter <= pi/sqrt(H) + 4k/((n-1) sqrt(H)) for a closed space with Ric_f >= (n-1)H > 0, |f| <= k."""
    certs = [verify_bound(s, H, "ric_f", tol=tol), verify_bound(s, H, "f_bound", k, tol=tol)]
    rep = new_report("myers", s.label, certs, None, falsify, tol)
    col = SampleCollector(tol)
    if not s.pole_closed:
        rep.precondition_ok = False
        rep.notes.append("space is not closed; the diameter is undefined")
    if not H > 0:
        rep.precondition_ok = False
        rep.notes.append(f"needs H > 0, got {H:g}")
        return skipped(rep, col)
    if not rep.precondition_ok and not falsify:
        return skipped(rep, col)
    bound = myers_bound(s.n, H, k)
    col.add("main", s.r_max, bound, R=s.r_max)
    rep.extras["bound"] = bound
    rep.extras["diameter"] = s.r_max
    return finish(rep, col)


def excess_bound(n: int, k: float, dpx: float, dqx: float, h: float) -> float:
    """2 (m-1)/(m-2) (C h^m / 2)^{1/(m-1)}, C = 2 (m-1)/m (1/(dpx-h) + 1/(dqx-h)), m = n + 4k."""
    m = n + 4.0 * k
    if not m > 2:
        raise DomainError(f"needs n + 4k > 2, got {m}")
    if not (0 <= h < min(dpx, dqx)):
        raise DomainError(f"h = {h} must lie in [0, min(d(p,x), d(q,x)) = {min(dpx, dqx)})")
    C = 2.0 * (m - 1.0) / m * (1.0 / (dpx - h) + 1.0 / (dqx - h))
    return 2.0 * (m - 1.0) / (m - 2.0) * (C * h**m / 2.0) ** (1.0 / (m - 1.0))


def euclidean_excess_check(n: int, d: float, h_grid=None, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Excess of x = (0, h, 0, ...) against p, q = (-+d/2, 0, ...) in flat R^n with f = 0."""
    h = np.linspace(0.0, 0.45 * d, 21)[1:] if h_grid is None else np.asarray(h_grid, dtype=float)
    rep = CheckReport("excess", f"euclidean(n={n}, d={d:g})", [],
                      {"h_min": float(h.min()), "h_max": float(h.max()), "count": int(h.size)},
                      eq_tol=tol.eq_tol)
    col = SampleCollector(tol)
    dist = np.sqrt(d * d / 4.0 + h * h)
    excess = 2.0 * dist - d
    bound = np.array([excess_bound(n, 0.0, float(x), float(x), float(hh)) for x, hh in zip(dist, h)])
    col.add("main", excess, bound, r=h, R=dist)
    rep.extras.update({"n": n, "d": d})
    return finish(rep, col)


def hypersurface_distance_check(s: RotSymSpace, H: float, r1: float, r2: float,
                                tol: Tolerance = DEFAULT_TOL, falsify: bool = False) -> CheckReport:
    """Distance between the geodesic spheres S(r1), S(r2) against their f-mean curvatures.

    subs: main  r2 - r1 <= (max_c |m_f(r1)| + max_c |m_f(r2)|) / ((n-1) H)
          oriented  r2 - r1 <= (m_f(r1, c) - m_f(r2, c)) / ((n-1) H) per direction
    The variant with an extra factor 2 in the denominator is reported in extras.
    """
    certs = [verify_bound(s, H, "ric_f", tol=tol)]
    rep = new_report("hypersurface", s.label, certs, None, falsify, tol)
    col = SampleCollector(tol)
    if not (0 < r1 <= r2 < s.r_max):
        raise DomainError(f"need 0 < r1 <= r2 < r_max = {s.r_max}")
    if not s.pole_closed:
        rep.precondition_ok = False
        rep.notes.append("space is not closed")
    if not H > 0:
        rep.precondition_ok = False
        rep.notes.append(f"needs H > 0, got {H:g}")
        return skipped(rep, col)
    if not rep.precondition_ok and not falsify:
        return skipped(rep, col)
    c = direction_nodes(s)
    m1 = np.broadcast_to(mean_curvature_f(s, np.array([r1]), c), c.shape)
    m2 = np.broadcast_to(mean_curvature_f(s, np.array([r2]), c), c.shape)
    scale = (s.n - 1) * H
    rhs = (np.max(np.abs(m1)) + np.max(np.abs(m2))) / scale
    col.add("main", r2 - r1, rhs, r=r1, R=r2)
    col.add("oriented", np.full(c.shape, r2 - r1), (m1 - m2) / scale, r=r1, R=r2, c=c)
    rep.extras["distance"] = r2 - r1
    rep.extras["bound"] = float(rhs)
    rep.extras["halved_bound"] = float(rhs / 2.0)
    rep.extras["halved_bound_holds"] = bool(r2 - r1 <= rhs / 2.0)
    return finish(rep, col)

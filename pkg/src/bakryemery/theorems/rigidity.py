"""Rigidity conclusions for the equality cases of the comparison theorems."""

from __future__ import annotations

import numpy as np

from ..model import sn_derivs
from ..numerics import DEFAULT_TOL, Tolerance
from ..space.core import RotSymSpace
from .report import CheckReport, SampleCollector

__all__ = ["run_rigidity_suite", "RIGIDITY_MODES"]

RIGIDITY_MODES = ("mc_a", "vol_a", "mc_basic", "classical")


def run_rigidity_suite(s: RotSymSpace, mode: str, params: dict, interval: tuple | None = None,
                       c: float = 0.0, count: int = 64, tol: Tolerance = DEFAULT_TOL) -> CheckReport:
    """Check the structural conclusions forced by equality on ``interval``.

    mc_a / vol_a : phi = sn_H and d_r f = -a (the model is exactly linear in r)
    classical    : phi = sn_H and d_r f = 0
    mc_basic     : Hess r = 0 (phi' = 0), flat radial curvature (phi'' = 0), d_r^2 f = lambda
    Each deviation is a sample with lhs = |deviation| and rhs = tol.rigidity.
    """
    if mode not in RIGIDITY_MODES:
        raise ValueError(f"unknown rigidity mode {mode!r}; expected one of {RIGIDITY_MODES}")
    lo, hi = interval if interval is not None else (1e-3 * s.r_max, s.r_max * (1 - 1e-3))
    r = np.linspace(lo, hi, count)
    phi, dphi, ddphi = s.warp(r)
    _, f1, f2 = s.weight(r, c)
    f1 = f1 * np.ones_like(r)
    f2 = f2 * np.ones_like(r)
    col = SampleCollector(tol)
    eps = tol.rigidity
    if mode in ("mc_a", "vol_a", "classical"):
        H = float(params.get("H", 0.0))
        a = float(params.get("a", 0.0)) if mode != "classical" else 0.0
        model = sn_derivs(H, r)[0]
        col.add("warp_equals_sn", np.abs(phi - model) / np.maximum(1.0, np.abs(model)), eps, r=r, c=c, floor=0.0)
        col.add("slope_equals_minus_a", np.abs(f1 + a), eps, r=r, c=c, floor=0.0)
    else:
        lam = float(params.get("lam", 0.0))
        col.add("hess_r_zero", np.abs((s.n - 1) * dphi / phi), eps, r=r, c=c, floor=0.0)
        col.add("flat_radial_curvature", np.abs(ddphi / phi), eps, r=r, c=c, floor=0.0)
        col.add("hess_f_equals_lambda", np.abs(f2 - lam), eps, r=r, c=c, floor=0.0)
    rep = CheckReport("rigidity", s.label, [], {"r_min": float(lo), "r_max": float(hi), "count": count,
                                                "spacing": "uniform"}, eq_tol=tol.eq_tol)
    rep.columns = col.columns()
    rep.extras["mode"] = mode
    rep.extras["params"] = dict(params)
    rep.extras["direction_cosine"] = float(c)
    rep.extras["verdict"] = "confirmed" if rep.n_violations == 0 else "refuted"
    return rep

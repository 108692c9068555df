"""Batch drivers shared by the acceptance tests and the scripts in scripts/."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, mean_curvature_model, model_ball_volumes
from .numerics import GridSpec
from .space import ball_volumes, builtin, generate_space, mean_curvature
from .theorems import (check_mc_a, check_mc_appB, check_mc_b, check_mc_basic, check_mc_N,
                       check_vol_a, check_vol_b, check_vol_basic)

__all__ = ["SweepConfig", "SweepResult", "classical_reduction", "generator_sweep", "MODE_PARAMS"]

MODE_PARAMS = {"f_bounded": 0.2, "f_slope": 0.5, "N_tensor": 2.0}


def classical_reduction(ns=range(2, 7), Hs=(-1.0, 0.0, 1.0), count: int = 200) -> dict:
    """Unweighted space forms against the closed-form model.

    Returns the worst relative error of m against m_H and of ball-volume
    ratios V(R)/V(r) against the model ratios, plus the worst margin of the
    mean-curvature checks run with k = 0.
    """
    worst_m = worst_v = 0.0
    worst_margin = math.inf
    for H in Hs:
        for n in ns:
            s = builtin("constant_curvature", n=n, H=H)
            hi = 0.999 * s.r_max
            r = np.linspace(1e-3 * hi, hi, count)
            m = mean_curvature(s, r)
            mh = mean_curvature_model(ModelParams(n, H), r)
            worst_m = max(worst_m, float(np.max(np.abs(m - mh) / np.maximum(1.0, np.abs(mh)))))
            radii = np.linspace(0.05 * hi, hi, 24)
            got, _ = ball_volumes(s, radii)
            ref, _ = model_ball_volumes(ModelParams(n, H), radii)
            ratio_got = got[1:] / got[0]
            ratio_ref = ref[1:] / ref[0]
            worst_v = max(worst_v, float(np.max(np.abs(ratio_got / ratio_ref - 1.0))))
            grid = GridSpec(1e-3 * hi, hi, 64)
            for rep in (check_mc_b(s, H, 0.0, grid=grid), check_mc_basic(s, (n - 1) * H, grid=grid)):
                worst_margin = min(worst_margin, rep.min_margin)
    return {"m_rel_error": worst_m, "volume_ratio_rel_error": worst_v, "min_margin": worst_margin}


@dataclass
class SweepConfig:
    seeds: range = range(100)
    modes: tuple = ("f_bounded", "f_slope", "N_tensor")
    ns: tuple = (3, 4)
    Hs: tuple = (-1.0, 0.0, 1.0)
    grid_count: int = 64


@dataclass
class SweepResult:
    spaces: int = 0
    reports: int = 0
    worst: dict = field(default_factory=dict)       # check id -> (min_margin, seed, mode, n, H)
    worst_sub: dict = field(default_factory=dict)   # (check id, sub) -> min_margin
    ode_ratios: dict = field(default_factory=dict)  # n -> (min measured, closed form), H = 0
    failures: list = field(default_factory=list)    # reports that did not pass
    seconds: float = 0.0

    @property
    def min_margin(self) -> float:
        return min((w[0] for w in self.worst.values()), default=math.inf)


def _checks(s, mode: str, n: int, H: float, p: float, grid):
    if mode == "f_bounded":
        lam = (n - 1) * H
        return [check_mc_b(s, H, p, grid=grid), check_mc_appB(s, H, p, grid=grid),
                check_vol_b(s, H, p, grid=grid), check_mc_basic(s, lam, grid=grid),
                check_vol_basic(s, lam, grid=grid)]
    if mode == "f_slope":
        lam = (n - 1) * H
        return [check_mc_a(s, H, p, grid=grid), check_vol_a(s, H, p, grid=grid),
                check_mc_basic(s, lam, grid=grid), check_vol_basic(s, lam, grid=grid)]
    # Ric_f >= Ric_f^N >= (n+N-1)H
    lam = (n + p - 1) * H
    return [check_mc_N(s, H, p, grid=grid), check_mc_basic(s, lam, grid=grid),
            check_vol_basic(s, lam, grid=grid)]


def generator_sweep(cfg: SweepConfig = SweepConfig()) -> SweepResult:
    """Generate spaces satisfying each hypothesis and run every applicable checker."""
    out = SweepResult()
    t0 = time.perf_counter()
    for mode in cfg.modes:
        p = MODE_PARAMS[mode]
        for n in cfg.ns:
            for H in cfg.Hs:
                for seed in cfg.seeds:
                    s, _ = generate_space(n, H, mode, p, seed)
                    out.spaces += 1
                    grid = cfg.grid_count
                    for rep in _checks(s, mode, n, H, p, grid):
                        out.reports += 1
                        key = rep.theorem_id
                        if key not in out.worst or rep.min_margin < out.worst[key][0]:
                            out.worst[key] = (rep.min_margin, seed, mode, n, H)
                        for sub in np.unique(rep.columns["sub"]) if rep.n_samples else ():
                            k2 = (key, str(sub))
                            out.worst_sub[k2] = min(out.worst_sub.get(k2, math.inf), rep.sub_margin(sub))
                        if "ode_to_main_ratio_measured" in rep.extras:
                            got = rep.extras["ode_to_main_ratio_measured"]
                            prev = out.ode_ratios.get(n, (math.inf, None))[0]
                            out.ode_ratios[n] = (min(prev, got), rep.extras["ode_to_main_ratio"])
                        if not rep.passed:
                            out.failures.append((key, seed, mode, n, H, rep.verdict, rep.min_margin))
    out.seconds = time.perf_counter() - t0
    return out

"""Checker registry: maps check ids to callables and their parameters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..numerics import DEFAULT_TOL, Tolerance
from ..space.core import RotSymSpace
from . import global_checks as gc
from . import mean_curvature as mc
from . import volume as vol
from .report import CheckReport
from .rigidity import run_rigidity_suite


@dataclass(frozen=True)
class CheckSpec:
    func: Callable
    required: tuple
    optional: tuple = ()
    uses_space: bool = True
    uses_grid: bool = True
    falsifiable: bool = True


# parameter names follow the hypotheses: H, a, k, lam, N, r0, r1, r2
CHECKS: dict[str, CheckSpec] = {
    "mc_basic": CheckSpec(mc.check_mc_basic, ("lam",), ("r0",)),
    "mc_a": CheckSpec(mc.check_mc_a, ("H", "a")),
    "mc_b": CheckSpec(mc.check_mc_b, ("H", "k")),
    "mc_appB": CheckSpec(mc.check_mc_appB, ("H", "k")),
    "mc_N": CheckSpec(mc.check_mc_N, ("H", "N")),
    "vol_basic": CheckSpec(vol.check_vol_basic, ("lam",), ("r0",)),
    "vol_a": CheckSpec(vol.check_vol_a, ("H", "a")),
    "vol_b": CheckSpec(vol.check_vol_b, ("H", "k")),
    "linear_growth": CheckSpec(gc.check_linear_growth, (), ("k", "mode", "t_grid"), uses_grid=False),
    "myers": CheckSpec(gc.check_myers, ("H", "k"), uses_grid=False),
    "hypersurface": CheckSpec(gc.hypersurface_distance_check, ("H", "r1", "r2"), uses_grid=False),
    "excess": CheckSpec(gc.euclidean_excess_check, ("n", "d"), ("h_grid",), uses_space=False,
                        uses_grid=False, falsifiable=False),
    "rigidity": CheckSpec(run_rigidity_suite, ("mode", "params"), ("interval", "c"), uses_grid=False,
                          falsifiable=False),
}


def run_check(check_id: str, space: RotSymSpace | None, params: dict, grid=None,
              tol: Tolerance = DEFAULT_TOL, falsify: bool = False) -> CheckReport:
    """Dispatch one configured check; unknown or missing parameters raise ValueError."""
    if check_id not in CHECKS:
        raise ValueError(f"unknown check {check_id!r}; known: {', '.join(sorted(CHECKS))}")
    spec = CHECKS[check_id]
    missing = [p for p in spec.required if p not in params]
    if missing:
        raise ValueError(f"check {check_id!r} is missing parameter(s) {', '.join(missing)}")
    extra = set(params) - set(spec.required) - set(spec.optional)
    if extra:
        raise ValueError(f"check {check_id!r} got unknown parameter(s) {', '.join(sorted(extra))}")
    kwargs = dict(params)
    kwargs["tol"] = tol
    if spec.uses_grid and grid is not None:
        kwargs["grid"] = grid
    if spec.falsifiable:
        kwargs["falsify"] = falsify
    if spec.uses_space:
        if space is None:
            raise ValueError(f"check {check_id!r} needs a space")
        return spec.func(space, **kwargs)
    return spec.func(**kwargs)

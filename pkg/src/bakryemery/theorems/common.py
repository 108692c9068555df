"""Grid resolution, domain caps and report assembly shared by the checkers."""

from __future__ import annotations

import math

import numpy as np

from ..numerics import DEFAULT_TOL, GridSpec, Tolerance
from ..space.core import RotSymSpace
from .report import CheckReport, SampleCollector, equality_runs

# H > 0 thresholds are enforced at this fraction (right-hand sides blow up at the endpoints)
CAP_FRACTION = 0.999
DEFAULT_COUNT = 200


def domain_cap(s: RotSymSpace, H: float, frac: float | None) -> float:
    """Largest radius a check may use: inside the space and below frac * pi / sqrt(H)."""
    hi = s.r_max * (1 - 1e-3)
    if H > 0 and frac is not None:
        hi = min(hi, CAP_FRACTION * frac * math.pi / math.sqrt(H))
    return hi


def resolve_grid(grid, r_hi: float, count: int = DEFAULT_COUNT) -> GridSpec:
    """Accept a GridSpec, a point count or None; clip the grid to ``r_hi``."""
    if isinstance(grid, GridSpec):
        if grid.r_max <= r_hi:
            return grid
        lo = min(grid.r_min, 0.5 * r_hi)
        return GridSpec(lo, r_hi, grid.count, grid.spacing)
    if isinstance(grid, int):
        count = grid
    return GridSpec.for_range(r_hi, count)


def finish(rep: CheckReport, col: SampleCollector) -> CheckReport:
    rep.columns = col.columns()
    return rep


def skipped(rep: CheckReport, col: SampleCollector | None = None) -> CheckReport:
    """Report for a check aborted on a failed hypothesis (no falsify flag)."""
    rep.ran = False
    rep.notes.append("check not run: hypotheses failed and falsify mode is off")
    rep.columns = (col or SampleCollector()).columns()
    return rep


def first_equality_interval(r: np.ndarray, margins: np.ndarray, tol: Tolerance = DEFAULT_TOL):
    """(r_start, r_end) of the first run of persistent equality along one geodesic, or None."""
    runs = equality_runs(np.abs(margins) < tol.eq_tol, tol.eq_persist)
    if not runs:
        return None
    i, j = runs[0]
    return float(r[i]), float(r[j - 1])

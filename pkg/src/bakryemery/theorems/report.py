"""CheckReport: per-theorem verdict with columnar sample storage."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..numerics import DEFAULT_TOL, GridSpec, Tolerance
from ..space.certificates import CurvatureCertificate

__all__ = ["CheckReport", "SampleCollector", "COLUMNS", "equality_runs"]

COLUMNS = ("sub", "r", "R", "c", "r1", "R1", "lhs", "rhs", "margin", "floor")


class SampleCollector:
    """Accumulates samples as numpy columns; margins are rhs - lhs.

    ``relative=True`` stores (rhs - lhs) / |rhs| and uses the volume floor.
    """

    def __init__(self, tol: Tolerance = DEFAULT_TOL):
        self.tol = tol
        self.parts: list[dict] = []

    def add(self, sub: str, lhs, rhs, *, r=None, R=None, c=None, r1=None, R1=None,
            relative: bool = False, floor: float | None = None):
        lhs = np.asarray(lhs, dtype=float)
        rhs = np.asarray(rhs, dtype=float)
        cols = {"lhs": lhs, "rhs": rhs}
        for name, v in (("r", r), ("R", R), ("c", c), ("r1", r1), ("R1", R1)):
            cols[name] = np.nan if v is None else np.asarray(v, dtype=float)
        shape = np.broadcast_shapes(*(np.shape(v) for v in cols.values()))
        flat = {k: np.broadcast_to(v, shape).ravel().astype(float) for k, v in cols.items()}
        with np.errstate(divide="ignore", invalid="ignore"):
            diff = flat["rhs"] - flat["lhs"]
            if relative:
                margin = np.where(np.isinf(flat["rhs"]) & (flat["rhs"] > 0), np.inf,
                                  diff / np.abs(flat["rhs"]))
            else:
                margin = diff
        flat["margin"] = margin
        if floor is None:
            floor = self.tol.volume_floor if relative else self.tol.margin_floor
        flat["floor"] = np.full(margin.shape, float(floor))
        flat["sub"] = np.full(margin.shape, sub, dtype=object)
        self.parts.append(flat)

    def columns(self) -> dict:
        if not self.parts:
            return {k: np.zeros(0, dtype=object if k == "sub" else float) for k in COLUMNS}
        return {k: np.concatenate([p[k] for p in self.parts]) for k in COLUMNS}


def equality_runs(mask: np.ndarray, persist: int) -> list[tuple[int, int]]:
    """Index ranges [i, j) of at least ``persist`` consecutive True entries."""
    runs = []
    i = 0
    n = mask.size
    while i < n:
        if mask[i]:
            j = i
            while j < n and mask[j]:
                j += 1
            if j - i >= persist:
                runs.append((i, j))
            i = j
        else:
            i += 1
    return runs


@dataclass(eq=False)
class CheckReport:
    theorem_id: str
    space_label: str
    hypothesis: list = field(default_factory=list)
    grid: dict | None = None
    columns: dict = field(default_factory=dict)
    precondition_ok: bool = True
    notes: list = field(default_factory=list)
    extras: dict = field(default_factory=dict)
    eq_tol: float = DEFAULT_TOL.eq_tol
    falsify: bool = False
    ran: bool = True
    elapsed: float | None = None   # wall-clock seconds; never serialized

    # -- derived views ---------------------------------------------------------
    @property
    def n_samples(self) -> int:
        return int(self.columns["margin"].size) if self.columns else 0

    @property
    def min_margin(self) -> float:
        if not self.n_samples:
            return math.inf
        m = self.columns["margin"]
        return float(np.min(np.where(np.isnan(m), -np.inf, m)))

    def _violation_mask(self) -> np.ndarray:
        if not self.n_samples:
            return np.zeros(0, dtype=bool)
        m = self.columns["margin"]
        return np.isnan(m) | (m < self.columns["floor"])

    def _equality_mask(self) -> np.ndarray:
        if not self.n_samples:
            return np.zeros(0, dtype=bool)
        return np.abs(self.columns["margin"]) < self.eq_tol

    def _rows(self, mask) -> list[dict]:
        idx = np.nonzero(mask)[0]
        return [self.sample(int(i)) for i in idx]

    @property
    def violations(self) -> list[dict]:
        return self._rows(self._violation_mask())

    @property
    def n_violations(self) -> int:
        return int(self._violation_mask().sum())

    @property
    def equality_points(self) -> list[dict]:
        return self._rows(self._equality_mask())

    @property
    def n_equality(self) -> int:
        return int(self._equality_mask().sum())

    @property
    def samples(self) -> list[dict]:
        return [self.sample(i) for i in range(self.n_samples)]

    def sample(self, i: int) -> dict:
        out = {}
        for k in COLUMNS:
            v = self.columns[k][i]
            if k == "sub":
                out[k] = str(v)
            else:
                v = float(v)
                out[k] = None if math.isnan(v) else v
        return out

    def status(self) -> np.ndarray:
        return np.where(self._violation_mask(), "fail", "pass")

    def sub_margin(self, sub: str) -> float:
        m = self.columns["sub"] == sub
        if not m.any():
            return math.inf
        return float(np.min(self.columns["margin"][m]))

    @property
    def passed(self) -> bool:
        return bool(self.precondition_ok and self.n_violations == 0)

    @property
    def verdict(self) -> str:
        if not self.precondition_ok:
            return "precondition-failed" if self.n_violations == 0 else "precondition-failed+violations"
        return "pass" if self.n_violations == 0 else "violations"

    def __repr__(self) -> str:
        return (f"CheckReport({self.theorem_id}, {self.space_label}: {self.verdict}, "
                f"samples={self.n_samples}, min_margin={self.min_margin:.3e})")

    def to_dict(self) -> dict:
        mm = self.min_margin
        return {
            "theorem_id": self.theorem_id,
            "space": self.space_label,
            "verdict": self.verdict,
            "passed": self.passed,
            "precondition_ok": self.precondition_ok,
            "falsify": self.falsify,
            "ran": self.ran,
            "hypothesis": self.hypothesis,
            "grid": self.grid,
            "min_margin": None if math.isinf(mm) else mm,
            "n_samples": self.n_samples,
            "n_violations": self.n_violations,
            "n_equality": self.n_equality,
            "notes": list(self.notes),
            "extras": self.extras,
            "samples": self.samples,
        }


def new_report(theorem_id: str, space_label: str, certs: list[CurvatureCertificate],
               grid: GridSpec | None, falsify: bool, tol: Tolerance) -> CheckReport:
    rep = CheckReport(theorem_id, space_label, [c.summary() for c in certs],
                      grid.as_dict() if grid is not None else None, eq_tol=tol.eq_tol, falsify=falsify)
    rep.precondition_ok = all(c.valid for c in certs)
    if not rep.precondition_ok:
        bad = [c.describe() for c in certs if not c.valid]
        rep.notes.append("hypothesis not certified: " + ", ".join(bad))
    return rep

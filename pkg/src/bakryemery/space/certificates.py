"""Numerically verified hypothesis bounds attached to a space before a theorem check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..numerics import DEFAULT_TOL, Tolerance
from .core import RotSymSpace, direction_nodes, ric_f_N_radial, ric_f_radial

__all__ = ["CurvatureCertificate", "verify_bound", "MODES", "certificate_range"]

MODES = ("ric_f", "ric_f_lambda", "ric_f_N", "f_bound", "f_slope")


@dataclass(frozen=True, eq=False)
class CurvatureCertificate:
    H: float
    kind: str
    param: float | None
    slack: Callable
    min_slack: float
    argmin: tuple
    r_range: tuple
    floor: float = DEFAULT_TOL.margin_floor
    children: tuple = ()

    @property
    def own_valid(self) -> bool:
        return bool(self.min_slack >= self.floor)

    @property
    def valid(self) -> bool:
        return self.own_valid and all(c.valid for c in self.children)

    @property
    def overall_min_slack(self) -> float:
        return min([self.min_slack] + [c.overall_min_slack for c in self.children])

    def describe(self) -> str:
        p = "" if self.param is None else f", param={self.param:g}"
        return f"{self.kind}(H={self.H:g}{p})"

    def summary(self) -> dict:
        out = {
            "kind": self.kind,
            "H": self.H,
            "param": self.param,
            "min_slack": self.min_slack,
            "argmin_r": self.argmin[0],
            "argmin_c": self.argmin[1],
            "r_range": list(self.r_range),
            "valid": self.own_valid,
        }
        if self.children:
            out["children"] = [c.summary() for c in self.children]
        return out


def certificate_range(s: RotSymSpace, r_hi: float | None = None) -> float:
    hi = s.r_max * (1 - 1e-3)
    return hi if r_hi is None else min(hi, r_hi)


def _slack_fn(s: RotSymSpace, H: float, mode: str, param):
    n = s.n
    if mode == "ric_f":
        return lambda r, c: ric_f_radial(s, r, c) - (n - 1) * H
    if mode == "ric_f_lambda":
        return lambda r, c: ric_f_radial(s, r, c) - param
    if mode == "ric_f_N":
        return lambda r, c: ric_f_N_radial(s, r, c, param) - (n + param - 1) * H
    if mode == "f_bound":
        return lambda r, c: param - np.abs(s.weight(r, c)[0])
    if mode == "f_slope":
        return lambda r, c: s.weight(r, c)[1] + param
    raise ValueError(f"unknown certificate mode {mode!r}; expected one of {MODES}")


def verify_bound(s: RotSymSpace, H: float, mode: str, param: float | None = None,
                 r_hi: float | None = None, count: int = 512,
                 tol: Tolerance = DEFAULT_TOL) -> CurvatureCertificate:
    """Grid-evaluate a hypothesis slack over r x direction nodes.

    Negative slack is reported, never raised.  Curvature modes start the grid at
    1e-3 of its end; weight modes include the pole.
    """
    if mode in ("ric_f_N",) and not (param and param > 0):
        raise ValueError("ric_f_N needs N > 0")
    if mode in ("f_bound", "f_slope", "ric_f_lambda") and param is None:
        raise ValueError(f"mode {mode!r} needs a parameter")
    hi = certificate_range(s, r_hi)
    lo = 0.0 if mode in ("f_bound", "f_slope") else 1e-3 * hi
    r = np.linspace(lo, hi, count)
    c = direction_nodes(s)
    fn = _slack_fn(s, H, mode, param)
    vals = np.asarray(fn(r[:, None], c[None, :]), dtype=float) * np.ones((r.size, c.size))
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    return CurvatureCertificate(float(H), mode, None if param is None else float(param), fn,
                                float(vals[i, j]), (float(r[i]), float(c[j])), (float(lo), float(hi)),
                                tol.margin_floor)

"""Deterministic JSON and CSV serialization of check reports."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from ..theorems import CheckReport

__all__ = ["CSV_COLUMNS", "emit_report", "render_csv", "render_json"]

CSV_COLUMNS = ("theorem_id", "space", "r", "R", "c", "lhs", "rhs", "margin", "status")


def _num(v) -> str:
    v = float(v)
    if math.isnan(v):
        return ""
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".17g")


def _clean(obj):
    """JSON-safe copy: non-finite floats become strings, numpy scalars become Python."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def render_json(reports: list[CheckReport], timing: bool = False) -> str:
    items = []
    for rep in reports:
        d = rep.to_dict()
        if timing and rep.elapsed is not None:
            d["wall_clock_s"] = rep.elapsed
        items.append(d)
    doc = {"reports": _clean(items), "summary": _clean(summarize(reports))}
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_csv(reports: list[CheckReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rep in reports:
        if not rep.n_samples:
            continue
        cols = rep.columns
        status = rep.status()
        for i in range(rep.n_samples):
            w.writerow([rep.theorem_id, rep.space_label] +
                       [_num(cols[k][i]) for k in ("r", "R", "c", "lhs", "rhs", "margin")] + [status[i]])
    return buf.getvalue()


def summarize(reports: list[CheckReport]) -> dict:
    return {
        "count": len(reports),
        "passed": sum(r.passed for r in reports),
        "violations": sum(r.n_violations > 0 for r in reports),
        "precondition_failed": sum(not r.precondition_ok for r in reports),
    }


def emit_report(reports: list[CheckReport], fmt: str = "json", path=None, timing: bool = False) -> str:
    """Render ``reports`` as json or csv; write UTF-8 with LF endings when ``path`` is given."""
    if fmt == "json":
        text = render_json(reports, timing)
    elif fmt == "csv":
        text = render_csv(reports)
    else:
        raise ValueError(f"unknown format {fmt!r}; expected json or csv")
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text

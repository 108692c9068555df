"""SuiteConfig: which checks to run on a space, and the suite runner."""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, field

import yaml

from ..numerics import DEFAULT_TOL, GridSpec, Tolerance
from ..space import RotSymSpace
from ..theorems import CHECKS, CheckReport, run_check
from .spec import SpaceSpec, SpecError, build_space

__all__ = ["CheckEntry", "SuiteConfig", "SuiteError", "load_suite", "parse_suite", "run_suite"]

_TOL_FIELDS = {f.name for f in dataclasses.fields(Tolerance)}


class SuiteError(RuntimeError):
    """A checker raised; the message is prefixed with the check id."""

    def __init__(self, check_id: str, exc: Exception):
        super().__init__(f"[{check_id}] {type(exc).__name__}: {exc}")
        self.check_id = check_id


@dataclass
class CheckEntry:
    id: str
    params: dict = field(default_factory=dict)
    grid: int | dict | None = None


@dataclass
class SuiteConfig:
    checks: list = field(default_factory=list)
    falsify: bool = False
    grid: int | None = None
    tolerance: dict = field(default_factory=dict)

    def tol(self) -> Tolerance:
        return dataclasses.replace(DEFAULT_TOL, **self.tolerance)


def _grid(where: str, g):
    if g is None:
        return None
    if isinstance(g, bool):
        raise SpecError(where, "expected a point count or a grid mapping")
    if isinstance(g, int):
        if g < 2:
            raise SpecError(where, "grid count must be >= 2")
        return g
    if isinstance(g, dict):
        try:
            GridSpec(**g)
        except (TypeError, ValueError) as exc:
            raise SpecError(where, str(exc)) from exc
        return dict(g)
    raise SpecError(where, "expected a point count or a grid mapping")


def parse_suite(data, origin: str = "<suite>") -> SuiteConfig:
    if not isinstance(data, dict):
        raise SpecError(origin, "top level must be a mapping")
    unknown = set(data) - {"checks", "falsify", "grid", "tolerance"}
    if unknown:
        raise SpecError(origin, f"unknown field(s) {', '.join(sorted(map(str, unknown)))}")
    tol = data.get("tolerance") or {}
    if not isinstance(tol, dict) or not set(tol) <= _TOL_FIELDS:
        raise SpecError("tolerance", f"keys must be among {', '.join(sorted(_TOL_FIELDS))}")
    suite = SuiteConfig(falsify=bool(data.get("falsify", False)), grid=_grid("grid", data.get("grid")),
                        tolerance={k: float(v) for k, v in tol.items()})
    try:
        suite.tol()
    except ValueError as exc:
        raise SpecError("tolerance", str(exc)) from exc
    checks = data.get("checks")
    if not isinstance(checks, list) or not checks:
        raise SpecError("checks", "need a non-empty list of checks")
    for i, c in enumerate(checks):
        where = f"checks[{i}]"
        if isinstance(c, str):
            c = {"id": c}
        if not isinstance(c, dict) or "id" not in c:
            raise SpecError(where, "each check needs an id")
        cid = c["id"]
        if cid not in CHECKS:
            raise SpecError(f"{where}.id", f"unknown check {cid!r}; known: {', '.join(sorted(CHECKS))}")
        params = c.get("params") or {}
        spec = CHECKS[cid]
        missing = [p for p in spec.required if p not in params]
        extra = set(params) - set(spec.required) - set(spec.optional)
        if missing or extra:
            raise SpecError(f"{where}.params", f"missing {missing or 'nothing'}, unknown {sorted(extra) or 'nothing'}")
        suite.checks.append(CheckEntry(cid, dict(params), _grid(f"{where}.grid", c.get("grid"))))
    return suite


def load_suite(path) -> SuiteConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise SpecError(where, f"YAML parse error: {getattr(exc, 'problem', exc)}") from exc
    return parse_suite(data, str(path))


def run_suite(spec: SpaceSpec | RotSymSpace, suite: SuiteConfig, *, seed: int | None = None,
              grid: int | None = None, falsify: bool | None = None) -> list[CheckReport]:
    """Run every configured check in declaration order.

    Keyword overrides mirror the CLI flags.  Each report carries its wall-clock
    time as ``report.elapsed`` (kept out of the serialized form so outputs stay
    byte-identical across runs).
    """
    cert = None
    space = spec
    if isinstance(spec, SpaceSpec):
        space, cert = build_space(spec, seed=seed)
    tol = suite.tol()
    fals = suite.falsify if falsify is None else falsify
    reports = []
    for entry in suite.checks:
        g = entry.grid if entry.grid is not None else (grid if grid is not None else suite.grid)
        if isinstance(g, dict):
            g = GridSpec(**g)
        t0 = time.perf_counter()
        try:
            rep = run_check(entry.id, space, entry.params, g, tol, fals)
        except Exception as exc:  # annotate and re-raise with the check id
            raise SuiteError(entry.id, exc) from exc
        rep.elapsed = time.perf_counter() - t0
        if cert is not None:
            rep.extras["generator_certificate"] = cert.summary()
        reports.append(rep)
    return reports

"""SpaceSpec: the YAML description of a space, its validation and round trip.

Exactly one of three sources describes a space:

    builtin:   {name: gaussian_soliton, params: {lam: 1.0, n: 2}}
    warp/weight profiles with n and r_max (expressions in r or spline knots)
    generator: {H: 0.0, mode: f_bounded, param: 0.2} with n and seed

Lengths are in the units of r; angles in radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import yaml

from ..expr import ParseError
from ..space import (GENERATOR_MODES, DirectionalWeight, GenerationFailure, RotSymSpace, SpaceError,
                     builtin, builtin_names, constant, from_expression, from_knots, generate_space)

__all__ = ["SpaceSpec", "SpecError", "load_spec", "parse_spec", "dump_spec", "build_space"]

_MODE_ALIASES = {"f_bounded": "k", "f_slope": "a", "N_tensor": "N"}


class SpecError(ValueError):
    """A spec file failed to parse or violates an invariant; ``where`` names the field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class SpaceSpec:
    name: str
    n: int | None = None
    builtin: dict | None = None
    warp: dict | None = None
    weight: dict | None = None
    r_max: float | None = None
    pole_closed: bool = False
    seed: int | None = None
    generator: dict | None = None
    constants: dict = field(default_factory=dict)

    @property
    def source(self) -> str:
        if self.builtin is not None:
            return "builtin"
        return "generator" if self.generator is not None else "profiles"

    def to_dict(self) -> dict:
        out = {"name": self.name}
        for key in ("n", "builtin", "warp", "weight", "r_max", "seed", "generator"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        if self.pole_closed:
            out["pole_closed"] = True
        if self.constants:
            out["constants"] = dict(self.constants)
        return out


_KEYS = {"name", "n", "builtin", "warp", "weight", "r_max", "pole_closed", "seed", "generator", "constants"}


def _number(where: str, v, kind=float):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(where, f"expected a number, got {v!r}")
    if kind is int:
        if float(v) != int(v):
            raise SpecError(where, f"expected an integer, got {v!r}")
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        raise SpecError(where, "must be finite")
    return v


def parse_spec(data, origin: str = "<spec>") -> SpaceSpec:
    """Validate a decoded mapping into a SpaceSpec."""
    if not isinstance(data, dict):
        raise SpecError(origin, "top level must be a mapping")
    unknown = set(data) - _KEYS
    if unknown:
        raise SpecError(origin, f"unknown field(s) {', '.join(sorted(map(str, unknown)))}")
    name = str(data.get("name", "space"))
    sources = [k for k in ("builtin", "warp", "generator") if data.get(k) is not None]
    if len(sources) != 1:
        raise SpecError(origin, "exactly one of builtin, warp (explicit profiles) or generator is required, "
                        f"found {sources or 'none'}")
    spec = SpaceSpec(name)
    if data.get("n") is not None:
        spec.n = _number("n", data["n"], int)
        if spec.n < 2:
            raise SpecError("n", "dimension must be >= 2")
    if data.get("r_max") is not None:
        spec.r_max = _number("r_max", data["r_max"])
        if spec.r_max <= 0:
            raise SpecError("r_max", "must be positive")
    spec.pole_closed = bool(data.get("pole_closed", False))
    if data.get("seed") is not None:
        spec.seed = _number("seed", data["seed"], int)
        if spec.seed < 0:
            raise SpecError("seed", "must be a nonnegative integer")
    consts = data.get("constants") or {}
    if not isinstance(consts, dict):
        raise SpecError("constants", "must be a mapping of name to number")
    spec.constants = {str(k): _number(f"constants.{k}", v) for k, v in consts.items()}

    src = sources[0]
    if src == "builtin":
        spec.builtin = _parse_builtin(data["builtin"])
        if data.get("weight") is not None:
            raise SpecError("weight", "a builtin defines its own weight")
    elif src == "generator":
        spec.generator = _parse_generator(data["generator"])
        if spec.n is None:
            raise SpecError("n", "required for generated spaces")
        if spec.seed is None:
            raise SpecError("seed", "required for generated spaces")
        if data.get("weight") is not None:
            raise SpecError("weight", "a generator draws its own weight")
    else:
        spec.warp = _parse_profile("warp", data["warp"], weight=False)
        if data.get("weight") is not None:
            spec.weight = _parse_profile("weight", data["weight"], weight=True)
        if spec.n is None:
            raise SpecError("n", "required for explicit profiles")
        if spec.r_max is None:
            raise SpecError("r_max", "required for explicit profiles")
    return spec


def _parse_builtin(b) -> dict:
    if isinstance(b, str):
        b = {"name": b}
    if not isinstance(b, dict) or "name" not in b:
        raise SpecError("builtin", "expected {name: ..., params: {...}}")
    if b["name"] not in builtin_names():
        raise SpecError("builtin.name", f"unknown builtin {b['name']!r}; known: {', '.join(builtin_names())}")
    params = b.get("params") or {}
    if not isinstance(params, dict):
        raise SpecError("builtin.params", "must be a mapping")
    return {"name": str(b["name"]),
            "params": {str(k): _number(f"builtin.params.{k}", v) for k, v in params.items()}}


def _parse_generator(g) -> dict:
    if not isinstance(g, dict):
        raise SpecError("generator", "expected a mapping with H, mode and param")
    mode = g.get("mode")
    if mode not in GENERATOR_MODES:
        raise SpecError("generator.mode", f"expected one of {', '.join(GENERATOR_MODES)}, got {mode!r}")
    alias = _MODE_ALIASES[mode]
    if "param" in g and alias in g:
        raise SpecError("generator", f"give either param or {alias}, not both")
    if "param" not in g and alias not in g:
        raise SpecError("generator.param", f"missing (or its alias {alias})")
    out = {"H": _number("generator.H", g.get("H", 0.0)), "mode": mode,
           "param": _number("generator.param", g.get("param", g.get(alias)))}
    for key in ("slack", "close_pole"):
        if key in g:
            out[key] = bool(g[key])
    for key in ("strict", "length"):
        if key in g:
            out[key] = _number(f"generator.{key}", g[key])
    extra = set(g) - {"H", "mode", "param", alias, "slack", "close_pole", "strict", "length"}
    if extra:
        raise SpecError("generator", f"unknown field(s) {', '.join(sorted(extra))}")
    return out


def _parse_knots(where: str, k) -> dict:
    if not isinstance(k, dict) or "r" not in k or "values" not in k:
        raise SpecError(where, "knots need lists r and values")
    r = [_number(f"{where}.r", x) for x in k["r"]]
    v = [_number(f"{where}.values", x) for x in k["values"]]
    if len(r) != len(v) or len(r) < 4:
        raise SpecError(where, "r and values need equal length >= 4")
    if any(b <= a for a, b in zip(r, r[1:])):
        raise SpecError(f"{where}.r", "must be strictly increasing")
    return {"r": r, "values": v}


def _parse_profile(where: str, p, weight: bool) -> dict:
    if isinstance(p, str):
        p = {"radial" if weight else "expr": p}
    if not isinstance(p, dict) or len(p) != 1:
        raise SpecError(where, "expected exactly one of " + ("radial, axis_linear, knots" if weight else "expr, knots"))
    (key, val), = p.items()
    if key == "knots":
        return {"knots": _parse_knots(f"{where}.knots", val)}
    if not weight and key == "expr":
        return {"expr": str(val)}
    if weight and key == "radial":
        return {"radial": str(val)}
    if weight and key == "axis_linear":
        if not isinstance(val, dict) or not set(val) <= {"g", "h"} or "g" not in val:
            raise SpecError(f"{where}.axis_linear", "expected {g: expr, h: expr (optional)}")
        return {"axis_linear": {k: str(v) for k, v in val.items()}}
    raise SpecError(where, f"unknown profile kind {key!r}")


def load_spec(path) -> SpaceSpec:
    """Read and validate a YAML (or JSON) space spec."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else str(path)
        raise SpecError(where, f"YAML parse error: {getattr(exc, 'problem', exc)}") from exc
    return parse_spec(data, str(path))


def dump_spec(spec: SpaceSpec) -> str:
    return yaml.safe_dump(spec.to_dict(), sort_keys=False, default_flow_style=False)


def _expr_profile(where: str, text: str, consts: dict):
    try:
        return from_expression(text, consts)
    except ParseError as exc:
        raise SpecError(where, str(exc)) from exc


def _profile(where: str, block: dict, consts: dict):
    if "knots" in block:
        return from_knots(block["knots"]["r"], block["knots"]["values"])
    key = next(iter(block))
    return _expr_profile(f"{where}.{key}", block[key], consts)


def build_space(spec: SpaceSpec, seed: int | None = None):
    """Construct (space, certificate); the certificate is None unless generated.

    ``seed`` overrides the spec's seed for generated spaces.
    """
    try:
        if spec.builtin is not None:
            params = dict(spec.builtin["params"])
            for key in ("n",):
                if spec.n is not None and key not in params:
                    params[key] = spec.n
            s = builtin(spec.builtin["name"], **{k: (int(v) if k == "n" else v) for k, v in params.items()})
            return s, None
        if spec.generator is not None:
            g = dict(spec.generator)
            extra = {k: g.pop(k) for k in list(g) if k not in ("H", "mode", "param")}
            s, cert = generate_space(spec.n, g["H"], g["mode"], g["param"],
                                     spec.seed if seed is None else seed, **extra)
            return s, cert
        warp = _profile("warp", spec.warp, spec.constants)
        w = spec.weight or {"radial": "0"}
        if "axis_linear" in w:
            al = w["axis_linear"]
            h = _expr_profile("weight.axis_linear.h", al["h"], spec.constants) if "h" in al else constant(0.0)
            weight = DirectionalWeight(h, _expr_profile("weight.axis_linear.g", al["g"], spec.constants))
        else:
            weight = DirectionalWeight(_profile("weight", w, spec.constants))
        return RotSymSpace(spec.n, warp, weight, spec.r_max, spec.pole_closed, spec.name,
                           {"spec": spec.to_dict()}), None
    except SpaceError as exc:
        raise SpecError("space", str(exc)) from exc
    except GenerationFailure as exc:
        raise SpecError("generator", str(exc)) from exc
    except TypeError as exc:
        raise SpecError("builtin.params", str(exc)) from exc

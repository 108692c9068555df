"""Random rotationally symmetric spaces with a prescribed radial curvature bound.

Any radial lower bound on Ric_f is realizable: pick a weight f, a nonnegative
slack s, set the radial Ricci curvature to (n-1)H - f'' + s and recover the
warp from the Jacobi equation phi'' + (Ric / (n-1)) phi = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..numerics import DEFAULT_TOL, StepFailure, Tolerance, solve_jacobi
from .certificates import CurvatureCertificate, certificate_range
from .core import RotSymSpace, direction_nodes
from .profiles import BumpSum, DirectionalWeight, constant, from_jacobi

__all__ = ["GenerationFailure", "GENERATOR_MODES", "generate_space"]

GENERATOR_MODES = ("f_bounded", "f_slope", "N_tensor")


class GenerationFailure(RuntimeError):
    """No usable space for this seed; retry with another."""


def _default_length(H: float) -> float:
    if H > 0:
        return 1.25 * math.pi / math.sqrt(H)
    return 20.0 if H == 0 else 10.0


def _bumps(rng, count: int, length: float):
    centers = rng.uniform(0.0, length, count)
    widths = rng.uniform(0.4, 1.2, count) * min(1.0, max(0.35, length / 6.0))
    return centers, widths


def _weight_profile(rng, mode: str, param: float, length: float) -> BumpSum | None:
    count = int(rng.integers(3, 7))
    centers, widths = _bumps(rng, count, length)
    raw = rng.uniform(-1.0, 1.0, count)
    if mode == "f_bounded":
        if param == 0:
            return None
        amps = raw / np.abs(raw).sum() * param * rng.uniform(0.5, 0.95)
        return BumpSum(centers, widths, amps, "even")
    if mode == "f_slope":
        # f' = -alpha + sum b_i G_i with negative b_i totalling at most 0.4 a
        alpha = param * rng.uniform(0.0, 0.5)
        neg = raw < 0
        amps = np.where(neg, 0.0, raw)
        if param > 0 and neg.any():
            amps = np.where(neg, raw / np.abs(raw[neg]).sum() * 0.4 * param * rng.uniform(), amps)
        return BumpSum(centers, widths, amps, "step", slope=-alpha)
    if mode == "N_tensor":
        amps = raw / np.abs(raw).sum() * 0.5 * rng.uniform(0.2, 1.0)
        return BumpSum(centers, widths, amps, "even")
    raise ValueError(f"unknown generator mode {mode!r}; expected one of {GENERATOR_MODES}")


def _slack_profile(rng, H: float, length: float) -> BumpSum:
    count = int(rng.integers(3, 7))
    centers, widths = _bumps(rng, count, length)
    amps = rng.uniform(0.0, 0.3, count) * max(1.0, abs(H))
    return BumpSum(centers, widths, amps, "even")


def generate_space(n: int, H: float, mode: str, param: float, seed: int, *,
                   slack: bool = True, strict: float = 0.0, zero_weight: bool = False,
                   length: float | None = None, close_pole: bool = False,
                   min_length: float | None = None,
                   tol: Tolerance = DEFAULT_TOL) -> tuple[RotSymSpace, CurvatureCertificate]:
    """Draw a random space satisfying the ``mode`` hypothesis with curvature bound H.

    ``param`` is k (|f| <= k), a (f' >= -a) or N (Ric_f^N >= (n+N-1)H).
    ``strict`` adds a constant to the slack; ``zero_weight`` forces f = 0.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if mode not in GENERATOR_MODES:
        raise ValueError(f"unknown generator mode {mode!r}; expected one of {GENERATOR_MODES}")
    if param < 0 or (mode == "N_tensor" and param <= 0):
        raise ValueError(f"invalid parameter {param} for mode {mode}")
    rng = np.random.default_rng(seed)
    L = float(length) if length else _default_length(H)
    fb = None if zero_weight else _weight_profile(rng, mode, param, L)
    sb = _slack_profile(rng, H, L) if slack else None

    def f_derivs(r):
        if fb is None:
            z = np.zeros_like(np.asarray(r, dtype=float))
            return z, z, z
        return fb(r)

    def s_of(r):
        r = np.asarray(r, dtype=float)
        base = np.full(r.shape, float(strict))
        return base if sb is None else base + sb.value(r)

    def ric(r):
        _, f1, f2 = f_derivs(r)
        target = (n - 1) * H - f2 + s_of(r)
        if mode == "N_tensor":
            target = (n + param - 1) * H + f1 * f1 / param - f2 + s_of(r)
        return target

    k = lambda r: ric(r) / (n - 1)
    try:
        sol = solve_jacobi(k, L, tol)
    except StepFailure as exc:
        raise GenerationFailure(str(exc)) from exc
    closed = False
    if sol.first_zero is not None:
        if close_pole and abs(float(sol(sol.first_zero)[1])) > 1e-3:
            r_max, closed = sol.first_zero, True
        else:
            r_max = 0.95 * sol.first_zero
    else:
        r_max = sol.r_end
    need = min_length if min_length is not None else (0.5 * math.pi / math.sqrt(H) if H > 0 else 1.0)
    if r_max < need:
        raise GenerationFailure(f"usable radius {r_max:.3g} below {need:.3g} (seed {seed})")

    warp = from_jacobi(sol, {"generator": True})
    if fb is None:
        weight = DirectionalWeight(constant(0.0))
    else:
        weight = DirectionalWeight(fb.as_profile())
    gen = {"n": n, "H": H, "mode": mode, "param": param, "seed": seed, "slack": slack,
           "strict": strict, "zero_weight": zero_weight, "length": L, "close_pole": close_pole}
    label = f"generated({mode}={param:g}, n={n}, H={H:g}, seed={seed})"
    space = RotSymSpace(n, warp, weight, float(r_max), closed, label, {"generator": gen})

    # certificate straight from the construction: slack is s(r) >= 0
    hi = certificate_range(space)
    r = np.linspace(1e-3 * hi, hi, 512)
    sv = s_of(r)
    i = int(np.argmin(sv))
    kind = "ric_f_N" if mode == "N_tensor" else "ric_f"
    cert = CurvatureCertificate(float(H), kind, float(param) if mode == "N_tensor" else None,
                                lambda rr, cc=0.0: s_of(rr), float(sv[i]), (float(r[i]), 0.0),
                                (float(r[0]), hi), tol.margin_floor, _weight_children(space, mode, param, tol))
    return space, cert


def _weight_children(space: RotSymSpace, mode: str, param: float, tol: Tolerance) -> tuple:
    if mode == "N_tensor":
        return ()
    from .certificates import verify_bound
    wmode = "f_bound" if mode == "f_bounded" else "f_slope"
    return (verify_bound(space, 0.0, wmode, param, tol=tol),)

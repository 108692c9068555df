"""Cross-checks of the numerical kernels against independent computations.

Each oracle returns OracleResult rows; ``run_oracles`` collects them for the
CLI ``oracle`` subcommand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import i0

from .model import sn_derivs
from .numerics import integrate, rk4_fixed, solve_jacobi, sphere_area, sphere_average

__all__ = ["OracleResult", "ORACLES", "run_oracles"]


@dataclass(frozen=True)
class OracleResult:
    name: str
    error: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return bool(self.error <= self.tolerance)


def jacobi_vs_sn() -> list[OracleResult]:
    """solve_jacobi with k = H against sn_H, uniformly on [0, min(r_max, 0.9 pi / sqrt H)]."""
    out = []
    for H in (-2.0, -1.0, 0.0, 0.5, 1.0):
        end = min(10.0, 0.9 * math.pi / math.sqrt(H)) if H > 0 else 5.0
        sol = solve_jacobi(lambda r, H=H: np.full_like(np.asarray(r, dtype=float), H), end)
        r = np.linspace(0.0, end, 2001)
        ref = sn_derivs(H, r)[0]
        err = float(np.max(np.abs(sol.value(r) - ref) / np.maximum(1.0, np.abs(ref))))
        out.append(OracleResult(f"jacobi_vs_sn(H={H:g})", err, 1e-8))
    return out


def dual_integrator() -> list[OracleResult]:
    """phi'' + r phi = 0: adaptive solver vs fixed-step RK4 at two step sizes and DOP853."""
    k = lambda r: np.asarray(r, dtype=float)
    sol = solve_jacobi(k, 2.0)
    v = float(sol.value(np.array([2.0]))[0])
    ts, ys = rk4_fixed(k, 2.0, 1e-3)
    ts2, ys2 = rk4_fixed(k, 2.0, 5e-4)
    ivp = solve_ivp(lambda t, y: [y[1], -t * y[0]], (0.0, 2.0), [0.0, 1.0], method="DOP853",
                    rtol=1e-13, atol=1e-14)
    return [
        OracleResult("airy_profile_vs_rk4_half_step", abs(v - ys2[-1, 0]), 1e-8),
        OracleResult("rk4_step_halving", abs(ys[-1, 0] - ys2[-1, 0]), 1e-8),
        OracleResult("airy_profile_vs_dop853", abs(v - ivp.y[0, -1]), 1e-8),
    ]


def sphere_polynomials() -> list[OracleResult]:
    """sphere_average of c^d against the exact moments of the direction cosine."""
    out = []
    for n in (2, 3, 4, 5, 6):
        worst = 0.0
        for d in range(11):
            got = sphere_average(lambda c, d=d: c**d, n)
            if d % 2:
                exact = 0.0
            else:
                # E[c^d] on S^{n-1} = prod_{j<d/2} (2j+1)/(n+2j)
                exact = sphere_area(n - 1) * math.prod((2 * j + 1) / (n + 2 * j) for j in range(d // 2))
            worst = max(worst, abs(got - exact))
        out.append(OracleResult(f"sphere_average_degree_le_10(n={n})", worst, 1e-12))
    out.append(OracleResult("sphere_average_exp(n=2)",
                            abs(sphere_average(lambda c: np.exp(-c), 2) - 2 * math.pi * i0(1.0)), 1e-12))
    return out


def quadrature_library() -> list[OracleResult]:
    cases = [
        ("const", lambda t: 1.0, 0.0, 3.0, 3.0),
        ("sin", math.sin, 0.0, math.pi, 2.0),
        ("t_exp_t", lambda t: t * math.exp(t), 0.0, 1.0, 1.0),
        ("gaussian", lambda t: math.exp(-t * t), 0.0, 6.0, 0.5 * math.sqrt(math.pi) * math.erf(6.0)),
        ("log", math.log, 1.0, math.e, 1.0),
    ]
    return [OracleResult(f"integrate_{name}", abs(integrate(g, a, b) - ref), 1e-9) for name, g, a, b, ref in cases]


ORACLES = {
    "jacobi": jacobi_vs_sn,
    "dual": dual_integrator,
    "sphere": sphere_polynomials,
    "quad": quadrature_library,
}


def run_oracles(which: str = "all") -> list[OracleResult]:
    names = list(ORACLES) if which == "all" else [which]
    out = []
    for name in names:
        if name not in ORACLES:
            raise ValueError(f"unknown oracle {name!r}; known: all, {', '.join(ORACLES)}")
        out.extend(ORACLES[name]())
    return out

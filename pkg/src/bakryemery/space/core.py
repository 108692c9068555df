"""Rotationally symmetric smooth metric measure spaces.

The metric is dr^2 + phi(r)^2 g_{S^{n-1}} around a pole and the measure is
e^{-f} dvol.  All quantities are evaluated along radial geodesics from the
pole; a geodesic is labelled by the direction cosine c of its initial vector
against a fixed axis (only axis-linear weights depend on c).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..model import DomainError
from ..numerics import DEFAULT_TOL, Tolerance, cumulative_integral, sphere_area, sphere_nodes
from .profiles import DirectionalWeight, RadialProfile

__all__ = [
    "RotSymSpace",
    "SpaceError",
    "ric_radial",
    "ric_f_radial",
    "ric_f_N_radial",
    "mean_curvature",
    "mean_curvature_f",
    "area_density_f",
    "vol_f",
    "ball_volumes",
    "direction_nodes",
]


class SpaceError(ValueError):
    """A space violates one of its structural invariants."""


@dataclass(frozen=True, eq=False)
class RotSymSpace:
    n: int
    warp: RadialProfile
    weight: DirectionalWeight
    r_max: float
    pole_closed: bool = False
    label: str = "space"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise SpaceError(f"dimension must be >= 2, got {self.n}")
        if not self.r_max > 0:
            raise SpaceError("r_max must be positive")
        v0, d0, _ = self.warp(np.array([0.0]))
        if abs(v0[0]) > 1e-12:
            raise SpaceError(f"warp must vanish at the pole, phi(0) = {v0[0]:.3e}")
        if abs(d0[0] - 1.0) > 1e-9:
            raise SpaceError(f"warp needs phi'(0) = 1, got {d0[0]!r}")
        r = np.linspace(1e-3 * self.r_max, self.r_max * (1 - 1e-3), 2001)
        phi = self.warp.value(r)
        if not np.all(phi > 0):
            bad = float(r[np.argmax(~(phi > 0))])
            raise SpaceError(f"warp is not positive on (0, r_max): phi({bad:.6g}) <= 0")
        if self.pole_closed:
            end = float(self.warp.value(np.array([self.r_max]))[0])
            if abs(end) > 1e-7:
                raise SpaceError(f"pole_closed space needs phi(r_max) = 0, got {end:.3e}")

    @property
    def diameter(self) -> float | None:
        return self.r_max if self.pole_closed else None

    def with_weight(self, weight: DirectionalWeight, label: str | None = None) -> "RotSymSpace":
        return RotSymSpace(self.n, self.warp, weight, self.r_max, self.pole_closed,
                           label or self.label, dict(self.meta))


def direction_nodes(s: RotSymSpace, count: int = 17) -> np.ndarray:
    """Direction cosines used for pointwise checks; a single node for radial weights."""
    if s.weight.is_radial:
        return np.array([0.0])
    return np.linspace(-1.0, 1.0, count)


def _open(s: RotSymSpace, r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0) or np.any(r >= s.r_max):
        raise DomainError(f"r must lie in (0, {s.r_max})")
    return r


def ric_radial(s: RotSymSpace, r):
    """Ric(d_r, d_r) = -(n - 1) phi'' / phi."""
    r = _open(s, r)
    v, _, d2 = s.warp(r)
    return -(s.n - 1) * d2 / v


def ric_f_radial(s: RotSymSpace, r, c=0.0):
    """Ric_f(d_r, d_r) = Ric(d_r, d_r) + d_r^2 f along the geodesic with cosine c."""
    _, _, f2 = s.weight(_open(s, r), c)
    return ric_radial(s, r) + f2


def ric_f_N_radial(s: RotSymSpace, r, c=0.0, N: float = 1.0):
    """Ric_f^N = Ric_f - (d_r f)^2 / N."""
    if not N > 0:
        raise DomainError(f"N must be positive, got {N}")
    _, f1, _ = s.weight(_open(s, r), c)
    return ric_f_radial(s, r, c) - f1 * f1 / N


def mean_curvature(s: RotSymSpace, r):
    """Unweighted mean curvature m = (n - 1) phi' / phi of the geodesic sphere."""
    v, d1, _ = s.warp(_open(s, r))
    return (s.n - 1) * d1 / v


def mean_curvature_f(s: RotSymSpace, r, c=0.0):
    """m_f = m - d_r f."""
    _, f1, _ = s.weight(_open(s, r), c)
    return mean_curvature(s, r) - f1


def area_density_f(s: RotSymSpace, r, c=0.0):
    """A_f = e^{-f} phi^{n-1} per unit of direction-sphere measure."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0) or np.any(r > s.r_max):
        raise DomainError(f"r must lie in [0, {s.r_max}]")
    v = s.warp.value(r)
    f = s.weight(r, c)[0]
    return np.exp(-f) * v ** (s.n - 1)


def _density_integrand(s: RotSymSpace):
    if s.weight.is_radial:
        omega = sphere_area(s.n - 1)

        def g(r):
            return omega * np.exp(-s.weight.h.value(r)) * s.warp.value(r) ** (s.n - 1)
        return g
    c, w = sphere_nodes(s.n)

    def g(r):
        r = np.asarray(r, dtype=float)
        f = s.weight(r[:, None], c[None, :])[0]
        return (np.exp(-f) * w[None, :]).sum(axis=1) * s.warp.value(r) ** (s.n - 1)
    return g


def ball_volumes(s: RotSymSpace, radii, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """f-volumes of balls at sorted ``radii`` and of the shells between them.

    Returns (ball, pieces) with pieces[0] = Vol_f(B(radii[0])) and
    pieces[i] = Vol_f(A(radii[i-1], radii[i])).
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(np.diff(radii) < 0) or radii[0] < 0 or radii[-1] > s.r_max * (1 + 1e-12):
        raise DomainError("radii must be sorted inside [0, r_max]")
    knots = np.concatenate([[0.0], radii])
    pieces = cumulative_integral(_density_integrand(s), knots, tol)
    return np.cumsum(pieces), pieces


def vol_f(s: RotSymSpace, r1: float, r2: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Vol_f of the annulus r1 <= r <= r2 (the ball when r1 = 0)."""
    if not (0 <= r1 <= r2 <= s.r_max * (1 + 1e-12)):
        raise DomainError(f"need 0 <= r1 <= r2 <= r_max, got ({r1}, {r2})")
    if r1 == r2:
        return 0.0
    return float(cumulative_integral(_density_integrand(s), np.array([r1, r2]), tol)[0])

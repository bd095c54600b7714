"""Radial coordinate of the geodesic family and its closed forms.

A unit-speed geodesic at distance s from the origin has radial coordinate
rho(t) solving

    rho'' = (A'/A)(rho) (1 - rho'^2),    rho(0) = s, rho'(0) = 0   (s > 0),

while the radial geodesic is exactly rho(t) = t (integrating the singular
polar initial condition is deliberately bypassed).  For s < r the geodesic
starts inside the round ball, where rho(t) = arccos(cos s cos t) until it
meets rho = r at the entry time ell_r(s) = arccos(cos r / cos s).  At the
critical parameters (r, eps) = (pi/4, 0) everything is available in closed
form, including the angular coordinate; those formulas are the oracles for
the numerical pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ode import Switch, Trajectory, integrate_ivp
from .warp import ProfileParams, WarpFunction, solve_warp

__all__ = [
    "GeodesicParams",
    "RadialSolution",
    "entry_time",
    "radial_exit_slope",
    "solve_radial",
    "closed_rho",
    "closed_theta",
    "growth_factor",
    "comparison_lower_bound",
]

_QUARTER_PI = math.pi / 4.0


@dataclass(frozen=True)
class GeodesicParams:
    """mu = (s, r, eps): closest-approach distance s >= 0 of the geodesic to
    the origin, plus the profile parameters of the metric."""

    s: float
    r: float
    eps: float = 0.0

    def __post_init__(self) -> None:
        if self.s < 0.0:
            raise ValueError(f"s must be nonnegative, got {self.s}")
        ProfileParams(self.r, self.eps)  # validates r, eps

    @property
    def profile(self) -> ProfileParams:
        return ProfileParams(self.r, self.eps)


@dataclass(frozen=True, eq=False)
class RadialSolution:
    """rho along one geodesic: dense trajectory on [0, T] plus the entry
    time at which rho crosses r (present iff s < r)."""

    params: GeodesicParams
    trajectory: Trajectory
    entry_time: float | None

    @property
    def transition_exit_time(self) -> float | None:
        for t, label in self.trajectory.events:
            if label == "transition_exit":
                return t
        return None

    def state(self, t: float | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self.trajectory.state(t)

    def state_scalar(self, t: float) -> tuple[float, float]:
        return self.trajectory.state_scalar(t)

    def rho(self, t: float | np.ndarray) -> float | np.ndarray:
        return self.trajectory.value(t)

    def drho(self, t: float | np.ndarray) -> float | np.ndarray:
        return self.trajectory.deriv(t)


def entry_time(s: float, r: float) -> float:
    """Time at which the geodesic at distance s < r from the origin reaches
    the ball boundary rho = r: arccos(cos r / cos s)."""
    if not 0.0 <= s < r:
        raise ValueError(f"entry time requires 0 <= s < r, got s={s}, r={r}")
    return math.acos(min(1.0, math.cos(r) / math.cos(s)))


def radial_exit_slope(s: float, r: float) -> float:
    """rho'(ell_r(s)) = sqrt(cos^2 s - cos^2 r)/sin r; equals
    sqrt(cos(2s)) at r = pi/4."""
    if not 0.0 <= s < r:
        raise ValueError(f"exit slope requires 0 <= s < r, got s={s}, r={r}")
    num = max(0.0, math.cos(s) ** 2 - math.cos(r) ** 2)
    return math.sqrt(num) / math.sin(r)


@lru_cache(maxsize=None)
def _solve_radial_cached(s: float, r: float, eps: float, T: float, tol: float) -> RadialSolution:
    params = GeodesicParams(s, r, eps)
    if s == 0.0:
        # rho(t) = t exactly; the polar-coordinate singularity at the origin
        # is not integrated.
        events = [(r, "entry")]
        if eps > 0.0 and r + eps < T:
            events.append((r + eps, "transition_exit"))
        traj = Trajectory.from_affine(0.0, T, 0.0, 1.0, events=events)
        return RadialSolution(params=params, trajectory=traj, entry_time=r)

    warp = solve_warp(params.profile, tol=min(tol, 1e-12))

    def rhs(t: float, x: float, v: float) -> float:
        return warp.log_slope_scalar(x) * (1.0 - v * v)

    switches = []
    if s < r:
        switches.append(Switch(lambda t, x, v: x - r, label="entry"))
    if eps > 0.0 and s < r + eps:
        switches.append(Switch(lambda t, x, v: x - (r + eps), label="transition_exit"))

    traj = integrate_ivp(rhs, 0.0, (s, 0.0), T, tol, switches=switches)
    t_entry = None
    for t, label in traj.events:
        if label == "entry":
            t_entry = t
    return RadialSolution(params=params, trajectory=traj, entry_time=t_entry)


def solve_radial(params: GeodesicParams, T: float = 30.0, tol: float = 1e-10) -> RadialSolution:
    """Integrate the radial geodesic equation on [0, T].

    The crossing of rho = r is located by the integrator and recorded as an
    event (and, for eps > 0, the crossing of rho = r + eps as well), so no
    step straddles the curvature transition.  Results are cached.
    """
    if not T > 0.0:
        raise ValueError("horizon T must be positive")
    return _solve_radial_cached(params.s, params.r, params.eps, T, tol)


def growth_factor(t: float | np.ndarray, s: float) -> float | np.ndarray:
    """F(t, s) = cosh(t - ell(s)) + sqrt(cos 2s) sinh(t - ell(s)) at
    (r, eps) = (pi/4, 0), for 0 <= s < pi/4.  Drives every closed form
    outside the ball."""
    ell = entry_time(s, _QUARTER_PI)
    c = math.sqrt(max(0.0, math.cos(2.0 * s)))
    x = np.asarray(t, dtype=float) - ell
    out = np.cosh(x) + c * np.sinh(x)
    return float(out) if np.ndim(t) == 0 else out


def closed_rho(s: float, t: float | np.ndarray) -> float | np.ndarray:
    """Closed-form rho_s(t) at (r, eps) = (pi/4, 0), valid for all real t."""
    if s < 0.0:
        raise ValueError("s must be nonnegative")
    ta = np.abs(np.asarray(t, dtype=float))
    if s == 0.0:
        out = ta  # radial line, exactly
    elif s >= _QUARTER_PI:
        out = s + np.log(np.cosh(ta))
    else:
        ell = entry_time(s, _QUARTER_PI)
        inside = np.arccos(np.clip(math.cos(s) * np.cos(ta), -1.0, 1.0))
        with np.errstate(over="ignore"):
            outside = _QUARTER_PI + np.log(growth_factor(np.maximum(ta, ell), s))
        out = np.where(ta <= ell, inside, outside)
    return float(out) if np.ndim(t) == 0 else out


def closed_theta(s: float, t: float | np.ndarray) -> float | np.ndarray:
    """Closed-form angular coordinate theta_s(t) at (r, eps) = (pi/4, 0);
    odd in t and continuous across the entry time."""
    if s < 0.0:
        raise ValueError("s must be nonnegative")
    t_arr = np.asarray(t, dtype=float)
    ta = np.abs(t_arr)
    sgn = np.sign(t_arr)
    if s >= _QUARTER_PI:
        out = math.sqrt(2.0) * np.tanh(t_arr) * math.exp(-s + _QUARTER_PI)
    else:
        ell = entry_time(s, _QUARTER_PI)
        denom = np.sqrt(np.maximum(1.0 - (math.cos(s) * np.cos(ta)) ** 2, 1e-300))
        inside = np.arcsin(np.clip(np.sin(ta) / denom, -1.0, 1.0))
        x = np.maximum(ta, ell)
        base = math.asin(math.sqrt(max(0.0, 1.0 - math.tan(s) ** 2)))
        outside = 2.0 * math.sin(s) * np.sinh(x - ell) / growth_factor(x, s) + base
        out = sgn * np.where(ta <= ell, inside, outside)
    return float(out) if np.ndim(t) == 0 else out


def comparison_lower_bound(
    a: float, s: float, v: float, t: float | np.ndarray
) -> float | np.ndarray:
    """Solution of the constant-drift comparison equation
    rho'' = a (1 - rho'^2) with rho(0) = s, rho'(0) = v:

        s + a^{-1} log( ((1+v) e^{at} + (1-v) e^{-at}) / 2 ).

    Every radial solution of the true equation dominates this bound when a
    is a lower bound for A'/A; that is the non-trapping certificate.
    """
    if a <= 0.0:
        raise ValueError("comparison rate a must be positive")
    if abs(v) > 1.0:
        raise ValueError("|v| must not exceed 1 (unit-speed geodesics)")
    at = a * np.asarray(t, dtype=float)
    if v == 1.0:
        out = s + np.asarray(t, dtype=float)
    elif v == -1.0:
        out = s - np.asarray(t, dtype=float)
    else:
        out = s + np.logaddexp(math.log1p(v) + at, math.log1p(-v) - at) / a - math.log(2.0) / a
    return float(out) if np.ndim(t) == 0 else out

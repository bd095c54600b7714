"""Curvature profile, mollifier, and the warp function of the metric family.

The rotationally invariant metric is ``d rho^2 + A(rho)^2 g_round`` on
(0, inf) x S^n.  The radial curvature profile ``K_par`` equals +1 inside the
ball rho < r and -1 outside rho > r + eps, with a mollified monotone
transition of width eps (a sharp Heaviside jump when eps = 0).  The warp
function A solves

    A'' + K_par(rho) A = 0,     A(0) = 0,  A'(0) = 1,

understood as the C^1 weak solution when eps = 0.  Hence A = sin(rho) inside
the ball and A = a_+ e^rho + a_- e^{-rho} outside the transition zone, with
the coefficients a_+- fixed by C^1 matching.  At r = pi/4 (eps = 0) the
decaying coefficient a_- vanishes, which is the critical configuration the
search module hunts for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .ode import Trajectory, integrate_ivp

__all__ = [
    "ETA",
    "EPS0",
    "ProfileParams",
    "WarpFunction",
    "mollifier",
    "k_parallel",
    "solve_warp",
    "k_perp",
    "sec_interpolated",
]

# Default half-width of the r window and largest mollification width used by
# the parameter grids in the tests and the search; keeps r + eps < pi/2 with
# a comfortable margin.
ETA = 0.15
EPS0 = 0.15


@dataclass(frozen=True)
class ProfileParams:
    """The pair (r, eps) identifying one metric of the family."""

    r: float
    eps: float = 0.0

    def __post_init__(self) -> None:
        if not self.r > 0.0:
            raise ValueError(f"r must be positive, got {self.r}")
        if self.eps < 0.0:
            raise ValueError(f"eps must be nonnegative, got {self.eps}")
        if not self.r + self.eps < math.pi / 2:
            raise ValueError(
                f"r + eps = {self.r + self.eps} must stay below pi/2"
            )


def _bump(x: np.ndarray) -> np.ndarray:
    """exp(-1/x) for x > 0, zero otherwise (all derivatives vanish at 0)."""
    out = np.zeros_like(x)
    pos = x > 0.0
    with np.errstate(over="ignore"):
        out[pos] = np.exp(-1.0 / x[pos])
    return out


def mollifier(x: float | np.ndarray) -> float | np.ndarray:
    """Smooth monotone step: 0 for x <= 0, 1 for x >= 1, symmetric about
    x = 1/2 so that mollifier(x) + mollifier(1 - x) = 1."""
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    f = _bump(x_arr)
    g = _bump(1.0 - x_arr)
    out = np.where(x_arr <= 0.0, 0.0, np.where(x_arr >= 1.0, 1.0, f / np.where(f + g > 0, f + g, 1.0)))
    return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out


def k_parallel(params: ProfileParams, rho: float | np.ndarray) -> float | np.ndarray:
    """Radial sectional curvature profile.

    1 - 2*mollifier((rho - r)/eps) for eps > 0; the sharp step
    1 - 2*H(rho - r) for eps = 0 with the convention H(0) = 0, so the value
    at rho = r is 1.
    """
    rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
    if rho_arr.min() < 0.0:
        raise ValueError("rho must be nonnegative")
    if params.eps > 0.0:
        out = 1.0 - 2.0 * np.asarray(mollifier((rho_arr - params.r) / params.eps))
    else:
        out = np.where(rho_arr > params.r, -1.0, 1.0)
    return float(out[0]) if np.isscalar(rho) or np.ndim(rho) == 0 else out


class WarpFunction:
    """The warp function A and its first derivative, evaluated piecewise:
    sin(rho) inside the ball, a numerically integrated transition on
    [r, r+eps] when eps > 0, and the exact exponential form outside.

    Immutable after construction; evaluators are pure.
    """

    def __init__(self, params: ProfileParams, a_plus: float, a_minus: float,
                 transition: Trajectory | None):
        self.params = params
        self.a_plus = a_plus
        self.a_minus = a_minus
        self._transition = transition

    def __repr__(self) -> str:
        p = self.params
        return (f"WarpFunction(r={p.r!r}, eps={p.eps!r}, "
                f"a_plus={self.a_plus!r}, a_minus={self.a_minus!r})")

    def state(self, rho: float | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(A(rho), A'(rho)) as arrays."""
        rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
        r, eps = self.params.r, self.params.eps
        val = np.empty_like(rho_arr)
        der = np.empty_like(rho_arr)

        inner = rho_arr <= r
        val[inner] = np.sin(rho_arr[inner])
        der[inner] = np.cos(rho_arr[inner])

        outer = rho_arr >= r + eps
        ep = np.exp(rho_arr[outer])
        em = np.exp(-rho_arr[outer])
        val[outer] = self.a_plus * ep + self.a_minus * em
        der[outer] = self.a_plus * ep - self.a_minus * em

        mid = ~(inner | outer)
        if np.any(mid):
            # only reachable when eps > 0
            v, d = self._transition.state(rho_arr[mid])
            val[mid] = v
            der[mid] = d
        return val, der

    def state_scalar(self, rho: float) -> tuple[float, float]:
        """(A, A') at one radius; fast path for right-hand-side callbacks."""
        r, eps = self.params.r, self.params.eps
        if rho <= r:
            return math.sin(rho), math.cos(rho)
        if rho >= r + eps:
            ep = math.exp(rho)
            em = 1.0 / ep
            return (self.a_plus * ep + self.a_minus * em,
                    self.a_plus * ep - self.a_minus * em)
        return self._transition.state_scalar(rho)

    def log_slope_scalar(self, rho: float) -> float:
        v, d = self.state_scalar(rho)
        return d / v

    def value(self, rho: float | np.ndarray) -> float | np.ndarray:
        v, _ = self.state(rho)
        return float(v[0]) if np.isscalar(rho) or np.ndim(rho) == 0 else v

    def deriv(self, rho: float | np.ndarray) -> float | np.ndarray:
        _, d = self.state(rho)
        return float(d[0]) if np.isscalar(rho) or np.ndim(rho) == 0 else d

    def log_slope(self, rho: float | np.ndarray) -> float | np.ndarray:
        """A'(rho)/A(rho); the drift coefficient of the radial geodesic flow."""
        v, d = self.state(rho)
        out = d / v
        return float(out[0]) if np.isscalar(rho) or np.ndim(rho) == 0 else out

    def min_log_slope(self) -> float:
        """A certified a > 0 with A'/A >= a on (0, inf).

        cot(rho) is decreasing on the ball, so the interior infimum is
        cot(r); outside the transition A'/A tends monotonically to 1, so the
        exterior infimum is min(1, A'(r+eps)/A(r+eps)); the transition zone
        is scanned on a fine grid.
        """
        r, eps = self.params.r, self.params.eps
        a = min(1.0 / math.tan(r), float(self.log_slope(r + eps)), 1.0)
        if eps > 0.0:
            grid = np.linspace(r, r + eps, 257)
            a = min(a, float(np.min(self.log_slope(grid))))
        return a

    def negative_curvature_threshold(self) -> float:
        """Smallest rho0 with K_par < 0 and K_perp < 0 for all rho > rho0.

        K_par < 0 past the transition midpoint; K_perp < 0 exactly where
        A' > 1, and A' is increasing there, so the threshold solves
        A'(rho) = 1 on the exterior branch (a quadratic in e^rho).
        """
        r, eps = self.params.r, self.params.eps
        par_thr = r + eps / 2.0
        if float(self.deriv(r + eps)) >= 1.0:
            perp_thr = r + eps
        else:
            # a_+ u^2 - u - a_- = 0 with u = e^rho
            disc = 1.0 + 4.0 * self.a_plus * self.a_minus
            if disc <= 0.0:
                raise ValueError("exterior slope never reaches 1; no threshold")
            u = (1.0 + math.sqrt(disc)) / (2.0 * self.a_plus)
            perp_thr = math.log(u)
        return max(par_thr, perp_thr)


def _a_coefficients_sharp(r: float) -> tuple[float, float]:
    # C^1 matching of sin(rho) with a_+ e^rho + a_- e^{-rho} at rho = r
    a_plus = math.exp(-r) * (math.sin(r) + math.cos(r)) / 2.0
    a_minus = math.exp(r) * (math.sin(r) - math.cos(r)) / 2.0
    return a_plus, a_minus


@lru_cache(maxsize=None)
def _solve_warp_cached(r: float, eps: float, tol: float) -> WarpFunction:
    params = ProfileParams(r, eps)
    if eps == 0.0:
        a_plus, a_minus = _a_coefficients_sharp(r)
        return WarpFunction(params, a_plus, a_minus, transition=None)

    def rhs(rho: float, a: float, ap: float) -> float:
        return -(1.0 - 2.0 * mollifier((rho - r) / eps)) * a

    transition = integrate_ivp(rhs, r, (math.sin(r), math.cos(r)), r + eps, tol)
    a_end = transition.value(r + eps)
    ap_end = transition.deriv(r + eps)
    a_plus = (a_end + ap_end) * math.exp(-(r + eps)) / 2.0
    a_minus = (a_end - ap_end) * math.exp(r + eps) / 2.0
    return WarpFunction(params, a_plus, a_minus, transition=transition)


def solve_warp(params: ProfileParams, tol: float = 1e-12) -> WarpFunction:
    """Construct the warp function for the given profile parameters.

    The interior branch is exact; for eps = 0 the exterior coefficients come
    from the closed-form C^1 matching at rho = r, and for eps > 0 the
    transition is integrated once and the coefficients are read off at
    rho = r + eps.  Results are cached per (r, eps, tol).
    """
    return _solve_warp_cached(params.r, params.eps, tol)


def k_perp(warp: WarpFunction, rho: float | np.ndarray) -> float | np.ndarray:
    """Sectional curvature of 2-planes normal to the radial direction:
    A^{-2} (1 - (A')^2).  Equals 1 on the ball and tends to -1 at infinity."""
    rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
    if rho_arr.min() <= 0.0:
        raise ValueError("k_perp requires rho > 0")
    v, d = warp.state(rho_arr)
    out = (1.0 - d * d) / (v * v)
    return float(out[0]) if np.isscalar(rho) or np.ndim(rho) == 0 else out


def sec_interpolated(
    warp: WarpFunction,
    rho: float | np.ndarray,
    cos_alpha: float | np.ndarray,
) -> float | np.ndarray:
    """Sectional curvature of a plane meeting the radial direction at angle
    alpha: cos^2(alpha) K_par + sin^2(alpha) K_perp, extended to all
    cos(alpha) in [-1, 1]."""
    c = np.asarray(cos_alpha, dtype=float)
    if np.any(np.abs(c) > 1.0 + 1e-12):
        raise ValueError("cos_alpha must lie in [-1, 1]")
    c2 = np.clip(c * c, 0.0, 1.0)
    out = c2 * np.asarray(k_parallel(warp.params, rho)) + (1.0 - c2) * np.asarray(k_perp(warp, rho))
    scalar = (np.isscalar(rho) or np.ndim(rho) == 0) and (np.isscalar(cos_alpha) or np.ndim(cos_alpha) == 0)
    return float(out) if scalar else out

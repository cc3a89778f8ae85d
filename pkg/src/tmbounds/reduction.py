"""The Moser change of variables |x|^n = R^n e^{-t} and radial integrals.

Radial integrals are computed directly in r on a dyadic mesh refined toward
the origin, so they stay independent of the half-line route they are
compared against.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import (DEFAULT_TOL, DomainError, Tolerance, ValidationError,
                       alpha_n, integrate, sphere_area, unit_ball_volume)
from .profiles import Profile, RadialFunction


def moser_scale(n: int) -> float:
    """Factor n^{(n-1)/n} omega_{n-1}^{1/n} relating w to u."""
    return n ** ((n - 1.0) / n) * sphere_area(n) ** (1.0 / n)


def _sample_radii(R: float, m: int = 1000) -> np.ndarray:
    lin = np.linspace(0.0, R, m // 2)
    geo = R * np.geomspace(1e-12, 1.0, m - m // 2)
    return np.unique(np.concatenate([lin, geo]))


def check_nonincreasing(u: RadialFunction, R: float | None = None, m: int = 1000) -> None:
    R = u.outer_radius if R is None else R
    r = _sample_radii(R, m)
    vals = u(r)
    if np.any(vals < -1e-12):
        raise ValidationError("radial function must be nonnegative")
    if np.any(np.diff(vals) > 1e-12 * max(1.0, float(np.max(np.abs(vals))))):
        raise ValidationError("radial function must be nonincreasing in r")


def to_halfline(u: RadialFunction, R: float | None = None) -> Profile:
    """w(t) = n^{(n-1)/n} omega^{1/n} u(R e^{-t/n})."""
    R = u.outer_radius if R is None else R
    if not (R > 0 and math.isfinite(R)):
        raise DomainError("ball radius must be positive and finite")
    if u.outer_radius > R * (1 + 1e-12):
        raise ValidationError("support of u exceeds the ball")
    check_nonincreasing(u, R)
    n = u.n
    K = moser_scale(n)
    ufun, dufun = u.u, u.du

    def w(t):
        t = np.asarray(t, dtype=float)
        return K * ufun(R * np.exp(-np.maximum(t, 0.0) / n))

    def dw(t):
        t = np.asarray(t, dtype=float)
        r = R * np.exp(-np.maximum(t, 0.0) / n)
        return np.where(t < 0, 0.0, K * (-dufun(r)) * r / n)

    support = n * math.log(R / u.core_radius) if u.core_radius > 0 else math.inf
    bps = tuple(sorted(n * math.log(R / b) for b in u.breakpoints if 0 < b < R))
    decay = None
    if math.isinf(support):
        r = _sample_radii(R)
        slope = float(np.max(np.abs(dufun(r))))
        decay = ((2.0 * K * R * slope / n) ** n, 1.0)
    return Profile(w, dw, support_end=support, breakpoints=bps, w_limit=K * u.peak,
                   energy_decay=decay, family="from_radial", params=dict(u.params))


def from_halfline(p: Profile, n: int, R: float) -> RadialFunction:
    """Inverse substitution u(r) = w(n ln(R/r)) / (n^{(n-1)/n} omega^{1/n}); u = 0 beyond R."""
    if not R > 0:
        raise DomainError("ball radius must be positive")
    K = moser_scale(n)
    top = p.w_end()
    wf, dwf = p.w, p.dw

    def u(r):
        r = np.asarray(r, dtype=float)
        inside = (r > 0) & (r < R)
        rr = np.where(inside, r, R)
        val = wf(n * np.log(R / rr)) / K
        return np.where(r <= 0, top / K, np.where(r >= R, 0.0, val))

    def du(r):
        r = np.asarray(r, dtype=float)
        inside = (r > 0) & (r < R)
        rr = np.where(inside, r, R)
        val = -dwf(n * np.log(R / rr)) * n / (K * rr)
        return np.where(inside, val, 0.0)

    core = R * math.exp(-p.support_end / n) if math.isfinite(p.support_end) else 0.0
    bps = tuple(sorted(R * math.exp(-t / n) for t in p.breakpoints if t > 0))
    return RadialFunction(u, du, n, R, breakpoints=bps + (R,), core_radius=core,
                          family="from_halfline", params={"profile": p.family, "R": R})


# ------------------------------------------------------------ radial quadrature

def radial_integral(g: Callable[[np.ndarray], np.ndarray], u: RadialFunction, power: float,
                    tol: Tolerance = DEFAULT_TOL, core_value: float | None = None,
                    r_lo: float = 0.0, r_hi: float | None = None) -> float:
    """omega_{n-1} int_{r_lo}^{r_hi} g(r) r^power dr for power > -1.

    On the core ball of u the integrand g is assumed constant, equal to
    ``core_value``, and integrated exactly.  Elsewhere the range is cut into
    dyadic shells toward the origin, split at the breakpoints of u.
    """
    if not power > -1:
        raise DomainError("radial weight not integrable at the origin")
    R = u.outer_radius if r_hi is None else min(r_hi, u.outer_radius)
    if not math.isfinite(R):
        raise DomainError("radial quadrature needs a finite outer radius")
    omega = sphere_area(u.n)
    if R <= r_lo:
        return 0.0
    core = u.core_radius
    total = 0.0
    lo_limit = max(r_lo, core)
    if core > r_lo:
        cv = float(g(np.array([0.5 * (r_lo + min(core, R))]))[0]) if core_value is None else core_value
        top = min(core, R)
        total += cv * (top ** (power + 1) - r_lo ** (power + 1)) / (power + 1)
    if R <= lo_limit:
        return omega * total
    f = lambda r: g(r) * r ** power
    bps = sorted({b for b in u.breakpoints if lo_limit < b < R}, reverse=True)
    shell_tol = Tolerance(tol.rel_tol, 0.0, tol.max_refinements)
    hi = R
    for _ in range(4000):
        lo = max(0.5 * hi, lo_limit)
        while bps and bps[0] >= hi:
            bps.pop(0)
        if bps and bps[0] > lo:
            lo = bps.pop(0)
        total += integrate(f, float(lo), float(hi), shell_tol).value
        hi = lo
        if hi <= lo_limit:
            break
        if lo_limit == 0.0 and not bps:
            # |g| near the origin is bounded by its value at the shell edge times 2
            dens = 2.0 * float(np.max(np.abs(g(np.array([hi, 0.5 * hi])))))
            rest = dens * hi ** (power + 1) / (power + 1)
            if rest <= 1e-3 * (tol.rel_tol * abs(total) + tol.abs_tol):
                break
    return omega * total


def dirichlet_energy_radial(u: RadialFunction, tol: Tolerance = DEFAULT_TOL) -> float:
    """omega_{n-1} int_0^R |u'(r)|^n r^{n-1} dr."""
    n = u.n
    return radial_integral(lambda r: np.abs(u.du(r)) ** n, u, n - 1.0, tol, core_value=0.0)


def lebesgue_norm_radial(u: RadialFunction, tol: Tolerance = DEFAULT_TOL) -> float:
    """||u||_n^n over R^n."""
    n = u.n
    return radial_integral(lambda r: np.abs(u.u(r)) ** n, u, n - 1.0, tol,
                           core_value=abs(u.peak) ** n)


def singular_moment(u: RadialFunction, beta: float, F: Callable, tol: Tolerance = DEFAULT_TOL,
                    r_lo: float = 0.0, r_hi: float | None = None) -> float:
    """int F(u(|x|)) |x|^{-beta} dx over the shell r_lo < |x| < r_hi (whole support by default).

    F must be vectorised and finite on the range of u.
    """
    n = u.n
    if not 0 <= beta < n:
        raise DomainError(f"beta must lie in [0, n), got {beta}")
    core = float(np.asarray(F(np.array([u.peak])))[0])
    return radial_integral(lambda r: F(u.u(r)), u, n - 1.0 - beta, tol, core_value=core,
                           r_lo=r_lo, r_hi=r_hi)


@dataclass(frozen=True)
class ReductionCheck:
    energy_radial: float
    energy_halfline: float
    functional_radial: float
    functional_halfline: float
    max_rel_gap: float

    def to_json(self) -> dict:
        return {"energy_radial": self.energy_radial, "energy_halfline": self.energy_halfline,
                "functional_radial": self.functional_radial,
                "functional_halfline": self.functional_halfline, "max_rel_gap": self.max_rel_gap}


def _rel_gap(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


def ball_functional_radial(u: RadialFunction, R: float, beta: float,
                           tol: Tolerance = DEFAULT_TOL) -> float:
    """|B|^{-(1-beta/n)} v_n^{-beta/n} int_B exp[(1-beta/n) alpha_n u^{n/(n-1)}] |x|^{-beta} dx.

    Normalised so that it equals the half-line functional of to_halfline(u).
    """
    n = u.n
    c = 1.0 - beta / n
    an = alpha_n(n)
    p = n / (n - 1.0)
    vn = unit_ball_volume(n)
    F = lambda s: np.exp(c * an * np.maximum(s, 0.0) ** p)
    # include the part of the ball where u vanishes
    inner = singular_moment(u, beta, F, tol)
    outer = 0.0
    if R > u.outer_radius:
        outer = sphere_area(n) * (R ** (n - beta) - u.outer_radius ** (n - beta)) / (n - beta)
    return (inner + outer) / ((vn * R ** n) ** c * vn ** (beta / n))


def reduction_isometry_check(u: RadialFunction, R: float | None = None, beta: float = 0.0,
                             tol: Tolerance = DEFAULT_TOL) -> ReductionCheck:
    """Evaluate energy and exponential functional on both sides of the substitution."""
    from .functional import FunctionalParams, moser_functional
    from .profiles import profile_energy

    R = u.outer_radius if R is None else R
    n = u.n
    p = to_halfline(u, R)
    e_rad = dirichlet_energy_radial(u, tol)
    e_half = profile_energy(p, n, tol, closed_form=False)
    f_rad = ball_functional_radial(u, R, beta, tol)
    f_half = moser_functional(p, FunctionalParams(n, beta, alpha_n(n)), tol)
    gap = max(_rel_gap(e_rad, e_half), _rel_gap(f_rad, f_half))
    return ReductionCheck(e_rad, e_half, f_rad, f_half, gap)

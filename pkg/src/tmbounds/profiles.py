"""Half-line profiles (class K) and radial functions on balls in R^n.

A :class:`Profile` is a nondecreasing w on [0, inf) with w(0) = 0.  Callables
are vectorised over numpy arrays.  ``support_end`` is the point beyond which
the derivative vanishes; all built-in families have it finite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .numerics import (DEFAULT_TOL, DomainError, Tolerance, ValidationError,
                       integrate, unit_ball_volume)

Vectorised = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Profile:
    w: Vectorised
    dw: Vectorised
    support_end: float = math.inf
    breakpoints: tuple[float, ...] = ()
    closed_form_energy: float | None = None
    # sup of w (its limit at infinity); needed to bound tails when support is infinite
    w_limit: float | None = None
    # (M, lam) with dw(t)^n <= M e^{-lam t}, used for energy tails on infinite support
    energy_decay: tuple[float, float] | None = None
    family: str = "custom"
    params: dict = field(default_factory=dict)

    def __call__(self, t):
        return self.w(np.asarray(t, dtype=float))

    def w_end(self) -> float:
        if math.isfinite(self.support_end):
            return float(self.w(np.array([self.support_end]))[0])
        if self.w_limit is None:
            raise DomainError("profile has unbounded support and no known limit")
        return float(self.w_limit)

    def to_json(self) -> dict:
        par = dict(self.params)
        out = {"family": self.family}
        if self.family == "grid":
            out["knots"] = par.pop("knots")
            out["slopes"] = par.pop("slopes")
        out["parameters"] = par
        return out


@dataclass(frozen=True)
class GridProfile:
    """Piecewise-linear w with constant slope on each cell."""

    knots: np.ndarray
    slopes: np.ndarray

    @property
    def w_knots(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum(self.slopes * np.diff(self.knots))])

    @property
    def support_end(self) -> float:
        nz = np.nonzero(self.slopes > 0)[0]
        if len(nz) == 0:
            return 0.0
        return float(self.knots[nz[-1] + 1])

    def energy(self, n: int) -> float:
        return float(math.fsum(self.slopes ** n * np.diff(self.knots)))

    def w(self, t):
        t = np.asarray(t, dtype=float)
        return np.interp(t, self.knots, self.w_knots)

    def dw(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.knots, t, side="right") - 1
        inside = (idx >= 0) & (idx < len(self.slopes))
        return np.where(inside, self.slopes[np.clip(idx, 0, len(self.slopes) - 1)], 0.0)

    def as_profile(self, n: int) -> Profile:
        end = self.support_end
        bps = tuple(float(k) for k in self.knots[1:] if k <= end)
        return Profile(self.w, self.dw, support_end=end, breakpoints=bps,
                       closed_form_energy=self.energy(n), family="grid",
                       params={"knots": self.knots.tolist(), "slopes": self.slopes.tolist()})

    def to_json(self) -> dict:
        return {"family": "grid", "parameters": {},
                "knots": self.knots.tolist(), "slopes": self.slopes.tolist()}


@dataclass(frozen=True)
class RadialFunction:
    """Radial nonincreasing u(|x|) in dimension n, vanishing at ``outer_radius``.

    ``core_radius`` marks a ball on which u is constant (0 when there is none).
    """

    u: Vectorised
    du: Vectorised
    n: int
    outer_radius: float
    breakpoints: tuple[float, ...] = ()
    core_radius: float = 0.0
    family: str = "custom"
    params: dict = field(default_factory=dict)

    def __call__(self, r):
        return self.u(np.asarray(r, dtype=float))

    @property
    def peak(self) -> float:
        return float(self.u(np.array([0.0]))[0])

    def scaled(self, s: float) -> "RadialFunction":
        if s < 0:
            raise DomainError("scale must be nonnegative")
        u, du = self.u, self.du
        return RadialFunction(lambda r: s * u(r), lambda r: s * du(r), self.n,
                              self.outer_radius, self.breakpoints, self.core_radius,
                              self.family, {**self.params, "scale": s})


def zero_profile() -> Profile:
    return Profile(lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                   lambda t: np.zeros_like(np.asarray(t, dtype=float)),
                   support_end=0.0, closed_form_energy=0.0, family="zero")


def _check_n(n):
    if int(n) != n or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n}")
    return int(n)


def chimney_corner(n: int) -> float:
    """The right end N_n of the power-law piece of the chimney profile."""
    n = _check_n(n)
    q = n / (n - 1.0)
    return (n - 1.0) * math.exp(q ** n - q) + 1.0


def moser_chimney_profile(n: int) -> Profile:
    """Three-piece profile: linear on [0, n], (t-1)^{(n-1)/n} up to N_n, then flat.

    The linear slope ((n-1)/n)(n-1)^{-1/n} is the one that makes w(0) = 0 and
    joins the power piece in C^1 fashion at t = n.
    """
    n = _check_n(n)
    N = chimney_corner(n)
    e = (n - 1.0) / n
    slope = e * (n - 1.0) ** (-1.0 / n)
    top = (N - 1.0) ** e

    def w(t):
        t = np.asarray(t, dtype=float)
        mid = np.clip(t, n, N)
        return np.where(t <= n, slope * t, (mid - 1.0) ** e)

    def dw(t):
        t = np.asarray(t, dtype=float)
        mid = np.clip(t, n, N)
        inner = np.where(t <= n, slope, e * (mid - 1.0) ** (-1.0 / n))
        return np.where(t > N, 0.0, np.where(t < 0, 0.0, inner))

    return Profile(w, dw, support_end=N, breakpoints=(float(n), N), closed_form_energy=1.0,
                   w_limit=top, family="chimney", params={"n": n})


def chimney_segment_energies(n: int) -> tuple[float, float]:
    n = _check_n(n)
    e = (n - 1.0) / n
    first = e ** (n - 1)
    second = e ** n * math.log((chimney_corner(n) - 1.0) / (n - 1.0))
    return first, second


def linear_cap_profile(n: int, beta: float) -> Profile:
    """w = a t on [0, b], constant a b after, with b = 2(2n-1)/(1-beta/n), a^n b = 1."""
    n = _check_n(n)
    if not 0 <= beta < n:
        raise DomainError(f"beta must lie in [0, n), got {beta}")
    b = 2.0 * (2 * n - 1) / (1.0 - beta / n)
    return cap_profile(n, b, family="cap", params={"n": n, "beta": beta})


def cap_profile(n: int, b: float, family: str = "cap", params: dict | None = None) -> Profile:
    """Unit-energy linear cap with corner at b."""
    if not b > 0:
        raise DomainError("cap corner must be positive")
    a = b ** (-1.0 / n)

    def w(t):
        return a * np.clip(np.asarray(t, dtype=float), 0.0, b)

    def dw(t):
        t = np.asarray(t, dtype=float)
        return np.where((t >= 0) & (t <= b), a, 0.0)

    return Profile(w, dw, support_end=b, breakpoints=(b,), closed_form_energy=1.0,
                   w_limit=a * b, family=family, params=params or {"n": n, "b": b})


def truncated_log_radial(n: int, k: float) -> RadialFunction:
    """The truncated-logarithm family u_k on the ball of volume one."""
    n = _check_n(n)
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    vn = unit_ball_volume(n)
    height = k ** ((n - 1.0) / n) / (n * vn ** (1.0 / n))
    R = vn ** (-1.0 / n)
    r0 = (math.exp(-k) / vn) ** (1.0 / n)

    def u(r):
        r = np.asarray(r, dtype=float)
        rr = np.clip(r, r0, R)
        out = height * (-np.log(vn * rr ** n)) / k
        return np.where(r <= r0, height, np.where(r >= R, 0.0, np.maximum(out, 0.0)))

    def du(r):
        r = np.asarray(r, dtype=float)
        rr = np.clip(r, r0, R)
        inner = -height * n / (k * rr)
        return np.where((r > r0) & (r < R), inner, 0.0)

    return RadialFunction(u, du, n, R, breakpoints=(r0, R), core_radius=r0,
                          family="truncated_log", params={"n": n, "k": k})


def truncated_log_norm_closed_form(n: int, k: float) -> float:
    """||u_k||_n^n = (e^{-k} k^{n-1} + gamma(n+1, k)/k) / (v_n n^n)."""
    from .numerics import lower_incomplete_gamma
    n = _check_n(n)
    vn = unit_ball_volume(n)
    return (math.exp(-k) * k ** (n - 1) + lower_incomplete_gamma(n, k) / k) / (vn * n ** n)


def grid_profile_from_slopes(knots, slopes) -> GridProfile:
    knots = np.asarray(knots, dtype=float)
    slopes = np.asarray(slopes, dtype=float)
    if knots.ndim != 1 or len(knots) < 2:
        raise ValidationError("need at least two knots")
    if knots[0] != 0.0:
        raise ValidationError("knots must start at 0")
    if np.any(np.diff(knots) <= 0):
        raise ValidationError("knots must be strictly increasing")
    if slopes.shape != (len(knots) - 1,):
        raise ValidationError("need exactly one slope per cell")
    if np.any(slopes < 0) or not np.all(np.isfinite(slopes)):
        raise ValidationError("slopes must be finite and nonnegative")
    return GridProfile(knots.copy(), slopes.copy())


def sample_profile_slopes(p: Profile, knots) -> np.ndarray:
    """Cell slopes of the piecewise-linear interpolant of ``p`` at ``knots``."""
    knots = np.asarray(knots, dtype=float)
    return np.maximum(np.diff(p.w(knots)) / np.diff(knots), 0.0)


def profile_energy(p: Profile, n: int, tol: Tolerance = DEFAULT_TOL, closed_form: bool = True) -> float:
    """int_0^inf dw^n dt, closed form when the profile carries one."""
    if closed_form and p.closed_form_energy is not None:
        return float(p.closed_form_energy)
    end = p.support_end
    if end == 0:
        return 0.0
    f = lambda t: p.dw(t) ** n
    decay = p.energy_decay if math.isinf(end) else None
    res = integrate(f, 0.0, end, tol, points=p.breakpoints, decay=decay)
    return res.value


def check_membership(p: Profile, samples: int = 2000, horizon: float | None = None) -> None:
    """Raise ValidationError unless w(0) = 0 and w is nondecreasing on a sample grid."""
    end = p.support_end if math.isfinite(p.support_end) else (horizon or 100.0)
    t = np.linspace(0.0, max(end, 1e-9) * 1.1, samples)
    w = p.w(t)
    if abs(float(w[0])) > 1e-14:
        raise ValidationError("w(0) must vanish")
    if np.any(np.diff(w) < -1e-12 * max(1.0, float(np.max(np.abs(w))))):
        raise ValidationError("w must be nondecreasing")
    if np.any(p.dw(t) < 0):
        raise ValidationError("dw must be nonnegative")


def profile_from_json(doc: dict, n: int | None = None) -> Profile:
    fam = doc.get("family")
    par = doc.get("parameters", {})
    if fam == "chimney":
        return moser_chimney_profile(par["n"])
    if fam == "cap":
        if "beta" in par:
            return linear_cap_profile(par["n"], par["beta"])
        return cap_profile(par["n"], par["b"])
    if fam == "grid":
        g = grid_profile_from_slopes(doc["knots"], doc["slopes"])
        if n is None:
            raise ValidationError("grid profile needs the dimension n")
        return g.as_profile(n)
    if fam == "zero":
        return zero_profile()
    raise ValidationError(f"unknown profile family {fam!r}")

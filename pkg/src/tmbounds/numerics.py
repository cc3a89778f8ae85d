"""Special functions and quadrature primitives.

Everything here is a pure function of its inputs.  Quadrature is an adaptive
Gauss-Kronrod (7/15) scheme with global interval bisection; semi-infinite
ranges are truncated using a caller-supplied exponential decay witness.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ValidationError(ValueError):
    """An input object violates its structural invariants."""


class EvaluationError(ArithmeticError):
    """An integrand produced a non-finite sample."""


class ConvergenceError(RuntimeError):
    """An iterative method failed to converge; ``best`` holds the last estimate."""

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class Tolerance:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_refinements: int = 4000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.abs_tol < 0:
            raise DomainError("abs_tol must be nonnegative")
        if self.max_refinements < 1:
            raise DomainError("max_refinements must be >= 1")


DEFAULT_TOL = Tolerance()


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    refinements_used: int


# ---------------------------------------------------------------- special functions

def gamma_fn(x: float) -> float:
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def lower_incomplete_gamma(m: int, k: float) -> float:
    """int_0^k t^m e^{-t} dt for integer m >= 0.

    Uses m! (1 - e^{-k} sum_{j<=m} k^j/j!).  For k below m + 1 the bracket is
    evaluated as the tail e^{-k} sum_{j>m} k^j/j! to avoid cancellation.
    """
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a nonnegative integer, got {m}")
    if not k >= 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    m = int(m)
    if k == 0:
        return 0.0
    if math.isinf(k):
        return float(math.factorial(m))
    fact = float(math.factorial(m))
    if k < m + 1:
        term = k ** (m + 1) / math.factorial(m + 1)
        total = 0.0
        j = m + 1
        while term > 1e-18 * total:
            total += term
            j += 1
            term *= k / j
        return fact * math.exp(-k) * total
    term = 1.0
    partial = 1.0
    for j in range(1, m + 1):
        term *= k / j
        partial += term
    return fact * (1.0 - math.exp(-k) * partial)


def unit_ball_volume(n: int) -> float:
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {n}")
    n = int(n)
    # exact recurrences for integer / half-integer Gamma(n/2 + 1)
    if n % 2 == 0:
        return math.pi ** (n // 2) / math.factorial(n // 2)
    h = n // 2
    # Gamma(h + 3/2) = (2h+1)!! / 2^{h+1} sqrt(pi)
    dfact = 1.0
    for j in range(1, 2 * h + 2, 2):
        dfact *= j
    return math.pi ** (n / 2) / (dfact / 2 ** (h + 1) * math.sqrt(math.pi))


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n (omega_{n-1} = n v_n)."""
    return n * unit_ball_volume(n)


def alpha_n(n: int) -> float:
    if int(n) != n or n < 2:
        raise DomainError(f"alpha_n requires integer n >= 2, got {n}")
    return (n * unit_ball_volume(n) ** (1.0 / n)) ** (n / (n - 1.0))


_PHI_TERMS = 120


def phi_truncated_exp(n: int, x):
    """e^x minus its Taylor polynomial of degree n - 2.

    Accepts scalars or arrays.  Below the switchover x = n the tail series
    sum_{j >= n-1} x^j / j! is summed directly; above it e^x - partial sum.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"phi requires integer n >= 2, got {n}")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("phi requires x >= 0")
    n = int(n)
    switch = float(n)
    small = np.minimum(arr, switch)
    # tail series on the clipped argument
    term = small ** (n - 1) / math.factorial(n - 1)
    tail = term.copy()
    for j in range(n, n + _PHI_TERMS):
        term = term * small / j
        tail = tail + term
    with np.errstate(over="ignore"):
        big = np.exp(arr)
        term = np.ones_like(arr)
        partial = np.ones_like(arr)
        for j in range(1, n - 1):
            term = term * arr / j
            partial = partial + term
        big = big - partial
    out = np.where(arr <= switch, tail, big)
    if np.ndim(x) == 0:
        return float(out)
    return out


# ---------------------------------------------------------------- quadrature

# Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 nodes, ascending
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a: np.ndarray, b: np.ndarray):
    """Vectorised GK15 over many intervals at once."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    pts = mid[:, None] + half[:, None] * _NODES[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    if not np.all(np.isfinite(vals)):
        bad = pts[~np.isfinite(vals)][0]
        raise EvaluationError(f"integrand not finite at t={bad!r}")
    k = half * (vals @ _KW)
    g = half * (vals @ _GW)
    err = np.abs(k - g)
    return k, err


def gauss_legendre(m: int):
    return np.polynomial.legendre.leggauss(m)


def _integrate_finite(f, breaks: np.ndarray, tol: Tolerance, used: int):
    a = breaks[:-1].astype(float)
    b = breaks[1:].astype(float)
    vals, errs = _gk15(f, a, b)
    heap = [(-e, lo, hi, v) for e, lo, hi, v in zip(errs, a, b, vals)]
    heapq.heapify(heap)
    total = float(np.sum(vals))
    err = float(np.sum(errs))
    while err > max(tol.abs_tol, tol.rel_tol * abs(total)):
        if used >= tol.max_refinements:
            raise ConvergenceError(
                f"quadrature did not converge: estimate {total!r}, error {err!r}",
                best=QuadratureResult(total, err, used))
        # split a batch of the worst intervals at once
        batch = [heapq.heappop(heap) for _ in range(min(len(heap), 32))]
        lo = np.array([x[1] for x in batch])
        hi = np.array([x[2] for x in batch])
        mid = 0.5 * (lo + hi)
        v, e = _gk15(f, np.concatenate([lo, mid]), np.concatenate([mid, hi]))
        m = len(batch)
        for i in range(m):
            heapq.heappush(heap, (-e[i], lo[i], mid[i], v[i]))
            heapq.heappush(heap, (-e[m + i], mid[i], hi[i], v[m + i]))
        used += m
        # recompute sums from scratch to avoid drift of the running totals
        total = math.fsum(x[3] for x in heap)
        err = math.fsum(-x[0] for x in heap)
    return total, err, used


def integrate(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              tol: Tolerance = DEFAULT_TOL, points: Sequence[float] = (),
              decay: tuple[float, float] | None = None) -> QuadratureResult:
    """Adaptive integral of a vectorised ``f`` over [a, b].

    ``points`` are known kinks used as initial breakpoints.  For ``b = inf``
    a decay witness ``(M, lam)`` with |f(t)| <= M e^{-lam t} for t >= a is
    required; the range is truncated where the tail bound M e^{-lam T}/lam
    falls below a tenth of the tolerance, and that bound is added to the
    error estimate.
    """
    if not math.isfinite(a):
        raise DomainError("lower limit must be finite")
    if b < a:
        raise DomainError("integration limits reversed")
    tail_err = 0.0
    if math.isinf(b):
        if decay is None:
            raise DomainError("semi-infinite integral needs a decay witness (M, lam)")
        M, lam = decay
        if not lam > 0 or M < 0:
            raise DomainError("decay witness needs M >= 0 and lam > 0")
        if M == 0:
            b = a
        else:
            probe = integrate(f, a, a + 1.0 / lam, Tolerance(1e-3, 0.0, tol.max_refinements), points)
            target = 0.1 * max(tol.abs_tol, tol.rel_tol * abs(probe.value), 1e-300)
            cut = math.log(M / (lam * target)) / lam if M > lam * target else 0.0
            b = max(a + 1.0 / lam, cut)
            tail_err = M * math.exp(-lam * b) / lam
    if b == a:
        return QuadratureResult(0.0, tail_err, 0)
    inner = sorted({float(p) for p in points if a < p < b})
    breaks = np.array([a, *inner, b], dtype=float)
    value, err, used = _integrate_finite(f, breaks, tol, 0)
    return QuadratureResult(value, err + tail_err, used)

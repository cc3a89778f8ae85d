"""Elementary scalar inequalities used by the bound chains, as checkable predicates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import DEFAULT_TOL, DomainError, Tolerance, integrate

SLACK = 1e-12


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    inputs: tuple
    lhs: float
    rhs: float
    holds: bool
    margin: float

    def to_json(self) -> dict:
        return {"name": self.name, "inputs": list(self.inputs), "lhs": self.lhs, "rhs": self.rhs,
                "holds": self.holds, "margin": self.margin}


def _make(name, inputs, lhs, rhs) -> InequalityCheck:
    lhs, rhs = float(lhs), float(rhs)
    return InequalityCheck(name, tuple(inputs), lhs, rhs,
                           bool(lhs <= rhs + SLACK * max(1.0, abs(rhs))), rhs - lhs)


def _split_coef(p, eps):
    return (1.0 - (1.0 + eps) ** (-1.0 / (p - 1.0))) ** (1.0 - p)


def _split_domain(a, b, p, eps):
    if a < 0 or b < 0:
        raise DomainError("a and b must be nonnegative")
    if not p > 1:
        raise DomainError("p must exceed 1")
    if not eps > 0:
        raise DomainError("eps must be positive")


def check_split_power(a: float, b: float, p: float, eps: float) -> InequalityCheck:
    """(a+b)^p <= (1+eps) b^p + (1 - (1+eps)^{-1/(p-1)})^{1-p} a^p.

    The b-coefficient is 1+eps: the splitting on the level set applies it as
    (1+eps)|v|^{n/(n-1)} = (alpha_n/alpha)|v|^{n/(n-1)}, and with plain eps the
    inequality fails already at a = b = 1, p = 2, eps = 1.
    """
    _split_domain(a, b, p, eps)
    return _make("split_power", (a, b, p, eps), (a + b) ** p,
                 (1.0 + eps) * b ** p + _split_coef(p, eps) * a ** p)


def check_split_power_as_printed(a: float, b: float, p: float, eps: float) -> InequalityCheck:
    """The same inequality with coefficient eps on b^p (false in general)."""
    _split_domain(a, b, p, eps)
    return _make("split_power_as_printed", (a, b, p, eps), (a + b) ** p,
                 eps * b ** p + _split_coef(p, eps) * a ** p)


SPLIT_POWER_COUNTEREXAMPLE = (1.0, 1.0, 2.0, 1.0)


def check_bernoulli(x: float, alpha: float) -> InequalityCheck:
    """alpha (1 - x) <= 1 - x^alpha on 0 < x, alpha < 1."""
    if not 0 < x < 1 or not 0 < alpha < 1:
        raise DomainError("need 0 < x < 1 and 0 < alpha < 1")
    return _make("bernoulli", (x, alpha), alpha * (1.0 - x), -math.expm1(alpha * math.log(x)))


def check_concave_power(x: float, q: float) -> InequalityCheck:
    if not 0 <= x <= 1 or not 0 < q <= 1:
        raise DomainError("need 0 <= x <= 1 and 0 < q <= 1")
    return _make("concave_power", (x, q), (1.0 - x) ** q, 1.0 - q * x)


def check_subadd_power(a: float, b: float, q: float) -> InequalityCheck:
    """(a+b)^q <= a^q + q 2^{q-1} (a^{q-1} b + b^q) for q in [1, 2].

    It is applied with q = n/(n-1), which lies in (1, 2]; that is the range
    validated here.
    """
    if a < 0 or b < 0:
        raise DomainError("a and b must be nonnegative")
    if not 1 <= q <= 2:
        raise DomainError("q must lie in [1, 2]")
    cross = a ** (q - 1.0) * b if a > 0 else (b if q == 1 else 0.0)
    return _make("subadd_power", (a, b, q), (a + b) ** q,
                 a ** q + q * 2.0 ** (q - 1.0) * (cross + b ** q))


def check_jensen_exp(f: Callable[[np.ndarray], np.ndarray], tol: Tolerance = DEFAULT_TOL,
                     name: str = "jensen_exp") -> InequalityCheck:
    """exp(int_0^1 f) <= int_0^1 exp(f)."""
    mean = integrate(f, 0.0, 1.0, tol).value
    avg = integrate(lambda t: np.exp(f(t)), 0.0, 1.0, tol).value
    return _make(name, (), math.exp(mean), avg)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    samples: int
    violations: int
    worst_margin: float
    worst_inputs: tuple

    def to_json(self) -> dict:
        return {"name": self.name, "samples": self.samples, "violations": self.violations,
                "worst_margin": self.worst_margin, "worst_inputs": list(self.worst_inputs)}


def _log_uniform(rng, lo, hi, size):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _run(name, check, args) -> SuiteResult:
    worst, worst_in, bad = math.inf, (), 0
    for row in zip(*args):
        res = check(*(float(v) for v in row))
        bad += not res.holds
        rel = res.margin / max(1.0, abs(res.rhs))
        if rel < worst:
            worst, worst_in = rel, res.inputs
    return SuiteResult(name, len(args[0]), bad, worst, worst_in)


def randomized_suites(samples: int = 10_000, seed: int = 20240601) -> list[SuiteResult]:
    """Random sampling of every corrected inequality; a, b log-uniform on [1e-3, 1e3]."""
    rng = np.random.default_rng(seed)
    out = []
    a, b = _log_uniform(rng, 1e-3, 1e3, samples), _log_uniform(rng, 1e-3, 1e3, samples)
    p = rng.uniform(1.05, 3.0, samples)
    eps = _log_uniform(rng, 1e-3, 1e3, samples)
    out.append(_run("split_power", check_split_power, (a, b, p, eps)))
    x = rng.uniform(1e-9, 1 - 1e-9, samples)
    al = rng.uniform(1e-9, 1 - 1e-9, samples)
    out.append(_run("bernoulli", check_bernoulli, (x, al)))
    x = rng.uniform(0.0, 1.0, samples)
    qq = rng.uniform(1e-9, 1.0, samples)
    out.append(_run("concave_power", check_concave_power, (x, qq)))
    a, b = _log_uniform(rng, 1e-3, 1e3, samples), _log_uniform(rng, 1e-3, 1e3, samples)
    qs = rng.uniform(1.0, 2.0, samples)
    out.append(_run("subadd_power", check_subadd_power, (a, b, qs)))
    return out

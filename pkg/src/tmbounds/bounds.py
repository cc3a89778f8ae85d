"""Closed-form Trudinger-Moser upper and lower constants, and the lower-bound constructions."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .numerics import (DEFAULT_TOL, DomainError, Tolerance, alpha_n, gamma_fn,
                       phi_truncated_exp, unit_ball_volume)
from .reports import Step, compare


def _n(n):
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n}")
    return int(n)


def _nb(n, beta):
    n = _n(n)
    if not 0 <= beta < n:
        raise DomainError(f"beta must lie in [0, n), got {beta}")
    return n, float(beta), 1.0 - beta / n


def _nba(n, beta, alpha):
    n, beta, c = _nb(n, beta)
    an = alpha_n(n)
    if not 0 < alpha < an:
        raise DomainError(f"alpha must lie in (0, alpha_n) = (0, {an:.6g}), got {alpha}")
    return n, beta, c, alpha / an


def lower_bound_ball(n: int) -> float:
    n = _n(n)
    q = n / (n - 1.0)
    return (n / math.e) * (math.exp(0.25 + 1.0 / (4 * (2 * n - 1))) - 1.0) \
        + ((n - 1) * math.exp(q ** n - q) + 2.0) / math.e


def lower_bound_singular(n: int, beta: float) -> float:
    """S-level cap bound (2(2n-1)/e + 1)/(1 - beta/n)."""
    n, beta, c = _nb(n, beta)
    return (2.0 * (2 * n - 1) / math.e + 1.0) / c


def upper_bound_tm(n: int) -> int:
    n = _n(n)
    return 25 * n - 24 if n >= 4 else 36 * n - 35


def _singular_numerator(n, large_n=False):
    if large_n:
        return 11.5 * n - 10.5
    return 25 * n - 24 if n >= 4 else 196 * n - 195


def upper_bound_tm_singular(n: int, beta: float = 0.0, large_n: bool = False) -> float:
    n, beta, c = _nb(n, beta)
    return unit_ball_volume(n) ** (beta / n) * _singular_numerator(n, large_n) / c


def upper_bound_stm(n: int, beta: float, alpha: float) -> float:
    n, beta, c, ratio = _nba(n, beta, alpha)
    vb = unit_ball_volume(n) ** (beta / n)
    pref = math.exp(alpha * c) / (1.0 - ratio ** (n - 1)) ** c
    return pref * (vb * _singular_numerator(n) + 24.0) / c


def upper_bound_tm_rn(n: int, beta: float = 0.0) -> float:
    n, beta, c = _nb(n, beta)
    vb = unit_ball_volume(n) ** (beta / n)
    return math.exp(6.0 * alpha_n(n) * c) * (vb * 2.0 ** (1.0 / (n - 1)) * _singular_numerator(n) + 24.0) / c


def asymptotic_constants(n: int, beta: float = 0.0) -> tuple[float, float]:
    n, beta, c = _nb(n, beta)
    vn = unit_ball_volume(n)
    vb = vn ** (beta / n)
    small = (vn * n ** n * (n - 1) / (4.0 * gamma_fn(n + 1))) ** c * vb / (2.0 * math.e ** 2)
    big = math.exp(alpha_n(n) * c) * (vb * _singular_numerator(n) + 24.0)
    return small, big


def theoremB_factor(n: int, beta: float, alpha: float) -> float:
    n, beta, c, ratio = _nba(n, beta, alpha)
    r = ratio ** (n - 1)
    return ((1.0 - r) / r) ** c


@dataclass(frozen=True)
class BoundsRow:
    n: int
    beta: float
    alpha: float | None
    lower_tm_ball: float
    upper_tm: float
    lower_tm_sing: float
    upper_tm_sing: float
    upper_tm_sing_large_n: float
    upper_stm: float | None
    upper_tm_rn: float
    c_asym: float
    C_asym: float
    thmB_factor: float | None

    def to_json(self) -> dict:
        return {"schema_version": 1, **asdict(self)}


BOUNDS_COLUMNS = [f for f in BoundsRow.__dataclass_fields__]


def bounds_row(n: int, beta: float = 0.0, alpha: float | None = None) -> BoundsRow:
    n, beta, c = _nb(n, beta)
    vb = unit_ball_volume(n) ** (beta / n)
    small, big = asymptotic_constants(n, beta)
    return BoundsRow(
        n=n, beta=beta, alpha=alpha,
        lower_tm_ball=lower_bound_ball(n),
        upper_tm=float(upper_bound_tm(n)),
        lower_tm_sing=vb * lower_bound_singular(n, beta),
        upper_tm_sing=upper_bound_tm_singular(n, beta),
        upper_tm_sing_large_n=upper_bound_tm_singular(n, beta, large_n=True),
        upper_stm=None if alpha is None else upper_bound_stm(n, beta, alpha),
        upper_tm_rn=upper_bound_tm_rn(n, beta),
        c_asym=small, C_asym=big,
        thmB_factor=None if alpha is None else theoremB_factor(n, beta, alpha))


class PreconditionError(DomainError):
    """A precondition of a lower-bound construction fails; the message names the check."""


@dataclass
class LowerEstimate:
    value: float             # normalised functional of u_k, by quadrature
    chain_value: float       # the explicit core-ball lower bound
    target: float            # c(n, beta) / ((1-beta/n) [1-(alpha/alpha_n)^{n-1}]^{1-beta/n})
    k: float
    steps: list[Step] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(s.holds for s in self.steps if s.asserted)

    def to_json(self) -> dict:
        return {"schema_version": 1, "value": self.value, "chain_value": self.chain_value,
                "target": self.target, "k": self.k, "holds": self.holds,
                "steps": [s.to_json() for s in self.steps]}


def subcritical_lower_estimate(n: int, beta: float, alpha: float,
                               tol: Tolerance = DEFAULT_TOL) -> LowerEstimate:
    """Evaluate the truncated-log lower chain at k = 1.5 / (1 - alpha/alpha_n)."""
    from .functional import FunctionalParams, stm_functional
    from .profiles import truncated_log_norm_closed_form, truncated_log_radial

    n, beta, c, q = _nba(n, beta, alpha)
    vn = unit_ball_volume(n)
    vb = vn ** (beta / n)
    k = 1.5 / (1.0 - q)
    x = q * c * k
    steps: list[Step] = []
    phi = float(phi_truncated_exp(n, x))
    half = compare("phi_exceeds_half_exp", 0.5 * math.exp(x), phi, slack=0.0)
    half = Step(half.name, half.lhs, half.rhs, phi > 0.5 * math.exp(x), half.margin)
    steps.append(half)
    if not half.holds:
        raise PreconditionError(f"phi_exceeds_half_exp fails at x = {x:.6g}; alpha too far from alpha_n")
    window = (q - 1.0) * k
    steps.append(compare("window_lower", -2.0, window, slack=0.0))
    steps.append(compare("window_upper", window, -1.0, slack=0.0))
    norm_n = truncated_log_norm_closed_form(n, k)
    steps.append(compare("norm_bound", norm_n, 2.0 * gamma_fn(n + 1) / (vn * n ** n * k), slack=1e-12))
    ratio = (1.0 - q ** (n - 1)) / (1.0 - q)
    steps.append(compare("ratio_step", (n - 1) / 2.0, ratio, slack=1e-12))
    core = vb / c * phi * math.exp(-c * k)
    u = truncated_log_radial(n, k)
    num_norm = norm_n ** ((n - beta) / n)
    value = stm_functional(u, FunctionalParams(n, beta, alpha), tol)
    chain = vb / (2.0 * c) * math.exp((q - 1.0) * c * k) / num_norm
    steps.append(compare("core_ball_below_value", core / num_norm, value, slack=1e-8))
    steps.append(compare("half_exp_below_core", chain, core / num_norm, slack=1e-12))
    small, _ = asymptotic_constants(n, beta)
    target = small / (c * (1.0 - q ** (n - 1)) ** c)
    steps.append(compare("target_below_chain", target, chain, slack=1e-12))
    return LowerEstimate(value, chain, target, k, steps)

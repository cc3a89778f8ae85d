import math

import numpy as np
import pytest

from tmbounds.bounds import (BOUNDS_COLUMNS, PreconditionError, asymptotic_constants, bounds_row,
                             lower_bound_ball, lower_bound_singular, subcritical_lower_estimate,
                             theoremB_factor, upper_bound_stm, upper_bound_tm, upper_bound_tm_rn,
                             upper_bound_tm_singular)
from tmbounds.numerics import DomainError, alpha_n, unit_ball_volume


def test_lower_bound_ball():
    assert lower_bound_ball(2) == pytest.approx(3.74512, abs=1e-5)
    for n in range(2, 51):
        assert lower_bound_ball(n) > 2.15 * (n - 1)
    with pytest.raises(DomainError):
        lower_bound_ball(1)


def test_lower_bound_singular():
    assert lower_bound_singular(2, 0.0) == pytest.approx(6 / math.e + 1)
    assert lower_bound_singular(2, 1.0) == pytest.approx(12 / math.e + 2)
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(2, 12))
        beta = rng.uniform(0, n)
        alt = (4 * n - 2 + math.e) / (math.e * (1 - beta / n))
        assert lower_bound_singular(n, beta) == pytest.approx(alt, rel=1e-13)
    with pytest.raises(DomainError):
        lower_bound_singular(2, 2.0)


def test_upper_bound_tm():
    assert upper_bound_tm(4) == 76
    assert upper_bound_tm(2) == 37
    assert upper_bound_tm(3) == 73
    assert upper_bound_tm(10) == 226


def test_upper_bound_tm_singular():
    assert upper_bound_tm_singular(2, 0.0) == pytest.approx(197)
    assert upper_bound_tm_singular(4, 0.0) == pytest.approx(76)
    assert upper_bound_tm_singular(2, 1.0) == pytest.approx(394 * math.sqrt(math.pi), rel=1e-14)
    assert upper_bound_tm_singular(8, 0.0, large_n=True) == pytest.approx(81.5)


def test_upper_bound_stm():
    a4 = alpha_n(4)
    assert upper_bound_stm(4, 0.0, a4 / 2) == pytest.approx(math.exp(a4 / 2) * 100 / (7 / 8), rel=1e-13)
    tiny = upper_bound_stm(3, 1.0, 1e-12)
    vb = unit_ball_volume(3) ** (1 / 3)
    assert tiny == pytest.approx((vb * 393 + 24) / (2 / 3), rel=1e-9)
    # pole of order (1 - beta/n) at alpha_n
    q1, q2 = 1 - 1e-4, 1 - 1e-6
    r = upper_bound_stm(2, 0.0, q2 * alpha_n(2)) / upper_bound_stm(2, 0.0, q1 * alpha_n(2))
    assert r == pytest.approx(100.0 * math.exp((q2 - q1) * alpha_n(2)), rel=1e-8)
    with pytest.raises(DomainError):
        upper_bound_stm(2, 0.0, alpha_n(2))


def test_upper_bound_tm_rn():
    assert upper_bound_tm_rn(2, 0.0) == pytest.approx(math.exp(24 * math.pi) * 418, rel=1e-13)
    v = upper_bound_tm_rn(4, 2.0)
    assert math.isfinite(v) and v > 0


def test_asymptotic_constants():
    c, C = asymptotic_constants(2, 0.0)
    assert c == pytest.approx(math.pi / (4 * math.e ** 2), rel=1e-13)
    assert C == pytest.approx(math.exp(4 * math.pi) * 221, rel=1e-13)
    for n in range(2, 9):
        for beta in (0.0, n / 4, n / 2):
            c, C = asymptotic_constants(n, beta)
            assert 0 < c < C


def test_theoremB_factor():
    assert theoremB_factor(2, 0.0, alpha_n(2) / 2) == pytest.approx(1.0)
    a = alpha_n(3)
    vals = [theoremB_factor(3, 1.0, r * a) for r in np.linspace(0.05, 0.95, 19)]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    assert theoremB_factor(3, 1.0, (1 - 1e-9) * a) < 1e-4
    assert theoremB_factor(3, 1.0, 1e-9 * a) > 1e4


def test_bounds_row_columns():
    assert BOUNDS_COLUMNS == ["n", "beta", "alpha", "lower_tm_ball", "upper_tm", "lower_tm_sing",
                              "upper_tm_sing", "upper_tm_sing_large_n", "upper_stm", "upper_tm_rn",
                              "c_asym", "C_asym", "thmB_factor"]
    row = bounds_row(4)
    assert row.upper_tm == 76 and row.upper_stm is None
    assert row.lower_tm_ball < row.upper_tm
    assert row.lower_tm_sing < row.upper_tm_sing
    assert row.c_asym < row.C_asym
    full = bounds_row(3, 1.0, 0.5 * alpha_n(3))
    d = full.to_json()
    assert d["schema_version"] == 1
    assert all(math.isfinite(v) and v > 0 for k, v in d.items() if isinstance(v, float))


@pytest.mark.parametrize("n,beta", [(2, 0.0), (2, 1.0), (3, 0.0), (3, 1.5)])
@pytest.mark.parametrize("ratio", [0.9, 0.99])
def test_subcritical_lower_estimate(n, beta, ratio):
    est = subcritical_lower_estimate(n, beta, ratio * alpha_n(n))
    assert est.holds, [s for s in est.steps if not s.holds]
    assert est.k == pytest.approx(1.5 / (1 - ratio))
    assert est.value >= est.chain_value >= est.target


def test_subcritical_lower_estimate_precondition():
    with pytest.raises(PreconditionError, match="phi_exceeds_half_exp"):
        subcritical_lower_estimate(6, 0.0, 0.05 * alpha_n(6))

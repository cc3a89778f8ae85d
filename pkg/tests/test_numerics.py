import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tmbounds.numerics import (ConvergenceError, DomainError, EvaluationError, Tolerance, alpha_n,
                               gamma_fn, integrate, lower_incomplete_gamma, phi_truncated_exp,
                               sphere_area, unit_ball_volume)


@pytest.mark.parametrize("x, expected", [(1.0, 1.0), (3.0, 2.0), (0.5, math.sqrt(math.pi))])
def test_gamma_values(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-13)


@given(st.floats(0.5, 50.0))
def test_gamma_against_mpmath(x):
    assert gamma_fn(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)


@given(st.floats(0.5, 30.0))
def test_gamma_recurrence(x):
    assert gamma_fn(x + 1) == pytest.approx(x * gamma_fn(x), rel=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_gamma_domain(x):
    with pytest.raises(DomainError):
        gamma_fn(x)


def test_incomplete_gamma_examples():
    assert lower_incomplete_gamma(2, 60.0) == pytest.approx(2.0, rel=1e-14)
    assert lower_incomplete_gamma(2, 1.0) == pytest.approx(2 - 5 / math.e, rel=1e-13)
    assert lower_incomplete_gamma(0, 1.0) == pytest.approx(1 - 1 / math.e, rel=1e-14)
    assert lower_incomplete_gamma(3, 0.0) == 0.0
    with pytest.raises(DomainError):
        lower_incomplete_gamma(2, -0.1)


@given(st.integers(0, 12), st.floats(0.0, 80.0))
def test_incomplete_gamma_against_mpmath(m, k):
    with mpmath.workdps(40):
        ref = float(mpmath.gammainc(m + 1, 0, k))
    assert lower_incomplete_gamma(m, k) == pytest.approx(ref, rel=1e-11, abs=1e-300)


@given(st.integers(0, 8), st.floats(0.0, 40.0), st.floats(0.0, 5.0))
def test_incomplete_gamma_monotone(m, k, dk):
    assert lower_incomplete_gamma(m, k + dk) >= lower_incomplete_gamma(m, k) * (1 - 1e-14)


def test_ball_volume_and_sphere():
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(1) == 2.0
    assert unit_ball_volume(4) == pytest.approx(math.pi ** 2 / 2, rel=1e-14)
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    assert sphere_area(4) == pytest.approx(2 * math.pi ** 2)
    for n in range(1, 51):
        ref = float(mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(mpmath.mpf(n) / 2 + 1))
        assert unit_ball_volume(n) == pytest.approx(ref, rel=1e-13)
    with pytest.raises(DomainError):
        unit_ball_volume(0)


def test_ball_volume_peak_and_bound():
    vols = [unit_ball_volume(n) for n in range(1, 51)]
    assert int(np.argmax(vols)) + 1 == 5
    assert vols[4] == pytest.approx(5.2638, abs=1e-4)
    assert max(vols) < 11.5


def test_alpha_n():
    assert alpha_n(2) == pytest.approx(4 * math.pi, rel=1e-14)
    assert alpha_n(3) == pytest.approx(6 * math.sqrt(math.pi), rel=1e-14)
    assert all(alpha_n(n) > 0 for n in range(2, 51))
    with pytest.raises(DomainError):
        alpha_n(1)


def test_phi_examples():
    assert phi_truncated_exp(2, 0.0) == 0.0
    assert phi_truncated_exp(3, 1.0) == pytest.approx(math.e - 2, rel=1e-14)
    assert phi_truncated_exp(4, 1e-4) == pytest.approx(1e-12 / 6, rel=1e-8)
    with pytest.raises(DomainError):
        phi_truncated_exp(2, -1.0)


@given(st.integers(2, 10), st.floats(0.0, 60.0))
def test_phi_against_mpmath(n, x):
    with mpmath.workdps(400):
        ref = mpmath.e ** x - sum(mpmath.mpf(x) ** j / mpmath.factorial(j) for j in range(n - 1))
    assert phi_truncated_exp(n, x) == pytest.approx(float(ref), rel=1e-12, abs=1e-300)


@given(st.integers(2, 8), st.floats(0.0, 30.0), st.floats(1e-6, 1.0))
def test_phi_increasing_and_bounded(n, x, dx):
    a, b = phi_truncated_exp(n, x), phi_truncated_exp(n, x + dx)
    assert b > a or b == a == 0.0 and x + dx == 0
    assert 0 <= a <= math.exp(x)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_phi_small_argument_ratio(n):
    x = 1e-6
    assert phi_truncated_exp(n, x) / x ** (n - 1) == pytest.approx(1 / math.factorial(n - 1), rel=1e-4)


def test_phi_vectorised():
    out = phi_truncated_exp(3, np.array([0.0, 1.0, 10.0]))
    assert out.shape == (3,)


def test_integrate_examples():
    assert integrate(lambda t: np.exp(-t), 0, math.inf, decay=(1.0, 1.0)).value == pytest.approx(1, rel=1e-10)
    assert integrate(lambda t: t ** 2, 0, 1).value == pytest.approx(1 / 3, rel=1e-13)
    val = integrate(lambda t: t ** 2 * np.exp(-t), 0, math.inf, decay=(30.0, 0.5)).value
    assert val == pytest.approx(2.0, rel=1e-10)


@settings(max_examples=50)
@given(st.lists(st.floats(-10, 10), min_size=4, max_size=4), st.floats(-5, 5), st.floats(0.01, 5))
def test_integrate_cubics_exact(coef, a, width):
    b = a + width
    f = lambda t: coef[0] + coef[1] * t + coef[2] * t ** 2 + coef[3] * t ** 3
    F = lambda t: coef[0] * t + coef[1] * t ** 2 / 2 + coef[2] * t ** 3 / 3 + coef[3] * t ** 4 / 4
    tol = Tolerance()
    res = integrate(f, a, b, tol)
    assert res.value == pytest.approx(F(b) - F(a), abs=1e-11 * max(1.0, abs(F(b)) + abs(F(a))))
    assert res.error_estimate >= 0


def test_integrate_errors():
    with pytest.raises(DomainError):
        integrate(lambda t: np.exp(-t), 0, math.inf)
    with pytest.raises(EvaluationError):
        integrate(lambda t: np.where(t > 0.7, np.nan, t), 0, 1)
    with pytest.raises(ConvergenceError) as info:
        integrate(lambda t: np.sin(1 / np.maximum(t, 1e-300)), 0, 1, Tolerance(1e-14, 0.0, 50))
    assert info.value.best is not None


def test_tolerance_validation():
    with pytest.raises(DomainError):
        Tolerance(rel_tol=0)
    with pytest.raises(DomainError):
        Tolerance(abs_tol=-1)
    with pytest.raises(DomainError):
        Tolerance(max_refinements=0)

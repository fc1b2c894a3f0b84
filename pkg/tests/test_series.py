from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mpf

from selfsim.errors import SeriesDomainError
from selfsim.numerics import tolerance, workdps
from selfsim.series import (
    MomentVector,
    PowerSeries,
    derivative,
    detect_gap,
    difflog_series,
    exp_series,
    log_series,
    moments,
    moments_from_factors,
    multiply,
    scale_argument,
    series_from_moments,
)

EPS = mpf(10) ** -55


def S(*values, **kw):
    return PowerSeries.from_values(values, **kw)


def assert_coeffs(series, expected, tol=EPS):
    got = series.coefficients if isinstance(series, PowerSeries) else series
    assert len(got) == len(expected), (got, expected)
    with workdps(60):
        for a, b in zip(got, expected):
            assert abs(a - mpmath.mpmathify(b)) <= tol, (got, expected)


# ----------------------------------------------------------------- container


def test_power_series_invariants():
    f = S(1, "0.5", Fraction(1, 3))
    assert f.order == 2 and len(f) == 3
    with pytest.raises(ValueError):
        PowerSeries(())
    with pytest.raises(ValueError):
        PowerSeries((mpf(1), mpf(1)), gap=2)
    with pytest.raises(ValueError):
        PowerSeries((mpf(1), mpmath.inf))


def test_gap_detection_and_reduction():
    f = S(1, 0, 3, 0, 5)
    assert f.gap == 2
    assert_coeffs(f.reduced(), [1, 3, 5])
    assert f.reduced().variable_label == "x^2"
    assert detect_gap([0, 1, 0, 1]) == 1
    assert S(1, 0, 0).gap == 1


def test_truncate_and_call():
    f = S(1, 2, 3, 4)
    assert_coeffs(f.truncate(2), [1, 2, 3])
    assert f(2) == 1 + 4 + 12 + 32
    with pytest.raises(ValueError):
        f.truncate(4)


# ------------------------------------------------------------------ examples


def test_log_series_examples():
    with workdps(60):
        assert_coeffs(log_series(S(1, 1, "0.5")), [0, 1, 0])
        assert_coeffs(log_series(S(1, 1, 1)), [0, 1, "0.5"])
        assert_coeffs(log_series(S(2, 0, 0)), [mpmath.log(2), 0, 0])
    for bad in (S(0, 1, 1), S(-1, 1, 1)):
        with pytest.raises(SeriesDomainError):
            log_series(bad)


def test_moments_examples():
    assert_coeffs(moments(S(1, 1, "0.5")).values, [1, 0])
    assert_coeffs(moments(S(1, 1, 1)).values, [1, -1])
    assert_coeffs(moments(S(1, 2, 1)).values, [2, 2])
    # a0 is normalized away
    assert_coeffs(moments(S(3, 6, 3)).values, [2, 2])
    mv = moments(S(1, 1, 1))
    assert isinstance(mv, MomentVector) and mv.source_order == 2 and mv[1] == 1
    with pytest.raises(IndexError):
        mv[0]


def test_difflog_examples():
    assert_coeffs(difflog_series(S(1, 1, "0.5", Fraction(1, 6))), [1, 0, 0])
    assert_coeffs(difflog_series(S(1, 1, 1, 1)), [1, 1, 1])
    # through order k - 1; the third term needs the (zero) cubic coefficient
    assert_coeffs(difflog_series(S(1, 2, 1)), [2, -2])
    assert_coeffs(difflog_series(S(1, 2, 1, 0)), [2, -2, 2])
    with pytest.raises(SeriesDomainError):
        difflog_series(S(0, 1, 1))


def test_plumbing_examples():
    assert_coeffs(scale_argument(S(1, 1, 1), 2), [1, 2, 4])
    assert_coeffs(multiply(S(1, 1), S(1, -1)), [1, 0])
    assert_coeffs(derivative(S(1, 2, 3)), [2, 6])


# ---------------------------------------------------------------- properties

coeff = st.fractions(min_value=-2, max_value=2, max_denominator=50)


@given(st.lists(coeff, min_size=1, max_size=10))
def test_exp_of_log_round_trip(tail):
    with workdps(60):
        f = PowerSeries.from_values([1] + tail)
        back = exp_series(log_series(f))
        tol = tolerance(60, 2) * max(1, max(abs(c) for c in f.coefficients))
        for a, b in zip(f.coefficients, back.coefficients):
            assert abs(a - b) <= tol * max(1, abs(a)) * 10 ** len(tail)


@given(st.lists(coeff, min_size=1, max_size=8), st.fractions(min_value=1, max_value=3, max_denominator=10))
def test_difflog_is_derivative_of_log(tail, a0):
    with workdps(60):
        f = PowerSeries.from_values([a0] + tail)
        lhs = difflog_series(f).coefficients
        rhs = derivative(log_series(f)).coefficients
        for a, b in zip(lhs, rhs):
            assert abs(a - b) <= mpf(10) ** -45 * max(1, abs(a))


pair = st.tuples(
    st.fractions(min_value=-2, max_value=2, max_denominator=20).filter(lambda v: v != 0),
    st.fractions(min_value=-3, max_value=3, max_denominator=20),
)


@given(st.lists(pair, min_size=1, max_size=3), st.integers(min_value=1, max_value=7))
def test_moments_of_product_equal_power_sums(pairs, order):
    """Expand prod (1 + A x)**n by brute force and compare moments to the forward map."""
    with workdps(60):
        product = PowerSeries.from_values([1] + [0] * order)
        for A, n in pairs:
            # binomial series of (1 + A x)**n
            A, n = mpf(A.numerator) / A.denominator, mpf(n.numerator) / n.denominator
            factor = [mpmath.binomial(n, j) * A ** j for j in range(order + 1)]
            product = multiply(product, PowerSeries(tuple(factor)))
        b = moments(product).values
        forward = moments_from_factors([(mpf(A.numerator) / A.denominator, mpf(n.numerator) / n.denominator)
                                        for A, n in pairs], order)
        scale = max(1, max(abs(v) for v in forward))
        for x, y in zip(b, forward):
            assert abs(x - y) <= mpf(10) ** -45 * scale


@given(st.lists(coeff, min_size=2, max_size=8))
def test_series_from_moments_inverts_moments(tail):
    with workdps(60):
        f = PowerSeries.from_values([1] + tail)
        back = series_from_moments(moments(f).values)
        for a, b in zip(f.coefficients, back):
            assert abs(a - b) <= mpf(10) ** -45 * max(1, abs(a)) * 10 ** len(tail)


@given(st.lists(coeff, min_size=1, max_size=6), st.fractions(min_value=-3, max_value=3, max_denominator=7))
def test_scale_argument_commutes_with_evaluation(tail, lam):
    with workdps(60):
        f = PowerSeries.from_values([1] + tail)
        lam = mpf(lam.numerator) / lam.denominator
        assert abs(scale_argument(f, lam)(mpf("0.3")) - f(lam * mpf("0.3"))) <= mpf(10) ** -50

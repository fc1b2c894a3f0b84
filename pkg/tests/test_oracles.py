from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from selfsim.errors import PrecisionLoss
from selfsim.oracles import (
    DEFAULT_FIXTURE_PATH,
    OSCILLATOR_STRONG_EXPONENT,
    OracleCache,
    OracleReport,
    beta_exact,
    beta_prefactor,
    beta_sym_series,
    check_fixtures,
    oscillator_coefficients,
    oscillator_coefficients_exact,
    oscillator_energy,
    oscillator_strong_amplitude,
    soliton_fd_check,
    soliton_reference,
    z_coefficients,
    z_coefficients_exact,
    z_strong_amplitude,
    z_value,
)


# -------------------------------------------------------- partition function


def test_z_coefficient_examples():
    exact = z_coefficients_exact(4)
    assert exact[:3] == [1, Fraction(-3, 4), Fraction(105, 32)]
    series = z_coefficients(6, 60)  # cross-validated against quadrature inside
    assert series[1] == mpf(-3) / 4


def test_z_coefficients_alternate_and_grow():
    exact = z_coefficients_exact(30)
    assert all((c < 0) == (n % 2 == 1) for n, c in enumerate(exact))
    for n in range(10, 30):
        ratio = abs(exact[n + 1] / exact[n])
        assert abs(float(ratio) / (4 * n) - 1) < 0.1


def test_z_value_examples():
    assert z_value(0).value == 1
    with mpmath.workdps(30):
        g = mpf(10) ** 8
        assert abs(g ** (mpf(1) / 4) * z_value(g).value - mpf("1.0227")) < mpf("1e-3")
        assert abs(z_strong_amplitude(30) - mpmath.gamma(0.25) / (2 * mpmath.sqrt(mpmath.pi))) < mpf("1e-28")
    with pytest.raises(ValueError):
        z_value(-1)


@pytest.mark.parametrize("g", ["0.1", "1", "10"])
def test_z_value_error_estimate_bounds_refinement(g):
    coarse = z_value(g, degree=7)
    fine = z_value(g, degree=9)
    assert abs(coarse.value - fine.value) <= coarse.error_estimate + mpf("1e-25")


# --------------------------------------------------------------- oscillator


def test_oscillator_coefficient_examples():
    exact = oscillator_coefficients_exact(3)
    assert exact[:3] == [Fraction(1, 2), Fraction(3, 4), Fraction(-21, 8)]
    assert exact[3] == Fraction(333, 16)
    assert oscillator_coefficients(4, 60)[2] == mpf(-21) / 8


def test_oscillator_coefficients_alternate_and_grow():
    exact = oscillator_coefficients_exact(25)
    assert all((c < 0) == (n % 2 == 0) for n, c in enumerate(exact) if n >= 2)
    ratios = [abs(exact[n + 1] / exact[n]) / (n + 1) for n in range(8, 25)]
    # factorial growth: |e_{n+1}/e_n| ~ 3n
    assert all(abs(float(r) / 3 - 1) < 0.1 for r in ratios)


def test_oscillator_precision_guard():
    with pytest.raises(PrecisionLoss):
        oscillator_coefficients(41, 60)


def test_oscillator_energy_examples():
    assert oscillator_energy(0).value == 0.5
    big = oscillator_energy(1e6)
    assert abs(big.value / 1e6 ** float(OSCILLATOR_STRONG_EXPONENT) - 0.668) < 1e-3
    assert abs(oscillator_strong_amplitude() - 0.667986259155777) < 1e-10
    with pytest.raises(ValueError):
        oscillator_energy(-1)


def test_oscillator_energy_is_monotone():
    grid = [0, 0.01, 0.1, 0.3, 1, 3, 10, 100]
    values = [oscillator_energy(g).value for g in grid]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_oscillator_energy_matches_perturbation_theory_at_weak_coupling():
    g = 0.001
    exact = oscillator_coefficients_exact(3)
    pt = sum(float(c) * g ** n for n, c in enumerate(exact))
    assert abs(oscillator_energy(g).value - pt) < 1e-9


@pytest.mark.parametrize("g", [0.1, 1.0, 10.0])
def test_oscillator_error_estimate_bounds_refinement(g):
    first = oscillator_energy(g)
    finer = oscillator_energy(g, tol=1e-13, start=160)
    assert abs(first.value - finer.value) <= first.error_estimate + 1e-13


# ----------------------------------------------------------------- beta fn


def test_beta_fixture():
    series = beta_sym_series(3, 6, 60)
    assert list(series.coefficients) == [1] * 7
    with mpmath.workdps(60):
        assert abs(beta_prefactor(1, 3, 60) + mpf(9) / (16 * mpmath.pi ** 2)) < mpf("1e-50")
        g_pole = mpmath.sqrt(8 * mpmath.pi ** 2 / 3)
        g = g_pole * mpf("0.5")
        y = mpf("0.25")
        assert abs(beta_exact(g, 3, 60) - beta_prefactor(g, 3, 60) / (1 - y)) < mpf("1e-50")


# ----------------------------------------------------------------- solitons


def test_soliton_reference_examples():
    assert abs(soliton_reference("kink", 1, 1) - mpf("0.76159416")) < 1e-8
    assert abs(soliton_reference("bell", 2, 0) - mpmath.sqrt(2)) < 1e-15
    assert abs(soliton_reference("kink", 4, -2) + mpf("0.76159416")) < 1e-8
    with pytest.raises(ValueError):
        soliton_reference("kink", 0, 1)


@pytest.mark.parametrize("equation", ["kink", "bell"])
@pytest.mark.parametrize("eps", [0.25, 1.0, 4.0])
def test_finite_difference_cross_check(equation, eps):
    assert soliton_fd_check(equation, eps).value <= 1e-6


# ------------------------------------------------------------------ fixtures


def test_cache_round_trip(tmp_path):
    cache = OracleCache()
    calls = []

    def compute():
        calls.append(1)
        return OracleReport("Z", mpf("0.5"), "test", mpf("1e-12"))

    first = cache.lookup("Z", {"g": "2"}, "1e-12", compute)
    again = cache.lookup("Z", {"g": "2"}, "1e-12", compute)
    assert first is again and len(calls) == 1
    path = tmp_path / "fixtures.txt"
    cache.save(path)
    text = path.read_text()
    assert "version = 1" in text and "Z(g=2)@tol=1e-12" in text
    loaded = OracleCache(path)
    assert loaded.get("Z(g=2)@tol=1e-12").value == 0.5


def test_cache_rejects_unknown_version(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("version = 99\n")
    with pytest.raises(ValueError):
        OracleCache(path)


def test_stored_fixtures_reproduce():
    assert DEFAULT_FIXTURE_PATH.exists()
    rows = check_fixtures()
    assert rows and all(ok for *_, ok in rows), [r for r in rows if not r[-1]]

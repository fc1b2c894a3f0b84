"""Small-``z`` expansions of the kink and bell soliton equations.

Both equations are autonomous, so the substitution ``z = exp(x / s)`` turns
``d/dx`` into ``(1/s) z d/dz`` and the solution into a power series in ``z``
whose first coefficient is free (translation invariance).

kink: ``(eps/2) phi'' + phi - phi**3 = 0`` with ``s = sqrt(eps)/2``. In
``u = phi + 1`` this reads ``2 z**2 u'' + 2 z u' - 2 u + 3 u**2 - u**3 = 0``.

bell: ``(eps/2) phi'' - phi + phi**3 = 0`` with ``s = sqrt(eps/2)``, giving
``z**2 phi'' + z phi' - phi + phi**3 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .errors import NonConvergence
from .factor import FactorApproximant, evaluate
from .numerics import resolve_precision, to_mpf, tolerance, workdps
from .series import PowerSeries, derivative, multiply

KINK = "kink"
BELL = "bell"


@dataclass(frozen=True)
class OdeSpec:
    equation: str
    epsilon: object = 1
    order: int = 8
    normalization: object | None = None
    precision: int | None = None

    def __post_init__(self):
        if self.equation not in (KINK, BELL):
            raise ValueError(f"unknown soliton equation {self.equation!r}")
        if not to_mpf(self.epsilon) > 0:
            raise ValueError("epsilon must be positive")
        if self.order < 3:
            raise ValueError("expansion order must be at least 3")

    def c1(self) -> mpf:
        """First coefficient; defaults reproduce the centred exact solutions."""
        with workdps(self.precision):
            if self.normalization is not None:
                return to_mpf(self.normalization)
            return mpf(2) if self.equation == KINK else 2 * mpmath.sqrt(2)

    def scale(self) -> mpf:
        """``s`` in ``z = exp(x / s)``."""
        with workdps(self.precision):
            eps = to_mpf(self.epsilon)
            return mpmath.sqrt(eps) / 2 if self.equation == KINK else mpmath.sqrt(eps / 2)


def _power_coeff(c, n: int, power: int):
    """Coefficient ``n`` of ``(sum_{j>=1} c_j z**j)**power`` using ``c[1..n-1]``."""
    if power == 2:
        return mpmath.fsum(c[j] * c[n - j] for j in range(1, n))
    sq = [mpf(0)] * (n + 1)
    for m in range(2, n + 1):
        sq[m] = mpmath.fsum(c[j] * c[m - j] for j in range(1, m))
    return mpmath.fsum(c[j] * sq[n - j] for j in range(1, n - 1))


def kink_series(spec: OdeSpec) -> PowerSeries:
    """``u = phi + 1 = sum_{n=1..order} c_n z**n`` for the kink equation.

    ``2 (n**2 - 1) c_n = -[3 (u**2)_n - (u**3)_n]`` for ``n >= 2``.
    """
    if spec.equation != KINK:
        raise ValueError("kink_series needs a kink OdeSpec")
    prec = resolve_precision(spec.precision)
    with workdps(prec):
        c = [mpf(0), spec.c1()]
        for n in range(2, spec.order + 1):
            c.append(-(3 * _power_coeff(c, n, 2) - _power_coeff(c, n, 3)) / (2 * (n * n - 1)))
        series = PowerSeries(tuple(c), "z", 1, {"equation": KINK, "epsilon": str(spec.epsilon),
                                                  "shift": "u = phi + 1"})
        _check_residual(series, spec, prec)
    return series


def bell_series(spec: OdeSpec) -> PowerSeries:
    """``phi = sum_{n=1..order} c_n z**n`` for the bell equation; even ``c_n`` vanish.

    ``(n**2 - 1) c_n = -(phi**3)_n`` for ``n >= 2``.
    """
    if spec.equation != BELL:
        raise ValueError("bell_series needs a bell OdeSpec")
    prec = resolve_precision(spec.precision)
    with workdps(prec):
        c = [mpf(0), spec.c1()]
        for n in range(2, spec.order + 1):
            c.append(-_power_coeff(c, n, 3) / (n * n - 1))
        series = PowerSeries(tuple(c), "z", 1, {"equation": BELL, "epsilon": str(spec.epsilon)})
        _check_residual(series, spec, prec)
    return series


def ode_residual(series: PowerSeries, equation: str, precision: int | None = None) -> list:
    """Coefficients ``0..order`` of the transformed equation evaluated on ``series``."""
    with workdps(precision):
        u = series
        du = derivative(u)
        d2u = derivative(du)
        n = u.order
        z_du = [mpf(0)] + list(du.coefficients)
        z2_d2u = [mpf(0), mpf(0)] + list(d2u.coefficients)
        sq = multiply(u, u)
        cube = multiply(sq, u)
        out = []
        for m in range(n + 1):
            lin = z2_d2u[m] + z_du[m] - u[m]
            if equation == KINK:
                out.append(2 * lin + 3 * sq[m] - cube[m])
            else:
                out.append(lin + cube[m])
        return out


def _check_residual(series: PowerSeries, spec: OdeSpec, prec: int) -> None:
    res = ode_residual(series, spec.equation, prec)
    scale = max(mpf(1), max(abs(c) for c in series.coefficients))
    worst = max(abs(r) for r in res) / scale
    if worst > tolerance(prec, 2):
        raise NonConvergence(f"{spec.equation} series fails its own equation (residual {mpmath.nstr(worst, 5)})",
                             residual=worst)


def soliton_series(spec: OdeSpec) -> PowerSeries:
    return kink_series(spec) if spec.equation == KINK else bell_series(spec)


def map_back(fa: FactorApproximant, spec: OdeSpec, x) -> mpf:
    """``phi(x)`` from an approximant in ``z``: ``z = exp(x / s)``; the kink undoes ``u = phi + 1``."""
    with workdps(fa.precision):
        z = mpmath.exp(to_mpf(x) / spec.scale())
        value = evaluate(fa, z)
        return value - 1 if spec.equation == KINK else value


def translation_shift(spec: OdeSpec) -> mpf:
    """``x0`` such that the series with first coefficient ``c1`` solves ``phi(x - x0)``.

    Scaling ``c1`` by ``lam`` relative to the centred value multiplies ``z`` by
    ``lam``, i.e. shifts ``x`` by ``-s ln(lam)``.
    """
    with workdps(spec.precision):
        centred = OdeSpec(spec.equation, spec.epsilon, spec.order, None, spec.precision).c1()
        lam = spec.c1() / centred
        if lam <= 0:
            raise ValueError("normalization must have the sign of the centred solution")
        return -spec.scale() * mpmath.log(lam)

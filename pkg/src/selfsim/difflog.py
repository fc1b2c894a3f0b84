"""Large-variable exponents from the logarithmic derivative.

If ``f ~ C x**nu`` then ``D = f'/f ~ nu / x``. Factor-approximating ``D`` and
reading off ``x D*(x)`` as ``x -> inf`` gives ``nu`` without knowing ``C``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .errors import DomainError
from .factor import FactorApproximant, asymptotics, build, evaluate
from .numerics import resolve_precision, to_mpf, workdps
from .series import PowerSeries, difflog_series

ADMISSIBLE_TOL = mpf("1e-6")
DEFAULT_PROBE = mpf(10) ** 6


@dataclass(frozen=True)
class ExponentEstimate:
    nu: mpf
    method: str
    admissible: bool
    order_used: int
    exponent_sum: mpf | None = None
    reason: str = ""
    approximant: FactorApproximant | None = None

    def __post_init__(self):
        if self.method != "difflog":
            raise ValueError(f"unknown exponent method {self.method!r}")
        if self.admissible and not abs(self.exponent_sum + 1) <= ADMISSIBLE_TOL:
            raise ValueError("an admissible estimate needs an exponent sum of -1")


def exponent_estimate(
    f: PowerSeries,
    k: int | None = None,
    precision: int | None = None,
    probe=DEFAULT_PROBE,
    tol=ADMISSIBLE_TOL,
) -> ExponentEstimate:
    """Estimate ``nu`` in ``f(x) ~ C x**nu`` from the order-``k`` diff-log approximant.

    ``D*`` behaves as ``x**s`` at infinity, ``s`` being its leading power plus
    the gap times the exponent sum. When ``|s + 1| <= tol`` the estimate is
    admissible and ``nu`` is the limit of ``x D*(x)``, i.e. the amplitude of
    ``D*``. Otherwise ``nu`` is ``probe * D*(probe)`` and flagged.

    Build errors on the diff-log series propagate.
    """
    prec = resolve_precision(precision)
    k = f.order if k is None else int(k)
    if k < 3:
        raise ValueError(f"exponent_estimate needs k >= 3 so the diff-log series has order >= 2, got {k}")
    if f[0] == 0:
        raise ValueError("exponent_estimate needs a nonzero constant term")
    with workdps(prec):
        d = difflog_series(f.truncate(k), prec)
        fa = build(d, k - 1, precision=prec)
        asym = asymptotics(fa)
        if fa.has_exponential:
            return _probe_estimate(fa, k, probe, None, f"non-power-law: {asym.reason}")
        s = asym.exponent
        if abs(s + 1) <= to_mpf(tol):
            product = mpmath.mpc(mpmath.log(abs(fa.prefactor)))
            for p in fa.pairs:
                product += p.exponent * mpmath.log(p.amplitude)
            limit = mpmath.exp(product) * mpmath.sign(fa.prefactor)
            if abs(limit.imag) > mpmath.sqrt(mpmath.eps) * max(mpf(1), abs(limit)):
                return _probe_estimate(fa, k, probe, s, "complex limit of x D*(x)")
            return ExponentEstimate(limit.real, "difflog", True, k, s, asym.reason, fa)
        if s > -1:
            reason = f"non-power-law: D* ~ x^{mpmath.nstr(s, 6)} makes x D*(x) diverge"
        else:
            reason = f"non-power-law: D* ~ x^{mpmath.nstr(s, 6)} makes x D*(x) vanish"
        return _probe_estimate(fa, k, probe, s, reason)


def _probe_estimate(fa, k, probe, s, reason) -> ExponentEstimate:
    X = to_mpf(probe)
    try:
        nu = X * evaluate(fa, X)
    except DomainError as exc:
        nu = mpmath.nan
        reason = f"{reason}; probe outside the real domain: {exc}"
    return ExponentEstimate(nu, "difflog", False, k, s, reason or "not admissible", fa)

"""Truncated power series and the log/moment algebra behind factor approximants."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import mpmath
from mpmath import mpf

from .errors import SeriesDomainError
from .numerics import resolve_precision, to_mpf, workdps


@dataclass(frozen=True)
class PowerSeries:
    """Truncated expansion ``sum(a_n x**n, n=0..order)``.

    ``gap`` is the stride ``g`` of a series that only contains powers of
    ``x**g``; coefficients at indices not divisible by ``g`` must be zero.
    """

    coefficients: tuple
    variable_label: str = "x"
    gap: int = 1
    metadata: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        if not coeffs:
            raise ValueError("a power series needs at least one coefficient")
        for c in coeffs:
            if not mpmath.isfinite(c):
                raise ValueError(f"non-finite coefficient {c}")
        if self.gap < 1:
            raise ValueError(f"gap must be a positive integer, got {self.gap}")
        if self.gap > 1:
            for n, c in enumerate(coeffs):
                if n % self.gap and c != 0:
                    raise ValueError(f"coefficient {n} is nonzero in a gap-{self.gap} series")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_values(
        cls,
        values: Iterable,
        precision: int | None = None,
        variable_label: str = "x",
        gap: int | None = None,
        metadata: dict | None = None,
    ) -> "PowerSeries":
        """Build from ints, Fractions, decimal strings or mpf values.

        With ``gap=None`` the stride is detected from the nonzero pattern.
        """
        with workdps(precision):
            coeffs = tuple(to_mpf(v) for v in values)
        if gap is None:
            gap = detect_gap(coeffs)
        return cls(coeffs, variable_label, gap, dict(metadata or {}))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, n):
        return self.coefficients[n]

    def __call__(self, x, precision: int | None = None):
        """Value of the truncated polynomial at ``x``."""
        with workdps(precision):
            return mpmath.polyval(list(reversed(self.coefficients)), to_mpf(x))

    def truncate(self, order: int) -> "PowerSeries":
        if order < 0 or order > self.order:
            raise ValueError(f"cannot truncate order-{self.order} series to order {order}")
        coeffs = self.coefficients[: order + 1]
        return PowerSeries(coeffs, self.variable_label, detect_gap(coeffs), self.metadata)

    def valuation(self) -> int:
        """Index of the first nonzero coefficient (``order + 1`` for the zero series)."""
        for n, c in enumerate(self.coefficients):
            if c != 0:
                return n
        return len(self.coefficients)

    def reduced(self) -> "PowerSeries":
        """Series in ``y = x**gap``; identity when ``gap == 1``."""
        if self.gap == 1:
            return self
        coeffs = self.coefficients[:: self.gap]
        return PowerSeries(coeffs, f"{self.variable_label}^{self.gap}", 1, self.metadata)

    def as_strings(self, digits: int | None = None) -> list[str]:
        digits = resolve_precision(digits)
        return [mpmath.nstr(c, digits, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)
                if c != 0 else "0" for c in self.coefficients]


@dataclass(frozen=True)
class MomentVector:
    """Power sums ``b_m = sum_j n_j A_j**m`` for ``m = 1..source_order``.

    ``values[m - 1]`` holds ``b_m``.
    """

    values: tuple
    source_order: int

    def __getitem__(self, m: int):
        if m < 1:
            raise IndexError("moments are indexed from 1")
        return self.values[m - 1]

    def __len__(self) -> int:
        return len(self.values)


def detect_gap(coeffs: Sequence) -> int:
    """Largest stride ``g`` such that only indices divisible by ``g`` are nonzero.

    Series with a vanishing constant term report 1.
    """
    nonzero = [n for n, c in enumerate(coeffs) if c != 0 and n > 0]
    if not nonzero:
        return 1
    g = 0
    for n in nonzero:
        g = _gcd(g, n)
    if coeffs[0] == 0:
        return 1
    return max(g, 1)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _like(f: PowerSeries, coeffs, label: str | None = None) -> PowerSeries:
    coeffs = tuple(coeffs)
    return PowerSeries(coeffs, label or f.variable_label, detect_gap(coeffs), f.metadata)


def log_series(f: PowerSeries, precision: int | None = None) -> PowerSeries:
    """Taylor coefficients of ``ln f`` through ``f.order``.

    Uses ``m a_m = sum_j j c_j a_{m-j}`` from ``f' = f (ln f)'``.
    """
    a = f.coefficients
    if a[0] <= 0:
        raise SeriesDomainError(f"log_series needs a positive constant term, got {a[0]}")
    with workdps(precision):
        c = [mpmath.log(a[0])]
        for m in range(1, len(a)):
            acc = m * a[m]
            for j in range(1, m):
                acc -= j * c[j] * a[m - j]
            c.append(acc / (m * a[0]))
        return _like(f, c)


def exp_series(g: PowerSeries, precision: int | None = None) -> PowerSeries:
    """Taylor coefficients of ``exp(g)`` through ``g.order``."""
    c = g.coefficients
    with workdps(precision):
        e = [mpmath.exp(c[0])]
        for m in range(1, len(c)):
            acc = mpf(0)
            for j in range(1, m + 1):
                acc += j * c[j] * e[m - j]
            e.append(acc / m)
        return _like(g, e)


def moments(f: PowerSeries, precision: int | None = None) -> MomentVector:
    """``b_m = (-1)**(m+1) * m * c_m`` with ``c_m`` the coefficients of ``ln(f / a_0)``.

    For any factor set with ``prod(1 + A_j x)**n_j`` matching ``f / a_0``
    through order ``k`` these equal ``sum_j n_j A_j**m``.
    """
    a0 = f.coefficients[0]
    if a0 == 0:
        raise SeriesDomainError("moments need a nonzero constant term")
    with workdps(precision):
        normalized = PowerSeries(tuple(c / a0 for c in f.coefficients), f.variable_label, f.gap)
        logs = log_series(normalized).coefficients
        values = tuple((-1) ** (m + 1) * m * logs[m] for m in range(1, len(logs)))
    return MomentVector(values, f.order)


def moments_from_factors(pairs: Sequence[tuple], order: int, precision: int | None = None) -> list:
    """Forward map ``(A_j, n_j) -> [sum_j n_j A_j**m for m = 1..order]``."""
    with workdps(precision):
        return [mpmath.fsum(n * A ** m for A, n in pairs) for m in range(1, order + 1)]


def series_from_moments(b: Sequence, prefactor=1, precision: int | None = None) -> list:
    """Inverse of :func:`moments`: coefficients ``a_0..a_k`` from ``b_1..b_k``."""
    with workdps(precision):
        logs = [mpf(0)] + [(-1) ** (m + 1) * b[m - 1] / m for m in range(1, len(b) + 1)]
        c = logs
        e = [mpf(1)]
        for m in range(1, len(c)):
            e.append(mpmath.fsum(j * c[j] * e[m - j] for j in range(1, m + 1)) / m)
        return [prefactor * v for v in e]


def difflog_series(f: PowerSeries, precision: int | None = None) -> PowerSeries:
    """Coefficients of ``f'(x) / f(x)`` through order ``f.order - 1``."""
    a = f.coefficients
    if a[0] == 0:
        raise SeriesDomainError("difflog_series needs a nonzero constant term")
    if f.order < 1:
        raise SeriesDomainError("difflog_series needs order >= 1")
    with workdps(precision):
        df = [n * a[n] for n in range(1, len(a))]
        d = []
        for m in range(len(df)):
            acc = df[m]
            for j in range(1, m + 1):
                acc -= a[j] * d[m - j]
            d.append(acc / a[0])
        return _like(f, d, f"d ln f/d{f.variable_label}")


def scale_argument(f: PowerSeries, factor, precision: int | None = None) -> PowerSeries:
    """Series of ``f(factor * x)``."""
    with workdps(precision):
        lam = to_mpf(factor)
        return PowerSeries(tuple(c * lam ** n for n, c in enumerate(f.coefficients)),
                           f.variable_label, f.gap if lam != 0 else 1, f.metadata)


def multiply(f: PowerSeries, g: PowerSeries, precision: int | None = None) -> PowerSeries:
    """Cauchy product truncated at the smaller order."""
    k = min(f.order, g.order)
    with workdps(precision):
        coeffs = [mpmath.fsum(f[j] * g[n - j] for j in range(n + 1)) for n in range(k + 1)]
    return _like(f, coeffs)


def derivative(f: PowerSeries, precision: int | None = None) -> PowerSeries:
    if f.order == 0:
        return _like(f, [mpf(0)])
    with workdps(precision):
        return _like(f, [n * f[n] for n in range(1, len(f))])

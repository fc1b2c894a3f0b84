"""Self-similar Borel summation.

The series is divided by ``Gamma(n + 1 + u)``, the transform is replaced by its
factor approximant ``B*``, and the sum is recovered as
``int_0^inf exp(-t) t**u B*(x t) dt``. For large ``x`` this behaves as
``C x**nu`` with ``C = a0 Gamma(1+u+nu)/Gamma(1+u) prod A_j**n_j``.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from typing import Sequence

import mpmath
from mpmath import mpf

from .errors import (
    DivergenceError,
    DomainError,
    NoAdmissibleU,
    NonSummableDirection,
    ResummationError,
)
from .factor import (
    EXPONENTIAL,
    AsymptoticForm,
    FactorApproximant,
    asymptotics,
    build,
    log_abs_and_sign,
)
from .numerics import Quadrature, integrate_halfline, resolve_precision, to_mpf, tolerance, workdps
from .series import PowerSeries

log = logging.getLogger(__name__)

DEFAULT_U_GRID = ("-0.9", "10", "0.01")


@dataclass(frozen=True)
class ControlParameter:
    u: mpf
    strategy: str = "fixed"
    grid: tuple | None = None
    objective: mpf | None = None

    def __post_init__(self):
        if not self.u > -1:
            raise ValueError(f"control parameter u must exceed -1, got {self.u}")
        if self.strategy not in ("fixed", "grid-optimized"):
            raise ValueError(f"unknown u strategy {self.strategy!r}")


def as_control(u) -> ControlParameter:
    if isinstance(u, ControlParameter):
        return u
    return ControlParameter(to_mpf(u))


@dataclass(frozen=True)
class BorelResult:
    """Factor approximant of the transform plus everything needed to invert it."""

    approximant: FactorApproximant
    u: ControlParameter
    asymptotic: AsymptoticForm
    leading: mpf
    leading_power: int

    def value(self, x, tol=None) -> mpf:
        return borel_integral(self, x, tol=tol).value


def grid_points(grid: Sequence) -> list[str]:
    """Decimal grid ``u_min, u_min + step, ..., <= u_max`` as exact strings."""
    lo, hi, step = (Decimal(str(v)) for v in grid)
    if step <= 0:
        raise ValueError("u grid step must be positive")
    if lo <= -1:
        raise ValueError("u grid must stay above -1")
    points = []
    i = 0
    while lo + i * step <= hi:
        points.append(str(lo + i * step))
        i += 1
    return points


def borel_transform(f: PowerSeries, u, precision: int | None = None) -> PowerSeries:
    """Coefficients ``a_n / Gamma(n + 1 + u)``."""
    with workdps(precision):
        u = to_mpf(u)
        if not u > -1:
            raise ValueError(f"Borel control parameter must exceed -1, got {u}")
        coeffs = tuple(c * mpmath.rgamma(n + 1 + u) for n, c in enumerate(f.coefficients))
    return PowerSeries(coeffs, f.variable_label, f.gap, {**f.metadata, "borel_u": str(u)})


def _amplitude_product(fa: FactorApproximant):
    """Real ``prod A_j**n_j`` with principal branches (conjugate pairs combine)."""
    total = mpmath.mpc(0)
    for p in fa.pairs:
        total += p.exponent * mpmath.log(p.amplitude)
    return mpmath.exp(total).real


def borel_build(f: PowerSeries, k: int, u, precision: int | None = None, **build_options) -> BorelResult:
    """Factor-approximate the order-``k`` Borel transform of ``f``."""
    prec = resolve_precision(precision)
    control = as_control(u)
    transform = borel_transform(f.truncate(k), control.u, prec)
    fa = build(transform, k, precision=prec, **build_options)
    p = f.truncate(k).valuation()
    with workdps(prec):
        asym = _borel_asymptotic_form(f[p], p, fa, control.u)
    return BorelResult(fa, control, asym, f[p], p)


def _borel_asymptotic_form(leading, p: int, fa: FactorApproximant, u) -> AsymptoticForm:
    base = asymptotics(fa)
    if not base.clean:
        return base
    nu = base.exponent
    arg = 1 + u + nu
    if arg <= 0:
        return AsymptoticForm(mpmath.nan, nu, "flagged",
                              f"1 + u + nu = {mpmath.nstr(arg, 8)} <= 0: weight integral diverges at t -> 0")
    product = _amplitude_product(fa)
    if p == 0:
        ratio = mpf(1) if nu == 0 else mpmath.gamma(arg) / mpmath.gamma(1 + u)
        amplitude = leading * ratio * product
    else:
        amplitude = fa.prefactor * product * mpmath.gamma(arg)
    return AsymptoticForm(amplitude, nu)


def borel_asymptotics(f: PowerSeries, k: int, u, precision: int | None = None) -> AsymptoticForm:
    """Strong-coupling form ``C x**nu`` of the order-``k`` self-similar Borel sum."""
    return borel_build(f, k, u, precision).asymptotic


def _check_direction(fa: FactorApproximant, x) -> list:
    """Raise when the ray ``t > 0`` crosses a zero or branch point of ``B*(x t)``.

    Returns the characteristic scales ``t = 1/|A x**g|**(1/g)`` as quadrature
    breakpoints.
    """
    scales = []
    xg = x ** fa.gap
    int_tol = tolerance(fa.precision, 4)
    for idx, p in enumerate(fa.pairs):
        if p.kind == EXPONENTIAL:
            if p.rate * xg >= 1:
                raise DivergenceError(
                    f"exponential factor rate {mpmath.nstr(p.rate, 8)} makes the Borel integral diverge at x = {x}"
                )
            continue
        A, n = p.amplitude, p.exponent
        if A == 0:
            continue
        scales.append(abs(A * xg) ** (-mpf(1) / fa.gap))
        if A.imag == 0 and A.real * xg < 0:
            n_int = n.imag == 0 and abs(n.real - mpmath.nint(n.real)) <= int_tol
            if not (n_int and n.real > 0):
                t_star = (-1 / (A.real * xg)) ** (mpf(1) / fa.gap)
                raise NonSummableDirection(
                    f"factor {idx} (A={mpmath.nstr(A.real, 10)}, n={mpmath.nstr(n.real, 10)}) "
                    f"vanishes on the integration ray at t* = {mpmath.nstr(t_star, 12)}",
                    t_star=t_star,
                )
    return [s for s in scales if 0 < s < 64]


def borel_integral(result: BorelResult, x, tol=None, nodes: int | None = None):
    """Quadrature record (value, error, method) of the inverse transform at ``x``."""
    fa = result.approximant
    u = result.u.u
    with workdps(fa.precision):
        x = to_mpf(x)
        if x == 0:
            return Quadrature(result.leading if result.leading_power == 0 else mpf(0), mpf(0), "exact")
        breaks = _check_direction(fa, x)
        pref = fa.prefactor
        p = fa.leading_power

        def integrand(t):
            y = x * t
            try:
                log_abs, sign = log_abs_and_sign(fa, y)
            except DomainError as exc:
                raise ValueError(str(exc)) from exc
            if sign == 0:
                return mpf(0)
            return pref * y ** p * sign * mpmath.exp(log_abs)

        kwargs = {} if nodes is None else {"nodes": nodes}
        return integrate_halfline(integrand, u, tol=tol, precision=fa.precision, breakpoints=breaks, **kwargs)


def borel_sum(f: PowerSeries, k: int, u, x, precision: int | None = None, tol=None) -> mpf:
    """Self-similar Borel sum of order ``k`` at ``x``; ``x = 0`` returns ``a0`` exactly."""
    result = borel_build(f, k, u, precision)
    return borel_integral(result, x, tol=tol).value


# ------------------------------------------------------------------ select u


def _observable(f, k, u, observable, precision):
    result = borel_build(f, k, u, precision)
    if observable == "exponent":
        if not result.asymptotic.clean:
            return None
        return result.asymptotic.exponent
    if observable == "amplitude":
        if not result.asymptotic.clean:
            return None
        return result.asymptotic.amplitude
    kind, probe = observable
    if kind != "value":
        raise ValueError(f"unknown observable {observable!r}")
    return borel_integral(result, probe).value


def _scan_point(args):
    f, k, u, observable, precision = args
    try:
        return _observable(f, k, u, observable, precision)
    except ResummationError as exc:
        log.debug("order %d, u=%s skipped: %s", k, u, exc)
        return None


def scan_u(f: PowerSeries, orders: Sequence[int], grid=DEFAULT_U_GRID, observable="exponent",
           precision: int | None = None, workers: int = 1) -> dict:
    """``{(k, u_string): observable or None}`` over a grid; failures map to None.

    With ``workers > 1`` points are evaluated in a process pool (the mpmath
    precision is process-global, so threads would interfere). Results are
    assembled in grid order either way.
    """
    prec = resolve_precision(precision)
    points = grid_points(grid)
    tasks = [(f, k, u, observable, prec) for k in orders for u in points]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_scan_point, tasks, chunksize=max(1, len(tasks) // (8 * workers))))
    else:
        values = [_scan_point(t) for t in tasks]
    return {(k, u): v for (_, k, u, _, _), v in zip(tasks, values)}


def _refine_crossing(f, k, observable, precision, lo_u, hi_u, d_lo, d_hi, zero_tol, max_iter=60):
    """Illinois iteration for a sign change of ``obs_k - obs_{k-1}`` on ``[lo_u, hi_u]``.

    Returns ``(u, |difference|)`` or None when an interior evaluation fails.
    """
    a, b, fa_, fb = lo_u, hi_u, d_lo, d_hi
    best = (a, abs(fa_)) if abs(fa_) <= abs(fb) else (b, abs(fb))
    for _ in range(max_iter):
        c = (a * fb - b * fa_) / (fb - fa_)
        try:
            hi = _observable(f, k, c, observable, precision)
            lo = _observable(f, k - 1, c, observable, precision)
        except ResummationError:
            return None
        if hi is None or lo is None:
            return None
        fc = hi - lo
        if abs(fc) < best[1]:
            best = (c, abs(fc))
        if abs(fc) <= zero_tol or abs(b - a) <= zero_tol:
            break
        if fc * fb < 0:
            a, fa_ = b, fb
        else:
            fa_ = fa_ / 2
        b, fb = c, fc
    return best


def select_u(
    f: PowerSeries,
    k: int,
    grid=DEFAULT_U_GRID,
    observable="exponent",
    precision: int | None = None,
    table: dict | None = None,
    refine: bool = True,
) -> ControlParameter:
    """Control parameter minimizing ``|obs_k(u) - obs_{k-1}(u)|`` over a grid.

    ``observable`` is ``"exponent"`` (default), ``"amplitude"`` or
    ``("value", x)``. Points where either order fails or is flagged are
    skipped. A precomputed ``table`` from :func:`scan_u` may be passed in.

    Wherever the difference changes sign between neighbouring admissible
    grid points the curves cross, and with ``refine`` the crossing is
    located to working precision. Every crossing attains the minimum value
    zero, so among them the tie-break decides: smallest ``|u|``, then the
    earlier grid index. Without any crossing the plain grid minimum is used
    with the same tie-break.
    """
    if k < 3:
        raise ValueError("select_u compares orders k and k-1, so it needs k >= 3")
    prec = resolve_precision(precision)
    points = grid_points(grid)
    if table is None:
        table = scan_u(f, [k - 1, k], grid, observable, prec)
    with workdps(prec):
        zero_tol = tolerance(prec, 3)
        diffs = []
        for u in points:
            hi, lo = table.get((k, u)), table.get((k - 1, u))
            diffs.append(None if hi is None or lo is None else hi - lo)

        candidates = []
        for index, (u, d) in enumerate(zip(points, diffs)):
            if d is not None:
                candidates.append((abs(d), to_mpf(u), index))
        if refine:
            for index in range(len(points) - 1):
                d0, d1 = diffs[index], diffs[index + 1]
                if d0 is None or d1 is None or abs(d0) <= zero_tol or abs(d1) <= zero_tol:
                    continue
                if (d0 < 0) == (d1 < 0):
                    continue
                found = _refine_crossing(f, k, observable, prec, to_mpf(points[index]),
                                         to_mpf(points[index + 1]), d0, d1, zero_tol)
                if found is None:
                    log.debug("order %d: crossing in [%s, %s] not refined", k, points[index], points[index + 1])
                    continue
                candidates.append((found[1], found[0], index))
        if not candidates:
            raise NoAdmissibleU(f"no admissible u on grid {tuple(grid)} for order {k}")

        def key(c):
            diff, u, index = c
            return (mpf(0) if diff <= zero_tol else diff, abs(u), index)

        diff, u, _ = min(candidates, key=key)
        strategy = "fixed" if len(points) == 1 else "grid-optimized"
        return ControlParameter(u, strategy, tuple(str(g) for g in grid), diff)

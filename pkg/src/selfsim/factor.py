"""Self-similar factor approximants ``a0 * x**p * prod(1 + A_j x**g)**n_j``.

The training conditions are linearized through the log series: matching a
truncated expansion through order ``k`` is equivalent to the power-sum
equations ``sum_j n_j A_j**m = b_m`` (``m = 1..k``) on the moments ``b_m``.
Amplitudes come from a Prony solve (Hankel system, then polynomial roots) and
exponents from a (confluent) Vandermonde solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import mpmath
from mpmath import mpc, mpf

from .errors import (
    AccuracyLoss,
    DomainError,
    NonRealResult,
    SeriesDomainError,
    SingularHankel,
    SingularSystem,
)
from .numerics import (
    hankel_rank,
    polynomial_roots,
    resolve_precision,
    solve_hankel,
    to_mpf,
    tolerance,
    workdps,
)
from .series import PowerSeries, detect_gap, moments

POWER = "power"
EXPONENTIAL = "exponential"
GUARD_DIGITS = 20


def factor_count(k: int) -> int:
    """Number of factor pairs at order ``k``: ``k/2`` for even, ``(k+1)/2`` for odd ``k``."""
    return (k + 1) // 2


@dataclass(frozen=True)
class FactorPair:
    """One factor ``(1 + A y)**n``, or ``exp(rate * y)`` for the ``A -> 0`` limit."""

    amplitude: mpc
    exponent: mpc
    kind: str = POWER
    rate: mpf | None = None

    @property
    def is_real(self) -> bool:
        return self.amplitude.imag == 0 and self.exponent.imag == 0

    @property
    def pair_product(self):
        """``n * A``; for an exponential factor its finite limit ``rate``."""
        if self.kind == EXPONENTIAL:
            return mpc(self.rate)
        return self.exponent * self.amplitude

    def scaled(self, lam) -> "FactorPair":
        """``A -> lam * A``, ``n -> n / lam`` (keeps ``n * A``)."""
        if self.kind == EXPONENTIAL:
            return self
        return replace(self, amplitude=self.amplitude * lam, exponent=self.exponent / lam)


@dataclass(frozen=True)
class FactorApproximant:
    prefactor: mpf
    pairs: tuple
    order: int
    effective_order: int
    leading_power: int = 0
    gap: int = 1
    odd_fix: dict | None = None
    residual: mpf = mpf(0)
    hankel_condition: mpf = mpf(1)
    effective_rank: int = 0
    precision: int = 60
    notes: tuple = ()
    variable_label: str = "x"

    @property
    def factor_count(self) -> int:
        """Nominal number of pairs ``N_k`` for the requested order."""
        return factor_count(self.order)

    @property
    def has_exponential(self) -> bool:
        return any(p.kind == EXPONENTIAL for p in self.pairs)

    def __call__(self, x):
        return evaluate(self, x)


@dataclass(frozen=True)
class AsymptoticForm:
    """Large-argument behaviour ``amplitude * x**exponent``."""

    amplitude: mpf
    exponent: mpf
    validity: str = "clean"
    reason: str = ""

    @property
    def clean(self) -> bool:
        return self.validity == "clean"


@dataclass(frozen=True)
class DiagnosticsReport:
    S_k_values: dict
    s_k: mpf
    max_pair_product: mpf
    hankel_condition: mpf
    effective_rank: int
    newest_pair_product: mpf = mpf(0)
    extra: dict = field(default_factory=dict)


# --------------------------------------------------------------------- build


def _group_roots(roots: Sequence[mpc], rel_tol: mpf, zero_tol: mpf) -> list[tuple[mpc, int]]:
    """Cluster nearly equal roots; returns (centre, multiplicity) with zero first."""
    clusters: list[list[mpc]] = []
    zeros = [z for z in roots if abs(z) < zero_tol]
    for z in roots:
        if abs(z) < zero_tol:
            continue
        for cluster in clusters:
            centre = cluster[0]
            if abs(z - centre) <= rel_tol * max(mpf(1), abs(centre)):
                cluster.append(z)
                break
        else:
            clusters.append([z])
    grouped = []
    if zeros:
        grouped.append((mpc(0), len(zeros)))
    for cluster in clusters:
        centre = mpmath.fsum(cluster) / len(cluster)
        if all(z.imag == 0 for z in cluster):
            centre = mpc(centre.real, 0)
        grouped.append((centre, len(cluster)))
    return grouped


def _solve_exponents(beta: Sequence, grouped: list[tuple[mpc, int]]):
    """Confluent Vandermonde solve ``sum_j n_j z_j**m = beta_m``.

    A zero root of multiplicity ``mu`` contributes columns ``delta(m, q+1)``
    (``exp`` of a polynomial); a nonzero root contributes ``m**q z**m``. Only
    the ``q = 0`` coefficients describe factors; the others must vanish, which
    the accuracy check enforces.
    """
    columns = []
    for z, mult in grouped:
        for q in range(mult):
            if z == 0:
                columns.append((z, q, lambda m, q=q: mpc(1) if m == q + 1 else mpc(0)))
            else:
                columns.append((z, q, lambda m, z=z, q=q: mpc(m) ** q * z ** m))
    size = len(columns)
    if size == 0:
        return []
    M = mpmath.matrix(size, size)
    rhs = mpmath.matrix(size, 1)
    for i in range(size):
        m = i + 1
        rhs[i] = beta[i]
        for j, (_, _, col) in enumerate(columns):
            M[i, j] = col(m)
    sol = mpmath.lu_solve(M, rhs)
    out = []
    for j, (z, q, _) in enumerate(columns):
        if q == 0:
            out.append((z, sol[j]))
    return out


def _symmetrize(values: list[tuple[mpc, mpc]], real_tol: mpf) -> list[tuple[mpc, mpc]]:
    """Force real roots to carry real exponents and conjugate roots conjugate exponents."""
    fixed = []
    for z, n in values:
        if z.imag == 0:
            if abs(n.imag) > real_tol * max(mpf(1), abs(n)):
                raise NonRealResult(f"real amplitude {mpmath.nstr(z.real, 8)} got complex exponent {mpmath.nstr(n, 8)}")
            fixed.append((z, mpc(n.real, 0)))
        else:
            fixed.append((z, n))
    out = []
    for i, (z, n) in enumerate(fixed):
        if z.imag > 0:
            j = min((j for j, (w, _) in enumerate(fixed) if w.imag < 0),
                    key=lambda j: abs(fixed[j][0] - mpmath.conj(z)), default=None)
            if j is None:
                raise NonRealResult("complex amplitude without conjugate partner")
            n_mean = (n + mpmath.conj(fixed[j][1])) / 2
            out.append((z, n_mean))
            out.append((mpmath.conj(z), mpmath.conj(n_mean)))
        elif z.imag == 0:
            out.append((z, n))
    if len(out) != len(fixed):
        raise NonRealResult("complex amplitudes do not pair into conjugates")
    return out


def reexpand(fa: FactorApproximant, order: int, reduced: bool = False) -> PowerSeries:
    """Taylor coefficients of the approximant.

    With ``reduced=True`` the expansion is in ``y = x**gap`` without the
    ``x**leading_power`` factor, i.e. the series the factors were fitted to.
    """
    with workdps(fa.precision):
        logs = [mpc(0)] * (order + 1)
        for p in fa.pairs:
            if p.kind == EXPONENTIAL:
                if order >= 1:
                    logs[1] += p.rate
                continue
            for m in range(1, order + 1):
                logs[m] += p.exponent * (-1) ** (m + 1) * p.amplitude ** m / m
        e = [mpc(1)]
        for m in range(1, order + 1):
            e.append(mpmath.fsum(j * logs[j] * e[m - j] for j in range(1, m + 1)) / m)
        coeffs = [fa.prefactor * v.real for v in e]
        if reduced:
            return PowerSeries(tuple(coeffs), fa.variable_label, 1)
        full = [mpf(0)] * (fa.leading_power + fa.gap * order + 1)
        for i, c in enumerate(coeffs):
            full[fa.leading_power + fa.gap * i] = c
        return PowerSeries(tuple(full), fa.variable_label, detect_gap(full))


def _residual(target: PowerSeries, fitted: PowerSeries, rho: mpf) -> mpf:
    """Max coefficient mismatch after rescaling ``y -> y / rho`` and dividing by ``a0``."""
    a0 = abs(target[0])
    scaled_t = [abs(c) / (a0 * rho ** m) for m, c in enumerate(target.coefficients)]
    norm = max(mpf(1), max(scaled_t))
    worst = mpf(0)
    for m, (c, d) in enumerate(zip(target.coefficients, fitted.coefficients)):
        worst = max(worst, abs(c - d) / (a0 * rho ** m))
    return worst / norm


def build(
    f: PowerSeries,
    k: int | None = None,
    *,
    precision: int | None = None,
    pin=1,
    rank_tol=None,
    degeneracy_tol=None,
    accuracy_tol=None,
) -> FactorApproximant:
    """Factor approximant of ``f`` matching its coefficients through order ``k``.

    Parameters
    ----------
    f : PowerSeries
        Input expansion. Leading zeros are factored out as ``x**p`` and a
        series in ``x**g`` is fitted in the reduced variable ``y = x**g``.
    k : int, optional
        Order to match (default ``f.order``), ``2 <= k <= f.order``.
    pin : real
        Amplitude fixed for odd orders, where ``N_k`` pairs carry one more
        parameter than there are conditions.
    rank_tol, degeneracy_tol, accuracy_tol : optional
        Override ``10**(-precision/2)`` (Hankel rank), ``10**(-precision/4)``
        (zero/repeated roots) and ``10**(-precision/3)`` (re-expansion check).

    Raises
    ------
    SingularHankel
        Rank-deficient moments that no lower-order factor set reproduces.
    NonRealResult
        Exponents cannot be paired into a real approximant.
    AccuracyLoss
        The re-expanded approximant misses the input coefficients.
    """
    prec = resolve_precision(precision)
    k = f.order if k is None else int(k)
    if k < 2:
        raise ValueError(f"factor approximants need order k >= 2, got {k}")
    if k > f.order:
        raise ValueError(f"order {k} exceeds the series order {f.order}")

    with workdps(prec):
        rank_tol = tolerance(prec, 2) if rank_tol is None else to_mpf(rank_tol)
        degeneracy_tol = tolerance(prec, 4) if degeneracy_tol is None else to_mpf(degeneracy_tol)
        accuracy_tol = tolerance(prec, 3) if accuracy_tol is None else to_mpf(accuracy_tol)

        truncated = f.truncate(k)
        p = truncated.valuation()
        if p > k:
            raise SeriesDomainError("cannot build a factor approximant of the zero series")
        tail = truncated.coefficients[p:]
        gap = detect_gap(tail)
        target = PowerSeries(tail, f.variable_label, gap).reduced()
        kr = target.order
        a0 = target[0]
        notes: list[str] = []
        if p:
            notes.append(f"leading power x^{p} factored out")
        if gap > 1:
            notes.append(f"resummed in reduced variable y = {f.variable_label}^{gap}")

        b = list(moments(target, prec).values) if kr else []
        rho = max((abs(v) ** (mpf(1) / m) for m, v in enumerate(b, start=1) if v != 0), default=mpf(0))

        common = dict(
            prefactor=a0, order=k, leading_power=p, gap=gap, precision=prec, variable_label=f.variable_label
        )
        if rho == 0:
            fa = FactorApproximant(pairs=(), effective_order=kr, effective_rank=0, notes=tuple(notes), **common)
            return _verified(fa, target, mpf(1), accuracy_tol, None)

        beta = [v / rho ** m for m, v in enumerate(b, start=1)]
        N = factor_count(kr)
        H = mpmath.matrix(N, N)
        for i in range(N):
            for j in range(N):
                H[i, j] = beta[i + j]
        rank, condition = hankel_rank(H, rank_tol)

        odd_fix = None
        reduced_rank = None
        if rank < N:
            reduced_rank = rank
            notes.append(
                f"Hankel rank {rank} < {N}: a lower-order representation (order {2 * rank}) is exact"
            )
            size = rank
            try:
                q = solve_hankel(beta[: 2 * size], size, prec, rank_tol).coeffs if size else []
            except SingularSystem as exc:
                raise SingularHankel(
                    f"leading {size}x{size} block of a rank-{rank} Hankel matrix is singular",
                    rank=rank,
                    condition=condition,
                ) from exc
            roots = polynomial_roots(list(q) + [1], prec) if size else []
            effective = 2 * size
        elif kr % 2 == 0:
            q = solve_hankel(beta[: 2 * N], N, prec, rank_tol, known_rank=(rank, condition)).coeffs
            roots = polynomial_roots(list(q) + [1], prec)
            effective = kr
        else:
            z0 = to_mpf(pin) / rho
            diffs = [beta[m + 1] - z0 * beta[m] for m in range(kr - 1)]
            try:
                r = solve_hankel(diffs, N - 1, prec, rank_tol).coeffs if N > 1 else []
            except SingularSystem as exc:
                raise SingularHankel(
                    f"pinned odd-order system at k={k} is rank deficient (rank {exc.rank})",
                    rank=exc.rank,
                    condition=exc.condition,
                ) from exc
            roots = (polynomial_roots(list(r) + [1], prec) if N > 1 else []) + [mpc(z0)]
            odd_fix = {"pinned_amplitude": mpmath.nstr(to_mpf(pin), 15), "rule": "amplitude"}
            effective = kr

        grouped = _group_roots(roots, degeneracy_tol, degeneracy_tol)
        solved = _solve_exponents(beta, grouped)
        solved_power = [(z, n) for z, n in solved if z != 0]
        rates = [n for z, n in solved if z == 0]
        pairs = [
            FactorPair(amplitude=z * rho, exponent=n) for z, n in _symmetrize(solved_power, degeneracy_tol)
        ]
        for n in rates:
            if abs(n.imag) > degeneracy_tol * max(mpf(1), abs(n)):
                raise NonRealResult("exponential factor with complex rate")
            pairs.append(FactorPair(amplitude=mpc(0), exponent=mpc(0), kind=EXPONENTIAL, rate=n.real * rho))
            notes.append(f"zero amplitude read as exponential factor, rate {mpmath.nstr(n.real * rho, 12)}")
        pairs.sort(key=lambda pr: (pr.kind != EXPONENTIAL, pr.amplitude.real, pr.amplitude.imag))
        fa = FactorApproximant(
            pairs=tuple(pairs),
            effective_order=effective,
            odd_fix=odd_fix,
            hankel_condition=condition,
            effective_rank=rank,
            notes=tuple(notes),
            **common,
        )
        return _verified(fa, target, rho, accuracy_tol, reduced_rank)


def _verified(fa, target, rho, accuracy_tol, reduced_rank) -> FactorApproximant:
    fitted = reexpand(fa, target.order, reduced=True)
    residual = _residual(target, fitted, rho)
    if residual > accuracy_tol:
        if reduced_rank is not None:
            raise SingularHankel(
                f"moments are rank deficient (rank {reduced_rank}) but the reduced "
                f"representation misses the input (residual {mpmath.nstr(residual, 5)})",
                rank=reduced_rank,
                condition=fa.hankel_condition,
            )
        raise AccuracyLoss(
            f"re-expansion residual {mpmath.nstr(residual, 5)} exceeds {mpmath.nstr(accuracy_tol, 3)}",
            residual=residual,
        )
    return replace(fa, residual=residual)


# ------------------------------------------------------------------ evaluate


def _is_integer(n: mpc, tol: mpf) -> bool:
    return n.imag == 0 and abs(n.real - mpmath.nint(n.real)) <= tol


def log_abs_and_sign(fa: FactorApproximant, x):
    """``(ln|prod|, sign)`` of the factor product (no prefactor, no leading power) at ``x``.

    Raises :class:`DomainError` past a branch point of a non-integer factor or
    at a pole.
    """
    y = x ** fa.gap
    total = mpf(0)
    sign = 1
    int_tol = tolerance(fa.precision, 4)
    handled = set()
    for idx, p in enumerate(fa.pairs):
        if p.kind == EXPONENTIAL:
            total += p.rate * y
            continue
        A, n = p.amplitude, p.exponent
        if A.imag == 0:
            base = 1 + A.real * y
            boundary = -1 / A.real if A.real != 0 else None
            if base == 0:
                if n.real > 0:
                    return -mpmath.inf, 0
                raise DomainError(f"factor {idx} has a pole at y = {mpmath.nstr(boundary, 12)}", idx, boundary)
            if base < 0:
                if not _is_integer(n, int_tol):
                    raise DomainError(
                        f"factor {idx} (A={mpmath.nstr(A.real, 10)}, n={mpmath.nstr(n.real, 10)}) "
                        f"is complex beyond y = {mpmath.nstr(boundary, 12)}",
                        idx,
                        boundary,
                    )
                if int(mpmath.nint(n.real)) % 2:
                    sign = -sign
            total += n.real * mpmath.log(abs(base))
        else:
            if idx in handled:
                continue
            partner = next(
                (j for j, q in enumerate(fa.pairs)
                 if j != idx and j not in handled and q.kind == POWER and q.amplitude == mpmath.conj(A)),
                None,
            )
            if partner is None:
                raise NonRealResult(f"factor {idx} has no conjugate partner")
            handled.update({idx, partner})
            total += 2 * (n * mpmath.log(1 + A * y)).real
    return total, sign


def evaluate(fa: FactorApproximant, x) -> mpf:
    """Real value of the approximant at real ``x``.

    Conjugate pairs are combined as ``exp(2 Re(n ln(1 + A y)))``.
    """
    with workdps(fa.precision):
        x = to_mpf(x)
        log_abs, sign = log_abs_and_sign(fa, x)
        if sign == 0:
            return mpf(0)
        return fa.prefactor * x ** fa.leading_power * sign * mpmath.exp(log_abs)


# ---------------------------------------------------------------- asymptotics


def asymptotics(fa: FactorApproximant) -> AsymptoticForm:
    """``C x**nu`` as ``x -> inf`` with ``nu = p + g Re(sum n_j)`` and ``C = a0 prod A_j**n_j``.

    Flags instead of raising: exponential factors give non-power-law growth,
    negative real amplitudes put a zero or pole at finite positive ``x``.
    """
    with workdps(fa.precision):
        if fa.has_exponential:
            rate = mpmath.fsum(p.rate for p in fa.pairs if p.kind == EXPONENTIAL)
            return AsymptoticForm(
                mpmath.nan,
                mpmath.nan,
                "flagged",
                f"non-power-law growth: exponential factor with rate {mpmath.nstr(rate, 10)}",
            )
        nu_sum = mpmath.fsum(p.exponent for p in fa.pairs)
        log_c = mpc(mpmath.log(abs(fa.prefactor)))
        for p in fa.pairs:
            log_c += p.exponent * mpmath.log(p.amplitude)
        amplitude = (mpmath.exp(log_c) * mpmath.sign(fa.prefactor)).real
        exponent = fa.leading_power + fa.gap * nu_sum.real
        reasons = []
        for idx, p in enumerate(fa.pairs):
            if p.amplitude.imag == 0 and p.amplitude.real < 0:
                reasons.append(
                    f"factor {idx}: real amplitude {mpmath.nstr(p.amplitude.real, 8)} < 0, "
                    f"singular point at y = {mpmath.nstr(-1 / p.amplitude.real, 8)}"
                )
        if reasons:
            return AsymptoticForm(amplitude, exponent, "flagged", "; ".join(reasons))
        return AsymptoticForm(amplitude, exponent)


# ---------------------------------------------------------------- diagnostics


def pair_sum(pairs: Sequence[FactorPair], precision: int) -> mpf:
    """``s_k = sum_j |n_j A_j|``, accumulated with guard digits and rounded to ``precision``."""
    with mpmath.workdps(precision + GUARD_DIGITS):
        total = mpmath.fsum(abs(p.exponent) * abs(p.amplitude) if p.kind == POWER else abs(p.rate) for p in pairs)
    with mpmath.workdps(precision):
        return +total


def rescale_pairs(pairs: Sequence[FactorPair], lambdas: Sequence, precision: int) -> tuple:
    """Apply ``A_j -> lam_j A_j``, ``n_j -> n_j / lam_j`` carrying guard digits."""
    with mpmath.workdps(precision + GUARD_DIGITS):
        return tuple(p.scaled(to_mpf(lam)) for p, lam in zip(pairs, lambdas))


def diagnostics(fa: FactorApproximant, probe_xs: Sequence = ()) -> DiagnosticsReport:
    """Convergence sums for one approximant.

    ``S_k(x) = sum_j n_j ln(1 + A_j y)`` (exponential factors add ``rate * y``),
    ``s_k = sum_j |n_j A_j|`` and the largest and newest ``|n_j A_j|``. Probe
    points outside the approximant's domain report NaN.
    """
    prec = fa.precision
    with workdps(prec):
        S = {}
        for x in probe_xs:
            xv = to_mpf(x)
            y = xv ** fa.gap
            total = mpc(0)
            for p in fa.pairs:
                if p.kind == EXPONENTIAL:
                    total += p.rate * y
                else:
                    total += p.exponent * mpmath.log(1 + p.amplitude * y)
            S[str(x)] = total.real if abs(total.imag) <= tolerance(prec, 3) * max(1, abs(total)) else mpmath.nan
        products = [abs(p.pair_product) for p in fa.pairs]
        newest = abs(fa.pairs[-1].pair_product) if fa.pairs else mpf(0)
        return DiagnosticsReport(
            S_k_values=S,
            s_k=pair_sum(fa.pairs, prec),
            max_pair_product=max(products, default=mpf(0)),
            hankel_condition=fa.hankel_condition,
            effective_rank=fa.effective_rank,
            newest_pair_product=newest,
        )


def describe(fa: FactorApproximant, digits: int = 12) -> str:
    """Human-readable formula, e.g. ``1 * (1 + -1*x)^(-1)``."""
    var = fa.variable_label if fa.gap == 1 else f"{fa.variable_label}^{fa.gap}"
    parts = [mpmath.nstr(fa.prefactor, digits)]
    if fa.leading_power:
        parts.append(f"{fa.variable_label}^{fa.leading_power}")
    for p in fa.pairs:
        if p.kind == EXPONENTIAL:
            parts.append(f"exp({mpmath.nstr(p.rate, digits)}*{var})")
        else:
            A = mpmath.nstr(p.amplitude if p.amplitude.imag else p.amplitude.real, digits)
            n = mpmath.nstr(p.exponent if p.exponent.imag else p.exponent.real, digits)
            parts.append(f"(1 + {A}*{var})^({n})")
    return " * ".join(parts)


def is_finite_number(value) -> bool:
    try:
        return math.isfinite(float(value))
    except (TypeError, ValueError, OverflowError):
        return False

"""Extended-precision kernels: gamma, polynomial roots, Hankel solves, half-line quadrature.

Every routine takes an explicit ``precision`` (decimal digits). ``None`` means
:data:`DEFAULT_PRECISION`. Work happens inside :func:`mpmath.workdps`, so callers
never see a changed global context.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Callable, NamedTuple, Sequence

import mpmath
import numpy as np
from mpmath import mpc, mpf
from scipy.special import roots_genlaguerre

from .errors import (
    DivergenceError,
    NonConvergence,
    PoleError,
    SingularityError,
    SingularSystem,
)

DEFAULT_PRECISION = 60
DEFAULT_QUAD_TOL = "1e-20"
DEFAULT_QUAD_NODES = 48


def resolve_precision(precision: int | None) -> int:
    if precision is None:
        return DEFAULT_PRECISION
    precision = int(precision)
    if precision < 15:
        raise ValueError(f"precision must be at least 15 digits, got {precision}")
    return precision


def workdps(precision: int | None):
    """Context manager running the body at ``precision`` decimal digits."""
    return mpmath.workdps(resolve_precision(precision))


def to_mpf(value) -> mpf:
    """Convert ints, Fractions, decimal strings and floats to ``mpf`` at the current precision.

    Strings are parsed digit by digit, so ``"0.7500000000000000000001"`` keeps
    every digit instead of passing through a binary float.
    """
    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return mpf(num.strip()) / mpf(den.strip())
        return mpf(text)
    return mpf(value)


def to_mpc(value) -> mpc:
    if isinstance(value, (mpc, complex)):
        return mpc(value)
    return mpc(to_mpf(value))


def tolerance(precision: int, divisor: float) -> mpf:
    """``10**(-precision/divisor)`` as an mpf."""
    return mpf(10) ** (-mpf(precision) / divisor)


# --------------------------------------------------------------------- gamma


def gamma(x, precision: int | None = None) -> mpf:
    """Gamma function of a real argument.

    Negative non-integer arguments go through the reflection formula inside
    mpmath. Nonpositive integers raise :class:`PoleError`.
    """
    with workdps(precision):
        x = to_mpf(x)
        if not mpmath.isfinite(x):
            raise ValueError(f"gamma argument must be finite, got {x}")
        if x <= 0 and mpmath.isint(x):
            raise PoleError(f"gamma has a pole at {mpmath.nstr(x, 10)}")
        return +mpmath.gamma(x)


def rgamma(x, precision: int | None = None) -> mpf:
    """1/Gamma(x); zero at the poles instead of raising."""
    with workdps(precision):
        return +mpmath.rgamma(to_mpf(x))


# -------------------------------------------------------------------- roots


def _horner(coeffs: Sequence, z):
    """Value and derivative of sum(coeffs[i] * z**i)."""
    p = coeffs[-1]
    dp = 0
    for c in reversed(coeffs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _companion_guess(coeffs: Sequence[mpf]) -> list[complex]:
    d = len(coeffs) - 1
    try:
        c = np.array([float(v) for v in coeffs], dtype=float)
    except OverflowError:
        c = np.array([np.inf])
    if np.all(np.isfinite(c)) and c[-1] != 0:
        companion = np.zeros((d, d), dtype=float)
        companion[1:, :-1] = np.eye(d - 1)
        companion[:, -1] = -c[:-1] / c[-1]
        guess = np.linalg.eigvals(companion)
        if np.all(np.isfinite(guess)):
            return [complex(z) for z in guess]
    # Aberth-style fallback on a circle bounded by the Cauchy radius.
    radius = 1 + max(float(abs(v / coeffs[-1])) for v in coeffs[:-1])
    return [radius * np.exp(2j * np.pi * (j + 0.25) / d) for j in range(d)]


def _pair_conjugates(roots: list[mpc], tol: mpf) -> list[mpc]:
    real, upper, lower = [], [], []
    for z in roots:
        scale = max(mpf(1), abs(z))
        if abs(z.imag) <= tol * scale:
            real.append(mpc(z.real, 0))
        elif z.imag > 0:
            upper.append(z)
        else:
            lower.append(z)
    if len(upper) != len(lower):
        raise NonConvergence("complex roots of a real polynomial do not pair up")
    paired = list(real)
    remaining = list(lower)
    for z in upper:
        partner = min(remaining, key=lambda w: abs(w - mpmath.conj(z)))
        remaining.remove(partner)
        mean = (z + mpmath.conj(partner)) / 2
        paired.extend([mean, mpmath.conj(mean)])
    return paired


def polynomial_roots(
    coeffs: Sequence,
    precision: int | None = None,
    max_iter: int = 500,
) -> list[mpc]:
    """All complex roots of ``sum(coeffs[i] * z**i)``.

    Parameters
    ----------
    coeffs : sequence
        Coefficients in ascending powers; the last entry must be nonzero.
    precision : int, optional
        Working precision in decimal digits.
    max_iter : int
        Cap on Aberth-Ehrlich sweeps.

    Returns
    -------
    list of mpc
        ``d`` roots. For real input, roots with negligible imaginary part are
        made exactly real and the rest come in exact conjugate pairs.

    Raises
    ------
    NonConvergence
        If the backward residual ``|p(z)| / sum |c_i| |z|^i`` stays above
        ``10**(-precision/2)``.
    """
    prec = resolve_precision(precision)
    with workdps(prec + 15):
        values = [to_mpc(c) for c in coeffs]
        if len(values) < 2:
            raise ValueError("polynomial_roots needs degree >= 1")
        if values[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        is_real = all(v.imag == 0 for v in values)
        lead = values[-1]
        monic = [v / lead for v in values]
        abs_coeffs = [abs(v) for v in monic]
        d = len(monic) - 1

        if d == 1:
            roots = [-monic[0]]
        else:
            guess = _companion_guess([v.real for v in monic]) if is_real \
                else [complex(1 + 0.5j) * np.exp(2j * np.pi * j / d) for j in range(d)]
            # Coincident guesses (repeated roots) would zero the Aberth repulsion term.
            roots = [mpc(g) * (1 + mpc(1e-6 * (j + 1), 1e-6 * (d - j))) for j, g in enumerate(guess)]
            eps = mpf(10) ** (-(prec + 10))
            for _ in range(max_iter):
                biggest = mpf(0)
                new_roots = list(roots)
                for i, z in enumerate(roots):
                    p, dp = _horner(monic, z)
                    if p == 0:
                        continue
                    ratio = p / dp if dp != 0 else mpc(eps)
                    repulsion = sum(1 / (z - w) for j, w in enumerate(new_roots) if j != i and z != w)
                    denom = 1 - ratio * repulsion
                    step = ratio / denom if denom != 0 else ratio
                    new_roots[i] = z - step
                    biggest = max(biggest, abs(step) / max(mpf(1), abs(z)))
                roots = new_roots
                if biggest < eps:
                    break

        target = tolerance(prec, 2)
        worst = mpf(0)
        for z in roots:
            p, _ = _horner(monic, z)
            scale = sum(a * abs(z) ** i for i, a in enumerate(abs_coeffs))
            if p != 0:
                worst = max(worst, abs(p) / scale)
        if worst > target:
            raise NonConvergence(
                f"root refinement stalled with backward residual {mpmath.nstr(worst, 5)}",
                residual=worst,
            )
        if is_real:
            roots = _pair_conjugates(roots, tolerance(prec, 4))
        roots.sort(key=lambda z: (z.real, z.imag))
    with workdps(prec):
        return [+z for z in roots]


def poly_from_roots(roots: Sequence) -> list:
    """Ascending coefficients of the monic polynomial prod(z - r)."""
    coeffs = [mpc(1)]
    for r in roots:
        shifted = [mpc(0)] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] -= r * c
        coeffs = shifted
    return coeffs


# ------------------------------------------------------------------- hankel


class HankelSolution(NamedTuple):
    coeffs: list
    condition: mpf
    rank: int


def hankel_rank(matrix, rank_tol: mpf) -> tuple[int, mpf]:
    """Numerical rank and 2-norm condition number from singular values."""
    n = matrix.rows
    if n == 0:
        return 0, mpf(1)
    sigma = mpmath.svd_r(matrix, compute_uv=False) if not _is_complex(matrix) \
        else mpmath.svd_c(matrix, compute_uv=False)
    sigma = sorted((abs(s) for s in sigma), reverse=True)
    if sigma[0] == 0:
        return 0, mpmath.inf
    rank = sum(1 for s in sigma if s > rank_tol * sigma[0])
    condition = sigma[0] / sigma[-1] if sigma[-1] != 0 else mpmath.inf
    return rank, condition


def _is_complex(matrix) -> bool:
    return any(isinstance(matrix[i, j], mpc) and matrix[i, j].imag != 0
               for i in range(matrix.rows) for j in range(matrix.cols))


def solve_hankel(
    moments: Sequence,
    size: int,
    precision: int | None = None,
    rank_tol=None,
    known_rank: tuple | None = None,
) -> HankelSolution:
    """Solve the Prony linear-prediction system built from ``moments``.

    ``moments[m]`` holds the sequence element with 1-based index ``m + 1``. The
    system is ``sum_j H[i, j] q_j = -moments[i + size]`` with
    ``H[i, j] = moments[i + j]``; the solution gives the non-leading
    coefficients of the monic polynomial ``z**size + sum_j q_j z**j``.

    Raises
    ------
    SingularSystem
        When the numerical rank of ``H`` (singular values above
        ``rank_tol * sigma_max``, default ``10**(-precision/2)``) is below ``size``.

    A caller that already ran :func:`hankel_rank` on the same matrix can pass
    its ``(rank, condition)`` as ``known_rank`` to skip the SVD.
    """
    prec = resolve_precision(precision)
    if len(moments) < 2 * size:
        raise ValueError(f"need {2 * size} moments for a {size}x{size} Hankel system, got {len(moments)}")
    with workdps(prec):
        if size == 0:
            return HankelSolution([], mpf(1), 0)
        b = [to_mpf(m) if not isinstance(m, mpc) else m for m in moments]
        tol = tolerance(prec, 2) if rank_tol is None else to_mpf(rank_tol)
        H = mpmath.matrix(size, size)
        rhs = mpmath.matrix(size, 1)
        for i in range(size):
            for j in range(size):
                H[i, j] = b[i + j]
            rhs[i] = -b[i + size]
        rank, condition = known_rank if known_rank is not None else hankel_rank(H, tol)
        if rank < size:
            raise SingularSystem(
                f"Hankel system of size {size} has numerical rank {rank}",
                rank=rank,
                condition=condition,
            )
        q = mpmath.lu_solve(H, rhs)
        return HankelSolution([q[i] for i in range(size)], condition, rank)


# --------------------------------------------------------------- quadrature


class Quadrature(NamedTuple):
    value: mpf
    error: mpf
    method: str


@functools.lru_cache(maxsize=64)
def _laguerre_rule(n: int, u_key: str, dps: int):
    with mpmath.workdps(dps):
        u = mpf(u_key)
        guess, _ = roots_genlaguerre(n, float(u))
        nodes, weights = [], []
        scale = mpmath.gamma(n + u + 1) / mpmath.factorial(n)
        eps = mpf(10) ** (-dps + 5)
        for x0 in guess:
            x = mpf(float(x0))
            for _ in range(100):
                ln, lnm1 = _laguerre_pair(n, u, x)
                deriv = (n * ln - (n + u) * lnm1) / x
                step = ln / deriv
                x -= step
                if abs(step) <= eps * x:
                    break
            else:
                raise NonConvergence(f"Laguerre node near {x0} did not converge")
            ln, lnm1 = _laguerre_pair(n, u, x)
            deriv = (n * ln - (n + u) * lnm1) / x
            nodes.append(x)
            weights.append(scale / (x * deriv ** 2))
        return tuple(nodes), tuple(weights)


def _laguerre_pair(n: int, u: mpf, x: mpf):
    """(L_n^u(x), L_{n-1}^u(x)) by the three-term recurrence."""
    prev, cur = mpf(1), 1 + u - x
    if n == 1:
        return cur, prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + u - x) * cur - (k + u) * prev) / (k + 1)
    return cur, prev


def gauss_laguerre(n: int, u, precision: int | None = None):
    """Nodes and weights of the n-point rule for the weight ``t**u * exp(-t)``."""
    prec = resolve_precision(precision)
    with workdps(prec):
        u = to_mpf(u)
        if u <= -1:
            raise ValueError("Laguerre weight needs u > -1")
        # Nodes are polished a few digits beyond the working precision.
        return _laguerre_rule(int(n), mpmath.nstr(u, prec + 5), prec + 10)


def _finite(value) -> bool:
    try:
        return bool(mpmath.isfinite(value))
    except TypeError:
        return False


_HALFLINE_BREAKS = (0, "0.25", 1, 4, 16, 64)


def integrate_halfline(
    f: Callable,
    u,
    tol=None,
    nodes: int = DEFAULT_QUAD_NODES,
    precision: int | None = None,
    breakpoints: Sequence | None = None,
) -> Quadrature:
    """Integral of ``exp(-t) * t**u * f(t)`` over ``(0, inf)``.

    An ``n``/``2n``-point generalized Gauss-Laguerre pair is tried first; when
    the two disagree beyond ``tol`` (relative, default ``1e-20``) the integral is
    redone adaptively with tanh-sinh on a subdivided half-line at increasing
    degree. The returned error is the last observed difference between
    refinements.

    Raises
    ------
    SingularityError
        ``f`` raised or returned a non-finite value at a sample point.
    DivergenceError
        The weighted integrand fails to decay in the tail.
    """
    prec = resolve_precision(precision)
    with workdps(prec):
        u = to_mpf(u)
        if u <= -1:
            raise ValueError(f"weight exponent must exceed -1, got {u}")
        rel_tol = to_mpf(DEFAULT_QUAD_TOL if tol is None else tol)

        def call(t):
            try:
                value = f(t)
            except (ZeroDivisionError, ValueError, OverflowError) as exc:
                raise SingularityError(f"integrand failed at t = {mpmath.nstr(t, 10)}: {exc}") from exc
            if isinstance(value, mpc):
                value = value.real
            if not _finite(value):
                raise SingularityError(f"integrand not finite at t = {mpmath.nstr(t, 10)}")
            return value

        def rule(n):
            xs, ws = gauss_laguerre(n, u, prec)
            return mpmath.fsum(w * call(x) for x, w in zip(xs, ws))

        coarse = rule(nodes)
        fine = rule(2 * nodes)
        diff = abs(fine - coarse)
        if diff <= rel_tol * max(abs(fine), mpf(10) ** (-prec)):
            return Quadrature(fine, diff, "gauss-laguerre")

        def weighted(t):
            if t == 0:  # tanh-sinh never samples the endpoint itself
                return mpf(0)
            return mpmath.exp(-t) * t ** u * call(t)

        tail = [abs(weighted(mpf(t))) for t in (100, 200, 400, 800)]
        if not (tail[1] < tail[0] and tail[2] < tail[1] and tail[3] < tail[2]) and tail[0] != 0:
            raise DivergenceError("weighted integrand does not decay on [100, 800]")

        points = sorted({mpf(p) for p in _HALFLINE_BREAKS} | {mpf(p) for p in (breakpoints or ()) if mpf(p) > 0})
        points.append(mpmath.inf)
        value, error = None, None
        for degree in range(6, 11):
            value, error = mpmath.quad(weighted, points, error=True, maxdegree=degree)
            if error <= rel_tol * abs(value):
                break
        if error > mpf("1e-6") * max(abs(value), mpf(1)):
            raise NonConvergence(
                f"adaptive quadrature stalled with error estimate {mpmath.nstr(error, 5)}", residual=error
            )
        return Quadrature(value, error, "tanh-sinh")

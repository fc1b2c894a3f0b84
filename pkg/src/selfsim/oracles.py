"""Brute-force reference values for the resummation targets.

Everything here is computed independently of the factor and Borel machinery:
exact rational perturbation coefficients, direct quadrature of the
zero-dimensional partition function, harmonic-basis diagonalization of the
quartic oscillator, closed-form solitons with a finite-difference cross-check.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

import mpmath
import numpy as np
from mpmath import mpf
from scipy.integrate import solve_bvp

from .errors import NonConvergence, PrecisionLoss
from .numerics import resolve_precision, workdps
from .series import PowerSeries

OSCILLATOR_CONVENTION = "H = -1/2 d^2/dx^2 + 1/2 x^2 + g x^4"
OSCILLATOR_MAX_ORDER = 40
# Strong-coupling constants: Gamma(1/4)/(2 sqrt(pi)) for Z; E(g)/g^(1/3) -> 0.66798626...
Z_STRONG_EXPONENT = Fraction(-1, 4)
OSCILLATOR_STRONG_EXPONENT = Fraction(1, 3)


@dataclass(frozen=True)
class OracleReport:
    quantity: str
    value: float | mpf
    method: str
    error_estimate: float | mpf


# ------------------------------------------------------------ fixture cache

FIXTURE_VERSION = 1
DEFAULT_FIXTURE_PATH = Path(__file__).with_name("data") / "oracle_fixtures.txt"


class OracleCache:
    """Key/value text cache for expensive oracle values.

    One ``key = value | error | method`` line per entry under a ``version``
    header. Reads and writes hold a lock; the computation itself runs outside it.
    """

    def __init__(self, path: str | Path | None = None):
        self.path = Path(path) if path is not None else None
        self._lock = threading.Lock()
        self._entries: dict[str, OracleReport] = {}
        if self.path is not None and self.path.exists():
            self._entries = self._read(self.path)

    @staticmethod
    def key(quantity: str, params: dict, tol) -> str:
        inner = ",".join(f"{k}={params[k]}" for k in sorted(params))
        return f"{quantity}({inner})@tol={tol}"

    @staticmethod
    def _read(path: Path) -> dict[str, OracleReport]:
        entries = {}
        version = None
        for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, rest = line.partition(" = ")
            if not sep:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            if key == "version":
                version = int(rest)
                continue
            value, error, method = (part.strip() for part in rest.split("|"))
            entries[key] = OracleReport(key.split("(")[0], float(value), method, float(error))
        if version != FIXTURE_VERSION:
            raise ValueError(f"{path}: unsupported fixture version {version}")
        return entries

    def get(self, key: str) -> OracleReport | None:
        with self._lock:
            return self._entries.get(key)

    def lookup(self, quantity: str, params: dict, tol, compute: Callable[[], OracleReport]) -> OracleReport:
        key = self.key(quantity, params, tol)
        cached = self.get(key)
        if cached is not None:
            return cached
        report = compute()
        with self._lock:
            self._entries.setdefault(key, report)
            return self._entries[key]

    def dumps(self) -> str:
        with self._lock:
            lines = ["# oracle fixtures: key = value | error estimate | method", f"version = {FIXTURE_VERSION}"]
            for key in sorted(self._entries):
                r = self._entries[key]
                lines.append(f"{key} = {float(r.value)!r} | {float(r.error_estimate)!r} | {r.method}")
            return "\n".join(lines) + "\n"

    def save(self, path: str | Path | None = None) -> None:
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ValueError("no path to save the oracle cache to")
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(self.dumps())


# ---------------------------------------------------- partition function


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def z_coefficients_exact(k: int) -> list[Fraction]:
    """``a_n = (-1)**n Gamma(2n + 1/2) / (n! Gamma(1/2)) = (-1)**n (4n-1)!! / (4**n n!)``."""
    if k < 0:
        raise ValueError("order must be nonnegative")
    return [Fraction((-1) ** n * _double_factorial(4 * n - 1), 4 ** n * math.factorial(n)) for n in range(k + 1)]


def z_moment_quadrature(n: int, precision: int | None = None) -> mpf:
    """``(-1)**n / n! * (1/sqrt(pi)) * int phi**(4n) exp(-phi**2) dphi`` by direct quadrature."""
    with workdps(precision):
        integral = 2 * mpmath.quad(lambda p: p ** (4 * n) * mpmath.exp(-p * p), [0, mpmath.sqrt(2 * n + 1), mpmath.inf])
        return (-1) ** n * integral / (mpmath.sqrt(mpmath.pi) * mpmath.factorial(n))


def z_coefficients(k: int, precision: int | None = None, validate: bool = True) -> PowerSeries:
    """Weak-coupling series of ``Z(g) = pi**-1/2 int exp(-phi**2 - g phi**4) dphi`` through ``g**k``.

    With ``validate`` each exact coefficient is checked against direct
    quadrature of its moment integral to relative ``1e-20``.
    """
    prec = resolve_precision(precision)
    exact = z_coefficients_exact(k)
    if validate:
        with workdps(max(prec, 40)):
            for n, a in enumerate(exact):
                numeric = z_moment_quadrature(n)
                ref = mpf(a.numerator) / a.denominator
                if abs(numeric - ref) > mpf("1e-20") * abs(ref):
                    raise NonConvergence(f"Z coefficient {n}: quadrature {numeric} disagrees with {a}")
    return PowerSeries.from_values(
        exact, prec, variable_label="g", gap=1,
        metadata={"fixture": "z_partition", "exact_exponent": "-1/4",
                  "exact_amplitude": "Gamma(1/4)/(2*sqrt(pi))"},
    )


def z_strong_amplitude(precision: int | None = None) -> mpf:
    """``lim g**(1/4) Z(g) = Gamma(1/4) / (2 sqrt(pi))``."""
    with workdps(precision):
        return mpmath.gamma(mpf(1) / 4) / (2 * mpmath.sqrt(mpmath.pi))


def z_value(g, precision: int = 30, degree: int = 8) -> OracleReport:
    """``Z(g)`` by tanh-sinh quadrature of the defining integral.

    For ``g > 1`` the variable ``phi = t g**(-1/4)`` keeps the integrand O(1):
    ``Z = g**(-1/4) pi**(-1/2) int exp(-t**2/sqrt(g) - t**4) dt``. The error
    estimate is the larger of mpmath's own estimate and the change when the
    quadrature degree is raised by one.
    """
    with mpmath.workdps(precision):
        g = mpf(g)
        if g < 0:
            raise ValueError("Z(g) is defined for g >= 0")
        if g == 0:
            return OracleReport("Z", mpf(1), "closed form", mpf(0))
        if g > 1:
            s = mpmath.sqrt(g)
            scale = g ** (-mpf(1) / 4)
            integrand = lambda t: mpmath.exp(-t * t / s - t ** 4)
            cuts = [0, 1, 2, 4, mpmath.inf]
        else:
            scale = mpf(1)
            integrand = lambda p: mpmath.exp(-p * p - g * p ** 4)
            cuts = [0, 1, 3, 6, mpmath.inf]
        norm = 2 * scale / mpmath.sqrt(mpmath.pi)
        v1, e1 = mpmath.quad(integrand, cuts, error=True, maxdegree=degree)
        v2, e2 = mpmath.quad(integrand, cuts, error=True, maxdegree=degree + 1)
        err = max(abs(e1), abs(e2), abs(v2 - v1)) * norm
        return OracleReport("Z", v2 * norm, f"tanh-sinh quadrature, degree {degree + 1}", err)


# ----------------------------------------------------------- oscillator


def oscillator_coefficients_exact(k: int) -> list[Fraction]:
    """Rayleigh-Schroedinger ground-state coefficients of ``p**2/2 + x**2/2 + g x**4``.

    Writes ``psi = exp(-x**2/2) sum g**n phi_n`` with polynomial ``phi_n`` and
    ``phi_n(0) = 0`` for ``n >= 1``. Each order solves
    ``-phi_n''/2 + x phi_n' + x**4 phi_{n-1} = sum_{j=1..n} E_j phi_{n-j}``
    power by power from the top; the constant term gives ``E_n``.
    """
    if k < 0:
        raise ValueError("order must be nonnegative")
    if k > OSCILLATOR_MAX_ORDER:
        raise PrecisionLoss(f"oscillator coefficients are guarded at order {OSCILLATOR_MAX_ORDER}, asked for {k}")
    energies = [Fraction(1, 2)]
    # phis[n][i] = coefficient of x**(2i) in phi_n
    phis: list[list[Fraction]] = [[Fraction(1)]]
    for n in range(1, k + 1):
        top = 2 * n
        A = [Fraction(0)] * (top + 2)
        prev = phis[n - 1]
        for i in range(top, 0, -1):
            acc = Fraction(0)
            for j in range(1, n):
                row = phis[n - j]
                if i < len(row):
                    acc += energies[j] * row[i]
            acc += (i + 1) * (2 * i + 1) * A[i + 1]
            if 0 <= i - 2 < len(prev):
                acc -= prev[i - 2]
            A[i] = acc / (2 * i)
        energies.append(-A[1])
        phis.append(A[: top + 1])
    return energies


def oscillator_coefficients(k: int, precision: int | None = None) -> PowerSeries:
    """Weak-coupling series ``E(g) = sum e_n g**n`` (exact rationals, converted at ``precision``)."""
    return PowerSeries.from_values(
        oscillator_coefficients_exact(k), precision, variable_label="g", gap=1,
        metadata={"fixture": "oscillator", "convention": OSCILLATOR_CONVENTION,
                  "exact_exponent": "1/3", "exact_amplitude": "0.667986259"},
    )


def _quartic_ground_energy(mass_term: float, quartic: float, size: int, omega: float) -> float:
    """Lowest even-parity eigenvalue of ``p**2/2 + mass_term x**2/2 + quartic x**4``."""
    padded = size + 6
    n = np.arange(1, padded)
    a = np.diag(np.sqrt(n), 1)
    x = (a + a.T) / math.sqrt(2 * omega)
    p2 = -(omega / 2) * (a.T - a) @ (a.T - a)
    x2 = x @ x
    h = 0.5 * p2 + 0.5 * mass_term * x2 + quartic * (x2 @ x2)
    h = h[:size, :size]
    even = h[0:size:2, 0:size:2]
    return float(np.linalg.eigvalsh(even)[0])


def oscillator_energy(g, tol: float = 1e-10, start: int = 40, max_size: int = 2000) -> OracleReport:
    """Ground energy of ``p**2/2 + x**2/2 + g x**4`` by harmonic-basis diagonalization.

    For ``g > 1`` the problem is solved in the rescaled form
    ``E(g) = g**(1/3) * eig(p**2/2 + g**(-2/3) x**2/2 + x**4)`` so the matrix
    entries stay O(1). The basis frequency minimizes the Gaussian trial
    energy. The size doubles until the eigenvalue moves by less than ``tol``
    (in the rescaled units); the last move is the error estimate.
    """
    g = float(g)
    if g < 0:
        raise ValueError("oscillator_energy needs g >= 0")
    if g == 0:
        return OracleReport("E", 0.5, "closed form", 0.0)
    if g > 1:
        factor, mass, quartic = g ** (1 / 3), g ** (-2 / 3), 1.0
    else:
        factor, mass, quartic = 1.0, 1.0, g
    # d/dw [w/4 + mass/(4w) + 3 quartic/(4 w^2)] = 0  ->  w^3 - mass w - 6 quartic = 0
    roots = np.roots([1.0, 0.0, -mass, -6.0 * quartic])
    omega = max(r.real for r in roots if abs(r.imag) < 1e-9 and r.real > 0)
    size = start
    value = _quartic_ground_energy(mass, quartic, size, omega)
    while True:
        size *= 2
        if size > max_size:
            raise NonConvergence(f"oscillator basis exceeded {max_size} states at g={g}")
        new = _quartic_ground_energy(mass, quartic, size, omega)
        change = abs(new - value)
        value = new
        if change < tol:
            break
    err = max(change, 1e-15 * abs(value)) * factor
    return OracleReport("E", value * factor, f"harmonic basis diagonalization, {size} states", err)


def oscillator_strong_amplitude(tol: float = 1e-12) -> float:
    """``lim E(g) / g**(1/3)``: ground energy of ``p**2/2 + x**4``."""
    roots = np.roots([1.0, 0.0, 0.0, -6.0])
    omega = max(r.real for r in roots if abs(r.imag) < 1e-9)
    size, value = 40, _quartic_ground_energy(0.0, 1.0, 40, omega)
    while True:
        size *= 2
        new = _quartic_ground_energy(0.0, 1.0, size, omega)
        if abs(new - value) < tol or size > 2000:
            return new
        value = new


# ------------------------------------------------------------- beta function


def beta_sym_series(n_colors: int, k: int, precision: int | None = None) -> PowerSeries:
    """Reduced-variable series ``sum y**n`` with ``y = (N_c / 8 pi**2) g**2``.

    The full function is ``beta(g) = -(3 g**2 N_c / 16 pi**2) * S(y)``; the map
    and prefactor travel in the metadata. The exact resummed form is
    ``(1 - y)**-1``.
    """
    if n_colors < 1:
        raise ValueError("N_c must be a positive integer")
    if k < 2:
        raise ValueError("beta_sym_series needs k >= 2")
    return PowerSeries.from_values(
        [1] * (k + 1), precision, variable_label="y", gap=1,
        metadata={
            "fixture": "beta_sym",
            "n_colors": n_colors,
            "variable_map": "y = (N_c/(8*pi^2)) * g^2",
            "prefactor": "-3*g^2*N_c/(16*pi^2)",
            "exact": "(1 - y)^-1",
        },
    )


def beta_reduced_variable(g, n_colors: int, precision: int | None = None) -> mpf:
    with workdps(precision):
        return n_colors * mpf(g) ** 2 / (8 * mpmath.pi ** 2)


def beta_prefactor(g, n_colors: int, precision: int | None = None) -> mpf:
    with workdps(precision):
        return -3 * mpf(g) ** 2 * n_colors / (16 * mpmath.pi ** 2)


def beta_exact(g, n_colors: int, precision: int | None = None) -> mpf:
    """Closed-form beta function ``-(3 g**2 N_c/16 pi**2) / (1 - N_c g**2/8 pi**2)``."""
    with workdps(precision):
        return beta_prefactor(g, n_colors) / (1 - beta_reduced_variable(g, n_colors))


# ------------------------------------------------------------------ solitons


def soliton_reference(equation: str, eps, x, precision: int | None = None) -> mpf:
    """Closed-form kink ``tanh(x/sqrt(eps))`` or bell ``sqrt(2) sech(sqrt(2/eps) x)``."""
    with workdps(precision):
        eps, x = mpf(eps), mpf(x)
        if eps <= 0:
            raise ValueError("eps must be positive")
        if equation == "kink":
            return mpmath.tanh(x / mpmath.sqrt(eps))
        if equation == "bell":
            return mpmath.sqrt(2) * mpmath.sech(mpmath.sqrt(2 / eps) * x)
        raise ValueError(f"unknown soliton equation {equation!r}")


def soliton_fd_solution(equation: str, eps: float, tol: float = 1e-10):
    """Solve the boundary-value problem on a half-line with collocation.

    Kink: ``(eps/2) phi'' + phi - phi**3 = 0`` with ``phi(0) = 0``,
    ``phi(L) = 1``. Bell: ``(eps/2) phi'' - phi + phi**3 = 0`` with
    ``phi'(0) = 0``, ``phi(L) = 0``. ``L`` is long enough that the far boundary
    condition costs less than ``1e-12``. Returns the scipy solution object.
    """
    eps = float(eps)
    if equation == "kink":
        L = 15 * math.sqrt(eps)
        rhs = lambda x, y: np.vstack([y[1], (2 / eps) * (y[0] ** 3 - y[0])])
        bc = lambda ya, yb: np.array([ya[0], yb[0] - 1.0])
        guess = lambda x: np.vstack([np.minimum(1.0, x / math.sqrt(eps)), np.where(x < math.sqrt(eps), 1 / math.sqrt(eps), 0.0)])
    elif equation == "bell":
        L = 30 * math.sqrt(eps / 2)
        rhs = lambda x, y: np.vstack([y[1], (2 / eps) * (y[0] - y[0] ** 3)])
        bc = lambda ya, yb: np.array([ya[1], yb[0]])
        guess = lambda x: np.vstack([1.5 * np.exp(-x * x / eps), -3 * x / eps * np.exp(-x * x / eps)])
    else:
        raise ValueError(f"unknown soliton equation {equation!r}")
    mesh = np.linspace(0.0, L, 2001)
    sol = solve_bvp(rhs, bc, mesh, guess(mesh), tol=tol, max_nodes=200000)
    if not sol.success:
        raise NonConvergence(f"{equation} boundary-value solve failed: {sol.message}")
    return sol


def soliton_fd_check(equation: str, eps: float, xs=None) -> OracleReport:
    """Max deviation between the closed form and the collocation solution (odd/even extension)."""
    sol = soliton_fd_solution(equation, eps)
    if xs is None:
        xs = np.linspace(-5, 5, 201)
    worst = 0.0
    for x in xs:
        ax = min(abs(x), sol.x[-1])
        value = float(sol.sol(ax)[0])
        if equation == "kink" and x < 0:
            value = -value
        worst = max(worst, abs(value - float(soliton_reference(equation, eps, x, 30))))
    return OracleReport(f"{equation}_fd_deviation", worst, "scipy solve_bvp collocation", worst)


# ------------------------------------------------------------- fixture set

FIXTURE_TOL = {"Z": "1e-12", "E": "1e-10", "Z_strong": "exact", "E_strong": "1e-12"}


def _standard_entries():
    return [
        ("Z", {"g": "0.1"}, lambda: z_value("0.1")),
        ("Z", {"g": "1"}, lambda: z_value(1)),
        ("Z", {"g": "10"}, lambda: z_value(10)),
        ("E", {"g": "0.1"}, lambda: oscillator_energy(0.1)),
        ("E", {"g": "1"}, lambda: oscillator_energy(1.0)),
        ("E", {"g": "10"}, lambda: oscillator_energy(10.0)),
        ("Z_strong", {}, lambda: OracleReport("Z_strong", z_strong_amplitude(30), "Gamma(1/4)/(2 sqrt(pi))", 0.0)),
        ("E_strong", {}, lambda: OracleReport("E_strong", oscillator_strong_amplitude(), "quartic diagonalization",
                                              1e-12)),
    ]


def compute_fixtures(cache: OracleCache | None = None) -> OracleCache:
    """Fill ``cache`` (a fresh in-memory one by default) with the standard oracle values."""
    cache = cache if cache is not None else OracleCache()
    for quantity, params, compute in _standard_entries():
        cache.lookup(quantity, params, FIXTURE_TOL[quantity], compute)
    return cache


def check_fixtures(path: str | Path | None = None) -> list[tuple[str, float, float, float, bool]]:
    """Recompute every stored fixture; rows are ``(key, stored, fresh, allowed, ok)``.

    ``allowed`` adds the stored and fresh error estimates plus a relative
    1e-14 floor for the text round trip.
    """
    stored = OracleCache(path if path is not None else DEFAULT_FIXTURE_PATH)
    rows = []
    for quantity, params, compute in _standard_entries():
        key = OracleCache.key(quantity, params, FIXTURE_TOL[quantity])
        old = stored.get(key)
        if old is None:
            rows.append((key, float("nan"), float("nan"), 0.0, False))
            continue
        new = compute()
        allowed = float(old.error_estimate) + float(new.error_estimate) + 1e-14 * abs(float(old.value))
        diff = abs(float(new.value) - float(old.value))
        rows.append((key, float(old.value), float(new.value), allowed, diff <= allowed))
    return rows

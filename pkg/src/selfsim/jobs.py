"""Batch jobs: parse job files, run order sweeps, emit reports.

Job files are YAML mappings. Scalars that look like decimals are kept as
strings so coefficients never pass through binary floating point::

    input:
      fixture: oscillator          # or: coefficients: ["1", "-0.75", ...]
    method: borel                  # factor | borel | difflog
    orders: 2..14                  # or a list [2, 3, 4]
    u:
      strategy: grid-optimized     # or: fixed, with value: "0"
      grid: ["-0.9", "10", "0.01"]
    eval_points: ["0.1", "1"]
    precision: 60
    output: text-table             # json | csv | text-table
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation
from pathlib import Path

import mpmath
import yaml

from . import oracles
from .borel import DEFAULT_U_GRID, borel_build, borel_integral, grid_points, scan_u, select_u
from .difflog import exponent_estimate
from .errors import (
    AccuracyLoss,
    JobValidationError,
    NoAdmissibleU,
    NonRealResult,
    ResummationError,
    SingularSystem,
)
from .factor import asymptotics, build, describe, diagnostics, evaluate
from .numerics import resolve_precision, to_mpf, workdps
from .odeseries import BELL, KINK, OdeSpec, map_back, soliton_series, translation_shift
from .series import PowerSeries

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
METHODS = ("factor", "borel", "difflog")
FORMATS = ("json", "csv", "text-table")
FIXTURES = ("beta_sym", "z_partition", "oscillator", "kink", "bell")
STATUSES = ("ok", "skipped-nonreal", "skipped-singular")
KNOWN_FIELDS = ("input", "method", "orders", "u", "eval_points", "extrapolate", "precision", "output",
                "observable", "workers")
FIXTURE_PARAMS = {"beta_sym": ("n_colors",), "kink": ("epsilon", "normalization"),
                  "bell": ("epsilon", "normalization"), "z_partition": (), "oscillator": ()}


# ------------------------------------------------------------------ loading


class _JobLoader(yaml.SafeLoader):
    """Safe loader that leaves floats as their source text."""


_JobLoader.yaml_implicit_resolvers = {
    key: [(tag, regexp) for tag, regexp in resolvers if tag != "tag:yaml.org,2002:float"]
    for key, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}


def _to_python(node, path: str, marks: dict):
    marks[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        out = {}
        for key_node, value_node in node.value:
            key = key_node.value
            if key in out:
                raise JobValidationError(f"duplicate field {key!r}", f"line {key_node.start_mark.line + 1}")
            out[key] = _to_python(value_node, f"{path}.{key}" if path else key, marks)
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_to_python(item, f"{path}[{i}]", marks) for i, item in enumerate(node.value)]
    return _JobLoader(io.StringIO("")).construct_object(node, deep=True)


@dataclass(frozen=True)
class ResummationJob:
    """Validated job. Numeric parameters are decimal strings."""

    input: dict
    method: str = "factor"
    orders: tuple = ()
    u_strategy: str = "fixed"
    u_value: str = "0"
    u_grid: tuple = DEFAULT_U_GRID
    eval_points: tuple = ()
    extrapolate: bool = False
    precision: int = 60
    output: str = "text-table"
    observable: str = "exponent"
    workers: int = 1
    warnings: tuple = field(default=(), compare=False)

    def to_dict(self) -> dict:
        u = {"strategy": self.u_strategy}
        if self.u_strategy == "fixed":
            u["value"] = self.u_value
        else:
            u["grid"] = list(self.u_grid)
        out = {
            "input": self.input,
            "method": self.method,
            "orders": list(self.orders),
            "u": u,
            "eval_points": list(self.eval_points),
            "extrapolate": self.extrapolate,
            "precision": self.precision,
            "output": self.output,
        }
        if self.method == "borel":
            out["observable"] = self.observable
        if self.workers != 1:
            out["workers"] = self.workers
        return out


def parse_text(text: str, source: str = "<job>") -> ResummationJob:
    """Parse and validate a job document; errors name the line and field."""
    try:
        node = yaml.compose(text, Loader=_JobLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        raise JobValidationError(f"malformed job file: {getattr(exc, 'problem', exc)}", where) from exc
    if node is None:
        raise JobValidationError("empty job file", source)
    marks: dict = {}
    raw = _to_python(node, "", marks)
    if not isinstance(raw, dict):
        raise JobValidationError("job file must be a mapping", f"{source}:1")
    return validate(raw, source, marks)


def parse_input(path) -> ResummationJob:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise JobValidationError(f"cannot read job file: {exc.strerror}", str(path)) from exc
    return parse_text(text, str(path))


def dump_job(job: ResummationJob) -> str:
    """Job file text that parses back to an equal job."""
    return yaml.safe_dump(job.to_dict(), sort_keys=False, default_flow_style=None)


def _decimal(value, where: str) -> str:
    text = str(value).strip()
    try:
        d = Decimal(text)
    except InvalidOperation:
        if re.fullmatch(r"[+-]?\d+/\d+", text) and not text.endswith("/0"):
            return text
        raise JobValidationError(f"not a decimal number: {value!r}", where) from None
    if not d.is_finite():
        raise JobValidationError(f"not a finite number: {value!r}", where)
    return text


def _parse_orders(value, where: str) -> tuple:
    if isinstance(value, str):
        m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.|-|:)\s*(\d+)\s*", value)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            orders = tuple(range(lo, hi + 1))
        elif re.fullmatch(r"\s*\d+(\s*,\s*\d+)*\s*", value):
            orders = tuple(int(v) for v in value.split(","))
        else:
            raise JobValidationError(f"cannot read orders {value!r}; use a list or 'lo..hi'", where)
    elif isinstance(value, int) and not isinstance(value, bool):
        orders = (value,)
    elif isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        orders = tuple(value)
    else:
        raise JobValidationError("orders must be integers", where)
    if not orders:
        raise JobValidationError("no orders requested", where)
    if min(orders) < 2:
        raise JobValidationError(f"orders must all be >= 2, got {min(orders)}", where)
    if len(set(orders)) != len(orders):
        raise JobValidationError("orders contain duplicates", where)
    return tuple(sorted(orders))


def validate(raw: dict, source: str = "<job>", marks: dict | None = None) -> ResummationJob:
    marks = marks or {}

    def at(path: str) -> str:
        line = marks.get(path)
        return f"{source}:{line}: field '{path}'" if line else f"{source}: field '{path}'"

    warnings = []
    for key in raw:
        if key not in KNOWN_FIELDS:
            msg = f"{at(key)}: unknown field ignored"
            warnings.append(msg)
            log.warning(msg)

    if "input" not in raw:
        raise JobValidationError("missing required field", at("input"))
    inp = raw["input"]
    if not isinstance(inp, dict):
        raise JobValidationError("input must be a mapping with 'coefficients' or 'fixture'", at("input"))
    if ("coefficients" in inp) == ("fixture" in inp):
        raise JobValidationError("give exactly one of 'coefficients' or 'fixture'", at("input"))
    if "coefficients" in inp:
        coeffs = inp["coefficients"]
        if not isinstance(coeffs, list) or not coeffs:
            raise JobValidationError("coefficients must be a non-empty list", at("input.coefficients"))
        values = [_decimal(c, at(f"input.coefficients[{i}]")) for i, c in enumerate(coeffs)]
        extra = set(inp) - {"coefficients", "variable"}
        for key in extra:
            warnings.append(f"{at('input.' + key)}: unknown field ignored")
        clean_input = {"coefficients": values}
        if "variable" in inp:
            clean_input["variable"] = str(inp["variable"])
    else:
        name = inp["fixture"]
        if name not in FIXTURES:
            raise JobValidationError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}",
                                     at("input.fixture"))
        params = {}
        for key, value in inp.items():
            if key == "fixture":
                continue
            if key not in FIXTURE_PARAMS[name]:
                raise JobValidationError(f"fixture {name} takes no parameter {key!r}", at(f"input.{key}"))
            if key == "n_colors":
                if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                    raise JobValidationError("n_colors must be a positive integer", at("input.n_colors"))
                params[key] = value
            else:
                params[key] = _decimal(value, at(f"input.{key}"))
                if key == "epsilon" and not Decimal(params[key]) > 0:
                    raise JobValidationError("epsilon must be positive", at("input.epsilon"))
        if name == "beta_sym":
            params.setdefault("n_colors", 3)
        if name in (KINK, BELL):
            params.setdefault("epsilon", "1")
        clean_input = {"fixture": name, **params}

    method = raw.get("method", "factor")
    if method not in METHODS:
        raise JobValidationError(f"method must be one of {', '.join(METHODS)}", at("method"))

    if "orders" not in raw:
        raise JobValidationError("missing required field", at("orders"))
    orders = _parse_orders(raw["orders"], at("orders"))
    if method == "difflog" and orders[0] < 3:
        raise JobValidationError("difflog needs orders >= 3", at("orders"))
    if method == "difflog" and "coefficients" in clean_input and Decimal(clean_input["coefficients"][0]) == 0:
        raise JobValidationError("difflog needs a nonzero constant term", at("input.coefficients[0]"))
    if method == "difflog" and clean_input.get("fixture") in (KINK, BELL):
        raise JobValidationError("difflog needs a nonzero constant term; soliton series start at z^1",
                                 at("input.fixture"))
    if "coefficients" in clean_input and len(clean_input["coefficients"]) < orders[-1] + 1:
        raise JobValidationError(
            f"insufficient coefficients: order {orders[-1]} needs {orders[-1] + 1}, "
            f"got {len(clean_input['coefficients'])}",
            at("input.coefficients"),
        )

    u = raw.get("u", {})
    if not isinstance(u, dict):
        u = {"strategy": "fixed", "value": u}
    strategy = u.get("strategy", "grid-optimized" if "grid" in u else "fixed")
    if strategy not in ("fixed", "grid-optimized"):
        raise JobValidationError("u strategy must be 'fixed' or 'grid-optimized'", at("u.strategy"))
    u_value = _decimal(u.get("value", "0"), at("u.value"))
    if not to_mpf(u_value) > -1:
        raise JobValidationError("u must exceed -1", at("u.value"))
    grid = u.get("grid", list(DEFAULT_U_GRID))
    if not isinstance(grid, list) or len(grid) != 3:
        raise JobValidationError("u grid must be [u_min, u_max, step]", at("u.grid"))
    grid = tuple(_decimal(g, at(f"u.grid[{i}]")) for i, g in enumerate(grid))
    try:
        grid_points(grid)
    except ValueError as exc:
        raise JobValidationError(str(exc), at("u.grid")) from None
    if method != "borel" and "u" in raw:
        warnings.append(f"{at('u')}: ignored for method {method}")

    points = raw.get("eval_points", [])
    if not isinstance(points, list):
        points = [points]
    points = tuple(_decimal(x, at(f"eval_points[{i}]")) for i, x in enumerate(points))
    extrapolate = raw.get("extrapolate", False)
    if not isinstance(extrapolate, bool):
        raise JobValidationError("extrapolate must be true or false", at("extrapolate"))
    if not extrapolate:
        for i, x in enumerate(points):
            reason = _outside_domain(clean_input, to_mpf(x))
            if reason:
                raise JobValidationError(f"eval point {x} {reason}; set 'extrapolate: true' to allow it",
                                         at(f"eval_points[{i}]"))

    precision = raw.get("precision", 60)
    if not isinstance(precision, int) or isinstance(precision, bool) or precision < 15:
        raise JobValidationError("precision must be an integer >= 15", at("precision"))
    output = raw.get("output", "text-table")
    if output not in FORMATS:
        raise JobValidationError(f"output must be one of {', '.join(FORMATS)}", at("output"))
    observable = raw.get("observable", "exponent")
    if observable not in ("exponent", "amplitude"):
        raise JobValidationError("observable must be 'exponent' or 'amplitude'", at("observable"))
    workers = raw.get("workers", 1)
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
        raise JobValidationError("workers must be a positive integer", at("workers"))

    return ResummationJob(
        input=clean_input, method=method, orders=orders, u_strategy=strategy, u_value=u_value,
        u_grid=grid, eval_points=points, extrapolate=extrapolate, precision=precision, output=output,
        observable=observable, workers=workers, warnings=tuple(warnings),
    )


def _outside_domain(inp: dict, x) -> str | None:
    name = inp.get("fixture")
    if name in (KINK, BELL):
        return None
    if x < 0:
        return "is negative (the expansion variable is a non-negative coupling)"
    if name == "beta_sym" and x >= 1:
        return "is at or beyond the pole y = 1 of the exact beta function"
    return None


# ------------------------------------------------------------------ running


@dataclass
class OrderResult:
    k: int
    status: str
    C: object = None
    nu: object = None
    u: object = None
    validity: str = "clean"
    reason: str = ""
    evaluations: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    approximant: str = ""


@dataclass
class JobReport:
    job: ResummationJob
    orders: list
    recommended_order: int | None
    exact: dict | None
    timestamp: str
    series_label: str = "x"

    @property
    def all_failed(self) -> bool:
        return all(r.status != "ok" for r in self.orders)


def job_series(job: ResummationJob) -> PowerSeries:
    """Input expansion through the largest requested order."""
    k = job.orders[-1]
    prec = job.precision
    inp = job.input
    name = inp.get("fixture")
    if name is None:
        return PowerSeries.from_values(inp["coefficients"][: k + 1], prec, inp.get("variable", "x"))
    if name == "beta_sym":
        return oracles.beta_sym_series(inp["n_colors"], k, prec)
    if name == "z_partition":
        return oracles.z_coefficients(k, prec, validate=False)
    if name == "oscillator":
        return oracles.oscillator_coefficients(k, prec)
    spec = _ode_spec(job)
    return soliton_series(spec)


def _ode_spec(job: ResummationJob) -> OdeSpec:
    inp = job.input
    return OdeSpec(inp["fixture"], inp["epsilon"], max(job.orders[-1], 3), inp.get("normalization"), job.precision)


def _exact_row(job: ResummationJob) -> dict | None:
    """Oracle strong-coupling form and values at the evaluation points."""
    name = job.input.get("fixture")
    if name is None:
        return None
    prec = job.precision
    with workdps(prec):
        points = [to_mpf(x) for x in job.eval_points]
        if name == "beta_sym":
            C, nu = mpmath.mpf(-1), mpmath.mpf(-1)
            values = [1 / (1 - y) for y in points]
        elif name == "z_partition":
            exponent = oracles.Z_STRONG_EXPONENT
            C, nu = oracles.z_strong_amplitude(prec), mpmath.mpf(exponent.numerator) / exponent.denominator
            values = [oracles.z_value(g).value for g in points]
        elif name == "oscillator":
            exponent = oracles.OSCILLATOR_STRONG_EXPONENT
            C, nu = mpmath.mpf(oracles.oscillator_strong_amplitude()), mpmath.mpf(exponent.numerator) / exponent.denominator
            values = [mpmath.mpf(oracles.oscillator_energy(float(g)).value) for g in points]
        else:
            spec = _ode_spec(job)
            shift = spec.c1() / OdeSpec(name, spec.epsilon, spec.order, None, prec).c1()
            if name == KINK:
                C, nu = mpmath.mpf(2), mpmath.mpf(0)
            else:
                C, nu = 2 * mpmath.sqrt(2) / shift, mpmath.mpf(-1)
            x0 = translation_shift(spec)
            values = [oracles.soliton_reference(name, spec.epsilon, x - x0, prec) for x in points]
        return {"C": C, "nu": nu, "evaluations": dict(zip(job.eval_points, values))}


def _status_for(exc: Exception) -> str:
    if isinstance(exc, (NonRealResult, NoAdmissibleU)):
        return "skipped-nonreal"
    return "skipped-singular"


def _evaluate_point(job, fa_or_result, x_text: str, ode: OdeSpec | None):
    x = to_mpf(x_text)
    if job.method == "borel":
        return borel_integral(fa_or_result, x).value
    if ode is not None:
        return map_back(fa_or_result, ode, x)
    return evaluate(fa_or_result, x)


def _run_order(job: ResummationJob, f: PowerSeries, k: int, table: dict | None) -> OrderResult:
    prec = job.precision
    ode = _ode_spec(job) if job.input.get("fixture") in (KINK, BELL) else None
    try:
        if job.method == "difflog":
            est = exponent_estimate(f, k, prec)
            result = OrderResult(k, "ok", None, est.nu, validity="clean" if est.admissible else "flagged",
                                 reason=est.reason)
            result.approximant = _describe(est.approximant)
            return result
        if job.method == "factor":
            fa = build(f, k, precision=prec)
            asym = asymptotics(fa)
            target = fa
            u = None
        else:
            if job.u_strategy == "grid-optimized" and k >= 3:
                control = select_u(f, k, job.u_grid, job.observable, prec, table=table)
            else:
                control = job.u_value
            target = borel_build(f, k, control, prec)
            fa = target.approximant
            asym = target.asymptotic
            u = target.u.u
    except (NonRealResult, NoAdmissibleU, SingularSystem, AccuracyLoss) as exc:
        return OrderResult(k, _status_for(exc), reason=str(exc))

    result = OrderResult(k, "ok", asym.amplitude, asym.exponent, u, asym.validity, asym.reason)
    result.approximant = _describe(fa)
    # S_k is only meaningful in the approximant's own variable
    probes = job.eval_points if job.method == "factor" and ode is None else ()
    report = diagnostics(fa, probes)
    result.diagnostics = {
        "s_k": report.s_k,
        "max_pair_product": report.max_pair_product,
        "newest_pair_product": report.newest_pair_product,
        "hankel_condition": report.hankel_condition,
        "effective_rank": report.effective_rank,
        "residual": fa.residual,
    }
    for x, value in report.S_k_values.items():
        result.diagnostics[f"S_k({x})"] = value
    for x in job.eval_points:
        try:
            with workdps(prec):
                result.evaluations[x] = _evaluate_point(job, target, x, ode)
        except ResummationError as exc:
            result.evaluations[x] = None
            result.reason = "; ".join(filter(None, [result.reason, f"x={x}: {exc}"]))
    return result


def _describe(fa) -> str:
    return describe(fa) if fa is not None else ""


def recommended_order(results: list) -> int | None:
    """Order with the smallest ``|nu_k - nu_{k-1}|`` over consecutive ok orders; ties go to larger ``k``."""
    best = None
    by_k = {r.k: r for r in results}
    for r in results:
        prev = by_k.get(r.k - 1)
        if r.status != "ok" or prev is None or prev.status != "ok":
            continue
        if not (_finite(r.nu) and _finite(prev.nu)):
            continue
        key = (abs(r.nu - prev.nu), -r.k)
        if best is None or key < best[0]:
            best = (key, r.k)
    return None if best is None else best[1]


def _finite(v) -> bool:
    return v is not None and mpmath.isfinite(v)


def run_job(job: ResummationJob, with_exact: bool = True) -> JobReport:
    """Run every order of ``job``; per-order failures become skipped statuses."""
    prec = resolve_precision(job.precision)
    with workdps(prec):
        f = job_series(job)
        table = None
        if job.method == "borel" and job.u_strategy == "grid-optimized":
            needed = sorted({j for k in job.orders if k >= 3 for j in (k - 1, k)})
            table = scan_u(f, needed, job.u_grid, job.observable, prec, workers=job.workers)
        results = [_run_order(job, f, k, table) for k in job.orders]
        exact = _exact_row(job) if with_exact else None
    return JobReport(
        job=job,
        orders=results,
        recommended_order=recommended_order(results),
        exact=exact,
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        series_label=f.variable_label,
    )


# ------------------------------------------------------------------ output


def format_number(v, digits: int) -> str | None:
    if v is None:
        return None
    if isinstance(v, (int,)) and not isinstance(v, bool):
        return str(v)
    if isinstance(v, mpmath.mpc):
        v = v.real
    v = mpmath.mpf(v)
    if mpmath.isnan(v):
        return "nan"
    if mpmath.isinf(v):
        return "inf" if v > 0 else "-inf"
    return mpmath.nstr(v, digits, min_fixed=-4, max_fixed=digits + 1, strip_zeros=True)


def report_dict(report: JobReport, digits: int | None = None) -> dict:
    with workdps(report.job.precision):
        return _report_dict(report, digits or min(report.job.precision, 30))


def _report_dict(report: JobReport, digits: int) -> dict:
    rows = []
    for r in report.orders:
        rows.append({
            "k": r.k,
            "status": r.status,
            "C": format_number(r.C, digits),
            "nu": format_number(r.nu, digits),
            "u": format_number(r.u, digits),
            "validity": r.validity,
            "reason": r.reason,
            "approximant": r.approximant,
            "evaluations": {x: format_number(v, digits) for x, v in r.evaluations.items()},
            "diagnostics": {key: format_number(v, digits) for key, v in r.diagnostics.items()},
        })
    exact = None
    if report.exact is not None:
        exact = {
            "C": format_number(report.exact["C"], digits),
            "nu": format_number(report.exact["nu"], digits),
            "evaluations": {x: format_number(v, digits) for x, v in report.exact["evaluations"].items()},
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "timestamp": report.timestamp,
        "job": report.job.to_dict(),
        "orders": rows,
        "recommended_order": report.recommended_order,
        "exact": exact,
    }


def emit_report(report: JobReport, fmt: str | None = None) -> bytes:
    fmt = fmt or report.job.output
    if fmt == "json":
        return (json.dumps(report_dict(report), indent=2) + "\n").encode()
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "C", "nu", "status"])
        with workdps(report.job.precision):
            for r in report.orders:
                writer.writerow([r.k, format_number(r.C, 15) or "", format_number(r.nu, 15) or "", r.status])
        return buf.getvalue().encode()
    if fmt == "text-table":
        with workdps(report.job.precision):
            return _text_table(report).encode()
    raise ValueError(f"unknown output format {fmt!r}")


def _text_table(report: JobReport) -> str:
    job = report.job
    header = ["k", "C_k", "nu_k"]
    if job.method == "borel":
        header.append("u")
    header += [f"f({x})" for x in job.eval_points] + ["status"]
    rows = []
    for r in report.orders:
        mark = "*" if r.k == report.recommended_order else ""
        row = [f"{r.k}{mark}", format_number(r.C, 6) or "-", format_number(r.nu, 6) or "-"]
        if job.method == "borel":
            row.append(format_number(r.u, 6) or "-")
        row += [format_number(r.evaluations.get(x), 10) or "-" for x in job.eval_points]
        status = r.status if r.validity == "clean" else f"{r.status} (flagged)"
        rows.append(row + [status])
    if report.exact is not None:
        row = ["exact", format_number(report.exact["C"], 6), format_number(report.exact["nu"], 6)]
        if job.method == "borel":
            row.append("")
        row += [format_number(report.exact["evaluations"].get(x), 10) or "-" for x in job.eval_points]
        rows.append(row + [""])
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)]
    lines = ["  ".join(str(c).rjust(w) for c, w in zip(line, widths)).rstrip() for line in [header] + rows]
    name = job.input.get("fixture", "inline series")
    title = f"{job.method} sweep of {name}, precision {job.precision}"
    footer = f"* recommended order {report.recommended_order}" if report.recommended_order else "no recommended order"
    return "\n".join([title, *lines, footer]) + "\n"


def with_overrides(job: ResummationJob, **changes) -> ResummationJob:
    """Copy of ``job`` with CLI overrides applied and re-validated."""
    data = job.to_dict()
    for key, value in changes.items():
        if value is not None:
            data[key] = value
    return validate(data, "<overrides>")


__all__ = [
    "format_number", "JobReport", "OrderResult", "ResummationJob", "dump_job", "emit_report", "job_series", "parse_input",
    "parse_text", "recommended_order", "report_dict", "run_job", "validate", "with_overrides",
]

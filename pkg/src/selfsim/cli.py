"""Command-line driver.

Exit codes: 0 success, 1 invalid input, 2 every order failed, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import oracles
from .errors import JobValidationError, ResummationError
from .jobs import FIXTURES, emit_report, format_number, parse_input, run_job, validate
from .numerics import workdps

EXIT_OK, EXIT_INVALID, EXIT_ALL_FAILED, EXIT_NUMERIC = 0, 1, 2, 3

FIXTURE_HELP = {
    "beta_sym": "symmetric-scheme beta function in y = N_c g^2/(8 pi^2); exact (1-y)^-1 (param n_colors)",
    "z_partition": "zero-dimensional partition function Z(g) = pi^-1/2 int exp(-p^2 - g p^4) dp",
    "oscillator": f"anharmonic oscillator ground energy, {oracles.OSCILLATOR_CONVENTION}",
    "kink": "kink soliton series in z = exp(2x/sqrt(eps)) for u = phi + 1 (params epsilon, normalization)",
    "bell": "bell soliton series in z = exp(x sqrt(2/eps)) (params epsilon, normalization)",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _split(text: str | None) -> list[str] | None:
    if text is None:
        return None
    return [part.strip() for part in text.split(",") if part.strip()]


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--precision", type=int, help="working precision in decimal digits (default 60)")
    parser.add_argument("--output", choices=["json", "csv", "text-table", "text"], help="report format")
    parser.add_argument("--orders", help="orders as 'lo..hi' or a comma list")
    parser.add_argument("--u-grid", dest="u_grid", help="Borel control grid 'u_min,u_max,step'")
    parser.add_argument("--eval", dest="eval_points", help="comma-separated evaluation points")
    parser.add_argument("--extrapolate", action="store_true", default=None,
                        help="allow evaluation points outside the fixture's natural domain")
    parser.add_argument("--workers", type=int, help="processes for Borel grid scans")


def _input_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("job", nargs="?", help="job file (YAML); flags override its fields")
    src = parser.add_mutually_exclusive_group()
    src.add_argument("--fixture", choices=FIXTURES, help="named input series")
    src.add_argument("--coefficients", help="comma-separated coefficients a0,a1,... (decimal strings)")
    parser.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                        help="fixture parameter, e.g. n_colors=3 or epsilon=0.25")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="selfsim", description="Resummation with self-similar factor approximants.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, text in (("factor", "factor approximants across orders"),
                       ("borel", "self-similar Borel summation across orders"),
                       ("difflog", "large-variable exponent from the diff-log approximant")):
        p = sub.add_parser(name, help=text)
        _input_args(p)
        _common(p)
        if name == "borel":
            p.add_argument("--u", dest="u_value", help="fixed control parameter (disables grid optimization)")
            p.add_argument("--observable", choices=["exponent", "amplitude"])

    p = sub.add_parser("sweep", help="run a job file as written")
    p.add_argument("job", help="job file (YAML)")
    _common(p)

    p = sub.add_parser("diagnose", help="convergence diagnostics of factor approximants")
    _input_args(p)
    _common(p)

    p = sub.add_parser("fixtures", help="list fixtures and manage the oracle fixture file")
    p.add_argument("--write", metavar="PATH", nargs="?", const=str(oracles.DEFAULT_FIXTURE_PATH),
                   help="recompute oracle values and write them (default: packaged file)")
    p.add_argument("--check", metavar="PATH", nargs="?", const=str(oracles.DEFAULT_FIXTURE_PATH),
                   help="recompute oracle values and compare with a stored file")
    return parser


def _raw_job(args, method: str | None) -> dict:
    if getattr(args, "job", None):
        raw = parse_input(args.job).to_dict()
    else:
        raw = {}
    if getattr(args, "fixture", None):
        params = {}
        for item in args.param:
            key, sep, value = item.partition("=")
            if not sep:
                raise JobValidationError(f"expected KEY=VALUE, got {item!r}", "--param")
            params[key.strip()] = int(value) if key.strip() == "n_colors" and value.strip().isdigit() else value.strip()
        raw["input"] = {"fixture": args.fixture, **params}
    elif getattr(args, "coefficients", None):
        raw["input"] = {"coefficients": _split(args.coefficients)}
    elif getattr(args, "param", None):
        raise JobValidationError("--param needs --fixture", "--param")
    if method is not None:
        raw["method"] = method
    if args.orders:
        raw["orders"] = args.orders
    if args.precision is not None:
        raw["precision"] = args.precision
    if args.output:
        raw["output"] = "text-table" if args.output == "text" else args.output
    if args.eval_points is not None:
        raw["eval_points"] = _split(args.eval_points)
    if args.extrapolate:
        raw["extrapolate"] = True
    if args.workers is not None:
        raw["workers"] = args.workers
    u = dict(raw.get("u", {}))
    if args.u_grid:
        grid = _split(args.u_grid)
        u = {"strategy": "grid-optimized", "grid": grid}
    if getattr(args, "u_value", None) is not None:
        u = {"strategy": "fixed", "value": args.u_value}
    if raw.get("method") == "borel" and not u:
        u = {"strategy": "grid-optimized"}
    if u:
        raw["u"] = u
    if getattr(args, "observable", None):
        raw["observable"] = args.observable
    if "input" not in raw:
        raise JobValidationError("no input: give a job file, --fixture or --coefficients", "arguments")
    if "orders" not in raw:
        raise JobValidationError("no orders: give --orders or a job file", "arguments")
    return raw


def _diagnose_text(report) -> str:
    probes = [f"S_k({x})" for x in report.job.eval_points]
    header = ["k", "status", *probes, "s_k", "max|nA|", "cond(H)", "rank", "residual"]
    rows = []
    for r in report.orders:
        d = r.diagnostics
        cells = [format_number(d.get(p), 8) for p in probes]
        cells += [format_number(d.get("s_k"), 8), format_number(d.get("max_pair_product"), 8),
                  format_number(d.get("hankel_condition"), 4), format_number(d.get("effective_rank"), 4),
                  format_number(d.get("residual"), 3)]
        rows.append([str(r.k), r.status, *(c or "-" for c in cells)])
    widths = [max(len(c) for c in col) for col in zip(header, *rows)]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(line, widths)) for line in [header] + rows) + "\n"


def _fixtures(args) -> int:
    if args.write:
        cache = oracles.compute_fixtures()
        cache.save(args.write)
        print(f"wrote {args.write}")
    if args.check:
        rows = oracles.check_fixtures(args.check)
        bad = 0
        for key, old, new, allowed, ok in rows:
            bad += not ok
            print(f"{'ok  ' if ok else 'FAIL'} {key}: stored {old!r}, recomputed {new!r}, allowed {allowed:.1e}")
        return EXIT_OK if bad == 0 else EXIT_NUMERIC
    if not args.write:
        for name in FIXTURES:
            print(f"{name:12s} {FIXTURE_HELP[name]}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "fixtures":
            return _fixtures(args)
        method = {"factor": "factor", "borel": "borel", "difflog": "difflog", "diagnose": "factor"}.get(args.command)
        job = validate(_raw_job(args, method), args.job if getattr(args, "job", None) else "<command line>")
        for warning in job.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        report = run_job(job)
        if args.command == "diagnose" and job.output == "text-table":
            with workdps(job.precision):
                sys.stdout.write(_diagnose_text(report))
        else:
            sys.stdout.buffer.write(emit_report(report))
        sys.stdout.flush()
        return EXIT_ALL_FAILED if report.all_failed else EXIT_OK
    except JobValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ResummationError, ArithmeticError) as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())


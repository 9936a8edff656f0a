"""Command-line front end.

Subcommands: ``coeffs`` (exact coefficient tables), ``trees`` (tree listings
with optional weights), ``series`` (generating-function coefficients, tail
majorant curves, fitted-scale sweeps), ``bounds`` (closed-form term and tail
bounds), ``verify`` (built-in consistency checks), and ``simulate``
(numerical bound validation driven by a run config).

Exit codes: 0 success, 1 a verification or validation check failed, 2 usage
or configuration error, 3 numeric non-convergence.  Tabular output goes to
stdout (or ``--output``); figures are written wherever ``--plot`` points.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, coefficients, selfcheck, series, trees
from .exact import rational_string, scientific_string

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

# Brute-force tree enumeration grows with the Catalan numbers; past this
# leaf count the recursion is the only supported route.
ENUMERATION_CAP = 12


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _emit_json(payload: dict, output: str | None) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", output)


def _check_enumeration_cap(n: int, what: str) -> None:
    if n > ENUMERATION_CAP:
        raise ValueError(
            f"{what} is capped at n = {ENUMERATION_CAP} "
            f"(Catalan growth makes larger n impractical); got {n}"
        )


def _pretty_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _cmd_coeffs(args: argparse.Namespace) -> int:
    n = args.n
    if args.method == "recursion":
        table = coefficients.nu_recursive(n)
    elif args.method == "simplified":
        table = coefficients.nu_simplified(n)
    else:
        _check_enumeration_cap(n, "enumeration")
        values = [coefficients.nu_enumeration(k) for k in range(1, n + 1)]
        table = coefficients.NuTable("enumeration", tuple([Fraction(0)] + values))

    if args.format == "csv":
        _emit(coefficients.nu_table_csv(table), args.output)
    elif args.format == "json":
        payload = {
            "method": table.method,
            "values": [
                {
                    "n": k,
                    "exact": rational_string(v),
                    "decimal": scientific_string(v),
                }
                for k, v in table.items()
            ],
        }
        _emit_json(payload, args.output)
    else:
        rows = [
            [str(k), rational_string(v), scientific_string(v), table.method]
            for k, v in table.items()
        ]
        _emit(_pretty_table(["n", "exact", "decimal", "method"], rows), args.output)

    if args.plot:
        from . import plotting

        plotting.save_coefficient_decay(table, args.plot)
    return EXIT_OK


def _cmd_trees(args: argparse.Namespace) -> int:
    _check_enumeration_cap(args.n, "tree listing")
    tree_set = trees.enumerate_trees(args.n)

    if args.coefficients:
        records = coefficients.coefficient_records(args.n)
        if args.format == "json":
            _emit_json(coefficients.records_json_dict(records), args.output)
            return EXIT_OK
        header = ["tree", "alpha", "mu", "product", "expression"]
        rows = [
            [
                trees.serialize(r.tree),
                rational_string(r.alpha),
                rational_string(r.mu),
                rational_string(r.product),
                trees.to_commutator_expression(r.tree),
            ]
            for r in records
        ]
    else:
        if args.format == "json":
            _emit_json(trees.tree_set_json(tree_set), args.output)
            return EXIT_OK
        header = ["tree", "expression"]
        rows = [
            [trees.serialize(t), trees.to_commutator_expression(t)]
            for t in tree_set
        ]

    if args.format == "csv":
        import csv as csv_mod
        import io

        buffer = io.StringIO()
        writer = csv_mod.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        _emit(buffer.getvalue(), args.output)
    else:
        _emit(_pretty_table(header, rows), args.output)
    return EXIT_OK


def _cmd_series(args: argparse.Namespace) -> int:
    if args.gen_coeffs is not None:
        log_series = series.lhs_integral_series(args.gen_coeffs)
        if args.format == "json":
            payload = {
                "log_coefficient": rational_string(log_series.log_coefficient),
                "coefficients": {
                    str(k): rational_string(log_series.coefficient(k))
                    for k in range(1, log_series.series.order + 1)
                },
                "note": "the order-4 value 11/12960 is sometimes misquoted as 11/12969",
            }
            _emit_json(payload, args.output)
        elif args.format == "csv":
            _emit(series.lhs_series_csv(log_series), args.output)
        else:
            rows = [["log(f)", rational_string(log_series.log_coefficient), ""]]
            for k in range(1, log_series.series.order + 1):
                note = "sometimes misquoted as 11/12969" if k == 4 else ""
                rows.append([str(k), rational_string(log_series.coefficient(k)), note])
            _emit(_pretty_table(["power", "coefficient", "note"], rows), args.output)
        return EXIT_OK

    if args.phi is not None:
        n = args.phi
        beta = args.beta if args.beta is not None else series.estimate_beta(n)
        curve = series.emit_phi_curve(n, beta, args.k_min, args.k_max)
        if args.format == "json":
            payload = {
                "n": n,
                "beta": beta,
                "k_peak": series.phi_argmax(n, beta),
                "curve": [{"k": k, "phi": v} for k, v in curve],
            }
            _emit_json(payload, args.output)
        elif args.format == "csv":
            _emit(series.phi_curve_csv(curve), args.output)
        else:
            rows = [[str(k), f"{v:.8e}"] for k, v in curve]
            _emit(_pretty_table(["k", "phi"], rows), args.output)
        if args.plot:
            from . import plotting

            plotting.save_phi_curve(
                curve, args.plot, title=f"n = {n}, beta = {beta:.6f}"
            )
        return EXIT_OK

    # beta sweep
    rows = series.beta_sweep(args.n_min, args.n_max, args.k_cut)
    if args.format == "json":
        payload = {
            "rows": [
                {
                    "n": r.n,
                    "beta": r.beta,
                    "theta": r.theta,
                    "delta": r.delta,
                    "k_max": r.k_max,
                }
                for r in rows
            ]
        }
        _emit_json(payload, args.output)
    elif args.format == "csv":
        _emit(series.beta_sweep_csv(rows), args.output)
    else:
        table_rows = [
            [str(r.n), f"{r.beta:.6f}", f"{r.theta:.6f}", f"{r.delta:.6f}", f"{r.k_max:.3f}"]
            for r in rows
        ]
        _emit(
            _pretty_table(["n", "beta", "theta", "delta", "k_max"], table_rows),
            args.output,
        )
    if args.plot:
        from . import plotting

        plotting.save_beta_sweep(rows, args.plot)
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace) -> int:
    report = bounds.build_report(
        args.h_max, args.t, args.n_trunc, tight=args.tight, prefactor=args.prefactor
    )
    if args.compare:
        rows = bounds.comparison_table(args.n_trunc, args.h_max, args.t, args.prefactor)
        if args.format == "csv":
            _emit(bounds.comparison_csv(rows), args.output)
        elif args.format == "json":
            payload = report.to_json_dict()
            payload["comparison"] = [
                {
                    "n": r.n,
                    "bound_new": r.bound,
                    "bound_prior": r.prior_bound,
                    "ratio": r.ratio,
                }
                for r in rows
            ]
            _emit_json(payload, args.output)
        else:
            table_rows = [
                [str(r.n), f"{r.bound:.8e}", f"{r.prior_bound:.8e}", f"{r.ratio:.8e}"]
                for r in rows
            ]
            _emit(
                _pretty_table(["n", "bound_new", "bound_prior", "ratio"], table_rows),
                args.output,
            )
        return EXIT_OK

    if args.format == "csv":
        lines = ["kind,n,value"]
        for n, value in report.per_term:
            lines.append(f"term,{n},{value:.8e}")
        simple = "diverged" if report.diverged else f"{report.truncation_simple:.8e}"
        lines.append(f"truncation_simple,{report.n_trunc},{simple}")
        if report.truncation_tight is not None:
            lines.append(f"truncation_tight,{report.n_trunc},{report.truncation_tight:.8e}")
        _emit("\n".join(lines) + "\n", args.output)
    elif args.format == "json":
        _emit_json(report.to_json_dict(), args.output)
    else:
        rows = [["term", str(n), f"{v:.8e}"] for n, v in report.per_term]
        simple = "diverged" if report.diverged else f"{report.truncation_simple:.8e}"
        rows.append(["truncation_simple", str(report.n_trunc), simple])
        if report.truncation_tight is not None:
            rows.append(
                ["truncation_tight", str(report.n_trunc), f"{report.truncation_tight:.8e}"]
            )
        _emit(_pretty_table(["kind", "n", "value"], rows), args.output)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    results = selfcheck.run_checks(args.suite)
    all_passed = True
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status} {result.name}")
        for line in result.lines:
            print(f"    {line}")
        all_passed = all_passed and result.passed
    return EXIT_OK if all_passed else EXIT_FAIL


def _cmd_simulate(args: argparse.Namespace) -> int:
    from . import dynamics

    if args.example:
        text = dynamics.example_config_text()
    else:
        path = Path(args.config)
        if not path.exists():
            raise dynamics.ConfigError(f"config file not found: {path}")
        text = path.read_text()
    config = dynamics.parse_run_config(text)
    report = dynamics.run_validation(config)
    _emit_json(report.to_json_dict(), args.output)
    if args.plot:
        from . import plotting

        plotting.save_validation(report, args.plot)
    if report.rejection is not None:
        print(f"instance rejected: {report.rejection}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK if report.passed else EXIT_FAIL


def _add_format_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("csv", "json", "pretty"),
        default="csv",
        help="output rendering (default csv)",
    )
    parser.add_argument("--output", metavar="PATH", help="write output to a file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magnusbound",
        description="Exact coefficient tables and certified truncation bounds "
        "for commutator-integral expansions of time-ordered propagators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_coeffs = sub.add_parser("coeffs", help="exact order coefficient tables")
    p_coeffs.add_argument("n", type=int, help="largest order to tabulate")
    p_coeffs.add_argument(
        "method",
        nargs="?",
        choices=("recursion", "enumeration", "simplified"),
        default="recursion",
        help="evaluation route (default recursion)",
    )
    _add_format_options(p_coeffs)
    p_coeffs.add_argument("--plot", metavar="PATH", help="also render a decay figure")
    p_coeffs.set_defaults(handler=_cmd_coeffs)

    p_trees = sub.add_parser("trees", help="list trees with a given leaf count")
    p_trees.add_argument("n", type=int, help="leaf count")
    p_trees.add_argument(
        "--coefficients",
        "-c",
        action="store_true",
        help="include the alpha, mu, and |alpha|*mu columns",
    )
    _add_format_options(p_trees)
    p_trees.set_defaults(handler=_cmd_trees)

    p_series = sub.add_parser(
        "series", help="generating-function series and tail-model diagnostics"
    )
    group = p_series.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--gen-coeffs",
        type=int,
        metavar="ORDER",
        help="antiderivative series of the reciprocal kernel, exact rationals",
    )
    group.add_argument(
        "--phi", type=int, metavar="N", help="sampled tail-term majorant at order N"
    )
    group.add_argument(
        "--beta-sweep", action="store_true", help="fit beta across orders"
    )
    p_series.add_argument("--beta", type=float, help="override the fitted beta (with --phi)")
    p_series.add_argument("--k-min", type=int, default=1, help="first k (with --phi)")
    p_series.add_argument("--k-max", type=int, default=60, help="last k (with --phi)")
    p_series.add_argument("--n-min", type=int, default=10, help="sweep start (with --beta-sweep)")
    p_series.add_argument("--n-max", type=int, default=24, help="sweep end (with --beta-sweep)")
    p_series.add_argument("--k-cut", type=int, default=60, help="tail-model cutoff")
    _add_format_options(p_series)
    p_series.add_argument("--plot", metavar="PATH", help="also render a figure")
    p_series.set_defaults(handler=_cmd_series)

    p_bounds = sub.add_parser("bounds", help="closed-form term and tail bounds")
    p_bounds.add_argument("h_max", type=float, help="sup norm of the generator")
    p_bounds.add_argument("t", type=float, help="final time")
    p_bounds.add_argument("n_trunc", type=int, help="kept orders N")
    p_bounds.add_argument("--tight", action="store_true", help="include the series tail bound")
    p_bounds.add_argument(
        "--compare", action="store_true", help="tabulate against the prior per-order bound"
    )
    p_bounds.add_argument(
        "--prefactor",
        type=float,
        default=4.0,
        help="overall bound constant (default 4)",
    )
    _add_format_options(p_bounds)
    p_bounds.set_defaults(handler=_cmd_bounds)

    p_verify = sub.add_parser("verify", help="run built-in consistency checks")
    p_verify.add_argument(
        "--suite",
        choices=tuple(selfcheck.SUITES) + ("all",),
        default="all",
        help="which check to run (default all)",
    )
    p_verify.set_defaults(handler=_cmd_verify)

    p_sim = sub.add_parser("simulate", help="validate bounds on a configured instance")
    p_sim.add_argument("config", nargs="?", help="path to a key = value run config")
    p_sim.add_argument(
        "--example", action="store_true", help="use the bundled example config"
    )
    p_sim.add_argument("--output", metavar="PATH", help="write the JSON report to a file")
    p_sim.add_argument("--plot", metavar="PATH", help="also render a validation figure")
    p_sim.set_defaults(handler=_cmd_simulate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage or help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE

    if getattr(args, "command", None) == "simulate":
        if not args.example and not args.config:
            print("error: simulate needs a config path or --example", file=sys.stderr)
            return EXIT_USAGE
        if args.example and args.config:
            print("error: give either a config path or --example, not both", file=sys.stderr)
            return EXIT_USAGE

    try:
        return args.handler(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK
    except Exception as err:  # sorted into the documented exit codes below
        from . import dynamics

        numeric_errors = (
            dynamics.QuadratureError,
            dynamics.NonConvergenceError,
            dynamics.BranchCutError,
            series.BracketingError,
            series.RangeOverflowError,
        )
        if isinstance(err, numeric_errors):
            print(f"numeric failure: {err}", file=sys.stderr)
            return EXIT_NUMERIC
        if isinstance(err, (ValueError, OSError, KeyError, IndexError)):
            print(f"error: {err}", file=sys.stderr)
            return EXIT_USAGE
        raise


def main_entry() -> None:
    """Console-script entry point."""
    raise SystemExit(main())

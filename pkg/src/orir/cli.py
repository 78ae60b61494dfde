"""Command-line entry point.

Exit codes mirror solver statuses so shell pipelines can branch on the
outcome: 0 optimal, 1 validation errors, 2 parse failure, 3 infeasible,
4 unbounded, 5 limit-terminated with an incumbent, 6 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .build.compile import compile_model, compile_model_streaming
from .build.lpwrite import write_lp
from .build.stats import model_stats
from .data.store import load_tables
from .errors import OrirError, SchemaError, TokenError, ValidationFailed
from .ir.parser import parse_ir
from .ir.validator import validate_ir
from .solver import check_solution, solve, SolveOptions, write_solution
from .whatif.patches import parse_patches
from .whatif.scenario import run_scenario, ScenarioError

log = logging.getLogger("orir")

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_UNBOUNDED = 4
EXIT_LIMIT = 5
EXIT_ERROR = 6

_STATUS_EXIT = {
    "optimal": EXIT_OK,
    "infeasible": EXIT_INFEASIBLE,
    "unbounded": EXIT_UNBOUNDED,
    "feasible": EXIT_LIMIT,
    "error": EXIT_ERROR,
}


def _setup_logging():
    level = os.environ.get("OR_IR_LOG", "warning").lower()
    levels = {"debug": logging.DEBUG, "info": logging.INFO,
              "warning": logging.WARNING, "quiet": logging.CRITICAL}
    logging.basicConfig(stream=sys.stderr, format="%(name)s: %(message)s",
                        level=levels.get(level, logging.WARNING))


def _read_ir(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    try:
        return text, parse_ir(text)
    except (json.JSONDecodeError, SchemaError, TokenError) as exc:
        print(f"parse failure: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def _load_labels(args, ir_path: str):
    if getattr(args, "labels", None):
        return json.loads(Path(args.labels).read_text(encoding="utf-8"))
    sibling = Path(ir_path).parent / "dim_labels.json"
    if sibling.exists():
        return json.loads(sibling.read_text(encoding="utf-8"))
    return None


def cmd_validate(args) -> int:
    _, model = _read_ir(args.ir)
    report = validate_ir(model)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        for issue in report.errors:
            print(f"error {issue.code} at {issue.path}: {issue.message}")
        for issue in report.warnings:
            print(f"warning {issue.code} at {issue.path}: {issue.message}")
        print("valid" if report.ok else
              f"invalid: {len(report.errors)} error(s)")
    return EXIT_OK if report.ok else EXIT_VALIDATION


def _compile(args, model, labels):
    try:
        store = load_tables(args.data)
    except OSError as exc:
        print(f"cannot load tables: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    return store, lambda row_sink=None: compile_model(
        model, store, labels, row_sink)


def cmd_solve(args) -> int:
    ir_text, model = _read_ir(args.ir)
    labels = _load_labels(args, args.ir)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    store, compiler = _compile(args, model, labels)
    log_lines = []
    try:
        if args.lp_only:
            cm, row_iter = compile_model_streaming(model, store, labels)
            with open(out / "model.lp", "w", encoding="utf-8",
                      newline="\n") as fh:
                write_lp(fh, cm.sense, cm.objective, cm.variables, row_iter)
            stats = model_stats(cm)
            (out / "stats.json").write_text(
                json.dumps(stats.to_dict(), indent=2) + "\n")
            (out / "ir.json").write_text(ir_text, encoding="utf-8")
            log_lines += [f"variables {stats.variable_count}",
                          f"rows {stats.row_count}", "lp-only run"]
            (out / "run_log.txt").write_text("\n".join(log_lines) + "\n")
            return EXIT_OK
        cm = compiler()
    except ValidationFailed as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    except OrirError as exc:
        print(f"compile failure: {exc}", file=sys.stderr)
        return EXIT_ERROR
    with open(out / "model.lp", "w", encoding="utf-8", newline="\n") as fh:
        write_lp(fh, cm.sense, cm.objective, cm.variables, cm.rows)
    (out / "ir.json").write_text(ir_text, encoding="utf-8")
    stats = model_stats(cm)
    log.info("compiled %d variables, %d rows, %d nonzeros",
             stats.variable_count, stats.row_count, stats.nonzeros)
    for issue in cm.warnings:
        log.info("compile warning %s at %s: %s", issue.code, issue.path,
                 issue.message)
    if args.stats:
        (out / "stats.json").write_text(
            json.dumps(stats.to_dict(), indent=2) + "\n")
    opts = SolveOptions(time_limit=args.time_limit)
    sol = solve(cm, opts)
    log_lines += [f"variables {stats.variable_count}",
                  f"rows {stats.row_count}",
                  f"status {sol.status}",
                  f"iterations {sol.iterations}",
                  f"nodes {sol.nodes}"]
    if sol.status in ("optimal", "feasible"):
        write_solution(sol, cm, out)
        report = check_solution(cm, sol.values, opts.feasibility_tol)
        log_lines.append(f"max_violation {report.max_violation:.3e}")
    else:
        (out / "summary.json").write_text(json.dumps(
            {"status": sol.status, "objective": None,
             "nonzeros_by_group": {}}, indent=2) + "\n")
    (out / "run_log.txt").write_text("\n".join(log_lines) + "\n")
    return _STATUS_EXIT.get(sol.status, EXIT_ERROR)


def cmd_stats(args) -> int:
    _, model = _read_ir(args.ir)
    labels = _load_labels(args, args.ir)
    _, compiler = _compile(args, model, labels)
    try:
        cm = compiler(row_sink=lambda row: None)
    except ValidationFailed as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    print(json.dumps(model_stats(cm).to_dict(), indent=2))
    return EXIT_OK


def cmd_whatif(args) -> int:
    _, model = _read_ir(args.ir)
    labels = _load_labels(args, args.ir)
    try:
        patches = parse_patches(Path(args.patches).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError, SchemaError) as exc:
        print(f"cannot read patches: {exc}", file=sys.stderr)
        return EXIT_PARSE
    store = load_tables(args.data)
    try:
        diff = run_scenario(model, store, patches,
                            SolveOptions(time_limit=args.time_limit),
                            dim_labels=labels)
    except ScenarioError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_VALIDATION
    payload = json.dumps(diff.to_dict(), indent=2) + "\n"
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        print(payload, end="")
    return EXIT_OK


def _parse_overrides(pairs):
    overrides = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise SystemExit(f"--override expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        overrides[key] = float(value)
    return overrides


def cmd_gen(args) -> int:
    from .gen import (AssignmentConfig, gen_assignment, gen_lp_network,
                      gen_mip_network, LpNetworkConfig, MipNetworkConfig)
    overrides = _parse_overrides(args.override)
    try:
        if args.family == "lp_network":
            cfg = LpNetworkConfig(
                seed=args.seed, sites=args.sites, dcs=args.dcs,
                customers=args.customers, products=args.products,
                periods=args.periods, ps_fanout=args.ps_fanout,
                dc_fanout=args.dc_fanout, clusters=args.clusters,
                overrides=overrides)
            gen_lp_network(cfg, args.out)
        elif args.family == "mip_network":
            cfg = MipNetworkConfig(
                seed=args.seed, sites=args.sites, dcs=args.dcs,
                customers=args.customers, products=args.products,
                periods=args.periods, base_sites=args.base_sites,
                base_dcs=args.base_dcs, base_customers=args.base_customers,
                ps_fanout=args.ps_fanout, dc_fanout=args.dc_fanout,
                clusters=args.clusters, overrides=overrides)
            gen_mip_network(cfg, args.out)
        else:
            cfg = AssignmentConfig(seed=args.seed, carriers=args.carriers,
                                   shipments=args.shipments,
                                   overrides=overrides)
            gen_assignment(cfg, args.out)
    except OrirError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(args.out)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.ir, args.data, labels_path=args.labels)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orir",
        description="Compile, validate, solve, generate, and explore "
                    "optimization-model IR instances.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate an IR document")
    p.add_argument("ir")
    p.add_argument("--json", action="store_true",
                   help="print the report as JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="compile and solve, writing artifacts")
    p.add_argument("ir")
    p.add_argument("data", help="directory of CSV tables")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--lp-only", action="store_true",
                   help="emit model.lp and stats, skip the solve")
    p.add_argument("--stats", action="store_true",
                   help="also write stats.json")
    p.add_argument("--labels", help="JSON file mapping variable group to "
                                    "dimension labels")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("stats", help="print model statistics as JSON")
    p.add_argument("ir")
    p.add_argument("data")
    p.add_argument("--labels")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("whatif", help="apply a patch file and report the "
                                      "scenario diff")
    p.add_argument("ir")
    p.add_argument("data")
    p.add_argument("patches", help="JSON array of patch objects")
    p.add_argument("-o", "--out", help="write the diff JSON here instead of "
                                       "stdout")
    p.add_argument("--time-limit", type=float, default=None)
    p.add_argument("--labels")
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("gen", help="generate a synthetic instance")
    p.add_argument("family",
                   choices=["lp_network", "mip_network", "assignment"])
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--sites", type=int, default=None)
    p.add_argument("--dcs", type=int, default=None)
    p.add_argument("--customers", type=int, default=None)
    p.add_argument("--products", type=int, default=None)
    p.add_argument("--periods", type=int, default=None)
    p.add_argument("--ps-fanout", type=int, default=8)
    p.add_argument("--dc-fanout", type=int, default=20)
    p.add_argument("--clusters", type=int, default=20)
    p.add_argument("--base-sites", type=int, default=None)
    p.add_argument("--base-dcs", type=int, default=None)
    p.add_argument("--base-customers", type=int, default=None)
    p.add_argument("--carriers", type=int, default=400)
    p.add_argument("--shipments", type=int, default=3200)
    p.add_argument("--override", action="append",
                   help="distribution override key=value (repeatable)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("serve", help="serve the scenario HTTP API")
    p.add_argument("ir")
    p.add_argument("data")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--labels")
    p.set_defaults(func=cmd_serve)
    return parser


_GEN_DEFAULTS = {
    "lp_network": {"sites": 50, "dcs": 50, "customers": 500, "products": 500,
                   "periods": 12},
    "mip_network": {"sites": 25, "dcs": 25, "customers": 250, "products": 500,
                    "periods": 12},
}


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen" and args.family in _GEN_DEFAULTS:
        for key, value in _GEN_DEFAULTS[args.family].items():
            if getattr(args, key) is None:
                setattr(args, key, value)
    try:
        return args.func(args)
    except SystemExit as exc:  # helpers bail out with an exit code
        return int(exc.code)


if __name__ == "__main__":
    sys.exit(main())

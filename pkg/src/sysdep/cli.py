"""Command-line front end.

Exit status: 0 success, 2 invalid input, 3 numerical degeneracy on more than
10% of the grid (or an undefined quantity), 4 unsupported family or
operation.  Errors are also written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as sio
from .error_analysis import assess_signs, relative_error_curve
from .exceptions import DegenerateError, DomainError, IntegrationFailure, InvalidParameter, SizeLimit, Unsupported
from .models import FAMILIES, SCHEMAS, example, validate
from .orders import Relation, as_relation, audit_implications, classify_orthant_dependence, compare_order
from .simulate import mc_validate
from .systems import DEFAULT_GRID, Assumption, EvalGrid, FUNCS, SystemSpec, curves

EXIT_OK, EXIT_INVALID, EXIT_DEGENERATE, EXIT_UNSUPPORTED = 0, 2, 3, 4
DEGENERATE_SHARE = 0.10


class CliError(Exception):
    def __init__(self, status: int, kind: str, message: str):
        super().__init__(message)
        self.status, self.kind = status, kind


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_INVALID, "usage", message)


def _load_model(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        doc = json.loads(text)
    except OSError as exc:
        raise CliError(EXIT_INVALID, "io", f"cannot read model document: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INVALID, "parse", f"model document is not valid JSON: {exc}") from None
    return validate(doc)


def _spec(args, model, assumption=None):
    assumption = assumption or args.assumption
    baseline = args.baseline if assumption == Assumption.INDEPENDENT.value else None
    return SystemSpec(model, args.structure, assumption, baseline)


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_report(args, report: dict):
    """Side report for CSV output: ``--report`` path, else stderr."""
    text = sio.to_json(report)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stderr.write(text)


def _degenerate_check(share: float):
    if share > DEGENERATE_SHARE:
        raise CliError(EXIT_DEGENERATE, "degenerate", f"{share:.0%} of grid points are undefined")


def cmd_eval(args) -> None:
    model = _load_model(args.model)
    cs = curves(_spec(args, model), args.grid, threads=args.threads, verify=args.verify)
    if args.format == "json":
        _emit(args, sio.to_json(sio.curve_records(cs)))
    else:
        _emit(args, sio.curves_csv(cs))
    _degenerate_check(cs.degenerate_fraction())


def cmd_error(args) -> None:
    model = _load_model(args.model)
    ec = relative_error_curve(model, args.structure, args.baseline, args.grid)
    report = assess_signs(ec).to_json()
    report["usable_range"] = ec.usable_range()
    if args.format == "json":
        _emit(args, sio.to_json({"curve": sio.error_records(ec), "assessment": report}))
    else:
        _emit(args, sio.errors_csv(ec))
        _emit_report(args, {"assessment": report})
    bad = np.zeros(len(args.grid), dtype=bool)
    for f in FUNCS:
        bad |= np.isnan(ec.values[f])
    _degenerate_check(float(bad.mean()))


def cmd_order(args) -> None:
    model = _load_model(args.model)
    a = _spec(args, model, args.a)
    b = _spec(args, model, args.b)
    rels = [as_relation(r.strip()) for r in args.relations.split(",") if r.strip()] if args.relations else list(Relation)
    verdicts = [compare_order(a, b, r, args.grid) for r in rels]
    audit = audit_implications(verdicts)
    if args.format == "json":
        _emit(args, sio.to_json({"verdicts": [v.to_json() for v in verdicts], "audit": audit.to_json()}))
    else:
        recs = [{"relation": v.relation.value, "direction": v.direction.value,
                 "witnesses": ";".join(repr(w) for w in v.witnesses)} for v in verdicts]
        _emit(args, sio.to_csv(recs, ("relation", "direction", "witnesses")))
        _emit_report(args, {"audit": audit.to_json()})


def cmd_depend(args) -> None:
    model = _load_model(args.model)
    n_points = args.samples if args.samples is not None else 256
    label = classify_orthant_dependence(model, n_points=n_points, seed=args.seed)
    _emit(args, sio.to_json(label.to_json()))


def cmd_simulate(args) -> None:
    model = _load_model(args.model)
    n = args.samples if args.samples is not None else 100_000
    rep = mc_validate(model, args.structure, args.grid, n, args.level, args.seed, threads=args.threads)
    if args.format == "json":
        _emit(args, sio.to_json({"curve": sio.empirical_records(rep.empirical), "validation": rep.to_json()}))
    else:
        _emit(args, sio.empirical_csv(rep.empirical))
        _emit_report(args, {"validation": rep.to_json()})


def cmd_families(args) -> None:
    if args.example:
        if args.example not in FAMILIES:
            raise CliError(EXIT_INVALID, "family", f"unknown family {args.example!r}")
        _emit(args, sio.to_json(example(args.example)))
        return
    _emit(args, sio.to_json([{"family": f, "schema": {"n": "component count >= 1", **SCHEMAS[f]}} for f in FAMILIES]))


def _grid(text: str) -> EvalGrid:
    try:
        return EvalGrid.parse(text)
    except InvalidParameter as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _level(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("level must lie in (0, 1)")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--model", help="model document (JSON); '-' reads stdin")
    common.add_argument("--structure", choices=["series", "parallel"], default="series")
    common.add_argument("--assumption", choices=["dependent", "independent"], default="dependent")
    common.add_argument("--baseline", choices=["paper-literal", "true-marginal"], default="paper-literal")
    common.add_argument("--grid", type=_grid, default=EvalGrid.parse(DEFAULT_GRID), metavar="START:STOP:COUNT:SPACING")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--report", help="where CSV mode writes its JSON side report (default stderr)")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--samples", type=_positive_int)
    common.add_argument("--level", type=_level, default=0.99)
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--verify", action="store_true", help="recompute closed forms numerically and compare")

    p = _Parser(prog="sysdep", description="Reliability of series/parallel systems with dependent components.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common], help="SF, FR, RFR, MRL and AI on a grid").set_defaults(func=cmd_eval)
    sub.add_parser("error", parents=[common], help="relative errors of the independence assumption").set_defaults(func=cmd_error)
    o = sub.add_parser("order", parents=[common], help="stochastic-order verdicts between two systems")
    o.add_argument("--a", choices=["dependent", "independent"], default="dependent")
    o.add_argument("--b", choices=["dependent", "independent"], default="independent")
    o.add_argument("--relations", help="comma list from st,fr,rfr,mrl,lr,af,ai (default all)")
    o.set_defaults(func=cmd_order)
    sub.add_parser("depend", parents=[common], help="orthant dependence label").set_defaults(func=cmd_depend)
    sub.add_parser("simulate", parents=[common], help="Monte Carlo check of the system SF").set_defaults(func=cmd_simulate)
    f = sub.add_parser("families", parents=[common], help="list families or print an example document")
    f.add_argument("--example", metavar="FAMILY")
    f.set_defaults(func=cmd_families)
    return p


def _fail(status: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit": status}) + "\n")
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CliError as exc:
        return _fail(exc.status, exc.kind, str(exc))
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.command != "families" and not args.model:
        return _fail(EXIT_INVALID, "usage", "--model is required")
    try:
        args.func(args)
    except CliError as exc:
        return _fail(exc.status, exc.kind, str(exc))
    except (InvalidParameter, DomainError, SizeLimit) as exc:
        return _fail(EXIT_INVALID, type(exc).__name__, str(exc))
    except (DegenerateError, IntegrationFailure) as exc:
        return _fail(EXIT_DEGENERATE, type(exc).__name__, str(exc))
    except Unsupported as exc:
        return _fail(EXIT_UNSUPPORTED, type(exc).__name__, str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 pass, 1 fail, 2 usage error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import evidence as ev
from . import operators as ops
from . import pairs
from . import specs
from . import theorems
from .core import truncate
from .errors import SummatError
from .evidence import FAILS, HOLDS, INCONCLUSIVE
from .scalar import EXACT

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
DEFAULT_DEPTHS = {"pair-check": pairs.DEFAULT_DEPTH, "operator-run": 512,
                  "theorems": pairs.DEFAULT_DEPTH, "catalog": 8}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    depth: int
    tol: float = ev.DEFAULT.tol
    scalar_backend: str = "float"
    probe_grid_ratio: float = ev.DEFAULT.ratio
    output_format: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.depth < 1:
            raise UsageError(f"--depth must be positive, got {self.depth}")
        if not self.tol > 0:
            raise UsageError(f"--tol must be positive, got {self.tol}")
        if not self.probe_grid_ratio > 1:
            raise UsageError(f"--ratio must exceed 1, got {self.probe_grid_ratio}")

    @property
    def thresholds(self) -> ev.Thresholds:
        return ev.Thresholds(tol=self.tol, ratio=self.probe_grid_ratio)

    @property
    def backend(self):
        return specs.backend_named(self.scalar_backend)

    def to_json(self) -> dict:
        return {"depth": self.depth, "tol": self.tol, "scalar": self.scalar_backend,
                "ratio": self.probe_grid_ratio, "seed": self.seed}


def _status_exit(statuses: Sequence[str]) -> int:
    if any(s in (FAILS, theorems.FAIL) for s in statuses):
        return EXIT_FAIL
    if any(s == INCONCLUSIVE for s in statuses):
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _csv_line(values) -> str:
    return ",".join("" if v is None else str(v) for v in values)


def _need_depth(cfg: RunConfig) -> None:
    if cfg.depth < 16:
        raise UsageError(f"--depth must be >= 16 for this command, got {cfg.depth}")


# -- subcommands -------------------------------------------------------------


def cmd_pair_check(args, cfg: RunConfig, out) -> int:
    _need_depth(cfg)
    A = specs.parse_matrix(args.a_spec, cfg.backend)
    B = specs.parse_matrix(args.b_spec, cfg.backend)
    tm = pairs.transfer(A, B)
    verdicts = pairs.check_all(tm, cfg.depth, cfg.tol, cfg.thresholds)
    doc = {"schema": SCHEMA, "command": "pair-check", "config": cfg.to_json(),
           "pair": {"A": args.a_spec, "B": args.b_spec}, "provenance": tm.provenance,
           "verdicts": [verdicts[p].to_json() for p in pairs.PROPERTIES]}
    codes = [EXIT_INCONCLUSIVE if any(v.status == INCONCLUSIVE for v in verdicts.values()) else EXIT_PASS]
    if args.be:
        be = pairs.be_property_check(A, B, cfg.depth, cfg.tol)
        doc["be_property"] = be.to_json()
        codes.append(_status_exit([be.status]))
    if args.ergodic_transfer:
        et = pairs.ergodic_transfer_check(A, B, cfg.depth, cfg.tol)
        doc["ergodic_transfer"] = et.to_json()
        codes.append(_status_exit([et.status]))
    if args.trace:
        ns, sums = pairs.rowsum_profile(tm.C, cfg.depth, cfg.probe_grid_ratio)
        with open(args.trace, "w", newline="") as fh:
            fh.write("n,rowsum\n")
            fh.writelines(f"{n},{s!r}\n" for n, s in zip(ns, sums))
    if cfg.output_format == "csv":
        out.write("property,status,sup,growth_exponent,provenance\n")
        for p in pairs.PROPERTIES:
            j = verdicts[p].to_json()
            out.write(_csv_line([p, j["status"], j["sup"], j["growth_exponent"], j["provenance"]]) + "\n")
    else:
        out.write(_dump(doc))
    return max(codes, key=lambda c: (c == EXIT_FAIL, c == EXIT_INCONCLUSIVE))


def cmd_operator_run(args, cfg: RunConfig, out) -> int:
    _need_depth(cfg)
    A = specs.parse_matrix(args.a_spec, cfg.backend)
    T = specs.parse_operator(args.op_spec, cfg.backend, cfg.seed)
    if args.probe:
        probes = [specs.parse_probe(p, cfg.backend) for p in args.probe]
    else:
        probes = specs.default_probes(T.dim, cfg.backend)
    specs.check_probe_dims(T, probes, args.probe)
    v = ops.classify(A, T, probes, cfg.depth, cfg.tol, cfg.thresholds)
    doc = {"schema": SCHEMA, "command": "operator-run", "config": cfg.to_json(),
           "matrix": args.a_spec, "operator": args.op_spec,
           "probes": [[ev._clean(float(c)) for c in x] for x in probes],
           "verdict": v.to_json()}
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            fh.write(v.probes[0].to_csv())
    if cfg.output_format == "csv":
        out.write(v.probes[0].to_csv())
    else:
        out.write(_dump(doc))
    core = [v.bounded.status, v.ergodic.status, v.null.status]
    return EXIT_INCONCLUSIVE if INCONCLUSIVE in core else EXIT_PASS


def cmd_theorems(args, cfg: RunConfig, out) -> int:
    _need_depth(cfg)
    scfg = theorems.SuiteConfig(depth=cfg.depth, op_depth=min(cfg.depth, 512), tol=cfg.tol, seed=cfg.seed)
    reports = theorems.run_suite(args.pattern, scfg, jobs=args.jobs)
    if cfg.output_format == "csv":
        out.write("theorem_id,overall,sub_check,status,description\n")
        for r in reports:
            for i, s in enumerate(r.sub_checks):
                out.write(_csv_line([r.theorem_id, r.overall, i, s.status, '"' + s.description.replace('"', "'") + '"']) + "\n")
    else:
        out.write(_dump({"schema": SCHEMA, "command": "theorems", "config": cfg.to_json(),
                         "filter": args.pattern, "reports": [r.to_json() for r in reports]}))
    return _status_exit([r.overall for r in reports])


def cmd_catalog(args, cfg: RunConfig, out) -> int:
    A = specs.parse_matrix(args.spec, cfg.backend)
    block = truncate(A, cfg.depth)
    if cfg.output_format == "csv":
        out.write(block.to_csv())
    else:
        from .core import format_scalar
        rows = [[format_scalar(v) for v in r] for r in block.data]
        out.write(_dump({"schema": SCHEMA, "command": "catalog", "config": cfg.to_json(),
                         "matrix": args.spec, "rows": rows}))
    return EXIT_PASS


# -- parser ------------------------------------------------------------------


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--depth", type=int, default=d(None),
                        help="probe depth N (default 4096 for pairs, 512 for operators; env SUMMAT_DEPTH)")
    parser.add_argument("--tol", type=float, default=d(ev.DEFAULT.tol), help="zero tolerance")
    parser.add_argument("--scalar", choices=("float", "exact"), default=d("float"), help="arithmetic backend")
    parser.add_argument("--format", choices=("json", "csv"), default=d("json"), help="output format")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for random operators and samples")
    parser.add_argument("--ratio", type=float, default=d(ev.DEFAULT.ratio), help="probe grid ratio")
    parser.add_argument("--trace", default=d(None), metavar="CSV",
                        help="write a row-sum (pair-check) or trajectory (operator-run) trace")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    parser = argparse.ArgumentParser(prog="summat", description="Summation matrices and operator means.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair-check", parents=[common], help="transfer properties of a pair (A, B)")
    p.add_argument("a_spec")
    p.add_argument("b_spec")
    p.add_argument("--be", action="store_true", help="also test the bounded-to-ergodic conditions")
    p.add_argument("--ergodic-transfer", action="store_true", help="also test the ergodic-transfer conditions")
    p.set_defaults(func=cmd_pair_check)

    p = sub.add_parser("operator-run", parents=[common], help="classify an operator for a matrix")
    p.add_argument("a_spec")
    p.add_argument("op_spec")
    p.add_argument("--probe", action="append", help="probe vector, e.g. 1,0 (repeatable)")
    p.set_defaults(func=cmd_operator_run)

    p = sub.add_parser("theorems", parents=[common], help="run the reproduction suite")
    p.add_argument("pattern", nargs="?", default="*", help="glob over theorem ids")
    p.add_argument("--jobs", type=int, default=1, help="worker threads")
    p.set_defaults(func=cmd_theorems)

    p = sub.add_parser("catalog", parents=[common], help="print a matrix truncation")
    p.add_argument("spec")
    p.set_defaults(func=cmd_catalog)
    return parser


def _config(args) -> RunConfig:
    depth = args.depth
    if depth is None:
        env = os.environ.get("SUMMAT_DEPTH")
        if env:
            try:
                depth = int(env)
            except ValueError:
                raise UsageError(f"SUMMAT_DEPTH must be an integer, got {env!r}") from None
        else:
            depth = DEFAULT_DEPTHS[args.command]
    return RunConfig(depth=depth, tol=args.tol, scalar_backend=args.scalar, probe_grid_ratio=args.ratio,
                     output_format=args.format, seed=args.seed)


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        cfg = _config(args)
        return args.func(args, cfg, out)
    except (UsageError, SummatError) as exc:
        print(f"summat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

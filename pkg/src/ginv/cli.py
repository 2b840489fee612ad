"""``ginv`` command-line front end.

Exit codes: 0 success, 2 invalid input or options, 3 solver did not reach
its optimality test (outputs are still written), 4 file I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import (
    TYPICAL_RATIO,
    InstanceSpec,
    SuiteConfig,
    compute,
    generate,
    make_report,
    ratio_study,
    render_table,
    reports_from_jsonl,
    reports_to_jsonl,
    run_suite,
)
from .errors import BoundViolation, ConvergenceError, GinvError
from .formulations import Status, dump_reduced_data, export_lp
from .localsearch import LsConfig
from .matcore import ToleranceConfig, property_residuals, svd
from .matio import read_matrix, write_csv, write_matrix
from .solvers import SolverConfig
from .structure import gamma_from_H

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_IO = 0, 2, 3, 4

# CLI spelling -> harness method name
METHOD_NAMES = {
    "p21": "P21",
    "p21l1": "P21_L1",
    "p123": "P123",
    "p123full": "P123_FULL",
    "ls": "LS",
    "mp": "MP",
}

log = logging.getLogger("ginv")


class UsageError(Exception):
    """Bad option values detected before any computation."""


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value
    return parse


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("tolerances and limits")
    g.add_argument("--zero-tol", type=_positive(float), default=1e-5,
                   help="entries with |h| <= this count as zero (default 1e-5)")
    g.add_argument("--rank", type=_positive(int), help="use this numerical rank instead of detecting it")
    g.add_argument("--rank-tol", type=_positive(float), help="relative singular value cutoff")
    g.add_argument("--solver-tol", type=_positive(float), default=1e-8)
    g.add_argument("--max-iters", type=_positive(int), default=100_000)
    g.add_argument("--time-limit", type=_positive(float), default=300.0, help="per-solve cap in seconds")
    g.add_argument("--p123-method", choices=("auto", "lp", "splitting"), default="auto")
    g.add_argument("--poly-kappa", type=float, metavar="KAPPA",
                   help="local search accepts a swap only if |det| grows by more than KAPPA (e.g. 1.01)")
    g.add_argument("--max-swaps", type=_positive(int), default=100_000)


def _suite_config(args) -> SuiteConfig:
    tol = ToleranceConfig(rank_tol=args.rank_tol, zero_tol=args.zero_tol, solver_tol=args.solver_tol)
    solver = SolverConfig(max_iters=args.max_iters, solver_tol=args.solver_tol,
                          time_limit=args.time_limit, p123_method=args.p123_method)
    ls = LsConfig(max_swaps=args.max_swaps) if args.poly_kappa is None else \
        LsConfig(kappa=args.poly_kappa, max_swaps=args.max_swaps)
    return SuiteConfig(tol=tol, solver=solver, ls=ls)


def _read(path) -> np.ndarray:
    try:
        return read_matrix(path)
    except (OSError, ValueError) as exc:
        if isinstance(exc, GinvError):
            raise
        raise OSError(f"cannot read matrix from {path}: {exc}") from exc


def _write_trace(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else int(v) for v in row])


def _write_blocks(directory, A, H, cfg: SuiteConfig, rank) -> None:
    gamma = gamma_from_H(svd(A, cfg.tol, rank=rank), H)
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in ("X", "Y", "Z", "W"):
        block = getattr(gamma, name)
        path = directory / f"{name}.csv"
        if block.size:
            write_csv(path, block)
        else:
            path.write_text("")


# -- subcommands ----------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = InstanceSpec.parse(args.size, args.density, args.seed)
    A = generate(spec)
    write_matrix(args.output, A)
    print(f"wrote {spec.m}x{spec.n} rank-{spec.r} matrix to {args.output}", file=sys.stderr)
    return EXIT_OK


def cmd_solve(args) -> int:
    cfg = _suite_config(args)
    A = _read(args.input)
    method = METHOD_NAMES[args.method]
    out = compute(A, method, cfg, args.rank)
    report = make_report(A, out.H, method, out.status, out.time_s, out.time_s,
                         zero_tol=cfg.tol.zero_tol, r=out.r)
    write_matrix(args.output, out.H)
    text = report.to_json(timing=not args.no_timing) + "\n"
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stdout.write(text)
    if args.trace:
        _write_trace(args.trace, out.trace_header or ("iteration",), out.trace)
    if args.blocks:
        _write_blocks(args.blocks, A, out.H, cfg, args.rank)
    if args.dump_reduced:
        dump_reduced_data(svd(A, cfg.tol, rank=args.rank), args.dump_reduced)
    if out.status is not Status.OPTIMAL:
        print(f"solver stopped with status {out.status.value}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_check(args) -> int:
    A = _read(args.input)
    H = _read(args.inverse)
    res = property_residuals(A, H)
    scale = float(np.linalg.norm(A))
    limit = args.tol * scale
    out = {f"r{k.upper()}": v for k, v in res._asdict().items()}
    out["holds"] = [k.upper() for k, v in res._asdict().items() if v <= limit]
    out["tolerance"] = limit
    print(json.dumps(out))
    if args.blocks:
        _write_blocks(args.blocks, A, H, _suite_config(args), args.rank)
    return EXIT_OK


def cmd_export_lp(args) -> int:
    cfg = _suite_config(args)
    F = svd(_read(args.input), cfg.tol, rank=args.rank)
    n_vars, n_rows = export_lp(F, args.output)
    print(f"wrote LP with {n_vars} variables and {n_rows} constraint rows to {args.output}",
          file=sys.stderr)
    if args.dump_reduced:
        dump_reduced_data(F, args.dump_reduced)
    return EXIT_OK


def _parse_methods(text: str) -> list[str]:
    names = [t.strip().lower() for t in text.split(",") if t.strip()]
    bad = [t for t in names if t not in METHOD_NAMES]
    if bad or not names:
        raise UsageError(f"unknown method(s) {bad}; choose from {sorted(METHOD_NAMES)}")
    return [METHOD_NAMES[t] for t in names]


def cmd_bench(args) -> int:
    cfg = _suite_config(args)
    methods = _parse_methods(args.methods)
    specs = [InstanceSpec.parse(s, args.density, seed)
             for s in args.sizes.split(",") for seed in range(args.seed, args.seed + args.repeats)]
    reports = run_suite(specs, methods, cfg, args.workers)
    if args.jsonl:
        Path(args.jsonl).write_text(reports_to_jsonl(reports, timing=not args.no_timing))
    print(render_table(reports))
    failed = [r for r in reports if r.status != Status.OPTIMAL.value]
    return EXIT_SOLVER if failed else EXIT_OK


def cmd_ratio(args) -> int:
    try:
        text = Path(args.reports).read_text()
    except OSError as exc:
        raise OSError(f"cannot read reports from {args.reports}: {exc}") from exc
    results = ratio_study(reports_from_jsonl(text))
    for res in results:
        flag = "<" if res.below_typical_ratio else ">="
        print(f"{res.instance:<14} seed {res.seed:<4} LS/P123 = {res.ratio:.4f}  (r = {res.r}, {flag} {TYPICAL_RATIO})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ginv", description="Sparse and row-sparse generalized inverses of real matrices."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random m x n matrix of rank r")
    p.add_argument("size", help="MxNxR, e.g. 40x20x10")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True, help=".mtx or .csv path")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="compute a generalized inverse")
    p.add_argument("--method", choices=sorted(METHOD_NAMES), required=True)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True, help="where to write H (.mtx or .csv)")
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.add_argument("--no-timing", action="store_true", help="omit timing fields from the report")
    p.add_argument("--trace", help="CSV of solver iterations or local-search swaps")
    p.add_argument("--blocks", metavar="DIR", help="write the X, Y, Z, W blocks of V^T H U as CSV")
    p.add_argument("--dump-reduced", metavar="DIR", help="write G, V2, U1 as CSV")
    _add_config_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="Penrose property residuals of H for A")
    p.add_argument("-i", "--input", required=True, help="matrix A")
    p.add_argument("-H", "--inverse", required=True, help="candidate inverse H")
    p.add_argument("--tol", type=_positive(float), default=1e-8,
                   help="a property holds if its residual is <= tol * ||A||_F")
    p.add_argument("--blocks", metavar="DIR", help="write the X, Y, Z, W blocks of V^T H U as CSV")
    _add_config_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("export-lp", help="write the 1-norm LP over the free block as MPS")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--dump-reduced", metavar="DIR", help="also write G, V2, U1 as CSV")
    _add_config_flags(p)
    p.set_defaults(func=cmd_export_lp)

    p = sub.add_parser("bench", help="run methods on generated instances and print a table")
    p.add_argument("--sizes", required=True, help="comma-separated MxNxR list")
    p.add_argument("--methods", default="p21,p21l1,p123,ls,mp")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=_positive(int), default=1, help="seeds per size")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--workers", type=_positive(int), help="process count (default GINV_THREADS or 1)")
    p.add_argument("--jsonl", help="write one JSON report per line here")
    p.add_argument("--no-timing", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("ratio", help="LS / P123 1-norm ratios from a bench JSONL file")
    p.add_argument("reports")
    p.set_defaults(func=cmd_ratio)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, 0 on --help/--version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (ConvergenceError, BoundViolation) as exc:
        print(f"ginv: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (GinvError, UsageError) as exc:
        print(f"ginv: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"ginv: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

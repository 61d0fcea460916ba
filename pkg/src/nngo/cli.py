"""Command-line front end: train, optimize, relax, bench.

Exit codes: 0 success, 2 usage errors, 3 data errors, 4 solver aborts.
Every CSV report gets a PNG figure next to it with the same stem.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys

import numpy as np

from . import plots
from .bnb import SolveConfig, solve
from .envelopes import ActivationMode, tanh_envelope, tanh_reformulated, REFORMULATION_MODES
from .errors import SchemaError, SolverAbortError
from .interval import Interval
from .mccormick import mc_variable
from .mlp import mlp_save
from .problem import NetworkBinding, Problem, problem_load
from . import expr as ex
from .train import (TrainConfig, load_dataset_csv, make_peaks_dataset, train_mlp)

log = logging.getLogger("nngo")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_SOLVER = 4


def _positive(parser, value, name):
    if value is not None and value <= 0:
        parser.error(f"{name} must be positive, got {value}")


def _parse_arch(parser, text):
    try:
        arch = [int(v) for v in text.split(",")]
    except ValueError:
        parser.error(f"--arch expects comma-separated integers, got {text!r}")
    if len(arch) < 2 or any(v < 1 for v in arch):
        parser.error(f"--arch needs at least two positive sizes, got {text!r}")
    return arch


def _figure_path(csv_path):
    return os.path.splitext(csv_path)[0] + ".png"


def cmd_train(parser, args) -> int:
    arch = _parse_arch(parser, args.arch)
    _positive(parser, args.max_epochs, "--max-epochs")
    _positive(parser, args.patience, "--patience")
    _positive(parser, args.lr, "--lr")
    try:
        if args.data:
            data = load_dataset_csv(args.data, n_targets=arch[-1], seed=args.seed)
        else:
            data = make_peaks_dataset(args.peaks, seed=args.seed)
    except (OSError, ValueError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    cfg = TrainConfig(max_epochs=args.max_epochs, patience=args.patience,
                      seed=args.seed, lr=args.lr)
    try:
        mlp, report = train_mlp(data, arch, cfg)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    mlp_save(mlp, args.out)
    print(f"wrote {args.out}")
    print(f"standardized mse  train={report.train_mse:.6e}  "
          f"val={report.val_mse:.6e}  test={report.test_mse:.6e}")
    print(f"raw mse           train={report.train_mse_raw:.6e}  "
          f"val={report.val_mse_raw:.6e}  test={report.test_mse_raw:.6e}")
    print(f"epochs={report.epochs} best_epoch={report.best_epoch}")
    return EXIT_OK


def cmd_optimize(parser, args) -> int:
    _positive(parser, args.abs_tol, "--abs-tol")
    if args.rel_tol is not None and args.rel_tol < 0:
        parser.error(f"--rel-tol must be non-negative, got {args.rel_tol}")
    _positive(parser, args.time_limit, "--time-limit")
    _positive(parser, args.iter_limit, "--iter-limit")
    _positive(parser, args.threads, "--threads")
    try:
        problem = problem_load(args.problem)
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    if args.mode:
        problem.mode = ActivationMode(args.mode)

    rows = []
    cfg = SolveConfig(
        eps_abs=args.abs_tol,
        eps_rel=args.rel_tol,
        time_limit=args.time_limit,
        iter_limit=args.iter_limit,
        ub_mode="local_search" if args.ub == "local" else "point_eval",
        multistart=args.multistart,
        threads=args.threads,
        log=lambda *row: rows.append(row),
    )
    try:
        report = solve(problem, cfg)
    except SolverAbortError as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return EXIT_SOLVER

    print(f"status      {report.status.value}")
    best = ("-" if report.best_x is None
            else "(" + ", ".join(f"{v:.6f}" for v in report.best_x) + ")")
    print(f"best_x      {best}")
    print(f"ub          {report.ub:.8g}")
    print(f"lb          {report.lb:.8g}")
    print(f"iterations  {report.iterations}")
    print(f"wall_time   {report.wall_time:.3f} s")
    if args.report:
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iter", "wall_seconds", "lb", "ub", "nodes_open"])
            writer.writerows(rows)
        plots.render_convergence(rows, _figure_path(args.report))
        print(f"wrote {args.report} and {_figure_path(args.report)}")
    return EXIT_OK


RELAX_HEADER = ["x", "tanh", "cv_env", "cc_env",
                "cv_F1", "cc_F1", "cv_F2", "cc_F2",
                "cv_F3", "cc_F3", "cv_F4", "cc_F4"]


def cmd_relax(parser, args) -> int:
    try:
        lo_s, hi_s = args.box.split(",")
        lo, hi = float(lo_s), float(hi_s)
    except ValueError:
        parser.error(f"--box expects 'lo,hi', got {args.box!r}")
    if lo >= hi:
        parser.error(f"--box needs lo < hi, got {args.box!r}")
    if args.samples < 2:
        parser.error(f"--samples must be at least 2, got {args.samples}")
    box = Interval(lo, hi)

    header = RELAX_HEADER if args.mode == "all" else (
        ["x", "tanh"] + [f"cv_{args.mode}", f"cc_{args.mode}"])
    rows = []
    try:
        for x in np.linspace(lo, hi, args.samples):
            x = float(x)
            seed = mc_variable(0, box, x, 1)
            row = [x, float(np.tanh(x))]
            if args.mode in ("all", "envelope"):
                e = tanh_envelope(seed)
                row += [e.cv, e.cc]
            if args.mode == "all":
                for variant in REFORMULATION_MODES:
                    r = tanh_reformulated(seed, variant)
                    row += [r.cv, r.cc]
            elif args.mode != "envelope":
                r = tanh_reformulated(seed, ActivationMode(args.mode))
                row += [r.cv, r.cc]
            rows.append(row)
    except OverflowError as exc:
        print(f"solver abort: [mode={args.mode}] {exc}", file=sys.stderr)
        return EXIT_SOLVER

    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    plots.render_relax_curves(header, rows, _figure_path(args.out))
    print(f"wrote {args.out} and {_figure_path(args.out)}")
    return EXIT_OK


def cmd_bench(parser, args) -> int:
    try:
        widths = [int(v) for v in args.widths.split(",")]
        depths = [int(v) for v in args.depths.split(",")]
    except ValueError:
        parser.error("--widths/--depths expect comma-separated integers")
    if any(w < 1 for w in widths) or any(d < 1 for d in depths):
        parser.error("--widths/--depths must be positive")
    _positive(parser, args.train_n, "--train-n")
    _positive(parser, args.time_limit, "--time-limit")

    data = make_peaks_dataset(args.train_n, seed=args.seed)
    results = []
    for depth in depths:
        for width in widths:
            arch = [2] + [width] * depth + [1]
            log.info("bench: training %s", arch)
            mlp, _ = train_mlp(data, arch, TrainConfig(seed=args.seed))
            for mode in (ActivationMode.ENVELOPE, ActivationMode.F3):
                problem = Problem(
                    [("x1", Interval(-3, 3)), ("x2", Interval(-3, 3))],
                    {"net1": NetworkBinding("net1", mlp,
                                            [ex.parse("x1"), ex.parse("x2")])},
                    ex.parse("net1.y[0]"), [], mode)
                entry = {"width": width, "depth": depth,
                         "neurons": width * depth, "mode": mode.value}
                try:
                    rep = solve(problem, SolveConfig(
                        eps_abs=args.abs_tol, time_limit=args.time_limit,
                        threads=args.threads))
                    entry.update(status=rep.status.value, iterations=rep.iterations,
                                 wall_seconds=round(rep.wall_time, 4),
                                 lb=rep.lb, ub=rep.ub, gap=rep.ub - rep.lb)
                except SolverAbortError as exc:
                    log.warning("bench row failed: %s", exc)
                    entry.update(status="Aborted", iterations=0, wall_seconds=0.0,
                                 lb="", ub="", gap="")
                results.append(entry)
                print(f"width={width} depth={depth} mode={mode.value}: "
                      f"{entry['status']} iters={entry['iterations']} "
                      f"time={entry['wall_seconds']}s")

    fields = ["width", "depth", "neurons", "mode", "status", "iterations",
              "wall_seconds", "lb", "ub", "gap"]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(results)
    plots.render_bench(results, _figure_path(args.out))
    print(f"wrote {args.out} and {_figure_path(args.out)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nngo",
        description="Deterministic global optimization of problems with "
                    "trained feed-forward networks embedded.")
    parser.add_argument("--log", help="write log output to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a network and write its weights")
    src = p_train.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="dataset CSV (inputs then target columns)")
    src.add_argument("--peaks", type=int, metavar="N",
                     help="generate N stratified peaks samples instead")
    p_train.add_argument("--arch", required=True,
                         help="layer sizes, e.g. 2,47,1")
    p_train.add_argument("--out", required=True, help="model JSON path")
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--lr", type=float, default=0.01)
    p_train.add_argument("--max-epochs", type=int, default=5000)
    p_train.add_argument("--patience", type=int, default=200)

    p_opt = sub.add_parser("optimize", help="globally minimize a problem file")
    p_opt.add_argument("--problem", required=True, help="problem JSON path")
    p_opt.add_argument("--mode", choices=[m.value for m in ActivationMode],
                       help="override the relaxation mode")
    p_opt.add_argument("--abs-tol", type=float, default=1e-4)
    p_opt.add_argument("--rel-tol", type=float, default=1e-12)
    p_opt.add_argument("--time-limit", type=float)
    p_opt.add_argument("--iter-limit", type=int)
    p_opt.add_argument("--ub", choices=["local", "point"], default="local",
                       help="upper bounding: local search or point evaluation")
    p_opt.add_argument("--multistart", type=int, default=1)
    p_opt.add_argument("--threads", type=int, default=1)
    p_opt.add_argument("--report", help="write convergence CSV (+PNG) here")

    p_relax = sub.add_parser("relax", help="tabulate tanh relaxations over a box")
    p_relax.add_argument("--box", required=True, help="lo,hi")
    p_relax.add_argument("--mode", default="all",
                         choices=["all"] + [m.value for m in ActivationMode])
    p_relax.add_argument("--samples", type=int, default=401)
    p_relax.add_argument("--out", required=True, help="curves CSV path")

    p_bench = sub.add_parser("bench", help="train/optimize sweep over network sizes")
    p_bench.add_argument("--widths", required=True, help="e.g. 10,20,40")
    p_bench.add_argument("--depths", default="1", help="e.g. 1,2")
    p_bench.add_argument("--train-n", type=int, default=2000)
    p_bench.add_argument("--abs-tol", type=float, default=1e-4)
    p_bench.add_argument("--time-limit", type=float, default=300.0)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--threads", type=int, default=1)
    p_bench.add_argument("--out", required=True, help="results CSV path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.log:
        handler = logging.FileHandler(args.log)
        handler.setFormatter(logging.Formatter(
            "%(asctime)s %(name)s %(levelname)s %(message)s"))
        log.addHandler(handler)
        log.setLevel(logging.INFO)
    handlers = {"train": cmd_train, "optimize": cmd_optimize,
                "relax": cmd_relax, "bench": cmd_bench}
    return handlers[args.command](parser, args)


if __name__ == "__main__":
    sys.exit(main())

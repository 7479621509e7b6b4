"""Command-line front end.

Subcommands: ``run`` (single optimization), ``sweep`` (multiplier grid),
``baseline`` (pairwise-merge runs over a threshold grid), ``check``
(randomized self-check suites) and ``compare`` (dominance table of a sweep
frontier over a baseline frontier).  Reports are written as CSV or JSON in
a fixed schema; ``--plot`` additionally renders a PNG figure next to the
data file.  Diagnostics go to standard error, controlled by the
``FUNNEL_LOG`` environment variable (quiet|info|debug).
"""

import argparse
import logging
import os
import sys
import time

import numpy as np

from . import report
from .checks import run_all_checks
from .distributions import entropy, mutual_information
from .errors import ColumnNotFound, EmptyAfterFiltering, FileError, FunnelError
from .funnel import (
    PairwiseConfig,
    RunConfig,
    frontier_point,
    iac_mdsf,
    pairwise_merge_ib,
    pairwise_merge_pf,
    sweep,
)
from .ingest import DEFAULT_MISSING, DatasetSpec, load_joint, synth_joint

logger = logging.getLogger(__name__)

_LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _setup_logging() -> None:
    level = _LOG_LEVELS.get(os.environ.get("FUNNEL_LOG", "quiet"), logging.ERROR)
    logging.basicConfig(
        stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s"
    )


def _parse_columns(text: str) -> tuple:
    cols = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        cols.append(int(tok) if tok.lstrip("-").isdigit() else tok)
    if not cols:
        raise ValueError(f"no columns in {text!r}")
    return tuple(cols)


def _parse_delimiter(text: str | None) -> str | None:
    if text is None:
        return None
    aliases = {"space": None, "ws": None, "tab": "\t", "comma": ","}
    return aliases.get(text, text)


def _parse_grid(text: str) -> list[float]:
    """start:stop:count linspace, or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:count, got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("grid count must be >= 1")
        return [float(v) for v in np.linspace(start, stop, count)]
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_threshold_grid(text: str, reference: float) -> list[float]:
    """Thresholds in bits; tokens prefixed with 'x' are fractions of the
    problem's reference quantity (H(X) for privacy, I(S;X) for bottleneck)."""
    fractional = text.lstrip().startswith("x")
    cleaned = text.replace("x", "")
    values = _parse_grid(cleaned)
    if fractional:
        values = [v * reference for v in values]
    return values


def _add_data_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="delimited data file (CSV or whitespace)")
    p.add_argument("--synth", action="store_true", help="use a synthetic joint instead of a file")
    p.add_argument("--s-cols", default=None, help="sensitive columns (names or 0-based indices)")
    p.add_argument("--x-cols", default=None, help="released columns (names or 0-based indices)")
    p.add_argument("--delimiter", default=None, help="field delimiter (or 'space', 'tab')")
    p.add_argument("--header", action=argparse.BooleanOptionalAction, default=None,
                   help="whether the file has a header row (default: auto)")
    p.add_argument("--missing", default=",".join(DEFAULT_MISSING),
                   help="comma-separated missing-value markers")
    p.add_argument("--synth-s", type=int, default=4, help="synthetic |S|")
    p.add_argument("--synth-x", type=int, default=8, help="synthetic |X|")
    p.add_argument("--rho", type=float, default=0.5, help="synthetic coupling strength")


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="csv")
    p.add_argument("--plot", action="store_true",
                   help="render a PNG figure alongside the output file")
    p.add_argument("--timing", action="store_true",
                   help="record wall time (makes outputs nondeterministic)")


def _load_pmf(args):
    if args.data and args.synth:
        raise ValueError("--data and --synth are mutually exclusive")
    if args.data:
        if not args.s_cols or not args.x_cols:
            raise ValueError("--data requires --s-cols and --x-cols")
        spec = DatasetSpec(
            path=args.data,
            s_columns=_parse_columns(args.s_cols),
            x_columns=_parse_columns(args.x_cols),
            delimiter=_parse_delimiter(args.delimiter),
            missing_markers=tuple(t for t in args.missing.split(",") if t != ""),
            has_header=args.header,
        )
        return load_joint(spec), os.path.basename(args.data)
    if args.synth:
        pmf = synth_joint(args.synth_s, args.synth_x, args.rho, args.seed)
        return pmf, f"synth-{args.synth_s}x{args.synth_x}-rho{args.rho}-seed{args.seed}"
    raise ValueError("one of --data or --synth is required")


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _plot_path(out: str | None) -> str:
    if out is None:
        raise ValueError("--plot requires --out")
    return os.path.splitext(out)[0] + ".png"


def _records_from_points(points, problem, strategy, seed, wall_ms):
    return [
        report.ReportRecord(
            lam=p.lam,
            problem=problem,
            strategy=strategy,
            leakage_bits=p.leakage_bits,
            utility_bits=p.utility_bits,
            leakage_norm=p.leakage_norm,
            utility_loss_norm=p.utility_loss_norm,
            alphabet_size=p.alphabet_size,
            iterations=p.iterations,
            seed=seed,
            wall_time_ms=wall_ms,
        )
        for p in points
    ]


def cmd_run(args) -> int:
    pmf, dataset_id = _load_pmf(args)
    cfg = RunConfig(
        lam=args.lam,
        problem=args.problem,
        strategy=args.strategy,
        restarts=args.restarts,
        seed=args.seed,
        max_outer_iters=args.max_outer_iters,
    )
    t0 = time.perf_counter()
    result = iac_mdsf(pmf, cfg)
    wall_ms = int(round((time.perf_counter() - t0) * 1000)) if args.timing else 0
    point = frontier_point(result, args.lam, entropy(pmf, "s"), entropy(pmf, "x"))
    record = report.ReportRecord(
        lam=point.lam,
        problem=args.problem,
        strategy=args.strategy,
        leakage_bits=point.leakage_bits,
        utility_bits=point.utility_bits,
        leakage_norm=point.leakage_norm,
        utility_loss_norm=point.utility_loss_norm,
        alphabet_size=point.alphabet_size,
        iterations=point.iterations,
        seed=args.seed,
        wall_time_ms=wall_ms,
        dataset_id=dataset_id,
    )
    if args.format == "json":
        _emit(report.run_report_json_text(record, result.trajectory), args.out)
    else:
        _emit(report.frontier_csv_text([record]), args.out)
        if args.out is not None:
            traj_path = os.path.splitext(args.out)[0] + ".trajectory.csv"
            with open(traj_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(report.trajectory_csv_text(result.trajectory))
        else:
            sys.stdout.write(report.trajectory_csv_text(result.trajectory))
    if args.plot:
        label = "I(S;X^) - lambda I(X;X^)"
        report.plot_trajectory(result.trajectory, _plot_path(args.out), label=label)
    return 0


def cmd_sweep(args) -> int:
    pmf, _dataset_id = _load_pmf(args)
    lambdas = sorted(_parse_grid(args.lambda_grid))
    if any(not 0.0 <= v <= 1.0 for v in lambdas):
        raise ValueError("lambda grid must lie in [0, 1]")
    t0 = time.perf_counter()
    points = sweep(
        pmf,
        lambdas,
        problem=args.problem,
        strategy=args.strategy,
        restarts=args.restarts,
        seed=args.seed,
        n_jobs=args.parallel,
    )
    wall_ms = int(round((time.perf_counter() - t0) * 1000)) if args.timing else 0
    points = sorted(points, key=lambda p: p.lam)
    records = _records_from_points(points, args.problem, args.strategy, args.seed, wall_ms)
    text = (
        report.frontier_json_text(records)
        if args.format == "json"
        else report.frontier_csv_text(records)
    )
    _emit(text, args.out)
    if args.plot:
        report.plot_frontier(records, _plot_path(args.out))
    return 0


def cmd_baseline(args) -> int:
    pmf, _dataset_id = _load_pmf(args)
    reference = entropy(pmf, "x") if args.problem == "pf" else mutual_information(pmf)
    thresholds = sorted(_parse_threshold_grid(args.threshold_grid, reference))
    if any(t < 0 for t in thresholds):
        raise ValueError("thresholds must be >= 0 bits")
    h_s = entropy(pmf, "s")
    h_x = entropy(pmf, "x")
    merger = pairwise_merge_pf if args.problem == "pf" else pairwise_merge_ib
    t0 = time.perf_counter()
    points = []
    for theta in thresholds:
        result = merger(pmf, PairwiseConfig(problem=args.problem, threshold=theta))
        points.append(frontier_point(result, theta, h_s, h_x))
    wall_ms = int(round((time.perf_counter() - t0) * 1000)) if args.timing else 0
    records = _records_from_points(points, args.problem, "pairwise", args.seed, wall_ms)
    text = (
        report.frontier_json_text(records)
        if args.format == "json"
        else report.frontier_csv_text(records)
    )
    _emit(text, args.out)
    if args.plot:
        report.plot_frontier([], _plot_path(args.out), baseline_records=records)
    return 0


def cmd_check(args) -> int:
    if args.max_n > 12:
        raise ValueError("--max-n is capped at 12 (exhaustive oracles)")
    g_fn = None
    if args.debug_flip_g_sign:
        from .set_functions import g_value

        def g_fn(pmf, w):
            return -g_value(pmf, w)

    if args.trials == 0:
        sys.stderr.write("warning: --trials 0, no checks were run\n")
        return 0
    results = run_all_checks(trials=args.trials, seed=args.seed, max_n=args.max_n, g_fn=g_fn)
    failed = False
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        extra = f" [{res.detail}]" if res.detail else ""
        print(f"{status} {res.name}: worst deviation {res.worst:.3e} "
              f"over {res.n_trials} trials{extra}")
        failed = failed or not res.passed
    return 1 if failed else 0


def cmd_compare(args) -> int:
    points = report.read_frontier(args.frontier)
    baseline = report.read_frontier(args.baseline)
    flags, pct = report.dominance(points, baseline, args.problem)
    if args.format == "json":
        _emit(report.comparison_json_text(baseline, flags, pct), args.out)
    else:
        _emit(report.comparison_csv_text(baseline, flags), args.out)
    print(f"dominance: {pct:.1f}% of baseline points weakly dominated")
    if args.plot:
        report.plot_frontier(points, _plot_path(args.out), baseline_records=baseline)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pfunnel",
        description="Privacy-funnel / information-bottleneck clustering over empirical joints",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single clustering run at one lambda")
    _add_data_flags(p_run)
    _add_output_flags(p_run)
    p_run.add_argument("--lambda", dest="lam", type=float, required=True)
    p_run.add_argument("--problem", choices=("pf", "ib"), default="pf")
    p_run.add_argument("--strategy", choices=("supsub", "modmod"), default="supsub")
    p_run.add_argument("--restarts", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--max-outer-iters", type=int, default=None)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="frontier sweep over a lambda grid")
    _add_data_flags(p_sweep)
    _add_output_flags(p_sweep)
    p_sweep.add_argument("--lambda-grid", default="0:1:21",
                         help="start:stop:count or comma list")
    p_sweep.add_argument("--problem", choices=("pf", "ib"), default="pf")
    p_sweep.add_argument("--strategy", choices=("supsub", "modmod"), default="supsub")
    p_sweep.add_argument("--restarts", type=int, default=1)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--parallel", type=int, default=1, help="worker processes")
    p_sweep.set_defaults(func=cmd_sweep)

    p_base = sub.add_parser("baseline", help="pairwise-merge baseline over thresholds")
    _add_data_flags(p_base)
    _add_output_flags(p_base)
    p_base.add_argument("--threshold-grid", default="x0.1:x0.9:9",
                        help="bits, or fractions of H(X) / I(S;X) prefixed with 'x'")
    p_base.add_argument("--problem", choices=("pf", "ib"), default="pf")
    p_base.add_argument("--seed", type=int, default=0)
    p_base.set_defaults(func=cmd_baseline)

    p_check = sub.add_parser("check", help="run the randomized self-check suites")
    p_check.add_argument("--trials", type=int, default=None,
                         help="trials per suite (default: contract-level counts)")
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--max-n", type=int, default=8)
    p_check.add_argument("--debug-flip-g-sign", action="store_true",
                         help=argparse.SUPPRESS)
    p_check.set_defaults(func=cmd_check)

    p_cmp = sub.add_parser("compare", help="dominance table of a frontier over a baseline")
    p_cmp.add_argument("--frontier", required=True, help="sweep frontier file")
    p_cmp.add_argument("--baseline", required=True, help="baseline frontier file")
    p_cmp.add_argument("--problem", choices=("pf", "ib"), default="pf")
    p_cmp.add_argument("--out", default=None)
    p_cmp.add_argument("--format", choices=("json", "csv"), default="csv")
    p_cmp.add_argument("--plot", action="store_true")
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileError, ColumnNotFound, EmptyAfterFiltering) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FunnelError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

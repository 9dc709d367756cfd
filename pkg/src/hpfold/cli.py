"""Command-line interface.

Three subcommands:

  run        search one sequence, optionally many times, and report scores
  bench      restart-until-target protocol over the built-in molecule table
  enumerate  exhaustive optimum for small instances (the test oracle)

`run --out DIR` writes the delimited per-run table, a `score,count`
histogram, a JSON record with the full parameter echo, and a histogram
image, so one invocation leaves a self-contained report directory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report
from .baselines import BASELINE_ALGOS, GbfsParams, NrpaParams, UctParams, run_baseline
from .bench import (
    MOLECULES,
    AlgoConfig,
    get_molecule,
    paper_config,
    run_until_target,
    summarize_target_runs,
)
from .engine import ENGINES, SEARCH_ALGOS, run_search
from .lattice import (
    HpFoldError,
    HpSequence,
    conformation_lines,
    parse_sequence,
    read_sequence_file,
    replay_moves,
    write_conformation,
)
from .lnmcs import THRESHOLD_POLICIES, LnmcsParams
from .oracle import EnumerationTooLargeError, exhaustive_best
from .playout import PlayoutParams
from .rng import derive_seed

ALL_ALGOS = SEARCH_ALGOS + BASELINE_ALGOS


def _onoff(text: str) -> bool:
    table = {"on": True, "off": False}
    if text not in table:
        raise argparse.ArgumentTypeError(f"expected 'on' or 'off', got {text!r}")
    return table[text]


def _sequence_arg(text: str) -> HpSequence:
    try:
        if text.startswith("@"):
            return read_sequence_file(text[1:])[0]
        return parse_sequence(text)
    except (HpFoldError, OSError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hpfold",
        description="Monte Carlo search for minimum-energy HP-model lattice foldings.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="search a sequence and report scores")
    run.add_argument("--seq", required=True, type=_sequence_arg, metavar="HP|@FILE",
                     help="HP string, or @path to a file containing one")
    run.add_argument("--dim", type=int, choices=(2, 3), default=3)
    run.add_argument("--algo", choices=ALL_ALGOS, default="lnmcs")
    run.add_argument("--level", type=int, default=None,
                     help="nesting level (default 5; 3 for nrpa/gnrpa)")
    run.add_argument("--bias", type=float, default=20.0,
                     help="playout softmax bias (0 = uniform)")
    run.add_argument("--eval-playouts", type=int, default=20, metavar="P",
                     help="playouts per child estimate (lnmcs, gbfs)")
    run.add_argument("--ratio", type=float, default=0.9,
                     help="lnmcs pruning ratio against the depth threshold")
    run.add_argument("--threshold", choices=THRESHOLD_POLICIES, default="max",
                     help="lnmcs per-depth threshold statistic")
    run.add_argument("--faithful-eval", type=_onoff, default=False, metavar="on|off",
                     help="discard evaluation playouts instead of keeping the best")
    run.add_argument("--two-pass", type=_onoff, default=False, metavar="on|off",
                     help="evaluate all children before pruning any (lnmcs)")
    run.add_argument("--code", choices=("ply", "last-k"), default="ply",
                     help="nrpa/gnrpa policy key: ply index or last-k move context")
    run.add_argument("--iterations", type=int, default=100,
                     help="nrpa/gnrpa adaptation iterations per level")
    run.add_argument("--exploration", type=float, default=0.4,
                     help="uct exploration constant")
    run.add_argument("--timeout-secs", type=float, default=None, metavar="T")
    run.add_argument("--max-playouts", type=int, default=None, metavar="N")
    run.add_argument("--target", type=float, default=None,
                     help="stop early once this score is reached")
    run.add_argument("--runs", type=int, default=1, metavar="K")
    run.add_argument("--seed", type=int, default=1, metavar="S")
    run.add_argument("--engine", choices=ENGINES, default="auto")
    run.add_argument("--out", type=Path, default=None, metavar="DIR",
                     help="write csv/json/histogram report files here")
    run.add_argument("--format", choices=("csv", "json"), default="csv")
    run.add_argument("--dump-best", type=Path, default=None, metavar="PATH",
                     help="write the best conformation in lattice text format")
    run.add_argument("--no-plot", action="store_true",
                     help="skip the histogram image")

    bench = sub.add_parser("bench", help="timeout-and-restart benchmark protocol")
    bench.add_argument("--molecule", required=True, metavar="{1..10|all}")
    bench.add_argument("--algo", choices=ALL_ALGOS, default="lnmcs")
    bench.add_argument("--runs", type=int, default=5,
                       help="independent restart-until-target trials per molecule")
    bench.add_argument("--timeout-secs", type=float, default=150.0)
    bench.add_argument("--max-playouts", type=int, default=None,
                       help="per-attempt playout budget instead of wall clock")
    bench.add_argument("--max-restarts", type=int, default=100)
    bench.add_argument("--seed", type=int, default=1)
    bench.add_argument("--bias", type=float, default=None,
                       help="override the default playout bias of 20")
    bench.add_argument("--level", type=int, default=None)
    bench.add_argument("--out", type=Path, default=None, metavar="DIR")
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    bench.add_argument("--no-plot", action="store_true")

    enum = sub.add_parser("enumerate", help="exact optimum by exhaustive search")
    enum.add_argument("--seq", required=True, type=_sequence_arg, metavar="HP|@FILE")
    enum.add_argument("--dim", type=int, choices=(2, 3), default=2)

    return parser


def _run_params(args) -> dict:
    """Parameter echo for reports; everything that shapes the search."""
    return {
        "sequence": args.seq.text,
        "dim": args.dim,
        "algo": args.algo,
        "level": args.level,
        "bias": args.bias,
        "eval_playouts": args.eval_playouts,
        "ratio": args.ratio,
        "threshold": args.threshold,
        "faithful_eval": args.faithful_eval,
        "two_pass": args.two_pass,
        "code": args.code,
        "iterations": args.iterations,
        "exploration": args.exploration,
        "timeout_secs": args.timeout_secs,
        "max_playouts": args.max_playouts,
        "target": args.target,
        "runs": args.runs,
        "seed": args.seed,
        "engine": args.engine,
    }


def _dispatch_single(args, seed: int):
    play = PlayoutParams(bias=args.bias)
    if args.algo in SEARCH_ALGOS:
        level = 5 if args.level is None else args.level
        return run_search(
            args.seq, args.dim, args.algo, seed=seed, level=level,
            play_params=play,
            lnmcs_params=LnmcsParams(
                eval_playouts=args.eval_playouts, ratio=args.ratio,
                policy=args.threshold, faithful_eval=args.faithful_eval,
                two_pass=args.two_pass),
            timeout_secs=args.timeout_secs, max_playouts=args.max_playouts,
            target=args.target, engine=args.engine)
    kwargs = {}
    if args.algo in ("nrpa", "gnrpa"):
        level = 3 if args.level is None else args.level
        kwargs["nrpa_params"] = NrpaParams(level=level, iterations=args.iterations,
                                           code=args.code)
    elif args.algo == "gbfs":
        kwargs["gbfs_params"] = GbfsParams(eval_playouts=args.eval_playouts)
    elif args.algo == "uct":
        kwargs["uct_params"] = UctParams(exploration=args.exploration)
    return run_baseline(
        args.seq, args.dim, args.algo, seed=seed, play_params=play,
        timeout_secs=args.timeout_secs, max_playouts=args.max_playouts,
        target=args.target, **kwargs)


def cmd_run(args) -> int:
    results = []
    for i in range(args.runs):
        results.append(_dispatch_single(args, derive_seed(args.seed, i)))
    best = max(results, key=lambda r: r.score)

    for i, r in enumerate(results):
        print(f"run={i} seed={r.seed} score={r.score:.0f} playouts={r.playouts}")
    print(f"best score={best.score:.0f} over {args.runs} run(s)")

    if args.dump_best is not None:
        final = replay_moves(args.seq, args.dim, best.moves)
        args.dump_best.parent.mkdir(parents=True, exist_ok=True)
        write_conformation(final, args.dump_best)

    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        hist: dict = {}
        for r in results:
            hist[int(r.score)] = hist.get(int(r.score), 0) + 1
        if args.format == "json":
            report.write_run_json(args.out / "runs.json",
                                  params=_run_params(args), results=results)
        else:
            report.write_run_csv(args.out / "runs.csv", results)
        report.write_histogram_csv(args.out / "histogram.csv", hist)
        if not args.no_plot:
            report.render_histogram(
                args.out / "histogram.png", hist,
                title=f"{args.algo} on {len(args.seq)}-mer, {args.runs} run(s)",
                target=args.target)
    return 0


def _bench_config(args, ident: int) -> AlgoConfig:
    if args.algo in ("nmcs", "lnmcs"):
        config = paper_config(ident, args.algo)
    elif args.algo == "playout":
        config = AlgoConfig(algo="playout")
    elif args.algo in ("nrpa", "gnrpa"):
        config = AlgoConfig(algo=args.algo, baseline_params=NrpaParams())
    elif args.algo == "gbfs":
        config = AlgoConfig(algo="gbfs", baseline_params=GbfsParams())
    else:
        config = AlgoConfig(algo="uct", baseline_params=UctParams())
    overrides = {}
    if args.level is not None:
        overrides["level"] = args.level
    if args.bias is not None:
        overrides["play_params"] = PlayoutParams(bias=args.bias)
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    return config


def cmd_bench(args) -> int:
    if args.molecule == "all":
        idents = [m.ident for m in MOLECULES]
    else:
        idents = [int(args.molecule)]

    summaries = []
    for ident in idents:
        molecule = get_molecule(ident)
        config = _bench_config(args, ident)
        trials = []
        for i in range(args.runs):
            trials.append(run_until_target(
                molecule.sequence, 3, molecule.target, config,
                run_seed=derive_seed(args.seed, ident * 1000 + i),
                timeout_secs=args.timeout_secs,
                max_restarts=args.max_restarts,
                max_playouts=args.max_playouts))
        summary = summarize_target_runs(molecule.name, config, trials, args.seed)
        summaries.append(summary)
        print(summary.csv_row())

    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        if args.format == "json":
            report.write_summary_json(args.out / "bench.json", summaries)
        else:
            report.write_summary_csv(args.out / "bench.csv", summaries)
        for summary in summaries:
            stem = f"molecule{summary.molecule}_{summary.algo}"
            report.write_histogram_csv(args.out / f"{stem}_histogram.csv",
                                       summary.histogram)
            if not args.no_plot:
                mol = get_molecule(int(summary.molecule))
                report.render_histogram(
                    args.out / f"{stem}_histogram.png", summary.histogram,
                    title=f"{summary.algo} on molecule {summary.molecule}",
                    target=mol.target)
    return 0


def cmd_enumerate(args) -> int:
    best = exhaustive_best(args.seq, args.dim)
    print(f"sequence={args.seq.text} dim={args.dim}")
    print(f"optimum={best.score:.0f}")
    final = replay_moves(args.seq, args.dim, best.moves)
    for line in conformation_lines(final):
        print(line)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_enumerate(args)
    except EnumerationTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (HpFoldError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

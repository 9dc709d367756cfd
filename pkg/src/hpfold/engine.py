"""Engine dispatch: one entry point over the reference and compiled engines.

`run_search` runs a single playout, nested, or lazy nested search and
returns a validated result.  The compiled engine is the default; the
reference engine produces identical results (pinned by tests) and supports
tracing and the two-pass pruning variant.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .lattice import HpSequence, ScoredSequence, initial_state, replay_moves
from .lnmcs import MEDIAN_WINDOW, THRESHOLD_POLICIES, LnmcsParams, ThresholdTable, lnmcs
from .nmcs import nmcs
from .playout import PlayoutParams, playout
from .rng import PlayoutStreams, derive_seed
from .search import SearchLimits

ENGINES = ("auto", "fast", "py")
SEARCH_ALGOS = ("playout", "nmcs", "lnmcs")


@dataclass(frozen=True)
class RunResult:
    score: float
    moves: tuple
    playouts: int
    elapsed: float
    cancelled: bool
    seed: int
    engine: str

    @property
    def found(self) -> bool:
        return self.score != float("-inf")


def resolve_engine(engine: str, two_pass: bool = False, trace_wanted: bool = False) -> str:
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    if two_pass or trace_wanted:
        # Only the reference engine implements these.
        return "py"
    if engine == "auto":
        return "fast"
    return engine


def _kernel_state(sequence: HpSequence, dim: int):
    n = len(sequence)
    span = 2 * n + 1
    grid = np.zeros(span**dim, np.uint8)
    path = np.zeros(n, np.int64)
    st = np.zeros(4, np.int64)
    deltas = np.zeros(6, np.int64)
    deltas[0] = 1
    deltas[1] = -1
    deltas[2] = span
    deltas[3] = -span
    if dim == 3:
        deltas[4] = span * span
        deltas[5] = -span * span
    center = n * (1 + span) if dim == 2 else n * (1 + span + span * span)
    is_h = np.array([1 if h else 0 for h in sequence.is_h], np.uint8)
    grid[center] = 2 if sequence.is_h[0] else 1
    path[0] = center
    st[0] = 1
    return grid, path, st, is_h, deltas


def run_search(
    sequence: HpSequence,
    dim: int,
    algo: str,
    *,
    seed: int,
    level: int = 0,
    play_params: PlayoutParams = PlayoutParams(),
    lnmcs_params: LnmcsParams = LnmcsParams(),
    timeout_secs: Optional[float] = None,
    max_playouts: Optional[int] = None,
    target: Optional[float] = None,
    engine: str = "auto",
    reduce_symmetry: bool = True,
    trace: Optional[list] = None,
) -> RunResult:
    """Run one search to completion (or cancellation) and validate the result."""
    if algo not in SEARCH_ALGOS:
        raise ValueError(f"unknown search algo {algo!r}")
    two_pass = algo == "lnmcs" and lnmcs_params.two_pass
    chosen = resolve_engine(engine, two_pass, trace is not None)
    start = time.perf_counter()
    if chosen == "py":
        result, playouts, cancelled = _run_py(
            sequence, dim, algo, seed, level, play_params, lnmcs_params,
            timeout_secs, max_playouts, target, reduce_symmetry, trace,
        )
    else:
        result, playouts, cancelled = _run_fast(
            sequence, dim, algo, seed, level, play_params, lnmcs_params,
            timeout_secs, max_playouts, target, reduce_symmetry,
        )
    elapsed = time.perf_counter() - start
    if result.score != float("-inf"):
        check = replay_moves(sequence, dim, result.moves, reduce_symmetry)
        if check.score() != result.score:
            raise AssertionError(
                f"result does not replay: moves give {check.score()}, "
                f"search reported {result.score}"
            )
    return RunResult(
        score=result.score,
        moves=result.moves,
        playouts=playouts,
        elapsed=elapsed,
        cancelled=cancelled,
        seed=seed,
        engine=chosen,
    )


def _run_py(sequence, dim, algo, seed, level, play_params, lnmcs_params,
            timeout_secs, max_playouts, target, reduce_symmetry, trace):
    streams = PlayoutStreams(seed)
    limits = SearchLimits.for_run(timeout_secs, max_playouts, target)
    state = initial_state(sequence, dim, reduce_symmetry)
    if algo == "playout":
        limits.charge_playout()
        result = playout(state, streams.decision_stream(), play_params)
        limits.note_best(result.score)
    elif algo == "nmcs":
        result = nmcs(state, level, streams, play_params, limits, trace)
    else:
        result = lnmcs(state, level, streams, lnmcs_params, play_params,
                       limits, None, trace)
    return result, limits.playouts, limits.cancelled


def _run_fast(sequence, dim, algo, seed, level, play_params, lnmcs_params,
              timeout_secs, max_playouts, target, reduce_symmetry):
    n = len(sequence)
    grid, path, st, is_h, deltas = _kernel_state(sequence, dim)
    droot = np.uint64(derive_seed(seed, 0))
    eroot = np.uint64(derive_seed(seed, 1))
    counters = np.zeros(2, np.int64)
    acct = np.zeros(2, np.int64)
    facct = np.full(1, float("-inf"))
    deadline = -1.0 if timeout_secs is None else time.perf_counter() + timeout_secs
    budget = -1 if max_playouts is None else int(max_playouts)
    use_target = 0 if target is None else 1
    tval = 0.0 if target is None else float(target)
    reward = play_params.reward
    common = (grid, path, st, is_h, n, dim, deltas, 1 if reduce_symmetry else 0,
              float(play_params.bias), reward.hh_gain, reward.hp_penalty,
              reward.pp_gain)
    if algo == "playout":
        moves_out = np.empty(n, np.int8)
        score, nsteps = kernels.k_playout(
            *common, droot, counters, acct, facct,
            deadline, budget, tval, use_target, moves_out)
        moves = moves_out[:nsteps]
    elif algo == "nmcs":
        score, moves = kernels.k_nmcs(
            *common, level, droot, counters, acct, facct,
            deadline, budget, tval, use_target)
    else:
        policy = THRESHOLD_POLICIES.index(lnmcs_params.policy)
        tvals = np.zeros(n, np.float64)
        tsums = np.zeros(n, np.float64)
        tcounts = np.zeros(n, np.int64)
        twin = np.zeros((n, MEDIAN_WINDOW), np.float64)
        score, moves = kernels.k_lnmcs(
            *common, level, droot, eroot, counters, acct, facct,
            deadline, budget, tval, use_target,
            lnmcs_params.eval_playouts, lnmcs_params.ratio, policy,
            1 if lnmcs_params.faithful_eval else 0,
            tvals, tsums, tcounts, twin, MEDIAN_WINDOW)
    result = ScoredSequence(float(score), tuple(int(m) for m in moves))
    if result.score == float("-inf"):
        result = ScoredSequence(float("-inf"), ())
    return result, int(acct[0]), bool(acct[1])


def warm_up() -> None:
    """Force kernel compilation so timed runs never pay the compile cost."""
    seq = HpSequence("HPPH")
    for algo, level in (("playout", 0), ("nmcs", 1), ("lnmcs", 1)):
        for dim in (2, 3):
            run_search(seq, dim, algo, seed=0, level=level,
                       lnmcs_params=LnmcsParams(eval_playouts=2),
                       engine="fast")

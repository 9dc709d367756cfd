"""Lazy nested Monte Carlo search: nested search with playout-based pruning.

Before recursing into a child, the child is evaluated with the mean score
of a handful of playouts.  The estimate feeds a per-depth threshold table
(max, running mean, or recency-window median of all estimates seen at that
chain depth, across the whole run).  Children whose estimate falls below
`ratio` times the threshold get a single playout instead of a full nested
search, which concentrates the budget on promising branches.

The threshold is updated with a child's estimate before that child's own
prune test, so the first child evaluated at a fresh depth is never pruned
under the max policy.  `two_pass` instead evaluates every child of a ply
first and prunes against the completed table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .lattice import ChainState, ScoredSequence
from .playout import PlayoutParams, playout
from .rng import PlayoutStreams
from .search import SearchLimits

EMPTY = ScoredSequence(float("-inf"), ())

THRESHOLD_POLICIES = ("max", "mean", "median")
MEDIAN_WINDOW = 255


@dataclass(frozen=True)
class LnmcsParams:
    eval_playouts: int = 20
    ratio: float = 0.9
    policy: str = "max"
    faithful_eval: bool = False  # drop best-playout retention from evaluations
    two_pass: bool = False

    def __post_init__(self):
        if self.policy not in THRESHOLD_POLICIES:
            raise ValueError(f"unknown threshold policy {self.policy!r}")
        if self.eval_playouts < 1:
            raise ValueError("eval_playouts must be >= 1")


class ThresholdTable:
    """Per-depth pruning thresholds, lazily extended as depths are reached."""

    def __init__(self, policy: str = "max", window: int = MEDIAN_WINDOW):
        if policy not in THRESHOLD_POLICIES:
            raise ValueError(f"unknown threshold policy {policy!r}")
        self.policy = policy
        self.window = window
        self.values: list = []
        self._sums: list = []
        self._counts: list = []
        self._recent: list = []  # per depth: circular buffer of estimates

    def ensure(self, depth: int) -> None:
        while len(self.values) <= depth:
            self.values.append(0.0)
            self._sums.append(0.0)
            self._counts.append(0)
            self._recent.append([])

    def threshold(self, depth: int) -> float:
        return self.values[depth]

    def update(self, depth: int, estimate: float) -> float:
        self.ensure(depth)
        if self.policy == "max":
            if estimate > self.values[depth]:
                self.values[depth] = estimate
        elif self.policy == "mean":
            self._sums[depth] += estimate
            self._counts[depth] += 1
            self.values[depth] = self._sums[depth] / self._counts[depth]
        else:
            recent = self._recent[depth]
            if len(recent) < self.window:
                recent.append(estimate)
            else:
                recent[self._counts[depth] % self.window] = estimate
            self._counts[depth] += 1
            self.values[depth] = float(np.median(np.asarray(recent)))
        return self.values[depth]


def _evaluate(
    child: ChainState,
    streams: PlayoutStreams,
    params: LnmcsParams,
    play_params: PlayoutParams,
    limits: SearchLimits,
):
    """Mean-of-playouts estimate of `child`, plus the best playout seen."""
    p = params.eval_playouts
    estimate = 0.0
    best = None
    for _ in range(p):
        if limits.checkpoint():
            break
        rng = streams.eval_stream()
        limits.charge_playout()
        result = playout(child, rng, play_params)
        limits.note_best(result.score)
        estimate += result.score / p
        if best is None or result.score >= best.score:
            best = result
    return estimate, best


def lnmcs(
    state: ChainState,
    level: int,
    streams: PlayoutStreams,
    params: LnmcsParams = LnmcsParams(),
    play_params: PlayoutParams = PlayoutParams(),
    limits: Optional[SearchLimits] = None,
    table: Optional[ThresholdTable] = None,
    trace: Optional[list] = None,
) -> ScoredSequence:
    """Run a level-`level` lazy nested search from `state`.

    Same result contract as the plain nested search: returned moves replay
    from `state` to the returned score.  With ratio 0 nothing is ever
    pruned (estimates cannot be negative), so apart from the evaluation
    playouts the search visits exactly the plain nested search's tree.
    """
    if limits is None:
        limits = SearchLimits()
    if table is None:
        table = ThresholdTable(params.policy)
    if state.is_terminal():
        sc = state.score()
        limits.note_best(sc)
        return ScoredSequence(sc, ())
    if level == 0:
        if limits.checkpoint():
            return EMPTY
        index = streams.decision_count
        rng = streams.decision_stream()
        limits.charge_playout()
        result = playout(state, rng, play_params)
        limits.note_best(result.score)
        if trace is not None:
            trace.append((index, state.nbplay, result.score, result.moves))
        return result

    current = state.copy()
    collected = []
    best_score = float("-inf")
    best_suffix = []

    def fold(score: float, moves) -> None:
        nonlocal best_score, best_suffix
        if score != float("-inf") and score >= best_score:
            best_score = score
            best_suffix = list(moves)

    while not current.is_terminal():
        depth = current.nbplay
        table.ensure(depth)
        legal = current.legal_moves()
        if params.two_pass:
            evals = []
            for m in legal:
                child = current.play(m)
                if child.is_terminal():
                    estimate = child.score()
                else:
                    estimate, seen = _evaluate(child, streams, params, play_params, limits)
                    if seen is not None and not params.faithful_eval:
                        fold(seen.score, [m, *seen.moves])
                    if limits.cancelled:
                        break
                table.update(depth, estimate)
                evals.append((m, child, estimate))
            cutoff = params.ratio * table.threshold(depth)
            for m, child, estimate in evals:
                sublevel = 0 if estimate < cutoff else level - 1
                result = lnmcs(
                    child, sublevel, streams, params, play_params, limits, table, trace
                )
                fold(result.score, [m, *result.moves])
                if limits.checkpoint():
                    break
        else:
            for m in legal:
                child = current.play(m)
                if child.is_terminal():
                    estimate = child.score()
                else:
                    estimate, seen = _evaluate(child, streams, params, play_params, limits)
                    if seen is not None and not params.faithful_eval:
                        fold(seen.score, [m, *seen.moves])
                    if limits.cancelled:
                        break
                table.update(depth, estimate)
                pruned = estimate < params.ratio * table.threshold(depth)
                result = lnmcs(
                    child,
                    0 if pruned else level - 1,
                    streams,
                    params,
                    play_params,
                    limits,
                    table,
                    trace,
                )
                fold(result.score, [m, *result.moves])
                if limits.checkpoint():
                    break
        if not best_suffix:
            break
        step = best_suffix.pop(0)
        current._advance(step)
        collected.append(step)
        if limits.cancelled:
            break
    if best_score == float("-inf"):
        return EMPTY
    return ScoredSequence(best_score, tuple(collected) + tuple(best_suffix))

"""Nested Monte Carlo search over chain growth.

A level-L search tries every legal move at each ply, scores each child
with a level-(L-1) search (level 0 is a single biased playout), and keeps
a best-sequence memory: whenever a child result ties or beats the best
score seen so far, the remembered continuation is overwritten from the
current ply on.  The move actually played at each ply is the next move of
that memory, so good continuations found early keep steering later plies.
"""

from __future__ import annotations

from typing import Optional

from .lattice import ChainState, ScoredSequence
from .playout import PlayoutParams, playout
from .rng import PlayoutStreams
from .search import SearchLimits

EMPTY = ScoredSequence(float("-inf"), ())


def nmcs(
    state: ChainState,
    level: int,
    streams: PlayoutStreams,
    params: PlayoutParams = PlayoutParams(),
    limits: Optional[SearchLimits] = None,
    trace: Optional[list] = None,
) -> ScoredSequence:
    """Run a level-`level` nested search from `state`.

    The returned moves replay from `state` to a terminal folding with the
    returned score.  On cancellation the best result found so far comes
    back; EMPTY only when cancelled before any playout completed.

    `trace`, when given, collects one (substream_index, ply, score, moves)
    tuple per decision playout, in execution order.
    """
    if limits is None:
        limits = SearchLimits()
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
        result = playout(state, rng, params)
        limits.note_best(result.score)
        if trace is not None:
            trace.append((index, state.nbplay, result.score, result.moves))
        return result

    current = state.copy()
    collected = []  # moves played below `state`
    best_score = float("-inf")
    best_suffix = []  # continuation from `current`; replays to best_score
    while not current.is_terminal():
        for m in current.legal_moves():
            child = current.play(m)
            result = nmcs(child, level - 1, streams, params, limits, trace)
            if result.score != float("-inf") and result.score >= best_score:
                best_score = result.score
                best_suffix = [m, *result.moves]
            if limits.checkpoint():
                break
        if not best_suffix:
            break  # cancelled before any child finished at the root ply
        step = best_suffix.pop(0)
        current._advance(step)
        collected.append(step)
        if limits.cancelled:
            break
    if best_score == float("-inf"):
        return EMPTY
    return ScoredSequence(best_score, tuple(collected) + tuple(best_suffix))

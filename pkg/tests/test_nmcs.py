"""Nested search behavior: nesting semantics, budgets, reproducibility."""

import pytest

from hpfold.lattice import initial_state, parse_sequence, replay_moves
from hpfold.nmcs import EMPTY, nmcs
from hpfold.oracle import exhaustive_best
from hpfold.playout import PlayoutParams, playout
from hpfold.rng import PlayoutStreams
from hpfold.search import SearchLimits

SEQ12 = parse_sequence("HPHHPPHHPHPH")


def test_level_zero_is_one_decision_playout():
    state = initial_state(SEQ12, 2)
    result = nmcs(state, 0, PlayoutStreams(17))
    direct = playout(state, PlayoutStreams(17).decision_stream())
    assert result == direct


def test_terminal_state_scores_without_playouts():
    seq = parse_sequence("HPPH")
    state = replay_moves(seq, 2, [0, 2, 1], reduce_symmetry=True)
    limits = SearchLimits()
    result = nmcs(state, 3, PlayoutStreams(1), limits=limits)
    assert result.score == 1.0 and result.moves == ()
    assert limits.playouts == 0


def test_same_seed_reproduces_result_and_playout_count():
    state = initial_state(SEQ12, 3)
    a_limits = SearchLimits()
    b_limits = SearchLimits()
    a = nmcs(state, 1, PlayoutStreams(5), limits=a_limits)
    b = nmcs(state, 1, PlayoutStreams(5), limits=b_limits)
    assert a == b
    assert a_limits.playouts == b_limits.playouts


def test_result_replays_to_score():
    state = initial_state(SEQ12, 2)
    result = nmcs(state, 1, PlayoutStreams(23))
    final = replay_moves(SEQ12, 2, result.moves, reduce_symmetry=True)
    assert final.is_terminal()
    assert final.score() == result.score


def test_level_two_finds_small_optimum():
    seq = parse_sequence("HHPPHHPH")
    optimum = exhaustive_best(seq, 2).score
    state = initial_state(seq, 2)
    result = nmcs(state, 2, PlayoutStreams(3))
    assert result.score == optimum


def test_playout_budget_is_hard():
    state = initial_state(SEQ12, 2)
    limits = SearchLimits.for_run(max_playouts=25)
    result = nmcs(state, 2, PlayoutStreams(8), limits=limits)
    assert limits.playouts <= 25
    assert limits.cancelled
    if result is not EMPTY:
        # A cancelled search still hands back a replayable best sequence.
        final = replay_moves(SEQ12, 2, result.moves, reduce_symmetry=True)
        assert final.score() == result.score


def test_cancel_before_first_playout_returns_empty():
    state = initial_state(SEQ12, 2)
    limits = SearchLimits.for_run(max_playouts=0)
    result = nmcs(state, 1, PlayoutStreams(8), limits=limits)
    assert result is EMPTY


def test_target_stops_search_early():
    state = initial_state(SEQ12, 2)
    limits = SearchLimits.for_run(target=1.0)
    result = nmcs(state, 2, PlayoutStreams(2), limits=limits)
    assert limits.cancelled
    assert result.score >= 1.0


def test_trace_records_decision_playouts_in_order():
    state = initial_state(parse_sequence("HPHHPH"), 2)
    trace = []
    limits = SearchLimits()
    nmcs(state, 1, PlayoutStreams(6), limits=limits, trace=trace)
    assert len(trace) == limits.playouts
    indices = [t[0] for t in trace]
    assert indices == sorted(indices)  # substream counter is monotone
    for _, ply, score, moves in trace:
        assert ply >= 0
        assert score >= 0.0
        assert isinstance(moves, tuple)


def test_deeper_nesting_is_no_worse_on_average():
    seqs = [SEQ12, parse_sequence("HHPHPHPPHHPH")]
    for seq in seqs:
        state = initial_state(seq, 2)
        l1 = [nmcs(state, 1, PlayoutStreams(s)).score for s in range(6)]
        l2 = [nmcs(state, 2, PlayoutStreams(s)).score for s in range(6)]
        assert sum(l2) >= sum(l1)

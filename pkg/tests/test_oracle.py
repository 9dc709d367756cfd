"""Exhaustive enumeration as ground truth: known walk counts, tiny optima."""

import pytest

from hpfold.lattice import parse_sequence, replay_moves
from hpfold.oracle import (
    EnumerationTooLargeError,
    count_complete_foldings,
    exhaustive_best,
    score_histogram,
)
from hpfold.rng import RngStream

# Self-avoiding walk counts on Z^2 and Z^3 (walks of n-1 steps, no symmetry
# folding): standard combinatorial series, independently tabulated.
SAW_2D = {2: 4, 3: 12, 4: 36, 5: 100, 6: 284, 7: 780}
SAW_3D = {2: 6, 3: 30, 4: 150, 5: 726}


@pytest.mark.parametrize("n,expected", sorted(SAW_2D.items()))
def test_walk_counts_match_2d_series(n, expected):
    seq = parse_sequence("H" * n)
    assert count_complete_foldings(seq, 2, reduce_symmetry=False) == expected


@pytest.mark.parametrize("n,expected", sorted(SAW_3D.items()))
def test_walk_counts_match_3d_series(n, expected):
    seq = parse_sequence("H" * n)
    assert count_complete_foldings(seq, 3, reduce_symmetry=False) == expected


def test_hand_checked_optima():
    # Two H's can only be chain neighbors: no non-consecutive contact.
    assert exhaustive_best(parse_sequence("HH"), 2).score == 0.0
    # Distance-2 H's can never touch on the square lattice.
    assert exhaustive_best(parse_sequence("HPH"), 2).score == 0.0
    # The unit square closes one H-H contact.
    assert exhaustive_best(parse_sequence("HPPH"), 2).score == 1.0
    assert exhaustive_best(parse_sequence("HHHH"), 2).score == 1.0


def test_optimal_moves_replay_to_optimal_score():
    seq = parse_sequence("HPHHPPHH")
    best = exhaustive_best(seq, 2)
    final = replay_moves(seq, 2, best.moves, reduce_symmetry=True)
    assert final.score() == best.score


def test_symmetry_reduction_preserves_optimum():
    rng = RngStream(2024)
    for _ in range(8):
        n = 5 + int(rng.random() * 5)
        text = "".join("H" if rng.random() < 0.5 else "P" for _ in range(n))
        seq = parse_sequence(text)
        for dim in (2, 3):
            reduced = exhaustive_best(seq, dim, reduce_symmetry=True).score
            full = exhaustive_best(seq, dim, reduce_symmetry=False).score
            assert reduced == full


def test_3d_dominates_2d():
    seq = parse_sequence("HHPHHPHH")
    assert exhaustive_best(seq, 3).score >= exhaustive_best(seq, 2).score


def test_size_cap_enforced():
    with pytest.raises(EnumerationTooLargeError):
        exhaustive_best(parse_sequence("H" * 17), 2)
    with pytest.raises(EnumerationTooLargeError):
        exhaustive_best(parse_sequence("H" * 12), 3)
    # At the cap it still runs (smoke only; full runtime lives in CI timing).
    assert count_complete_foldings(parse_sequence("H" * 8), 2) > 0


def test_histogram_totals_match_terminal_count():
    seq = parse_sequence("HHPPHH")
    hist = score_histogram(seq, 2, reduce_symmetry=False)
    complete = count_complete_foldings(seq, 2, reduce_symmetry=False)
    # Every complete folding is terminal; traps only add to the total.
    assert sum(hist.values()) >= complete
    assert max(hist) == int(exhaustive_best(seq, 2).score)


def test_histogram_matches_best_in_reduced_tree():
    seq = parse_sequence("HPHPPH")
    hist = score_histogram(seq, 2)
    assert max(hist) == int(exhaustive_best(seq, 2).score)
    assert all(isinstance(k, int) and v > 0 for k, v in hist.items())

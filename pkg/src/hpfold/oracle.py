"""Exhaustive enumeration over the chain-growth tree for small sequences.

Depth-first search over every self-avoiding placement gives ground truth
for the searches: the exact optimal contact score, an optimal move list,
and walk counts.  Exponential, so callers are size-capped.
"""

from __future__ import annotations

from .lattice import ChainState, HpSequence, ScoredSequence, initial_state

# Beyond these lengths the walk tree is too large to enumerate in sensible
# time on one core.
MAX_ENUM_LENGTH = {2: 16, 3: 11}


class EnumerationTooLargeError(Exception):
    def __init__(self, length: int, dim: int):
        super().__init__(
            f"sequence of length {length} exceeds the {dim}D enumeration "
            f"cap of {MAX_ENUM_LENGTH[dim]} residues"
        )


def _check_size(sequence: HpSequence, dim: int) -> None:
    if len(sequence) > MAX_ENUM_LENGTH[dim]:
        raise EnumerationTooLargeError(len(sequence), dim)


def exhaustive_best(
    sequence: HpSequence, dim: int, reduce_symmetry: bool = True
) -> ScoredSequence:
    """Optimal score over every terminal state (complete or trapped).

    Returns the first optimal move list in canonical move order.  Symmetry
    reduction does not change the optimum, only the tree size.
    """
    _check_size(sequence, dim)
    state = initial_state(sequence, dim, reduce_symmetry)
    best_score = float("-inf")
    best_moves = ()
    path = []

    def descend(st: ChainState) -> None:
        nonlocal best_score, best_moves
        legal = st.legal_moves()
        if not legal:
            sc = st.score()
            if sc > best_score:
                best_score = sc
                best_moves = tuple(path)
            return
        for m in legal:
            saved = (st.contacts, st._has_y, st._has_z)
            st._advance(m)
            path.append(m)
            descend(st)
            path.pop()
            dropped = st.placed.pop()
            del st.occupied[dropped]
            st.contacts, st._has_y, st._has_z = saved

    descend(state)
    return ScoredSequence(best_score, best_moves)


def count_complete_foldings(
    sequence: HpSequence, dim: int, reduce_symmetry: bool = False
) -> int:
    """Number of complete self-avoiding placements of the sequence."""
    _check_size(sequence, dim)
    state = initial_state(sequence, dim, reduce_symmetry)
    count = 0

    def descend(st: ChainState) -> None:
        nonlocal count
        if st.complete:
            count += 1
            return
        for m in st.legal_moves():
            saved = (st.contacts, st._has_y, st._has_z)
            st._advance(m)
            descend(st)
            dropped = st.placed.pop()
            del st.occupied[dropped]
            st.contacts, st._has_y, st._has_z = saved

    descend(state)
    return count


def score_histogram(
    sequence: HpSequence, dim: int, reduce_symmetry: bool = True
) -> dict:
    """Terminal score -> count over the whole chain-growth tree."""
    _check_size(sequence, dim)
    state = initial_state(sequence, dim, reduce_symmetry)
    hist: dict = {}

    def descend(st: ChainState) -> None:
        legal = st.legal_moves()
        if not legal:
            sc = int(st.score())
            hist[sc] = hist.get(sc, 0) + 1
            return
        for m in legal:
            saved = (st.contacts, st._has_y, st._has_z)
            st._advance(m)
            descend(st)
            dropped = st.placed.pop()
            del st.occupied[dropped]
            st.contacts, st._has_y, st._has_z = saved

    descend(state)
    return hist

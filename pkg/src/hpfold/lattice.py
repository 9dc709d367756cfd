"""HP-model lattice core: sequences, chain-growth states, moves, and scoring.

A protein is a string of H (hydrophobic) and P (polar) residues grown onto
the 2D square or 3D cubic lattice one residue at a time, self-avoiding-walk
style.  The objective is the number of non-consecutive H-H lattice contacts
of the finished chain (the negated energy), which every search maximizes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence, TextIO

# Canonical direction order; move codes index this table.
# 2D uses the first four entries.
DIRECTION_VECTORS = (
    (1, 0, 0),
    (-1, 0, 0),
    (0, 1, 0),
    (0, -1, 0),
    (0, 0, 1),
    (0, 0, -1),
)
DIRECTION_NAMES = ("+x", "-x", "+y", "-y", "+z", "-z")

Move = int  # index into DIRECTION_VECTORS
LatticePoint = tuple  # (x, y) in 2D, (x, y, z) in 3D; unit lattice spacing


class HpFoldError(Exception):
    """Base class for all package errors."""


class SequenceParseError(HpFoldError):
    """Raised for characters outside {H, P, whitespace}; carries the index."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class IllegalMoveError(HpFoldError):
    """Raised when a move targets an occupied cell or breaks a restriction."""


class Residue(enum.Enum):
    H = "H"
    P = "P"


@dataclass(frozen=True)
class HpSequence:
    """An ordered H/P residue string; round-trips losslessly through text."""

    text: str
    is_h: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.text:
            raise SequenceParseError("empty sequence", 0)
        for i, c in enumerate(self.text):
            if c not in "HP":
                raise SequenceParseError(
                    f"invalid residue {c!r} at index {i} (expected 'H' or 'P')", i
                )
        object.__setattr__(self, "is_h", tuple(c == "H" for c in self.text))

    def __len__(self) -> int:
        return len(self.text)

    def __str__(self) -> str:
        return self.text

    @property
    def residues(self) -> tuple:
        return tuple(Residue(c) for c in self.text)


def parse_sequence(text: str) -> HpSequence:
    """Parse an HP string, ignoring whitespace, rejecting anything else."""
    chars = []
    for i, c in enumerate(text):
        if c.isspace():
            continue
        if c not in "HP":
            raise SequenceParseError(
                f"invalid residue {c!r} at index {i} (expected 'H' or 'P')", i
            )
        chars.append(c)
    if not chars:
        raise SequenceParseError("empty sequence", 0)
    return HpSequence("".join(chars))


def read_sequence_file(path) -> list:
    """Read one HP string per line; blank lines and `#` comments ignored."""
    sequences = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            sequences.append(parse_sequence(line))
    if not sequences:
        raise SequenceParseError(f"no sequences found in {path}", 0)
    return sequences


@dataclass(frozen=True)
class RewardScheme:
    """Playout-guidance rewards per adjacency type.

    Guides move sampling only; the objective score always counts plain H-H
    contacts.  The default H/P mismatch penalty keeps H residues open to
    future contacts instead of burying them next to P.
    """

    hh_gain: float = 1.0
    hp_penalty: float = -0.2
    pp_gain: float = 0.0


OBJECTIVE_REWARD = RewardScheme(1.0, 0.0, 0.0)


@dataclass(frozen=True)
class ScoredSequence:
    """A search result: terminal contact score plus the move list reaching it."""

    score: float
    moves: tuple

    def __iter__(self):
        return iter((self.score, self.moves))


EMPTY_RESULT = ScoredSequence(float("-inf"), ())


class ChainState:
    """A (possibly partial) chain-growth folding.

    Mutable for speed: `step` advances in place, `play` returns an advanced
    copy.  States are plain values — copy them to share across threads.

    With `reduce_symmetry` enabled, `legal_moves` pins the first move to +x,
    the first turn to +y, and (3D) the first out-of-plane move to +z, which
    drops the 8x / 48x lattice-symmetry duplicates without losing any
    distinct folding.  Disable it when counting conformations.
    """

    __slots__ = (
        "sequence",
        "dim",
        "reduce_symmetry",
        "placed",
        "occupied",
        "contacts",
        "_has_y",
        "_has_z",
    )

    def __init__(self, sequence: HpSequence, dim: int, reduce_symmetry: bool = True):
        if dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {dim}")
        self.sequence = sequence
        self.dim = dim
        self.reduce_symmetry = reduce_symmetry
        origin = (0, 0) if dim == 2 else (0, 0, 0)
        self.placed = [origin]
        self.occupied = {origin: 0}
        self.contacts = 0
        self._has_y = False
        self._has_z = False

    # ------------------------------------------------------------- basics

    @property
    def nbplay(self) -> int:
        """Number of moves played so far."""
        return len(self.placed) - 1

    @property
    def complete(self) -> bool:
        return len(self.placed) == len(self.sequence)

    def copy(self) -> "ChainState":
        dup = object.__new__(ChainState)
        dup.sequence = self.sequence
        dup.dim = self.dim
        dup.reduce_symmetry = self.reduce_symmetry
        dup.placed = self.placed.copy()
        dup.occupied = self.occupied.copy()
        dup.contacts = self.contacts
        dup._has_y = self._has_y
        dup._has_z = self._has_z
        return dup

    def score(self) -> float:
        """Contact count (= negated energy); trapped chains score what they have."""
        return float(self.contacts)

    def is_terminal(self) -> bool:
        return self.complete or not self.legal_moves()

    # ------------------------------------------------------------- moves

    def legal_moves(self) -> list:
        """Unoccupied-neighbor moves in canonical direction order."""
        if self.complete:
            return []
        d = self.dim
        if self.reduce_symmetry and len(self.placed) == 1:
            return [0]
        head = self.placed[-1]
        occupied = self.occupied
        moves = []
        for m in range(2 * d):
            if self.reduce_symmetry:
                if not self._has_y:
                    # No turn yet: off-axis moves restricted to +y.
                    if m == 3 or m >= 4:
                        continue
                elif d == 3 and not self._has_z and m == 5:
                    continue
            vec = DIRECTION_VECTORS[m]
            target = tuple(head[i] + vec[i] for i in range(d))
            if target not in occupied:
                moves.append(m)
        return moves

    def immediate_gain(self, move: Move, reward: RewardScheme = RewardScheme()) -> float:
        """Guidance gain of `move` under `reward`.

        Sums contributions from every occupied neighbor of the target cell
        except the chain predecessor: hh_gain per H-H pair with an incoming
        H, hp_penalty per H/P mismatch, pp_gain per P-P pair.
        """
        target = self._target(move)
        return self._gain_at(target, reward)

    def guidance_gains(self, moves: Sequence, reward: RewardScheme) -> list:
        """Guidance gain for each (known-legal) move, in the given order."""
        d = self.dim
        head = self.placed[-1]
        gains = []
        for m in moves:
            vec = DIRECTION_VECTORS[m]
            target = tuple(head[i] + vec[i] for i in range(d))
            gains.append(self._gain_at(target, reward))
        return gains

    def true_gain(self, move: Move) -> int:
        """New non-consecutive H-H contacts created by `move`."""
        target = self._target(move)
        if not self.sequence.is_h[len(self.placed)]:
            return 0
        d = self.dim
        head = self.placed[-1]
        occupied = self.occupied
        is_h = self.sequence.is_h
        gain = 0
        for vec in DIRECTION_VECTORS[: 2 * d]:
            nbr = tuple(target[i] + vec[i] for i in range(d))
            if nbr == head:
                continue
            j = occupied.get(nbr)
            if j is not None and is_h[j]:
                gain += 1
        return gain

    def play(self, move: Move) -> "ChainState":
        """Advanced copy; raises IllegalMoveError on an illegal move."""
        dup = self.copy()
        dup.step(move)
        return dup

    def step(self, move: Move) -> None:
        """Advance in place; raises IllegalMoveError on an illegal move."""
        if self.complete:
            raise IllegalMoveError("chain already complete")
        if move not in self.legal_moves():
            raise IllegalMoveError(
                f"move {DIRECTION_NAMES[move]} is not legal at ply {self.nbplay}"
            )
        self._advance(move)

    def _advance(self, move: Move) -> None:
        # No legality check: internal fast path for known-legal moves.
        d = self.dim
        head = self.placed[-1]
        vec = DIRECTION_VECTORS[move]
        target = tuple(head[i] + vec[i] for i in range(d))
        idx = len(self.placed)
        if self.sequence.is_h[idx]:
            occupied = self.occupied
            is_h = self.sequence.is_h
            for v in DIRECTION_VECTORS[: 2 * d]:
                nbr = tuple(target[i] + v[i] for i in range(d))
                if nbr == head:
                    continue
                j = occupied.get(nbr)
                if j is not None and is_h[j]:
                    self.contacts += 1
        self.placed.append(target)
        self.occupied[target] = idx
        if move in (2, 3):
            self._has_y = True
        elif move >= 4:
            self._has_z = True

    # ------------------------------------------------------------- helpers

    def _target(self, move: Move) -> LatticePoint:
        if self.complete:
            raise IllegalMoveError("chain already complete")
        if not 0 <= move < 2 * self.dim:
            raise IllegalMoveError(f"move code {move} out of range for dim {self.dim}")
        head = self.placed[-1]
        vec = DIRECTION_VECTORS[move]
        target = tuple(head[i] + vec[i] for i in range(self.dim))
        if target in self.occupied:
            raise IllegalMoveError(
                f"move {DIRECTION_NAMES[move]} targets occupied cell {target}"
            )
        return target

    def _gain_at(self, target: LatticePoint, reward: RewardScheme) -> float:
        d = self.dim
        head = self.placed[-1]
        occupied = self.occupied
        is_h = self.sequence.is_h
        incoming_h = is_h[len(self.placed)]
        gain = 0.0
        for vec in DIRECTION_VECTORS[: 2 * d]:
            nbr = tuple(target[i] + vec[i] for i in range(d))
            if nbr == head:
                continue
            j = occupied.get(nbr)
            if j is None:
                continue
            if incoming_h and is_h[j]:
                gain += reward.hh_gain
            elif incoming_h != is_h[j]:
                gain += reward.hp_penalty
            else:
                gain += reward.pp_gain
        return gain

    def recount_contacts(self) -> int:
        """Brute-force pairwise recount of non-consecutive H-H adjacencies."""
        placed = self.placed
        is_h = self.sequence.is_h
        total = 0
        for i in range(len(placed)):
            if not is_h[i]:
                continue
            pi = placed[i]
            for j in range(i + 2, len(placed)):
                if not is_h[j]:
                    continue
                pj = placed[j]
                if sum(abs(pi[k] - pj[k]) for k in range(self.dim)) == 1:
                    total += 1
        return total

    def __repr__(self) -> str:
        return (
            f"ChainState({self.sequence.text!r}, dim={self.dim}, "
            f"placed={len(self.placed)}/{len(self.sequence)}, contacts={self.contacts})"
        )


# ------------------------------------------------------------------ module ops


def initial_state(sequence: HpSequence, dim: int, reduce_symmetry: bool = True) -> ChainState:
    """Fresh state with the first residue at the origin."""
    return ChainState(sequence, dim, reduce_symmetry)


def legal_moves(state: ChainState) -> list:
    return state.legal_moves()


def immediate_gain(state: ChainState, move: Move, reward: RewardScheme = RewardScheme()) -> float:
    return state.immediate_gain(move, reward)


def play(state: ChainState, move: Move) -> ChainState:
    return state.play(move)


def is_terminal(state: ChainState) -> bool:
    return state.is_terminal()


def score(state: ChainState) -> float:
    return state.score()


def replay_moves(
    sequence: HpSequence,
    dim: int,
    moves: Iterable,
    reduce_symmetry: bool = False,
) -> ChainState:
    """Rebuild the state a move sequence leads to (validating every move)."""
    state = ChainState(sequence, dim, reduce_symmetry)
    for m in moves:
        state.step(m)
    return state


# ------------------------------------------------------------------ text I/O


def conformation_lines(state: ChainState) -> list:
    """Text form of a folding: one `index kind x y [z]` line per residue."""
    lines = []
    for i, point in enumerate(state.placed):
        kind = state.sequence.text[i]
        coords = " ".join(str(c) for c in point)
        lines.append(f"{i} {kind} {coords}")
    return lines


def write_conformation(state: ChainState, destination) -> None:
    text = "\n".join(conformation_lines(state)) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text)

"""Seedable, splittable random streams shared by every search component.

The generator is a splitmix64 counter stream: cheap, statistically solid for
Monte Carlo playouts, and trivially reproducible across the pure-Python and
compiled engines (both implement the identical integer recipe).

Substream protocol
------------------
Searches never share one sequential stream between playouts.  Instead each
run derives two counter-indexed substream roots from its master seed:

* decision playouts (the playouts whose scores drive move selection) use
  ``derive_seed(decision_root, k)`` for the k-th such playout,
* evaluation playouts (batched child estimates) use the same scheme on a
  separate root.

Keeping the two families on disjoint counters means adding or removing
evaluation playouts never perturbs the decision playouts, so search variants
that differ only in their evaluation schedule stay draw-for-draw comparable.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: int) -> int:
    """splitmix64 finalizer; all arithmetic modulo 2**64."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def derive_seed(seed: int, index: int) -> int:
    """Deterministic child seed for substream `index` of `seed`."""
    return mix64((seed + (index + 1) * GOLDEN) & MASK64)


class RngStream:
    """A single splitmix64 stream.

    Identical seed plus identical call sequence reproduces identical draws;
    `spawn` children depend only on the seed, never on how many draws were
    taken from the parent.
    """

    __slots__ = ("seed", "_state")

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._state = self.seed

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def random(self) -> float:
        """Uniform float64 in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV_2_53

    def spawn(self, index: int) -> "RngStream":
        return RngStream(derive_seed(self.seed, index))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed:#018x})"


class PlayoutStreams:
    """Per-run substream allocator (see module docstring for the protocol)."""

    __slots__ = ("_decision_root", "_eval_root", "decision_count", "eval_count")

    def __init__(self, seed: int):
        self._decision_root = derive_seed(seed, 0)
        self._eval_root = derive_seed(seed, 1)
        self.decision_count = 0
        self.eval_count = 0

    def decision_stream(self) -> RngStream:
        s = RngStream(derive_seed(self._decision_root, self.decision_count))
        self.decision_count += 1
        return s

    def eval_stream(self) -> RngStream:
        s = RngStream(derive_seed(self._eval_root, self.eval_count))
        self.eval_count += 1
        return s

"""Biased-growth playout: softmax move sampling over immediate guidance gains.

A playout grows the chain to the end (or a dead end), sampling each move m
with probability proportional to exp(gain(m) * bias).  Bias 0 is uniform;
the default bias of 20 makes the sampling nearly greedy while keeping ties
random.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .lattice import ChainState, RewardScheme, ScoredSequence
from .rng import RngStream


@dataclass(frozen=True)
class PlayoutParams:
    bias: float = 20.0
    reward: RewardScheme = RewardScheme()


def softmax_weights(gains: Sequence, bias: float) -> list:
    """exp(gain * bias) per move, max-shifted so the largest weight is 1."""
    scaled = [g * bias for g in gains]
    top = max(scaled)
    return [math.exp(s - top) for s in scaled]


def softmax_choice(rng: RngStream, gains: Sequence, bias: float) -> int:
    """Sample an index proportionally to exp(gain * bias); one uniform draw."""
    weights = softmax_weights(gains, bias)
    total = sum(weights)
    r = rng.random() * total
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        if r < acc:
            return i
    return len(weights) - 1  # r landed on the rounding edge


def playout(
    state: ChainState,
    rng: RngStream,
    params: PlayoutParams = PlayoutParams(),
) -> ScoredSequence:
    """Play `state` to termination with biased sampling; returns the suffix.

    The input state is not modified.  The returned moves replay from the
    input state to the returned score.
    """
    current = state.copy()
    moves = []
    while True:
        legal = current.legal_moves()
        if not legal:
            break
        gains = current.guidance_gains(legal, params.reward)
        pick = legal[softmax_choice(rng, gains, params.bias)]
        current._advance(pick)
        moves.append(pick)
    return ScoredSequence(current.score(), tuple(moves))

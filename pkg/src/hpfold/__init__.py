"""hpfold: Monte Carlo search for minimum-energy HP-model lattice foldings."""

from .lattice import (
    DIRECTION_NAMES,
    DIRECTION_VECTORS,
    ChainState,
    HpFoldError,
    HpSequence,
    IllegalMoveError,
    RewardScheme,
    ScoredSequence,
    SequenceParseError,
    initial_state,
    parse_sequence,
    replay_moves,
)
from .lnmcs import LnmcsParams, ThresholdTable, lnmcs
from .nmcs import nmcs
from .playout import PlayoutParams, playout
from .rng import PlayoutStreams, RngStream, derive_seed
from .search import SearchLimits

__version__ = "0.1.0"

__all__ = [
    "DIRECTION_NAMES",
    "DIRECTION_VECTORS",
    "ChainState",
    "HpFoldError",
    "HpSequence",
    "IllegalMoveError",
    "LnmcsParams",
    "PlayoutParams",
    "PlayoutStreams",
    "RewardScheme",
    "RngStream",
    "ScoredSequence",
    "SearchLimits",
    "SequenceParseError",
    "ThresholdTable",
    "derive_seed",
    "initial_state",
    "lnmcs",
    "nmcs",
    "parse_sequence",
    "playout",
    "replay_moves",
]

"""Comparison searches: NRPA, GNRPA, greedy best-first search, and UCT.

Each baseline reuses the compiled playout kernels for its inner loop and
keeps its orchestration (policy adaptation, frontier, tree) in Python.
All draw from the same seeded stream protocol as the main engines, so
runs are reproducible from a single seed.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .engine import RunResult, _kernel_state
from .lattice import HpSequence, initial_state, replay_moves
from .playout import PlayoutParams
from .rng import RngStream, derive_seed

BASELINE_ALGOS = ("nrpa", "gnrpa", "gbfs", "uct")

NEG_INF = float("-inf")


@dataclass(frozen=True)
class NrpaParams:
    level: int = 3
    iterations: int = 100
    alpha: float = 1.0
    # Policy keys: "ply" = (residues placed, direction); "last-k" replaces
    # the ply index with the last code_k moves played.
    code: str = "ply"
    code_k: int = 2

    def __post_init__(self):
        if self.code not in ("ply", "last-k"):
            raise ValueError(f"unknown policy coding {self.code!r}")


@dataclass(frozen=True)
class GbfsParams:
    eval_playouts: int = 20
    frontier_cap: int = 1_000_000


@dataclass(frozen=True)
class UctParams:
    exploration: float = 0.4
    max_nodes: int = 1_000_000


class _Run:
    """Kernel state plus budget bookkeeping shared by one baseline run."""

    def __init__(self, sequence, dim, seed, timeout_secs, max_playouts, target,
                 reduce_symmetry):
        self.sequence = sequence
        self.dim = dim
        self.n = len(sequence)
        self.grid, self.path, self.st, self.is_h, self.deltas = _kernel_state(sequence, dim)
        self.reduce_sym = 1 if reduce_symmetry else 0
        self.droot = np.uint64(derive_seed(seed, 0))
        self.eroot = np.uint64(derive_seed(seed, 1))
        self.counters = np.zeros(2, np.int64)
        self.acct = np.zeros(2, np.int64)
        self.facct = np.full(1, NEG_INF)
        self.deadline = -1.0 if timeout_secs is None else time.perf_counter() + timeout_secs
        self.budget = -1 if max_playouts is None else int(max_playouts)
        self.use_target = 0 if target is None else 1
        self.target = 0.0 if target is None else float(target)
        self.best_score = NEG_INF
        self.best_moves: tuple = ()

    def common(self, play: PlayoutParams):
        r = play.reward
        return (self.grid, self.path, self.st, self.is_h, self.n, self.dim,
                self.deltas, self.reduce_sym, float(play.bias),
                r.hh_gain, r.hp_penalty, r.pp_gain)

    @property
    def cancelled(self) -> bool:
        return self.acct[1] == 1

    def out_of_time(self) -> bool:
        """Python-side budget check for loops that do not enter a kernel."""
        if self.acct[1] == 1:
            return True
        if self.budget >= 0 and self.acct[0] >= self.budget:
            self.acct[1] = 1
            return True
        if self.deadline > 0 and time.perf_counter() >= self.deadline:
            self.acct[1] = 1
            return True
        return False

    def note(self, score: float, moves) -> None:
        if score > self.best_score:
            self.best_score = score
            self.best_moves = tuple(int(m) for m in moves)
        if score > self.facct[0]:
            self.facct[0] = score
        if self.use_target and score >= self.target:
            self.acct[1] = 1


# --------------------------------------------------------------------- NRPA


def _lastk_weights(state, moves, legal, policy, play, use_gain, k):
    ctx = tuple(moves[-k:]) if k else ()
    weights = [policy.get((ctx, m), 0.0) for m in legal]
    if use_gain:
        gains = state.guidance_gains(legal, play.reward)
        weights = [w + g * play.bias for w, g in zip(weights, gains)]
    top = max(weights)
    exps = [math.exp(w - top) for w in weights]
    return ctx, exps, sum(exps)


def _lastk_playout(run: _Run, play, use_gain, policy, k):
    """Reference-engine playout for the last-k move coding (no kernel twin)."""
    if run.out_of_time():
        return NEG_INF, None
    seed = derive_seed(int(run.droot), int(run.counters[0]))
    run.counters[0] += 1
    run.acct[0] += 1
    rng = RngStream(seed)
    state = initial_state(run.sequence, run.dim, run.reduce_sym == 1)
    moves = []
    while True:
        legal = state.legal_moves()
        if not legal:
            break
        _, exps, total = _lastk_weights(state, moves, legal, policy, play,
                                        use_gain, k)
        r = rng.random() * total
        acc = 0.0
        pick = len(legal) - 1
        for i, e in enumerate(exps):
            acc += e
            if r < acc:
                pick = i
                break
        state._advance(legal[pick])
        moves.append(legal[pick])
    score = state.score()
    run.note(score, moves)
    return score, moves


def _lastk_adapt(run: _Run, play, use_gain, policy, seq, alpha, k):
    adapted = dict(policy)
    state = initial_state(run.sequence, run.dim, run.reduce_sym == 1)
    moves = []
    for chosen in seq:
        legal = state.legal_moves()
        ctx, exps, total = _lastk_weights(state, moves, legal, policy, play,
                                          use_gain, k)
        adapted[(ctx, chosen)] = adapted.get((ctx, chosen), 0.0) + alpha
        for i, m in enumerate(legal):
            adapted[(ctx, m)] = adapted.get((ctx, m), 0.0) - alpha * (exps[i] / total)
        state._advance(chosen)
        moves.append(chosen)
    return adapted


def _nrpa_search(run: _Run, params: NrpaParams, play: PlayoutParams, use_gain: int):
    """Nested rollout policy adaptation; restarts with a fresh policy until
    the budget runs out."""
    n = run.n
    moves_out = np.empty(n, np.int8)
    common = run.common(play)
    lastk = params.code == "last-k"

    def descend(level: int, policy):
        if level == 0:
            if lastk:
                score, seq = _lastk_playout(run, play, use_gain, policy,
                                            params.code_k)
                return score, seq
            score, nsteps = kernels.k_policy_playout(
                *common, policy, use_gain,
                run.droot, run.counters, run.acct, run.facct,
                run.deadline, run.budget, run.target, run.use_target, moves_out)
            if score == NEG_INF:
                return NEG_INF, None
            seq = moves_out[:nsteps].copy()
            run.note(score, seq)
            return score, seq
        best = NEG_INF
        best_seq = None
        policy = dict(policy) if lastk else policy.copy()
        for _ in range(params.iterations):
            score, seq = descend(level - 1, policy)
            if seq is not None and score >= best:
                best = score
                best_seq = seq
            if run.cancelled:
                break
            if best_seq is not None:
                if lastk:
                    policy = _lastk_adapt(run, play, use_gain, policy,
                                          best_seq, params.alpha, params.code_k)
                else:
                    adapted = policy.copy()
                    kernels.k_policy_adapt(
                        *common, policy, adapted, params.alpha, use_gain,
                        best_seq, len(best_seq))
                    policy = adapted
        return best, best_seq

    unlimited = run.deadline < 0 and run.budget < 0 and run.use_target == 0
    fresh = (lambda: {}) if lastk else (lambda: np.zeros((n, 6), np.float64))
    while not run.out_of_time():
        descend(params.level, fresh())
        if unlimited:
            break  # one full pass; restarts only make sense under a budget


# --------------------------------------------------------------- greedy BFS


def _gbfs_search(run: _Run, params: GbfsParams, play: PlayoutParams):
    """Ranked-frontier search: pop the best-estimated node, evaluate all of
    its children with playouts, push the non-terminal ones."""
    n = run.n
    common = run.common(play)
    child_moves = np.empty(6, np.int8)
    child_est = np.empty(6, np.float64)
    child_terminal = np.empty(6, np.int64)
    best_buf = np.empty(n, np.int8)
    best_len = np.zeros(1, np.int64)
    prefix = np.empty(n, np.int8)
    frontier = [(0.0, 0, b"")]  # (-estimate, insertion index, move bytes)
    pushed = 1
    while frontier and not run.out_of_time():
        _, _, blob = heapq.heappop(frontier)
        nprefix = len(blob)
        if nprefix:
            prefix[:nprefix] = np.frombuffer(blob, np.int8)
        done = kernels.k_expand_eval(
            *common, prefix, nprefix, params.eval_playouts,
            run.eroot, run.counters, run.acct, run.facct,
            run.deadline, run.budget, run.target, run.use_target,
            child_moves, child_est, child_terminal, best_buf, best_len)
        if best_len[0] and run.facct[0] > run.best_score:
            run.note(float(run.facct[0]), best_buf[: best_len[0]])
        for i in range(done):
            if child_terminal[i] == 0:
                heapq.heappush(
                    frontier,
                    (-child_est[i], pushed, blob + bytes([int(child_moves[i])])))
                pushed += 1
        if len(frontier) > params.frontier_cap:
            # Worst-eviction: keep the better half, drop the rest.
            frontier = heapq.nsmallest(params.frontier_cap // 2, frontier)
            heapq.heapify(frontier)


# ---------------------------------------------------------------------- UCT


class _UctNode:
    __slots__ = ("legal", "visits", "totals", "children")

    def __init__(self, legal):
        self.legal = legal
        self.visits = np.zeros(len(legal), np.int64)
        self.totals = np.zeros(len(legal), np.float64)
        self.children = [None] * len(legal)


def _uct_search(run: _Run, params: UctParams, play: PlayoutParams,
                reduce_symmetry: bool):
    """UCB1 tree search: descend, expand one leaf, play out, back up the
    score.  Exploitation terms are normalized by the best score seen so the
    exploration constant keeps a consistent scale.

    The run's answer is the best playout found anywhere in the search.
    """
    n = run.n
    common = run.common(play)
    moves_out = np.empty(n, np.int8)
    prefix = np.empty(n, np.int8)
    root_state = initial_state(run.sequence, run.dim, reduce_symmetry)
    root = _UctNode(root_state.legal_moves())
    nodes = 1
    c = params.exploration
    while not run.out_of_time():
        state = root_state.copy()
        node = root
        trail = []
        depth = 0
        score = None
        while True:
            if not node.legal:
                # Terminal descent: the folding itself is the evaluation.
                run.acct[0] += 1
                score = state.score()
                run.note(score, prefix[:depth])
                break
            open_idx = -1
            for i, child in enumerate(node.children):
                if child is None:
                    open_idx = i
                    break
            if open_idx >= 0:
                move = node.legal[open_idx]
                trail.append((node, open_idx))
                prefix[depth] = move
                depth += 1
                sc, nsteps = kernels.k_rollout_from(
                    *common, prefix, depth, run.droot, run.counters, 0,
                    run.acct, run.facct, run.deadline, run.budget,
                    run.target, run.use_target, moves_out)
                if sc == NEG_INF:
                    break
                score = sc
                if sc > run.best_score:
                    full = list(prefix[:depth]) + list(moves_out[:nsteps])
                    run.note(sc, full)
                if nodes < params.max_nodes:
                    state._advance(move)
                    node.children[open_idx] = _UctNode(state.legal_moves())
                    nodes += 1
                break
            norm = run.best_score if run.best_score > 1.0 else 1.0
            log_total = math.log(float(node.visits.sum()))
            best_i = 0
            best_ucb = NEG_INF
            for i in range(len(node.legal)):
                v = node.visits[i]
                ucb = (node.totals[i] / v) / norm + c * math.sqrt(log_total / v)
                if ucb > best_ucb:
                    best_ucb = ucb
                    best_i = i
            trail.append((node, best_i))
            move = node.legal[best_i]
            prefix[depth] = move
            depth += 1
            state._advance(move)
            node = node.children[best_i]
        if score is not None:
            for parent, idx in trail:
                parent.visits[idx] += 1
                parent.totals[idx] += score


# ---------------------------------------------------------------- dispatch


def run_baseline(
    sequence: HpSequence,
    dim: int,
    algo: str,
    *,
    seed: int,
    play_params: PlayoutParams = PlayoutParams(),
    nrpa_params: NrpaParams = NrpaParams(),
    gbfs_params: GbfsParams = GbfsParams(),
    uct_params: UctParams = UctParams(),
    timeout_secs: Optional[float] = None,
    max_playouts: Optional[int] = None,
    target: Optional[float] = None,
    reduce_symmetry: bool = True,
) -> RunResult:
    """Run one baseline search under the shared budget/seed protocol."""
    if algo not in BASELINE_ALGOS:
        raise ValueError(f"unknown baseline algo {algo!r}")
    if algo == "uct" and timeout_secs is None and max_playouts is None and target is None:
        raise ValueError("uct is an anytime search; give a timeout, playout budget, or target")
    run = _Run(sequence, dim, seed, timeout_secs, max_playouts, target,
               reduce_symmetry)
    start = time.perf_counter()
    if algo == "nrpa":
        # Plain NRPA samples from the learned weights only.
        _nrpa_search(run, nrpa_params, PlayoutParams(0.0, play_params.reward), 0)
    elif algo == "gnrpa":
        _nrpa_search(run, nrpa_params, play_params, 1)
    elif algo == "gbfs":
        _gbfs_search(run, gbfs_params, play_params)
    else:
        _uct_search(run, uct_params, play_params, reduce_symmetry)
    elapsed = time.perf_counter() - start
    if run.best_score != NEG_INF:
        check = replay_moves(sequence, dim, run.best_moves, reduce_symmetry)
        if check.score() != run.best_score:
            raise AssertionError(
                f"baseline result does not replay: moves give {check.score()}, "
                f"search reported {run.best_score}"
            )
    return RunResult(
        score=run.best_score,
        moves=run.best_moves,
        playouts=int(run.acct[0]),
        elapsed=elapsed,
        cancelled=bool(run.acct[1]),
        seed=seed,
        engine="fast",
    )

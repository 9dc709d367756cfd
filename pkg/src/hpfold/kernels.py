"""Compiled search engines (numba) mirroring the reference implementations.

The reference modules (`playout`, `nmcs`, `lnmcs`) define behavior; these
kernels reproduce it bit for bit at roughly 20x speed.  Equivalence holds
because both sides share the same splitmix64 stream protocol, visit moves
in the same order, and perform float operations in the same order (numba
compiles `math.exp` to the identical libm call).

State layout: one flat uint8 occupancy grid (0 empty, 1 P, 2 H) with the
first residue at the center, residue flat positions in `path`, and the
scalar state in `st` = [placed, contacts, has_y, has_z].  Coordinates stay
within +-(n-1) of the center, so flat-index steps never wrap an edge.
Recursion shares the one grid and undoes every write it makes.

Wall-clock checks escape to the interpreter (objmode), which costs well
under a microsecond; budget and cancellation flags live in the `acct`
array = [playouts_done, cancelled].
"""

from __future__ import annotations

import math
import time

import numpy as np
from numba import njit, objmode

from .lattice import ChainState, HpSequence, ScoredSequence
from .lnmcs import MEDIAN_WINDOW, THRESHOLD_POLICIES

U64 = np.uint64
GOLDEN_U = U64(0x9E3779B97F4A7C15)
INV53 = 1.0 / 9007199254740992.0
NEG_INF = float("-inf")


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> U64(30))) * U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> U64(27))) * U64(0x94D049BB133111EB)
    return z ^ (z >> U64(31))


@njit(cache=True)
def _derive(root, index):
    return _mix64(root + (U64(index) + U64(1)) * GOLDEN_U)


@njit(cache=True)
def _check_limits(acct, deadline, max_playouts):
    """Refresh and return the cancelled flag (acct[1])."""
    if acct[1] == 1:
        return True
    if max_playouts >= 0 and acct[0] >= max_playouts:
        acct[1] = 1
        return True
    if deadline > 0.0:
        with objmode(now="float64"):
            now = time.perf_counter()
        if now >= deadline:
            acct[1] = 1
            return True
    return False


@njit(cache=True)
def _note_best(facct, acct, score, target, use_target):
    if score > facct[0]:
        facct[0] = score
    if use_target == 1 and score >= target:
        acct[1] = 1


@njit(cache=True)
def _legal_moves(grid, path, st, dim, deltas, reduce_sym, legal_buf):
    if st[0] == 1 and reduce_sym == 1:
        legal_buf[0] = 0
        return 1
    head = path[st[0] - 1]
    count = 0
    for m in range(2 * dim):
        if reduce_sym == 1:
            if st[2] == 0:
                if m == 3 or m >= 4:
                    continue
            elif dim == 3 and st[3] == 0 and m == 5:
                continue
        if grid[head + deltas[m]] == 0:
            legal_buf[count] = m
            count += 1
    return count


@njit(cache=True)
def _gain(grid, path, st, is_h, dim, deltas, move, hh, hp, pp):
    head = path[st[0] - 1]
    target = head + deltas[move]
    incoming_h = is_h[st[0]] == 1
    gain = 0.0
    for d in range(2 * dim):
        nbr = target + deltas[d]
        if nbr == head:
            continue
        v = grid[nbr]
        if v == 0:
            continue
        if incoming_h and v == 2:
            gain += hh
        elif incoming_h != (v == 2):
            gain += hp
        else:
            gain += pp
    return gain


@njit(cache=True)
def _advance(grid, path, st, is_h, dim, deltas, move):
    head = path[st[0] - 1]
    target = head + deltas[move]
    if is_h[st[0]] == 1:
        for d in range(2 * dim):
            nbr = target + deltas[d]
            if nbr == head:
                continue
            if grid[nbr] == 2:
                st[1] += 1
    if is_h[st[0]] == 1:
        grid[target] = 2
    else:
        grid[target] = 1
    path[st[0]] = target
    st[0] += 1
    if move == 2 or move == 3:
        st[2] = 1
    elif move >= 4:
        st[3] = 1


@njit(cache=True)
def _playout(grid, path, st, is_h, n, dim, deltas, reduce_sym,
             bias, hh, hp, pp, seed, moves_out):
    """One biased playout to termination; restores the state before returning."""
    base = st[0]
    c0 = st[1]
    y0 = st[2]
    z0 = st[3]
    legal_buf = np.empty(6, np.int8)
    scaled = np.empty(6, np.float64)
    rng_state = seed
    nsteps = 0
    while True:
        if st[0] == n:
            break
        nlegal = _legal_moves(grid, path, st, dim, deltas, reduce_sym, legal_buf)
        if nlegal == 0:
            break
        top = NEG_INF
        for i in range(nlegal):
            g = _gain(grid, path, st, is_h, dim, deltas, legal_buf[i], hh, hp, pp)
            s = g * bias
            scaled[i] = s
            if s > top:
                top = s
        total = 0.0
        for i in range(nlegal):
            w = math.exp(scaled[i] - top)
            scaled[i] = w
            total += w
        rng_state = rng_state + GOLDEN_U
        u = (_mix64(rng_state) >> U64(11)) * INV53
        r = u * total
        acc = 0.0
        pick = nlegal - 1
        for i in range(nlegal):
            acc += scaled[i]
            if r < acc:
                pick = i
                break
        move = legal_buf[pick]
        _advance(grid, path, st, is_h, dim, deltas, move)
        moves_out[nsteps] = move
        nsteps += 1
    score = float(st[1])
    while st[0] > base:
        st[0] -= 1
        grid[path[st[0]]] = 0
    st[1] = c0
    st[2] = y0
    st[3] = z0
    return score, nsteps


@njit(cache=True)
def k_playout(grid, path, st, is_h, n, dim, deltas, reduce_sym,
              bias, hh, hp, pp, droot, counters, acct, facct,
              deadline, max_playouts, target, use_target, moves_out):
    """Budget-checked decision playout from the current state."""
    if _check_limits(acct, deadline, max_playouts):
        return NEG_INF, 0
    seed = _derive(droot, counters[0])
    counters[0] += 1
    acct[0] += 1
    score, nsteps = _playout(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                             bias, hh, hp, pp, seed, moves_out)
    _note_best(facct, acct, score, target, use_target)
    return score, nsteps


@njit(cache=True)
def k_nmcs(grid, path, st, is_h, n, dim, deltas, reduce_sym,
           bias, hh, hp, pp, level, droot, counters, acct, facct,
           deadline, max_playouts, target, use_target):
    legal_buf = np.empty(6, np.int8)
    nlegal = _legal_moves(grid, path, st, dim, deltas, reduce_sym, legal_buf)
    if st[0] == n or nlegal == 0:
        sc = float(st[1])
        _note_best(facct, acct, sc, target, use_target)
        return sc, np.empty(0, np.int8)
    if level == 0:
        if _check_limits(acct, deadline, max_playouts):
            return NEG_INF, np.empty(0, np.int8)
        seed = _derive(droot, counters[0])
        counters[0] += 1
        acct[0] += 1
        buf = np.empty(n, np.int8)
        score, nsteps = _playout(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                                 bias, hh, hp, pp, seed, buf)
        _note_best(facct, acct, score, target, use_target)
        return score, buf[:nsteps].copy()

    base = st[0]
    c0 = st[1]
    y0 = st[2]
    z0 = st[3]
    best_score = NEG_INF
    best = np.empty(0, np.int8)
    best_pos = 0
    collected = np.empty(n, np.int8)
    ncollected = 0
    while True:
        if st[0] == n:
            break
        nlegal = _legal_moves(grid, path, st, dim, deltas, reduce_sym, legal_buf)
        if nlegal == 0:
            break
        for i in range(nlegal):
            m = legal_buf[i]
            sc0 = st[1]
            sy0 = st[2]
            sz0 = st[3]
            _advance(grid, path, st, is_h, dim, deltas, m)
            score, seq = k_nmcs(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                                bias, hh, hp, pp, level - 1, droot, counters,
                                acct, facct, deadline, max_playouts, target,
                                use_target)
            st[0] -= 1
            grid[path[st[0]]] = 0
            st[1] = sc0
            st[2] = sy0
            st[3] = sz0
            if score != NEG_INF and score >= best_score:
                best_score = score
                nb = np.empty(1 + seq.size, np.int8)
                nb[0] = m
                nb[1:] = seq
                best = nb
                best_pos = 0
            if _check_limits(acct, deadline, max_playouts):
                break
        if best_pos >= best.size:
            break
        mv = best[best_pos]
        best_pos += 1
        _advance(grid, path, st, is_h, dim, deltas, mv)
        collected[ncollected] = mv
        ncollected += 1
        if acct[1] == 1:
            break
    while st[0] > base:
        st[0] -= 1
        grid[path[st[0]]] = 0
    st[1] = c0
    st[2] = y0
    st[3] = z0
    if best_score == NEG_INF:
        return NEG_INF, np.empty(0, np.int8)
    rem = best.size - best_pos
    out = np.empty(ncollected + rem, np.int8)
    out[:ncollected] = collected[:ncollected]
    out[ncollected:] = best[best_pos:]
    return best_score, out


@njit(cache=True)
def k_rollout_from(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                   bias, hh, hp, pp, prefix, nprefix, root, counters, which,
                   acct, facct, deadline, max_playouts, target, use_target,
                   moves_out):
    """Replay a move prefix from the root state, run one budgeted playout,
    then restore the root state.  Returns the playout suffix."""
    if _check_limits(acct, deadline, max_playouts):
        return NEG_INF, 0
    base = st[0]
    c0 = st[1]
    y0 = st[2]
    z0 = st[3]
    for i in range(nprefix):
        _advance(grid, path, st, is_h, dim, deltas, prefix[i])
    seed = _derive(root, counters[which])
    counters[which] += 1
    acct[0] += 1
    score, nsteps = _playout(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                             bias, hh, hp, pp, seed, moves_out)
    _note_best(facct, acct, score, target, use_target)
    while st[0] > base:
        st[0] -= 1
        grid[path[st[0]]] = 0
    st[1] = c0
    st[2] = y0
    st[3] = z0
    return score, nsteps


@njit(cache=True)
def k_expand_eval(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                  bias, hh, hp, pp, prefix, nprefix, eval_playouts,
                  eroot, counters, acct, facct, deadline, max_playouts,
                  target, use_target,
                  child_moves, child_est, child_terminal, best_buf, best_len):
    """Evaluate every child of the state `prefix` moves below the root.

    Terminal children score themselves; the rest get a mean of
    `eval_playouts` playouts.  Fills the child_* arrays and returns the
    number of fully evaluated children (cancellation stops early).  The
    best playout or terminal folding seen is kept in best_buf/best_len.
    """
    base = st[0]
    c0 = st[1]
    y0 = st[2]
    z0 = st[3]
    for i in range(nprefix):
        _advance(grid, path, st, is_h, dim, deltas, prefix[i])
    legal_buf = np.empty(6, np.int8)
    pbuf = np.empty(n, np.int8)
    nlegal = _legal_moves(grid, path, st, dim, deltas, reduce_sym, legal_buf)
    done = 0
    if st[0] < n:
        for i in range(nlegal):
            m = legal_buf[i]
            sc0 = st[1]
            sy0 = st[2]
            sz0 = st[3]
            _advance(grid, path, st, is_h, dim, deltas, m)
            cn = _legal_moves(grid, path, st, dim, deltas, reduce_sym, pbuf)
            cancelled = False
            if st[0] == n or cn == 0:
                estimate = float(st[1])
                child_terminal[i] = 1
                if estimate > facct[0]:
                    for j in range(nprefix):
                        best_buf[j] = prefix[j]
                    best_buf[nprefix] = m
                    best_len[0] = nprefix + 1
                _note_best(facct, acct, estimate, target, use_target)
            else:
                child_terminal[i] = 0
                estimate = 0.0
                for _ in range(eval_playouts):
                    if _check_limits(acct, deadline, max_playouts):
                        cancelled = True
                        break
                    seed = _derive(eroot, counters[1])
                    counters[1] += 1
                    acct[0] += 1
                    score, nsteps = _playout(grid, path, st, is_h, n, dim, deltas,
                                             reduce_sym, bias, hh, hp, pp, seed, pbuf)
                    if score > facct[0]:
                        for j in range(nprefix):
                            best_buf[j] = prefix[j]
                        best_buf[nprefix] = m
                        for j in range(nsteps):
                            best_buf[nprefix + 1 + j] = pbuf[j]
                        best_len[0] = nprefix + 1 + nsteps
                    _note_best(facct, acct, score, target, use_target)
                    estimate += score / eval_playouts
            st[0] -= 1
            grid[path[st[0]]] = 0
            st[1] = sc0
            st[2] = sy0
            st[3] = sz0
            if cancelled:
                break
            child_moves[i] = m
            child_est[i] = estimate
            done += 1
            if acct[1] == 1:
                break
    while st[0] > base:
        st[0] -= 1
        grid[path[st[0]]] = 0
    st[1] = c0
    st[2] = y0
    st[3] = z0
    return done


@njit(cache=True)
def k_policy_playout(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                     bias, hh, hp, pp, policy, use_gain,
                     droot, counters, acct, facct, deadline, max_playouts,
                     target, use_target, moves_out):
    """One budgeted playout sampling moves from a learned (ply, move) policy.

    Weight of move m at ply k is policy[k, m], plus gain * bias when
    use_gain is set.  Restores the state before returning.
    """
    if _check_limits(acct, deadline, max_playouts):
        return NEG_INF, 0
    seed = _derive(droot, counters[0])
    counters[0] += 1
    acct[0] += 1
    base = st[0]
    c0 = st[1]
    y0 = st[2]
    z0 = st[3]
    legal_buf = np.empty(6, np.int8)
    scaled = np.empty(6, np.float64)
    rng_state = seed
    nsteps = 0
    while True:
        if st[0] == n:
            break
        nlegal = _legal_moves(grid, path, st, dim, deltas, reduce_sym, legal_buf)
        if nlegal == 0:
            break
        ply = st[0] - 1
        top = NEG_INF
        for i in range(nlegal):
            m = legal_buf[i]
            s = policy[ply, m]
            if use_gain == 1:
                s += _gain(grid, path, st, is_h, dim, deltas, m, hh, hp, pp) * bias
            scaled[i] = s
            if s > top:
                top = s
        total = 0.0
        for i in range(nlegal):
            w = math.exp(scaled[i] - top)
            scaled[i] = w
            total += w
        rng_state = rng_state + GOLDEN_U
        u = (_mix64(rng_state) >> U64(11)) * INV53
        r = u * total
        acc = 0.0
        pick = nlegal - 1
        for i in range(nlegal):
            acc += scaled[i]
            if r < acc:
                pick = i
                break
        move = legal_buf[pick]
        _advance(grid, path, st, is_h, dim, deltas, move)
        moves_out[nsteps] = move
        nsteps += 1
    score = float(st[1])
    while st[0] > base:
        st[0] -= 1
        grid[path[st[0]]] = 0
    st[1] = c0
    st[2] = y0
    st[3] = z0
    _note_best(facct, acct, score, target, use_target)
    return score, nsteps


@njit(cache=True)
def k_policy_adapt(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                   bias, hh, hp, pp, policy, polp, alpha, use_gain, seq, nseq):
    """Shift `polp` toward the move sequence `seq` by alpha.

    Probabilities are computed from `policy` (the pre-adaptation weights):
    the chosen move gains alpha, every legal move loses alpha times its
    selection probability.  Restores the state before returning.
    """
    base = st[0]
    c0 = st[1]
    y0 = st[2]
    z0 = st[3]
    legal_buf = np.empty(6, np.int8)
    scaled = np.empty(6, np.float64)
    for k in range(nseq):
        ply = st[0] - 1
        nlegal = _legal_moves(grid, path, st, dim, deltas, reduce_sym, legal_buf)
        top = NEG_INF
        for i in range(nlegal):
            m = legal_buf[i]
            s = policy[ply, m]
            if use_gain == 1:
                s += _gain(grid, path, st, is_h, dim, deltas, m, hh, hp, pp) * bias
            scaled[i] = s
            if s > top:
                top = s
        z = 0.0
        for i in range(nlegal):
            w = math.exp(scaled[i] - top)
            scaled[i] = w
            z += w
        chosen = seq[k]
        polp[ply, chosen] += alpha
        for i in range(nlegal):
            polp[ply, legal_buf[i]] -= alpha * (scaled[i] / z)
        _advance(grid, path, st, is_h, dim, deltas, chosen)
    while st[0] > base:
        st[0] -= 1
        grid[path[st[0]]] = 0
    st[1] = c0
    st[2] = y0
    st[3] = z0


@njit(cache=True)
def _table_update(policy, depth, estimate, tvals, tsums, tcounts, twin, window):
    if policy == 0:
        if estimate > tvals[depth]:
            tvals[depth] = estimate
    elif policy == 1:
        tsums[depth] += estimate
        tcounts[depth] += 1
        tvals[depth] = tsums[depth] / tcounts[depth]
    else:
        if tcounts[depth] < window:
            twin[depth, tcounts[depth]] = estimate
        else:
            twin[depth, tcounts[depth] % window] = estimate
        tcounts[depth] += 1
        filled = tcounts[depth]
        if filled > window:
            filled = window
        tvals[depth] = np.median(twin[depth, :filled])


@njit(cache=True)
def k_lnmcs(grid, path, st, is_h, n, dim, deltas, reduce_sym,
            bias, hh, hp, pp, level, droot, eroot, counters, acct, facct,
            deadline, max_playouts, target, use_target,
            eval_playouts, ratio, policy, faithful,
            tvals, tsums, tcounts, twin, window):
    legal_buf = np.empty(6, np.int8)
    nlegal = _legal_moves(grid, path, st, dim, deltas, reduce_sym, legal_buf)
    if st[0] == n or nlegal == 0:
        sc = float(st[1])
        _note_best(facct, acct, sc, target, use_target)
        return sc, np.empty(0, np.int8)
    if level == 0:
        if _check_limits(acct, deadline, max_playouts):
            return NEG_INF, np.empty(0, np.int8)
        seed = _derive(droot, counters[0])
        counters[0] += 1
        acct[0] += 1
        buf = np.empty(n, np.int8)
        score, nsteps = _playout(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                                 bias, hh, hp, pp, seed, buf)
        _note_best(facct, acct, score, target, use_target)
        return score, buf[:nsteps].copy()

    base = st[0]
    c0 = st[1]
    y0 = st[2]
    z0 = st[3]
    best_score = NEG_INF
    best = np.empty(0, np.int8)
    best_pos = 0
    collected = np.empty(n, np.int8)
    ncollected = 0
    ebuf = np.empty(n, np.int8)
    keep = np.empty(n, np.int8)
    while True:
        if st[0] == n:
            break
        nlegal = _legal_moves(grid, path, st, dim, deltas, reduce_sym, legal_buf)
        if nlegal == 0:
            break
        depth = st[0] - 1
        for i in range(nlegal):
            m = legal_buf[i]
            sc0 = st[1]
            sy0 = st[2]
            sz0 = st[3]
            _advance(grid, path, st, is_h, dim, deltas, m)
            child_nlegal = _legal_moves(grid, path, st, dim, deltas, reduce_sym, ebuf)
            child_terminal = st[0] == n or child_nlegal == 0
            broke = False
            if child_terminal:
                estimate = float(st[1])
            else:
                estimate = 0.0
                keep_score = NEG_INF
                keep_n = 0
                for _ in range(eval_playouts):
                    if _check_limits(acct, deadline, max_playouts):
                        break
                    seed = _derive(eroot, counters[1])
                    counters[1] += 1
                    acct[0] += 1
                    score, nsteps = _playout(grid, path, st, is_h, n, dim, deltas,
                                             reduce_sym, bias, hh, hp, pp, seed, ebuf)
                    _note_best(facct, acct, score, target, use_target)
                    estimate += score / eval_playouts
                    if keep_score == NEG_INF or score >= keep_score:
                        keep_score = score
                        keep_n = nsteps
                        for j in range(nsteps):
                            keep[j] = ebuf[j]
                if keep_score != NEG_INF and faithful == 0:
                    if keep_score >= best_score:
                        best_score = keep_score
                        nb = np.empty(1 + keep_n, np.int8)
                        nb[0] = m
                        nb[1:] = keep[:keep_n]
                        best = nb
                        best_pos = 0
                if acct[1] == 1:
                    broke = True
            if broke:
                st[0] -= 1
                grid[path[st[0]]] = 0
                st[1] = sc0
                st[2] = sy0
                st[3] = sz0
                break
            _table_update(policy, depth, estimate, tvals, tsums, tcounts, twin, window)
            sublevel = level - 1
            if estimate < ratio * tvals[depth]:
                sublevel = 0
            score, seq = k_lnmcs(grid, path, st, is_h, n, dim, deltas, reduce_sym,
                                 bias, hh, hp, pp, sublevel, droot, eroot, counters,
                                 acct, facct, deadline, max_playouts, target,
                                 use_target, eval_playouts, ratio, policy, faithful,
                                 tvals, tsums, tcounts, twin, window)
            st[0] -= 1
            grid[path[st[0]]] = 0
            st[1] = sc0
            st[2] = sy0
            st[3] = sz0
            if score != NEG_INF and score >= best_score:
                best_score = score
                nb = np.empty(1 + seq.size, np.int8)
                nb[0] = m
                nb[1:] = seq
                best = nb
                best_pos = 0
            if _check_limits(acct, deadline, max_playouts):
                break
        if best_pos >= best.size:
            break
        mv = best[best_pos]
        best_pos += 1
        _advance(grid, path, st, is_h, dim, deltas, mv)
        collected[ncollected] = mv
        ncollected += 1
        if acct[1] == 1:
            break
    while st[0] > base:
        st[0] -= 1
        grid[path[st[0]]] = 0
    st[1] = c0
    st[2] = y0
    st[3] = z0
    if best_score == NEG_INF:
        return NEG_INF, np.empty(0, np.int8)
    rem = best.size - best_pos
    out = np.empty(ncollected + rem, np.int8)
    out[:ncollected] = collected[:ncollected]
    out[ncollected:] = best[best_pos:]
    return best_score, out

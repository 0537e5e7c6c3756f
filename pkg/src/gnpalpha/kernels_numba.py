"""Numba kernels: the hot inner loops, mirroring kernels_numpy exactly.

Every kernel here explores the same search tree / consumes the same PRNG
stream as its fallback twin, so backend choice never changes a result, only
the runtime.  Masks are uint64; multi-word bitsets are little-endian rows.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

U0 = np.uint64(0)
U1 = np.uint64(1)
_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TWO53 = float(1 << 53)
_SKIP_THRESHOLD = 0.1

BACKEND = "numba"


@njit(cache=True, inline="always")
def _pop64(x):
    x = x - ((x >> U1) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@njit(cache=True, inline="always")
def _bit_index(b):
    # b has exactly one set bit
    return _pop64(b - U1)


@njit(cache=True, inline="always")
def _draw(seed, t):
    z = seed + np.uint64(t) * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


# --------------------------------------------------------------------------
# exact maximum independent set: recursive branch and reduce, mirroring
# kernels_numpy._solve exactly (same reductions, same component handling,
# same branching and tie-breaks), so both backends explore the same tree
# and return the same witness.
# --------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _and_pop(row, pset, nwords):
    s = np.int64(0)
    for w in range(nwords):
        s += _pop64(row[w] & pset[w])
    return s


@njit(cache=True, inline="always")
def _in_set(pset, v):
    return (pset[v >> 6] >> np.uint64(v & 63)) & U1 == U1


@njit(cache=True)
def _two_neighbors(row, pset, nwords):
    # first two set bits of row & pset (caller knows there are <= 2)
    a = np.int64(-1)
    b = np.int64(-1)
    for w in range(nwords):
        m = row[w] & pset[w]
        while m != U0:
            lb = m & (~m + U1)
            v = np.int64(w << 6) + _bit_index(lb)
            if a < 0:
                a = v
            else:
                b = v
                return a, b
            m ^= lb
    return a, b


@njit(cache=True)
def _greedy_mis_w(adj, pset, nwords):
    n = adj.shape[0]
    rest = pset.copy()
    mask = np.zeros(nwords, np.uint64)
    size = np.int64(0)
    while True:
        bestd = np.int64(1) << 30
        bestv = np.int64(-1)
        for v in range(n):
            if not _in_set(rest, v):
                continue
            d = _and_pop(adj[v], rest, nwords)
            if d < bestd:
                bestd = d
                bestv = v
        if bestv < 0:
            break
        mask[bestv >> 6] |= U1 << np.uint64(bestv & 63)
        size += 1
        for w in range(nwords):
            rest[w] &= ~adj[bestv, w]
        rest[bestv >> 6] &= ~(U1 << np.uint64(bestv & 63))
    return size, mask


@njit(cache=True)
def _cover_bound_w(adj, pset, nwords, cap, cliques):
    n = adj.shape[0]
    ncl = np.int64(0)
    for v in range(n):
        if not _in_set(pset, v):
            continue
        placed = False
        for c in range(ncl):
            fits = True
            for w in range(nwords):
                if cliques[c, w] & ~adj[v, w] != U0:
                    fits = False
                    break
            if fits:
                cliques[c, v >> 6] |= U1 << np.uint64(v & 63)
                placed = True
                break
        if not placed:
            for w in range(nwords):
                cliques[ncl, w] = U0
            cliques[ncl, v >> 6] |= U1 << np.uint64(v & 63)
            ncl += 1
            if ncl > cap:
                return cap + 1
    return ncl


_SOLVE_SIG = ("Tuple((int64, uint64[:]))(uint64[:,:], uint64[:], int64, int64, "
              "int64[:], int64, int64, int64[:], uint64[:,:], int64[:], "
              "int64[:], int64[:], int64[:], int64[:], uint64[:,:])")


# no disk cache: numba cannot relink the recursive self-call from cache
@njit(_SOLVE_SIG, cache=False)
def _solve_w(adj, pset, lb, acc, st, budget, target,
             ulog_v, ulog_row, ulen, fv, fu, fw, flen, cliques):
    n = adj.shape[0]
    nwords = adj.shape[1]
    st[0] += 1
    empty = np.zeros(nwords, np.uint64)
    if st[0] > budget:
        st[1] = 2
        return np.int64(0), empty
    ulen0 = ulen[0]
    flen0 = flen[0]
    chosen = np.zeros(nwords, np.uint64)
    size = np.int64(0)

    # reduction fixpoint
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if not _in_set(pset, v):
                continue
            d = _and_pop(adj[v], pset, nwords)
            if d > 3:
                continue
            vb = U1 << np.uint64(v & 63)
            if d == 0:
                chosen[v >> 6] |= vb
                pset[v >> 6] &= ~vb
                size += 1
                changed = True
            elif d == 1:
                a, b = _two_neighbors(adj[v], pset, nwords)
                chosen[v >> 6] |= vb
                pset[v >> 6] &= ~vb
                pset[a >> 6] &= ~(U1 << np.uint64(a & 63))
                size += 1
                changed = True
            elif d == 2:
                a, b = _two_neighbors(adj[v], pset, nwords)
                if _in_set(adj[a], b):  # triangle: v is simplicial
                    chosen[v >> 6] |= vb
                    pset[v >> 6] &= ~vb
                    pset[a >> 6] &= ~(U1 << np.uint64(a & 63))
                    pset[b >> 6] &= ~(U1 << np.uint64(b & 63))
                    size += 1
                else:  # fold {v, a, b} into slot v
                    ulog_v[ulen[0]] = v
                    for w in range(nwords):
                        ulog_row[ulen[0], w] = adj[v, w]
                    ulen[0] += 1
                    for w in range(nwords):
                        adj[v, w] = (adj[a, w] | adj[b, w]) & pset[w]
                    adj[v, a >> 6] &= ~(U1 << np.uint64(a & 63))
                    adj[v, b >> 6] &= ~(U1 << np.uint64(b & 63))
                    adj[v, v >> 6] &= ~vb
                    for ww in range(nwords):
                        m = adj[v, ww]
                        while m != U0:
                            lb_ = m & (~m + U1)
                            x = np.int64(ww << 6) + _bit_index(lb_)
                            ulog_v[ulen[0]] = x
                            for w in range(nwords):
                                ulog_row[ulen[0], w] = adj[x, w]
                            ulen[0] += 1
                            adj[x, v >> 6] |= vb
                            m ^= lb_
                    fv[flen[0]] = v
                    fu[flen[0]] = a
                    fw[flen[0]] = b
                    flen[0] += 1
                    pset[a >> 6] &= ~(U1 << np.uint64(a & 63))
                    pset[b >> 6] &= ~(U1 << np.uint64(b & 63))
                    size += 1
                changed = True
            else:
                # domination: drop any neighbor y with N_P[v] within N_P[y]
                removed = False
                for ww in range(nwords):
                    m = adj[v, ww] & pset[ww]
                    while m != U0:
                        lb_ = m & (~m + U1)
                        y = np.int64(ww << 6) + _bit_index(lb_)
                        outside = False
                        for w in range(nwords):
                            t = adj[v, w] & pset[w] & ~adj[y, w]
                            if w == ww:
                                t &= ~lb_
                            if t != U0:
                                outside = True
                                break
                        if not outside:
                            pset[y >> 6] &= ~(U1 << np.uint64(y & 63))
                            changed = True
                            removed = True
                            break
                        m ^= lb_
                    if removed:
                        break

    psize = np.int64(0)
    for w in range(nwords):
        psize += _pop64(pset[w])

    if psize == 0 or size + psize <= lb:
        val = size if psize == 0 else np.int64(0)
        wit = chosen if psize == 0 else empty
        out = wit.copy()
        for fi in range(flen[0] - 1, flen0 - 1, -1):
            x = fv[fi]
            if (out[x >> 6] >> np.uint64(x & 63)) & U1 == U1:
                out[x >> 6] &= ~(U1 << np.uint64(x & 63))
                out[fu[fi] >> 6] |= U1 << np.uint64(fu[fi] & 63)
                out[fw[fi] >> 6] |= U1 << np.uint64(fw[fi] & 63)
            else:
                out[x >> 6] |= U1 << np.uint64(x & 63)
        while ulen[0] > ulen0:
            ulen[0] -= 1
            x = ulog_v[ulen[0]]
            for w in range(nwords):
                adj[x, w] = ulog_row[ulen[0], w]
        flen[0] = flen0
        return val, out

    # split into connected components
    ccap = n // 4 + 2
    comps = np.zeros((ccap, nwords), np.uint64)
    ncomps = np.int64(0)
    unseen = pset.copy()
    frontier = np.zeros(nwords, np.uint64)
    while True:
        v0 = np.int64(-1)
        for w in range(nwords):
            if unseen[w] != U0:
                v0 = np.int64(w << 6) + _bit_index(unseen[w] & (~unseen[w] + U1))
                break
        if v0 < 0:
            break
        for w in range(nwords):
            comps[ncomps, w] = U0
            frontier[w] = U0
        comps[ncomps, v0 >> 6] = U1 << np.uint64(v0 & 63)
        frontier[v0 >> 6] = U1 << np.uint64(v0 & 63)
        while True:
            grew = False
            for ww in range(nwords):
                m = frontier[ww]
                frontier[ww] = U0
                while m != U0:
                    lb_ = m & (~m + U1)
                    x = np.int64(ww << 6) + _bit_index(lb_)
                    for w in range(nwords):
                        add = adj[x, w] & unseen[w] & ~comps[ncomps, w]
                        if add != U0:
                            comps[ncomps, w] |= add
                            frontier[w] |= add
                            grew = True
                    m ^= lb_
            if not grew:
                break
        for w in range(nwords):
            unseen[w] &= ~comps[ncomps, w]
        ncomps += 1

    val = np.int64(0)
    wit = empty
    if ncomps == 1:
        bound = _cover_bound_w(adj, pset, nwords, lb - size, cliques)
        if size + bound <= lb:
            val = np.int64(0)
            wit = empty
        else:
            maxdeg = np.int64(0)
            maxv = np.int64(-1)
            for v in range(n):
                if not _in_set(pset, v):
                    continue
                d = _and_pop(adj[v], pset, nwords)
                if d > maxdeg:
                    maxdeg = d
                    maxv = v
            p_in = np.empty(nwords, np.uint64)
            p_out = np.empty(nwords, np.uint64)
            for w in range(nwords):
                p_in[w] = pset[w] & ~adj[maxv, w]
                p_out[w] = pset[w]
            p_in[maxv >> 6] &= ~(U1 << np.uint64(maxv & 63))
            p_out[maxv >> 6] &= ~(U1 << np.uint64(maxv & 63))
            a, wa = _solve_w(adj, p_in, lb - size - 1, acc + size + 1, st,
                             budget, target, ulog_v, ulog_row, ulen,
                             fv, fu, fw, flen, cliques)
            cand = a + 1
            candw = wa
            candw[maxv >> 6] |= U1 << np.uint64(maxv & 63)
            if st[1] == 2:
                val = np.int64(0)
                wit = empty
            elif st[1] == 1:
                val = size + cand
                wit = chosen.copy()
                for w in range(nwords):
                    wit[w] |= candw[w]
            elif (target >= 0 and a > lb - size - 1
                    and acc + size + cand >= target):
                st[1] = 1
                val = size + cand
                wit = chosen.copy()
                for w in range(nwords):
                    wit[w] |= candw[w]
            else:
                lb2 = lb - size if lb - size > cand else cand
                bval, wb_ = _solve_w(adj, p_out, lb2, acc + size, st,
                                     budget, target, ulog_v, ulog_row, ulen,
                                     fv, fu, fw, flen, cliques)
                if st[1] == 2:
                    val = np.int64(0)
                    wit = empty
                else:
                    wit = chosen.copy()
                    if bval > cand:
                        val = size + bval
                        for w in range(nwords):
                            wit[w] |= wb_[w]
                    else:
                        val = size + cand
                        for w in range(nwords):
                            wit[w] |= candw[w]
    else:
        covers = np.zeros(ncomps, np.int64)
        remaining = np.int64(0)
        for i in range(ncomps):
            csize = np.int64(0)
            for w in range(nwords):
                csize += _pop64(comps[i, w])
            covers[i] = _cover_bound_w(adj, comps[i], nwords, csize, cliques)
            remaining += covers[i]
        if size + remaining <= lb:
            val = np.int64(0)
            wit = empty
        else:
            total = size
            wit = chosen.copy()
            failed = False
            for i in range(ncomps):
                remaining -= covers[i]
                sub = comps[i].copy()
                vi, wi = _solve_w(adj, sub, lb - total - remaining,
                                  acc + total, st, budget, target,
                                  ulog_v, ulog_row, ulen, fv, fu, fw, flen, cliques)
                if st[1] == 2:
                    failed = True
                    break
                total += vi
                for w in range(nwords):
                    wit[w] |= wi[w]
                if st[1] == 1:
                    break
            if failed:
                val = np.int64(0)
                wit = empty
            else:
                val = total

    out = wit.copy()
    for fi in range(flen[0] - 1, flen0 - 1, -1):
        x = fv[fi]
        if (out[x >> 6] >> np.uint64(x & 63)) & U1 == U1:
            out[x >> 6] &= ~(U1 << np.uint64(x & 63))
            out[fu[fi] >> 6] |= U1 << np.uint64(fu[fi] & 63)
            out[fw[fi] >> 6] |= U1 << np.uint64(fw[fi] & 63)
        else:
            out[x >> 6] |= U1 << np.uint64(x & 63)
    while ulen[0] > ulen0:
        ulen[0] -= 1
        x = ulog_v[ulen[0]]
        for w in range(nwords):
            adj[x, w] = ulog_row[ulen[0], w]
    flen[0] = flen0
    return val, out


@njit(cache=False)
def mis_bnb(adj_in, node_budget, seed_words, seed_size, ub):
    n = adj_in.shape[0]
    nwords = adj_in.shape[1]
    if ub >= 0 and seed_size >= ub:
        return np.int64(seed_size), seed_words.copy(), np.int64(0), True
    adj = adj_in.copy()  # folds mutate rows; the undo log rewinds them
    full = np.zeros(nwords, np.uint64)
    for v in range(n):
        full[v >> 6] |= U1 << np.uint64(v & 63)
    gsize, gmask = _greedy_mis_w(adj, full, nwords)
    if ub >= 0 and gsize >= ub:
        return gsize, gmask, np.int64(0), True
    lb0 = gsize if gsize > seed_size else np.int64(seed_size)
    lb0 -= 1
    ucap = n * n + 64
    ulog_v = np.zeros(ucap, np.int64)
    ulog_row = np.zeros((ucap, nwords), np.uint64)
    ulen = np.zeros(1, np.int64)
    fcap = n + 4
    fv = np.zeros(fcap, np.int64)
    fu = np.zeros(fcap, np.int64)
    fw = np.zeros(fcap, np.int64)
    flen = np.zeros(1, np.int64)
    st = np.zeros(2, np.int64)
    cliques = np.zeros((n + 1, nwords), np.uint64)
    val, wit = _solve_w(adj, full.copy(), lb0, np.int64(0), st,
                        np.int64(node_budget), np.int64(ub),
                        ulog_v, ulog_row, ulen, fv, fu, fw, flen, cliques)
    if st[1] == 2:
        if gsize >= seed_size:
            return gsize, gmask, st[0], False
        return np.int64(seed_size), seed_words.copy(), st[0], False
    return val, wit, st[0], True


# --------------------------------------------------------------------------
# subset-enumeration kernels (n <= 25, adjacency bitmask per vertex)
# --------------------------------------------------------------------------


@njit(cache=True)
def _alpha_hat_one(adj, n, cap):
    best = np.int64(0)
    for m in range(1 << n):
        um = np.uint64(m)
        sz = _pop64(um)
        if sz > cap or sz <= best:
            continue
        ok = True
        r2 = np.int64(0)
        for v in range(n):
            deg = _pop64(adj[v] & um)
            if (um >> np.uint64(v)) & U1 == U1:
                if deg > 1:
                    ok = False
                    break
                r2 += deg
            else:
                if deg < 2:
                    ok = False
                    break
        if ok:
            o = sz - r2 // 2
            if o > best:
                best = o
    return best


@njit(cache=True)
def alpha_hat_masks(adj, n, cap):
    return _alpha_hat_one(adj, n, cap)


@njit(cache=True)
def alpha_hat_batch(adj_masks, n, caps):
    t = adj_masks.shape[0]
    out = np.empty(t, np.int64)
    for i in range(t):
        out[i] = _alpha_hat_one(adj_masks[i], n, caps[i])
    return out


@njit(cache=True)
def mc_structure_counts(adj_masks, n, k, r):
    t = adj_masks.shape[0]
    out = np.zeros((t, 3), np.int64)
    for i in range(t):
        x_cnt = np.int64(0)
        y_cnt = np.int64(0)
        z_cnt = np.int64(0)
        for m in range(1 << n):
            um = np.uint64(m)
            sz = _pop64(um)
            want_x = sz == k
            want_z = sz == k + r
            if not (want_x or want_z):
                continue
            edge_free = True
            matching = True
            out1 = True
            out2 = True
            r2 = np.int64(0)
            for v in range(n):
                deg = _pop64(adj_masks[i, v] & um)
                if (um >> np.uint64(v)) & U1 == U1:
                    if deg > 0:
                        edge_free = False
                    if deg > 1:
                        matching = False
                    r2 += deg
                else:
                    if deg < 1:
                        out1 = False
                    if deg < 2:
                        out2 = False
            if want_x and edge_free:
                x_cnt += 1
                if out1:
                    y_cnt += 1
            if want_z and matching and r2 == 2 * r and out2:
                z_cnt += 1
        out[i, 0] = x_cnt
        out[i, 1] = y_cnt
        out[i, 2] = z_cnt
    return out


# --------------------------------------------------------------------------
# batch G(n,p) sampling, same stream as sampler.sample_gnp (n <= 64)
# --------------------------------------------------------------------------


@njit(cache=True)
def batch_sample_gnp_masks(n, p, seeds):
    t = len(seeds)
    out = np.zeros((t, n), np.uint64)
    m = n * (n - 1) // 2
    if p <= 0.0 or m == 0:
        return out
    pu = np.empty(m, np.int64)
    pv = np.empty(m, np.int64)
    idx = 0
    for u in range(n):
        for v in range(u + 1, n):
            pu[idx] = u
            pv[idx] = v
            idx += 1
    if p >= 1.0:
        for i in range(t):
            for j in range(m):
                out[i, pu[j]] |= U1 << np.uint64(pv[j])
                out[i, pv[j]] |= U1 << np.uint64(pu[j])
        return out
    if p >= _SKIP_THRESHOLD:
        pe = p * _TWO53
        fl = np.int64(pe)  # truncation == floor for pe >= 0
        thresh = np.uint64(fl) if np.float64(fl) == pe else np.uint64(fl + 1)
        for i in range(t):
            seed = seeds[i]
            for j in range(m):
                if (_draw(seed, j + 1) >> np.uint64(11)) < thresh:
                    out[i, pu[j]] |= U1 << np.uint64(pv[j])
                    out[i, pv[j]] |= U1 << np.uint64(pu[j])
        return out
    lq = math.log1p(-p)
    for i in range(t):
        seed = seeds[i]
        idx = 0
        tdraw = 0
        while idx < m:
            tdraw += 1
            u53 = np.float64((_draw(seed, tdraw) >> np.uint64(11)) + U1)
            idx += np.int64(math.floor(math.log(u53 / _TWO53) / lq))
            if idx >= m:
                break
            out[i, pu[idx]] |= U1 << np.uint64(pv[idx])
            out[i, pv[idx]] |= U1 << np.uint64(pu[idx])
            idx += 1
    return out

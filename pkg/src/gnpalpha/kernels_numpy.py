"""Fallback kernels: pure Python bitset code plus vectorized numpy loops.

Same API as kernels_numba; selected when numba is unavailable or disabled via
GNPALPHA_NUMBA=0.  The branch-and-bound here is the reference implementation:
the numba kernel mirrors its branching rules exactly, so both backends explore
the same tree and return the same witness.
"""

from __future__ import annotations

import math
import sys

import numpy as np

from ._bits import MASK64, mask_to_words, popcount_u64, words_to_mask

_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO53 = float(1 << 53)
_SKIP_THRESHOLD = 0.1

BACKEND = "numpy"


# --------------------------------------------------------------------------
# exact maximum independent set: recursive branch and reduce
#
# _solve(P, lb, acc) returns (val, witness) with val <= alpha(P) always
# (witness is a real independent set of size val) and val = alpha(P) exactly
# whenever alpha(P) > lb.  Reductions at every node: take degree 0/1 vertices
# and simplicial degree-2 vertices; fold degree-2 vertices with nonadjacent
# neighbors (alpha offset +1, witness re-expanded on return); drop neighbors
# dominated by a degree-3 vertex.  Disconnected residuals are solved per
# component with bound-sharpened sub-targets.  A min-degree greedy set seeds
# the initial lower bound; when `target` >= 0 (a caller-certified upper
# bound), the search unwinds as soon as it certifies an exact value reaching
# it.  Folds mutate the adjacency; an undo log rewinds them on return.
# --------------------------------------------------------------------------


class _SearchState:
    __slots__ = ("nodes", "budget", "stop", "target", "undo", "folds")

    def __init__(self, budget: int, target: int):
        self.nodes = 0
        self.budget = budget
        self.stop = 0  # 1: target attained, 2: budget exhausted
        self.target = target
        self.undo: list[tuple[int, int]] = []
        self.folds: list[tuple[int, int, int]] = []


def _greedy_mis(adj: list[int], P: int) -> tuple[int, int]:
    """Min-degree greedy independent set (deterministic tie-break)."""
    size = 0
    mask = 0
    rest = P
    while rest:
        bestd = 1 << 30
        bestv = -1
        scan = rest
        while scan:
            b = scan & -scan
            scan ^= b
            v = b.bit_length() - 1
            d = (adj[v] & rest).bit_count()
            if d < bestd:
                bestd = d
                bestv = v
        vb = 1 << bestv
        mask |= vb
        size += 1
        rest &= ~(adj[bestv] | vb)
    return size, mask


def _cover_bound(adj: list[int], P: int, cap: int) -> int:
    """Greedy clique cover of the graph induced on P: an upper bound on its
    independence number.  Aborts at cap+1, where larger covers cannot prune."""
    cliques: list[int] = []
    scan = P
    while scan:
        b = scan & -scan
        scan ^= b
        av = adj[b.bit_length() - 1]
        for i, c in enumerate(cliques):
            if c & ~av == 0:
                cliques[i] = c | b
                break
        else:
            cliques.append(b)
            if len(cliques) > cap:
                return cap + 1
    return len(cliques)


def _components(adj: list[int], P: int) -> list[int]:
    comps = []
    unseen = P
    while unseen:
        comp = unseen & -unseen
        frontier = comp
        while frontier:
            nxt = 0
            scan = frontier
            while scan:
                b = scan & -scan
                scan ^= b
                nxt |= adj[b.bit_length() - 1]
            frontier = nxt & unseen & ~comp
            comp |= frontier
        comps.append(comp)
        unseen &= ~comp
    return comps


def _solve(adj: list[int], P: int, lb: int, acc: int, st: _SearchState) -> tuple[int, int]:
    st.nodes += 1
    if st.nodes > st.budget:
        st.stop = 2
        return 0, 0
    ulen0 = len(st.undo)
    flen0 = len(st.folds)
    chosen = 0
    size = 0

    def finish(val: int, wit: int) -> tuple[int, int]:
        for v, u, w in reversed(st.folds[flen0:]):
            if wit >> v & 1:
                wit = (wit & ~(1 << v)) | (1 << u) | (1 << w)
            else:
                wit |= 1 << v
        while len(st.undo) > ulen0:
            x, row = st.undo.pop()
            adj[x] = row
        del st.folds[flen0:]
        return val, wit

    # reduction fixpoint
    changed = True
    while changed:
        changed = False
        for v in range(len(adj)):
            b = 1 << v
            if not P & b:
                continue
            nb = adj[v] & P
            d = nb.bit_count()
            if d > 3:
                continue
            if d == 0:
                chosen |= b
                size += 1
                P ^= b
                changed = True
            elif d == 1:
                chosen |= b
                size += 1
                P &= ~(b | nb)
                changed = True
            elif d == 2:
                b1 = nb & -nb
                u = b1.bit_length() - 1
                wb = nb ^ b1
                w = wb.bit_length() - 1
                if adj[u] & wb:  # triangle: v is simplicial
                    chosen |= b
                    size += 1
                    P &= ~(b | nb)
                else:  # fold {v, u, w} into slot v
                    newrow = (adj[u] | adj[w]) & P & ~(nb | b)
                    st.undo.append((v, adj[v]))
                    adj[v] = newrow
                    scan = newrow
                    while scan:
                        xb = scan & -scan
                        scan ^= xb
                        x = xb.bit_length() - 1
                        st.undo.append((x, adj[x]))
                        adj[x] |= b
                    st.folds.append((v, u, w))
                    P &= ~nb
                    size += 1
                changed = True
            else:
                # domination: drop any neighbor y with N_P[v] within N_P[y]
                nbb = nb
                while nbb:
                    yb = nbb & -nbb
                    nbb ^= yb
                    if not nb & ~adj[yb.bit_length() - 1] & ~yb:
                        P &= ~yb
                        changed = True
                        break

    if P == 0:
        return finish(size, chosen)
    if size + P.bit_count() <= lb:
        return finish(0, 0)

    comps = _components(adj, P)
    if len(comps) == 1:
        if size + _cover_bound(adj, P, lb - size) <= lb:
            return finish(0, 0)
        maxdeg = 0
        maxv = -1
        scan = P
        while scan:
            b = scan & -scan
            scan ^= b
            v = b.bit_length() - 1
            d = (adj[v] & P).bit_count()
            if d > maxdeg:
                maxdeg = d
                maxv = v
        vb = 1 << maxv
        a, wa = _solve(adj, P & ~(adj[maxv] | vb), lb - size - 1,
                       acc + size + 1, st)
        cand = a + 1
        candw = wa | vb
        if st.stop:
            return finish(size + cand, chosen | candw) if st.stop == 1 \
                else finish(0, 0)
        if (st.target >= 0 and a > lb - size - 1
                and acc + size + cand >= st.target):
            st.stop = 1
            return finish(size + cand, chosen | candw)
        bval, wb_ = _solve(adj, P & ~vb, max(lb - size, cand), acc + size, st)
        if st.stop == 2:
            return finish(0, 0)
        if bval > cand:
            return finish(size + bval, chosen | wb_)
        return finish(size + cand, chosen | candw)

    covers = [_cover_bound(adj, c, c.bit_count()) for c in comps]
    remaining = sum(covers)
    if size + remaining <= lb:
        return finish(0, 0)
    total = size
    wit = chosen
    for i, comp in enumerate(comps):
        remaining -= covers[i]
        vi, wi = _solve(adj, comp, lb - total - remaining, acc + total, st)
        if st.stop == 2:
            return finish(0, 0)
        total += vi
        wit |= wi
        if st.stop == 1:
            return finish(total, wit)
    return finish(total, wit)


def mis_bnb(adj_words: np.ndarray, node_budget: int, seed_words: np.ndarray,
            seed_size: int, ub: int) -> tuple[int, np.ndarray, int, bool]:
    """Exact max independent set of the graph given by adj_words.

    seed_words/seed_size: a known independent set (only its size is used, as
    the initial bound).  ub >= 0 is a caller-certified upper bound on alpha
    enabling early exit at attainment.  Returns (best, witness, nodes, done).
    """
    n, nwords = adj_words.shape
    if seed_size >= ub >= 0:
        return seed_size, seed_words.copy(), 0, True
    adj = [words_to_mask(adj_words[v]) for v in range(n)]
    full = (1 << n) - 1
    gsize, gmask = _greedy_mis(adj, full)
    if ub >= 0 and gsize >= ub:
        return gsize, mask_to_words(gmask, nwords), 0, True
    lb0 = max(gsize, seed_size) - 1
    limit = 3 * n + 2000
    if sys.getrecursionlimit() < limit:
        sys.setrecursionlimit(limit)
    st = _SearchState(node_budget, ub)
    val, wit = _solve(adj, full, lb0, 0, st)
    if st.stop == 2:
        best = max(gsize, seed_size)
        wm = gmask if gsize >= seed_size else words_to_mask(seed_words)
        return best, mask_to_words(wm, nwords), st.nodes, False
    return val, mask_to_words(wit, nwords), st.nodes, True


# --------------------------------------------------------------------------
# subset-enumeration kernels for small graphs (adjacency bitmask per vertex)
# --------------------------------------------------------------------------


def alpha_hat_masks(adj: np.ndarray, n: int, cap: int) -> int:
    """Max order |S| - r over augmented independent sets, by enumerating all
    vertex subsets of size <= cap (valid sets have |S| <= 2*alpha <= cap)."""
    rows = [int(adj[v]) for v in range(n)]
    best = 0
    chunk = 1 << min(n, 20)
    total = 1 << n
    masks_all = np.arange(chunk, dtype=np.uint64)
    for lo in range(0, total, chunk):
        masks = masks_all[: min(chunk, total - lo)] + np.uint64(lo)
        sizes = popcount_u64(masks)
        ok = sizes <= cap
        r2 = np.zeros(len(masks), dtype=np.int64)
        for v in range(n):
            deg = popcount_u64(masks & np.uint64(rows[v]))
            inside = (masks >> np.uint64(v)) & np.uint64(1) == 1
            ok &= ~(inside & (deg > 1))
            ok &= ~(~inside & (deg < 2))
            r2 += deg * inside
        order = sizes - r2 // 2
        order[~ok] = 0
        m = int(order.max()) if len(order) else 0
        best = max(best, m)
    return best


def alpha_hat_batch(adj_masks: np.ndarray, n: int, caps: np.ndarray) -> np.ndarray:
    """alpha_hat for a batch of graphs given as (T, n) adjacency bitmasks."""
    t = adj_masks.shape[0]
    out = np.empty(t, dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.uint64)
    sizes = popcount_u64(masks)
    insides = [((masks >> np.uint64(v)) & np.uint64(1)) == 1 for v in range(n)]
    for i in range(t):
        ok = sizes <= int(caps[i])
        r2 = np.zeros(1 << n, dtype=np.int64)
        for v in range(n):
            deg = popcount_u64(masks & adj_masks[i, v])
            inside = insides[v]
            ok &= ~(inside & (deg > 1))
            ok &= ~(~inside & (deg < 2))
            r2 += deg * inside
        order = sizes - r2 // 2
        order[~ok] = 0
        out[i] = int(order.max())
    return out


def mc_structure_counts(adj_masks: np.ndarray, n: int, k: int, r: int) -> np.ndarray:
    """Per-trial counts of independent k-sets, maximal independent k-sets, and
    augmented independent sets of order k with r edges; shape (T, 3)."""
    t = adj_masks.shape[0]
    out = np.zeros((t, 3), dtype=np.int64)
    masks = np.arange(1 << n, dtype=np.uint64)
    sizes = popcount_u64(masks)
    insides = [((masks >> np.uint64(v)) & np.uint64(1)) == 1 for v in range(n)]
    sel_x = sizes == k
    sel_z = sizes == k + r
    chunk = 4096
    for lo in range(0, t, chunk):
        hi = min(lo + chunk, t)
        for i in range(lo, hi):
            degs = [popcount_u64(masks & adj_masks[i, v]) for v in range(n)]
            edge_free = np.ones(1 << n, dtype=bool)
            matching = np.ones(1 << n, dtype=bool)
            out1 = np.ones(1 << n, dtype=bool)
            out2 = np.ones(1 << n, dtype=bool)
            r2 = np.zeros(1 << n, dtype=np.int64)
            for v in range(n):
                inside = insides[v]
                deg = degs[v]
                edge_free &= ~(inside & (deg > 0))
                matching &= ~(inside & (deg > 1))
                out1 &= ~(~inside & (deg < 1))
                out2 &= ~(~inside & (deg < 2))
                r2 += deg * inside
            out[i, 0] = int(np.count_nonzero(sel_x & edge_free))
            out[i, 1] = int(np.count_nonzero(sel_x & edge_free & out1))
            out[i, 2] = int(np.count_nonzero(sel_z & matching & (r2 == 2 * r) & out2))
    return out


# --------------------------------------------------------------------------
# batch G(n,p) sampling as adjacency bitmasks (n <= 64), same bit stream as
# sampler.sample_gnp
# --------------------------------------------------------------------------


def _finalize_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def batch_sample_gnp_masks(n: int, p: float, seeds: np.ndarray) -> np.ndarray:
    """Adjacency bitmasks (T, n) for G(n,p) sampled at each seed."""
    t = len(seeds)
    m = n * (n - 1) // 2
    out = np.zeros((t, n), dtype=np.uint64)
    if p <= 0.0 or m == 0:
        return out
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if p >= 1.0:
        for u, v in pairs:
            out[:, u] |= np.uint64(1 << v)
            out[:, v] |= np.uint64(1 << u)
        return out
    if p >= _SKIP_THRESHOLD:
        # x53 < p*2^53 as reals <=> x53 < ceil(p*2^53) as integers
        thresh = np.uint64(int(math.ceil(p * _TWO53)))
        chunk = max(1, (1 << 22) // max(1, m))
        with np.errstate(over="ignore"):
            for lo in range(0, t, chunk):
                s = np.asarray(seeds[lo:lo + chunk], dtype=np.uint64)[:, None]
                tt = np.arange(1, m + 1, dtype=np.uint64)[None, :]
                x = _finalize_vec(s + tt * np.uint64(_GOLDEN))
                inc = (x >> np.uint64(11)) < thresh
                for j, (u, v) in enumerate(pairs):
                    col = inc[:, j]
                    out[lo:lo + chunk, u][col] |= np.uint64(1 << v)
                    out[lo:lo + chunk, v][col] |= np.uint64(1 << u)
        return out
    # geometric skipping, per trial (slow fallback path)
    lq = math.log1p(-p)
    for i in range(t):
        seed = int(seeds[i])
        idx = 0
        tdraw = 0
        while idx < m:
            tdraw += 1
            z = (seed + tdraw * _GOLDEN) & MASK64
            z = ((z ^ (z >> 30)) * _MIX1) & MASK64
            z = ((z ^ (z >> 27)) * _MIX2) & MASK64
            z ^= z >> 31
            u53 = (z >> 11) + 1
            idx += int(math.floor(math.log(u53 / _TWO53) / lq))
            if idx >= m:
                break
            u, v = pairs[idx]
            out[i, u] |= np.uint64(1 << v)
            out[i, v] |= np.uint64(1 << u)
            idx += 1
    return out

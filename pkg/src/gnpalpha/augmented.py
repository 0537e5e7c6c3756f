"""Augmented independent sets.

An augmented independent set of order k is a vertex set S with |S| = k + r
whose induced graph is a matching of r edges, such that every vertex outside S
has at least two neighbors in S.  The largest order over all such sets equals
the independence number, which is what makes the structure useful as an exact
cross-check for the solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._accel import kernels
from ._bits import bits
from .graph import Graph
from .solver import BudgetExceededError, alpha as solve_alpha

ALPHA_HAT_MAX_N = 25


@dataclass(frozen=True)
class AugmentedSet:
    """Vertex set s (bitset) with its induced matching; order = |s| - r."""

    s: int
    matching: tuple[tuple[int, int], ...]

    @property
    def r(self) -> int:
        return len(self.matching)

    @property
    def order(self) -> int:
        return self.s.bit_count() - self.r


def is_augmented(g: Graph, s: int, matching) -> bool:
    """True iff the induced edges on s are exactly the given vertex-disjoint
    matching and every vertex outside s has >= 2 neighbors in s."""
    g._check_set(s)
    pairs = []
    for u, v in matching:
        if u == v:
            raise ValueError(f"matching pair ({u},{v}) repeats a vertex")
        g._check_vertex(u)
        g._check_vertex(v)
        if not (s & (1 << u) and s & (1 << v)):
            raise ValueError(f"matching pair ({u},{v}) not inside s")
        pairs.append((min(u, v), max(u, v)))
    used = 0
    for u, v in pairs:
        pb = (1 << u) | (1 << v)
        if used & pb:
            return False  # matching not vertex-disjoint
        used |= pb
    if sorted(pairs) != g.induced_edges(s):
        return False
    outside = g.all_mask & ~s
    return all((g.adj[v] & s).bit_count() >= 2 for v in bits(outside))


def _matching_of(g: Graph, s: int) -> tuple[tuple[int, int], ...]:
    return tuple(g.induced_edges(s))


def _can_add(g: Graph, t: int, v: int) -> bool:
    """Adding v to t keeps the induced graph a matching."""
    nb = g.adj[v] & t
    c = nb.bit_count()
    if c > 1:
        return False
    if c == 1:
        u = (nb & -nb).bit_length() - 1
        if g.adj[u] & t:  # u already matched
            return False
    return True


def extend_to_augmented(g: Graph, s: int) -> AugmentedSet:
    """Extend a maximum independent set s to an augmented independent set.

    Greedy ascending-index extension keeps the induced graph a matching; the
    outside-degree condition is then verified explicitly.  If the greedy
    maximal witness fails it (the greedy set need not be a maximum one), an
    exhaustive search over matching-inducing supersets runs for n <= 25.
    Raises ValueError when s induces an edge or when no witness certifies.
    """
    g._check_set(s)
    if g.induced_edge_count(s) > 0:
        raise ValueError("s is not independent")
    t = s
    for v in range(g.n):
        if not t & (1 << v) and _can_add(g, t, v):
            t |= 1 << v
    if is_augmented(g, t, _matching_of(g, t)):
        return AugmentedSet(t, _matching_of(g, t))
    if g.n > ALPHA_HAT_MAX_N:
        raise ValueError(
            "greedy extension failed the outside-degree check and the graph "
            f"is too large (n > {ALPHA_HAT_MAX_N}) for exhaustive extension")
    best = _max_matching_superset(g, s)
    if is_augmented(g, best, _matching_of(g, best)):
        return AugmentedSet(best, _matching_of(g, best))
    raise ValueError("no augmented extension found: s is not a maximum "
                     "independent set")


def _max_matching_superset(g: Graph, s: int) -> int:
    """Maximum-size superset of s whose induced graph is a matching."""
    candidates = [v for v in range(g.n) if not s & (1 << v)]
    best = [s]

    def rec(i: int, t: int):
        size = t.bit_count()
        if size + (len(candidates) - i) <= best[0].bit_count():
            return
        if i == len(candidates):
            if size > best[0].bit_count():
                best[0] = t
            return
        v = candidates[i]
        if _can_add(g, t, v):
            rec(i + 1, t | (1 << v))
        rec(i + 1, t)

    rec(0, s)
    return best[0]


def alpha_hat(g: Graph, node_budget: int = 10**9) -> int:
    """Largest order over all augmented independent sets (exhaustive, n <= 25).

    Any augmented set of order k contains an independent k-set, so orders
    never exceed alpha(g) and candidate sets never exceed 2*alpha(g) vertices;
    the enumeration caps there.
    """
    if g.n > ALPHA_HAT_MAX_N:
        raise ValueError(f"alpha_hat supports n <= {ALPHA_HAT_MAX_N}")
    if g.n == 0:
        return 0
    cap = 2 * solve_alpha(g, node_budget=node_budget).alpha
    adj = np.array(g.adj, dtype=np.uint64)
    return int(kernels.alpha_hat_masks(adj, g.n, cap))


def count_augmented(g: Graph, k: int, r: int, budget: int = 10**8) -> int:
    """Exact number of augmented independent sets of order k with r edges."""
    if r < 0 or r > k:
        raise ValueError("need 0 <= r <= k")
    if k + r > g.n:
        raise ValueError("need k + r <= n")
    target = k + r
    adj = g.adj
    full = g.all_mask
    steps = [0]

    def outside_ok(t: int) -> bool:
        return all((adj[v] & t).bit_count() >= 2 for v in bits(full & ~t))

    def rec(rest: int, t: int, size: int, redges: int) -> int:
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceededError("enumeration budget exhausted", 0, 0, steps[0])
        if size == target:
            return 1 if redges == r and outside_ok(t) else 0
        if size + rest.bit_count() < target:
            return 0
        b = rest & -rest
        v = b.bit_length() - 1
        total = rec(rest & ~b, t, size, redges)  # exclude v
        nb = adj[v] & t
        c = nb.bit_count()
        if c == 0:
            can = True
        elif c == 1:
            u = (nb & -nb).bit_length() - 1
            can = not adj[u] & t  # u must be unmatched so far
        else:
            can = False
        if can and redges + c <= r:
            total += rec(rest & ~b, t | b, size + 1, redges + c)
        return total

    return rec(full, 0, 0, 0)

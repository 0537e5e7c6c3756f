"""Exact independence number and exact counting oracles.

alpha() decomposes into connected components, strips isolated vertices, and
runs a branch-and-bound kernel per component (degree 0/1/2 reductions, greedy
clique-cover bound, max-degree branching).  Counting oracles are pure Python
big-integer recursions intended for n up to ~30.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._accel import kernels
from ._bits import bits, mask_to_words, words_for, words_to_mask
from .graph import Graph

DEFAULT_NODE_BUDGET = 10**9


class BudgetExceededError(RuntimeError):
    """Search budget ran out; carries the best lower bound found so far."""

    def __init__(self, message: str, best_lower_bound: int, witness: int,
                 nodes_explored: int):
        super().__init__(message)
        self.best_lower_bound = best_lower_bound
        self.witness = witness
        self.nodes_explored = nodes_explored


@dataclass(frozen=True)
class SolveResult:
    alpha: int
    witness: int
    nodes_explored: int
    elapsed: float


def _solve_component(g: Graph, comp: int, budget: int, seed_mask: int,
                     ub: int) -> tuple[int, int, int, bool]:
    """Exact alpha of the graph induced on comp; returns (alpha, witness,
    nodes, completed)."""
    size = comp.bit_count()
    if size == 1:
        return 1, comp, 0, True
    if size == 2:
        return 1, comp & -comp, 0, True
    if size == 3:
        e = g.induced_edge_count(comp)
        if e == 3:
            return 1, comp & -comp, 0, True
        # connected on 3 vertices with 2 edges: a path; take its endpoints
        ends = 0
        for v in bits(comp):
            if (g.adj[v] & comp).bit_count() == 1:
                ends |= 1 << v
        return 2, ends, 0, True
    sub, verts = g.subgraph(comp)
    nwords = words_for(sub.n)
    seed_local = 0
    for i, v in enumerate(verts):
        if seed_mask & (1 << v):
            seed_local |= 1 << i
    best, bw, nodes, done = kernels.mis_bnb(
        sub.adj_words().copy(), budget, mask_to_words(seed_local, nwords),
        seed_local.bit_count(), ub)
    local = words_to_mask(np.asarray(bw))
    witness = 0
    for i in bits(local):
        witness |= 1 << verts[i]
    return int(best), witness, int(nodes), bool(done)


def alpha(g: Graph, node_budget: int = DEFAULT_NODE_BUDGET,
          time_budget: float | None = None, upper_bound: int | None = None,
          seed_set: int = 0) -> SolveResult:
    """Exact maximum independent set with witness.

    seed_set: a known independent set used as the initial incumbent.
    upper_bound: caller-certified bound on alpha(g); the search stops early on
    attaining it.  An invalid bound is detected (result exceeding it) and
    raises ValueError.  The time budget is enforced at component granularity;
    the node budget is exact.
    """
    t0 = time.perf_counter()
    if seed_set and not g.is_independent(seed_set):
        raise ValueError("seed_set is not an independent set")
    isolated = 0
    for v in range(g.n):
        if g.adj[v] == 0:
            isolated |= 1 << v
    total = isolated.bit_count()
    witness = isolated
    comps = [c for c in g.components() if not c & isolated]
    comps.sort(key=lambda c: c.bit_count())
    nodes = 0
    for i, comp in enumerate(comps):
        remaining = node_budget - nodes
        if remaining <= 0:
            raise BudgetExceededError(
                "node budget exhausted", total, witness, nodes)
        if time_budget is not None and time.perf_counter() - t0 > time_budget:
            raise BudgetExceededError(
                "time budget exhausted", total, witness, nodes)
        ub = -1
        if upper_bound is not None and i == len(comps) - 1:
            # remaining component is bounded by what the global bound leaves
            ub = upper_bound - total
        a, w, nd, done = _solve_component(g, comp, remaining, seed_set & comp, ub)
        nodes += nd
        if not done:
            raise BudgetExceededError(
                "node budget exhausted", total + a, witness | w, nodes)
        total += a
        witness |= w
    if upper_bound is not None and total > upper_bound:
        raise ValueError(
            f"alpha={total} exceeds caller-certified upper_bound={upper_bound}")
    if not g.is_independent(witness) or witness.bit_count() != total:
        raise AssertionError("internal error: invalid witness")
    return SolveResult(total, witness, nodes, time.perf_counter() - t0)


# --------------------------------------------------------------------------
# exact counting oracles (n <= ~30)
# --------------------------------------------------------------------------


def _binomial_row(size: int) -> list[int]:
    row = [1]
    for i in range(size):
        row.append(row[-1] * (size - i) // (i + 1))
    return row


def _count_by_size(adj: tuple[int, ...], rest: int, steps: list[int],
                   budget: int) -> list[int]:
    """Coefficient list c[j] = number of independent j-subsets of rest."""
    steps[0] += 1
    if steps[0] > budget:
        raise BudgetExceededError("enumeration budget exhausted", 0, 0, steps[0])
    # branch on a max-degree vertex; an edgeless remainder is closed-form
    maxdeg = 0
    maxv = -1
    for v in bits(rest):
        d = (adj[v] & rest).bit_count()
        if d > maxdeg:
            maxdeg = d
            maxv = v
    if maxdeg == 0:
        return _binomial_row(rest.bit_count())
    b = 1 << maxv
    excl = _count_by_size(adj, rest & ~b, steps, budget)
    incl = _count_by_size(adj, rest & ~(adj[maxv] | b), steps, budget)
    out = [0] * (rest.bit_count() + 1)
    for j, c in enumerate(excl):
        out[j] += c
    for j, c in enumerate(incl):
        if j + 1 < len(out):
            out[j + 1] += c
    return out


def count_independent_sets(g: Graph, k: int,
                           budget: int = 10**8) -> int:
    """Exact number of independent k-subsets (big integer)."""
    if k < 0 or k > g.n:
        return 0
    return _count_by_size(g.adj, g.all_mask, [0], budget)[k]


def independent_set_profile(g: Graph, budget: int = 10**8) -> list[int]:
    """Counts of independent sets of every size 0..n."""
    row = _count_by_size(g.adj, g.all_mask, [0], budget)
    return row + [0] * (g.n + 1 - len(row))


def count_maximal_independent_sets(g: Graph, k: int,
                                   budget: int = 10**8) -> int:
    """Exact number of maximal independent sets of size exactly k."""
    if k < 0 or k > g.n:
        return 0
    adj = g.adj
    steps = [0]

    def rec(rest: int, chosen_size: int, uncovered: int) -> int:
        steps[0] += 1
        if steps[0] > budget:
            raise BudgetExceededError("enumeration budget exhausted", 0, 0, steps[0])
        if chosen_size > k:
            return 0
        if rest == 0:
            return 1 if uncovered == 0 and chosen_size == k else 0
        # a vertex that is uncovered, unselectable, and has no selectable
        # neighbor can never be dominated: prune
        for v in bits(uncovered & ~rest):
            if adj[v] & rest == 0:
                return 0
        b = rest & -rest
        v = b.bit_length() - 1
        total = rec(rest & ~(adj[v] | b), chosen_size + 1,
                    uncovered & ~(adj[v] | b))
        total += rec(rest & ~b, chosen_size, uncovered)
        return total

    return rec(g.all_mask, 0, g.all_mask)

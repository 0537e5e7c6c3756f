"""Immutable simple graphs over vertices 0..n-1 with bitset adjacency.

Vertex sets are Python ints used as bitsets.  Construction validates symmetry
and rejects self-loops: samplers are the only producers of graphs, so a
violation indicates a bug rather than bad user data.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._bits import adj_to_words, bits, words_for


class Graph:
    """Undirected simple graph; adj[v] is the neighbor bitset of v."""

    __slots__ = ("n", "adj", "_words")

    def __init__(self, n: int, adj: tuple[int, ...]):
        if n < 0:
            raise ValueError("n must be >= 0")
        if len(adj) != n:
            raise ValueError("adjacency length != n")
        for v, row in enumerate(adj):
            if row < 0 or row >> n:
                raise ValueError(f"vertex {v}: neighbor bits beyond n-1")
            if row & (1 << v):
                raise ValueError(f"self-loop at vertex {v}")
        for v in range(n):
            for u in bits(adj[v]):
                if not adj[u] & (1 << v):
                    raise ValueError(f"asymmetric adjacency: {v}->{u}")
        self.n = n
        self.adj = tuple(adj)
        self._words = None

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop ({u},{v})")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    # -- basic queries ------------------------------------------------------

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        return bool(self.adj[u] & (1 << v))

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return self.adj[v].bit_count()

    def degree_in(self, v: int, s: int) -> int:
        """|N(v) ∩ s| for a vertex set s given as a bitset."""
        self._check_vertex(v)
        self._check_set(s)
        return (self.adj[v] & s).bit_count()

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            row = self.adj[u] >> (u + 1)
            for d in bits(row):
                out.append((u, u + 1 + d))
        return out

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def induced_edges(self, s: int) -> list[tuple[int, int]]:
        """Edges with both endpoints in s, each once, endpoints ordered."""
        self._check_set(s)
        out = []
        for u in bits(s):
            row = (self.adj[u] & s) >> (u + 1)
            for d in bits(row):
                out.append((u, u + 1 + d))
        return out

    def induced_edge_count(self, s: int) -> int:
        self._check_set(s)
        return sum((self.adj[u] & s).bit_count() for u in bits(s)) // 2

    def is_independent(self, s: int) -> bool:
        self._check_set(s)
        return all(not self.adj[u] & s for u in bits(s))

    def neighbors_of_set(self, s: int) -> int:
        """Union of neighbor sets of s, minus s itself."""
        out = 0
        for u in bits(s):
            out |= self.adj[u]
        return out & ~s

    # -- structure ----------------------------------------------------------

    def components(self) -> list[int]:
        """Connected component vertex sets, by smallest contained vertex."""
        unseen = self.all_mask
        comps = []
        while unseen:
            start = unseen & -unseen
            comp = start
            frontier = start
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= self.adj[v]
                frontier = nxt & unseen & ~comp
                comp |= frontier
            comps.append(comp)
            unseen &= ~comp
        return comps

    def subgraph(self, s: int) -> tuple["Graph", list[int]]:
        """Induced subgraph on s, relabeled to 0..|s|-1; returns (graph, vertices)."""
        self._check_set(s)
        verts = list(bits(s))
        index = {v: i for i, v in enumerate(verts)}
        rows = [0] * len(verts)
        for i, v in enumerate(verts):
            for u in bits(self.adj[v] & s):
                rows[i] |= 1 << index[u]
        return Graph(len(verts), tuple(rows)), verts

    def adj_words(self) -> np.ndarray:
        """Adjacency as little-endian uint64 words, cached; shape (n, W)."""
        if self._words is None:
            self._words = adj_to_words(self.adj, words_for(self.n))
            self._words.setflags(write=False)
        return self._words

    # -- plumbing ------------------------------------------------------------

    def _check_vertex(self, v: int):
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range [0, {self.n})")

    def _check_set(self, s: int):
        if s < 0 or s >> self.n:
            raise ValueError("vertex set outside graph range")

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count})"


@dataclass(frozen=True)
class Tree4Decomposition:
    """Connected components that are trees on exactly 4 vertices, vs the rest.

    star_count is the number of those components with a degree-3 center;
    remainder covers every vertex not in a 4-vertex tree component.
    """

    tree_components: tuple[int, ...]
    star_count: int
    remainder: int

    @property
    def t(self) -> int:
        return len(self.tree_components)


def tree4_decompose(g: Graph) -> Tree4Decomposition:
    """Split g into its 4-vertex tree components and the remainder graph."""
    trees = []
    stars = 0
    remainder = 0
    for comp in g.components():
        if comp.bit_count() == 4 and g.induced_edge_count(comp) == 3:
            # connected with 4 vertices and 3 edges: a tree; star iff some
            # vertex has degree 3
            trees.append(comp)
            if any((g.adj[v] & comp).bit_count() == 3 for v in bits(comp)):
                stars += 1
        else:
            remainder |= comp
    return Tree4Decomposition(tuple(trees), stars, remainder)


# -- text fixture format: first line "n m", then m lines "u v" ---------------


def write_graph(g: Graph, path: str | Path) -> None:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"]
    lines.extend(f"{u} {v}" for u, v in edges)
    Path(path).write_text("\n".join(lines) + "\n")


def read_graph(path: str | Path) -> Graph:
    text = Path(path).read_text().split()
    if len(text) < 2:
        raise ValueError("graph file: missing 'n m' header")
    n, m = int(text[0]), int(text[1])
    nums = text[2:]
    if len(nums) != 2 * m:
        raise ValueError(f"graph file: expected {m} edges, found {len(nums) // 2}")
    edges = [(int(nums[2 * i]), int(nums[2 * i + 1])) for i in range(m)]
    return Graph.from_edges(n, edges)

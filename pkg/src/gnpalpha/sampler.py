"""Reproducible random graph generation.

All randomness comes from a counter-based SplitMix64 stream so that a given
(n, p, seed) triple produces the same graph on every platform and on every
backend (pure Python, numpy fallback, numba kernels).  The recipe, which is
also spelled out in the README:

  draw t (t = 1, 2, ...) from seed s:   x_t = finalize((s + t * GOLDEN) mod 2^64)
  finalize(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
               z ^= z >> 27; z *= 0x94D049BB133111EB;  z ^= z >> 31
  uniform in [0, 1):  u_t = (x_t >> 11) * 2^-53

Potential edges are ordered lexicographically: (0,1), (0,2), ..., (n-2,n-1).
For p >= 0.1 each pair consumes one draw and is included iff u_t < p.  For
p < 0.1 the sampler geometrically skips over the ordered pair list: each draw
yields skip = floor(log(((x_t >> 11) + 1) * 2^-53) / log1p(-p)), expected O(m)
draws total.  Per-trial seeds are derived as mix64(seed_base + trial_index).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._bits import MASK64
from .graph import Graph

GOLDEN = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB

# below this probability edge sampling switches to geometric skipping
SKIP_THRESHOLD = 0.1

TWO53 = float(1 << 53)


def mix64(x: int) -> int:
    """SplitMix64 finalizer of (x + GOLDEN); the documented seed mixer."""
    z = (x + GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * MIX1) & MASK64
    z = ((z ^ (z >> 27)) * MIX2) & MASK64
    return z ^ (z >> 31)


def trial_seed(seed_base: int, trial_index: int) -> int:
    """Per-trial seed: mix64(seed_base + trial_index)."""
    return mix64((seed_base + trial_index) & MASK64)


def stream_draw(seed: int, t: int) -> int:
    """t-th 64-bit output (t >= 1) of the SplitMix64 stream seeded at seed."""
    return mix64((seed + (t - 1) * GOLDEN) & MASK64)


@dataclass(frozen=True)
class SampleSpec:
    """One reproducible sampling instance: G(n,p) if p is set, else G(n,m)."""

    n: int
    seed: int
    p: float | None = None
    m: int | None = None

    def __post_init__(self):
        if (self.p is None) == (self.m is None):
            raise ValueError("exactly one of p, m must be set")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if self.p is not None and not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p={self.p} outside [0, 1]")
        if self.m is not None and not 0 <= self.m <= self.n * (self.n - 1) // 2:
            raise ValueError(f"m={self.m} outside [0, n(n-1)/2]")

    def sample(self) -> Graph:
        if self.p is not None:
            return sample_gnp(self.n, self.p, self.seed)
        return sample_gnm(self.n, self.m, self.seed)


def pair_from_index(idx: int, n: int) -> tuple[int, int]:
    """Invert the lexicographic index of an unordered pair (u < v)."""
    m = n * (n - 1) // 2
    if not 0 <= idx < m:
        raise ValueError("pair index out of range")
    # rem pairs lie at index >= idx; they fill the last t rows where t is the
    # smallest integer with t(t+1)/2 >= rem.
    rem = m - idx
    t = (math.isqrt(8 * rem - 7) + 1) // 2
    u = n - 1 - t
    offset = u * (n - 1) - u * (u - 1) // 2
    v = u + 1 + (idx - offset)
    return u, v


def _gnp_edges(n: int, p: float, seed: int) -> list[tuple[int, int]]:
    m = n * (n - 1) // 2
    if p <= 0.0 or m == 0:
        return []
    if p >= 1.0:
        return [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = []
    t = 0
    if p >= SKIP_THRESHOLD:
        thresh = p * TWO53
        for u in range(n):
            for v in range(u + 1, n):
                t += 1
                if (stream_draw(seed, t) >> 11) < thresh:
                    edges.append((u, v))
    else:
        lq = math.log1p(-p)
        idx = 0
        while idx < m:
            t += 1
            u53 = (stream_draw(seed, t) >> 11) + 1
            idx += int(math.floor(math.log(u53 / TWO53) / lq))
            if idx >= m:
                break
            edges.append(pair_from_index(idx, n))
            idx += 1
    return edges


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """G(n,p): each potential edge present independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    return Graph.from_edges(n, _gnp_edges(n, p, seed))


def _draw_below(seed: int, t: int, bound: int) -> tuple[int, int]:
    """Unbiased uniform integer in [0, bound) by rejection; returns (value, next t)."""
    limit = (1 << 64) - ((1 << 64) % bound)
    while True:
        x = stream_draw(seed, t)
        t += 1
        if x < limit:
            return x % bound, t


def sample_gnm(n: int, m: int, seed: int) -> Graph:
    """G(n,m): uniformly random set of exactly m edges (Floyd's algorithm)."""
    total = n * (n - 1) // 2
    if not 0 <= m <= total:
        raise ValueError(f"m={m} outside [0, {total}]")
    chosen: set[int] = set()
    t = 1
    for j in range(total - m, total):
        r, t = _draw_below(seed, t, j + 1)
        chosen.add(j if r in chosen else r)
    return Graph.from_edges(n, [pair_from_index(i, n) for i in sorted(chosen)])


def pair_uniform_bits(n: int, seed: int) -> np.ndarray:
    """The 53-bit integers (x_t >> 11) for every vertex pair, in pair order.

    Used by the coupled ladder experiment: edge j is present at probability
    level p iff pair_uniform_bits[j] < p * 2^53, so graphs at increasing p are
    nested edgewise within one trial.  Draw t for pair j is t = j + 1, matching
    the Bernoulli path of sample_gnp.
    """
    m = n * (n - 1) // 2
    t = np.arange(1, m + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (np.uint64(seed) + t * np.uint64(GOLDEN)).astype(np.uint64)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
        z = z ^ (z >> np.uint64(31))
    return z >> np.uint64(11)

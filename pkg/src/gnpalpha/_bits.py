"""Bitset helpers shared by the graph layer and the accelerated kernels.

Vertex sets are plain Python ints (bit v set <=> vertex v in the set).
The numba kernels use the same sets split into little-endian uint64 words.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# popcount lookup for 16-bit slices, used by the numpy fallback kernels
POP16 = np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.uint8)


def words_for(n: int) -> int:
    """Number of 64-bit words needed for an n-bit set (at least 1)."""
    return max(1, (n + 63) >> 6)


def mask_to_words(mask: int, nwords: int) -> np.ndarray:
    out = np.zeros(nwords, dtype=np.uint64)
    for w in range(nwords):
        out[w] = (mask >> (64 * w)) & MASK64
    return out


def words_to_mask(words: np.ndarray) -> int:
    mask = 0
    for w in range(len(words) - 1, -1, -1):
        mask = (mask << 64) | int(words[w])
    return mask


def adj_to_words(adj: tuple[int, ...], nwords: int) -> np.ndarray:
    out = np.zeros((len(adj), nwords), dtype=np.uint64)
    for v, row in enumerate(adj):
        for w in range(nwords):
            out[v, w] = (row >> (64 * w)) & MASK64
    return out


def bits(mask: int):
    """Yield set bit indices in ascending order."""
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask ^= b


def popcount_u64(a: np.ndarray) -> np.ndarray:
    """Elementwise popcount of a uint64 array via 16-bit table lookups."""
    a = np.asarray(a, dtype=np.uint64)
    r = POP16[(a & np.uint64(0xFFFF)).astype(np.uint32)].astype(np.int64)
    r += POP16[((a >> np.uint64(16)) & np.uint64(0xFFFF)).astype(np.uint32)]
    r += POP16[((a >> np.uint64(32)) & np.uint64(0xFFFF)).astype(np.uint32)]
    r += POP16[((a >> np.uint64(48)) & np.uint64(0xFFFF)).astype(np.uint32)]
    return r

"""Compiled inner loops for sampling.

The forward shuffle here must agree bit-for-bit with
:func:`halfhex.shuffle.shuffle_forward` driven by a
:class:`halfhex.rng.BitStream`; ``tests/test_shuffle.py`` checks this.
States live in a square int64 array ``G`` where row ``r`` uses columns
``0..r``.
"""
from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _word(key, step, row, block):
    z = _mix64((np.uint64(key) ^ np.uint64(step)) + _GOLDEN)
    z = _mix64((z ^ np.uint64(row)) + _GOLDEN)
    return _mix64((z ^ np.uint64(block)) + _GOLDEN)


@njit(cache=True)
def shuffle_steps(G, start, stop, key):
    """Advance ``G`` in place from order ``start`` to order ``stop``."""
    key = np.uint64(key)
    one = np.uint64(1)
    for k in range(start, stop):
        for i in range(k + 1):
            w = np.uint64(0)
            for j in range(i + 1):
                if (j & 63) == 0:
                    w = _word(key, k, i, j >> 6)
                v = G[i, j]
                if j < i and v == G[i - 1, j]:
                    continue
                if j > 0 and v == G[i - 1, j - 1]:
                    G[i, j] = v + 1
                else:
                    G[i, j] = v + np.int64((w >> np.uint64(j & 63)) & one)
        for j in range(k + 2):
            G[k + 1, j] = 2 * j + 1


@njit(cache=True)
def sample_key(n, key):
    G = np.zeros((n + 1, n + 1), dtype=np.int64)
    G[0, 0] = 1
    shuffle_steps(G, 0, n, key)
    return G


@njit(cache=True)
def accumulate_density(n, keys, out):
    """Add particle counts of one sample per key into ``out[row, position]``."""
    G = np.zeros((n + 1, n + 1), dtype=np.int64)
    for m in range(keys.shape[0]):
        G[:, :] = 0
        G[0, 0] = 1
        shuffle_steps(G, 0, n, keys[m])
        for r in range(n + 1):
            for j in range(r + 1):
                out[r, G[r, j]] += 1


@njit(cache=True)
def sample_codes(n, keys):
    """Flattened states, one row per key."""
    count = keys.shape[0]
    width = (n + 1) * (n + 2) // 2
    out = np.empty((count, width), dtype=np.int64)
    G = np.zeros((n + 1, n + 1), dtype=np.int64)
    for m in range(count):
        G[:, :] = 0
        G[0, 0] = 1
        shuffle_steps(G, 0, n, keys[m])
        c = 0
        for r in range(n + 1):
            for j in range(r + 1):
                out[m, c] = G[r, j]
                c += 1
    return out

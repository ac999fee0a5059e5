"""Addressable fair bits.

Every coin used by the shuffles is looked up by its address
``(seed, stream, step, row, col)`` instead of being drawn in sequence, so a
forward trace, a reverse trace and the Aztec co-simulation can all be made to
read exactly the same coins.

Generator contract ``splitmix64-addr/v1``: the address is folded through the
SplitMix64 finaliser one component at a time; each 64-bit word covers 64
consecutive columns of one row.  The numba kernels in :mod:`halfhex._kernels`
reimplement the same function and are tested against this one.
"""
from __future__ import annotations

from collections.abc import Mapping

RNG_NAME = "splitmix64-addr/v1"

MASK = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def stream_key(seed: int, stream: int = 0) -> int:
    z = mix64((seed & MASK) + GOLDEN)
    return mix64(((z ^ (stream & MASK)) + GOLDEN) & MASK)


def word(key: int, step: int, row: int, block: int) -> int:
    z = mix64(((key ^ (step & MASK)) + GOLDEN) & MASK)
    z = mix64(((z ^ (row & MASK)) + GOLDEN) & MASK)
    return mix64(((z ^ (block & MASK)) + GOLDEN) & MASK)


class BitStream:
    """Fair bits addressed by ``(step, row, col)`` for one ``(seed, stream)``."""

    def __init__(self, seed: int, stream: int = 0):
        if not 0 <= seed <= MASK:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self.stream = stream
        self.key = stream_key(seed, stream)
        self._cache: dict[tuple[int, int, int], int] = {}

    def bit(self, step: int, row: int, col: int) -> int:
        addr = (step, row, col >> 6)
        w = self._cache.get(addr)
        if w is None:
            if len(self._cache) > 4096:
                self._cache.clear()
            w = self._cache[addr] = word(self.key, *addr)
        return (w >> (col & 63)) & 1

    def substream(self, stream: int) -> "BitStream":
        return BitStream(self.seed, stream)

    def __repr__(self) -> str:
        return f"BitStream(seed={self.seed}, stream={self.stream})"


class FixedBits:
    """Explicit bits for tests and hand traces; the step is ignored.

    Missing addresses raise ``KeyError`` unless ``default`` is given, so a
    test fails loudly if the algorithm consumes a coin it was not expected to.
    """

    def __init__(self, bits: Mapping[tuple[int, int], int], default: int | None = None):
        self.bits = dict(bits)
        self.default = default
        self.used: list[tuple[int, int]] = []

    def bit(self, step: int, row: int, col: int) -> int:
        self.used.append((row, col))
        if (row, col) in self.bits:
            return self.bits[(row, col)]
        if self.default is None:
            raise KeyError((row, col))
        return self.default


class StepBits:
    """Bits keyed by the full ``(step, row, col)`` address."""

    def __init__(self, bits: Mapping[tuple[int, int, int], int]):
        self.bits = dict(bits)

    def bit(self, step: int, row: int, col: int) -> int:
        return self.bits[(step, row, col)]

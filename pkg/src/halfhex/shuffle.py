"""Domino shuffling on staircase tableaux.

``shuffle_forward`` grows a state of order ``n`` into one of order ``n + 1``:
rows are visited top to bottom, each entry either stays or steps right by
one.  A move is *forced* when the freshly written row above leaves only one
legal value, otherwise it is *free* and reads one fair coin.
``shuffle_reverse`` is the time reversal (order ``n + 1`` to ``n``, rows
bottom to top, entries stay or step left).

Exact transition probabilities are ``2**-(number of free moves)`` along the
unique forced/free decomposition, which makes the uniformity and
adjointness checks pure rational arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Literal, NamedTuple, Protocol

import numpy as np

from . import _kernels
from .enumeration import enumerate_states
from .rng import BitStream, stream_key
from .tableau import StaircaseTableau, bottom_row, check, flat_index

MoveKind = Literal["stay", "push", "free"]


class Bits(Protocol):
    def bit(self, step: int, row: int, col: int) -> int: ...


class Move(NamedTuple):
    row: int
    col: int
    kind: MoveKind
    delta: int


# --- single steps ------------------------------------------------------------

def _forward_rule(g_ij: int, i: int, j: int, above: tuple[int, ...] | list[int]):
    """Forced value for entry (i, j), or None when the move is free."""
    if j < i and g_ij == above[j]:
        return g_ij
    if j > 0 and g_ij == above[j - 1]:
        return g_ij + 1
    return None


def _reverse_rule(g_ij: int, j: int, below: tuple[int, ...] | list[int]):
    if g_ij == below[j]:
        return g_ij
    if g_ij == below[j + 1]:
        return g_ij - 1
    return None


def shuffle_forward(t: StaircaseTableau, bits: Bits, log: list[Move] | None = None
                    ) -> StaircaseTableau:
    """One forward shuffle; ``bits.bit(n, i, j)`` supplies the coin for entry (i, j).

    When ``log`` is a list, one :class:`Move` per entry is appended to it.
    """
    check(t)
    n = t.order
    h: list[tuple[int, ...]] = []
    for i, row in enumerate(t.rows):
        new = []
        for j, v in enumerate(row):
            forced = _forward_rule(v, i, j, h[i - 1]) if i else None
            if forced is None:
                out, kind = v + bits.bit(n, i, j), "free"
            else:
                out, kind = forced, ("stay" if forced == v else "push")
            new.append(out)
            if log is not None:
                log.append(Move(i, j, kind, out - v))
        h.append(tuple(new))
    h.append(bottom_row(n + 1))
    out_t = StaircaseTableau(h)
    assert check(out_t)
    return out_t


def shuffle_reverse(t: StaircaseTableau, bits: Bits, log: list[Move] | None = None
                    ) -> StaircaseTableau:
    """Time-reversed shuffle from order ``n + 1`` down to ``n``."""
    check(t)
    if t.order == 0:
        raise ValueError("cannot reverse-shuffle the order-0 state")
    n = t.order - 1
    h: list[tuple[int, ...]] = [()] * (n + 1)
    h[n] = bottom_row(n)
    for i in range(n - 1, -1, -1):
        new = []
        for j in range(i + 1):
            v = t.rows[i][j]
            forced = _reverse_rule(v, j, h[i + 1])
            if forced is None:
                out, kind = v - bits.bit(n + 1, i, j), "free"
            else:
                out, kind = forced, ("stay" if forced == v else "push")
            new.append(out)
            if log is not None:
                log.append(Move(i, j, kind, out - v))
        h[i] = tuple(new)
    out_t = StaircaseTableau(h)
    assert check(out_t)
    return out_t


# --- sampling ---------------------------------------------------------------

def sample_reference(n: int, bits: Bits) -> StaircaseTableau:
    """Iterate :func:`shuffle_forward` from the order-0 state in pure Python."""
    t = StaircaseTableau([(1,)])
    for _ in range(n):
        t = shuffle_forward(t, bits)
    return t


def sample_array(n: int, seed: int, stream: int = 0) -> np.ndarray:
    """Uniform state of order ``n`` as a square array (row r in columns 0..r)."""
    if n < 0:
        raise ValueError("order must be non-negative")
    return _kernels.sample_key(n, np.uint64(stream_key(seed, stream)))


def sample(n: int, seed: int, stream: int = 0) -> StaircaseTableau:
    """Exactly uniform element of ST(n).

    Same coins as ``sample_reference(n, BitStream(seed, stream))``.
    """
    G = sample_array(n, seed, stream)
    return StaircaseTableau(G[r, : r + 1].tolist() for r in range(n + 1))


def sample_many(n: int, count: int, seed: int, first_stream: int = 0) -> np.ndarray:
    """``count`` independent samples, flattened row-major; sample ``m`` uses stream ``first_stream + m``."""
    return _kernels.sample_codes(n, stream_keys(seed, first_stream, count))


def stream_keys(seed: int, first_stream: int, count: int) -> np.ndarray:
    return np.array([stream_key(seed, first_stream + m) for m in range(count)], dtype=np.uint64)


# --- exact probabilities ----------------------------------------------------

def forward_probability(src: StaircaseTableau, dst: StaircaseTableau) -> Fraction:
    check(src)
    check(dst)
    if dst.order != src.order + 1:
        raise ValueError("target must have order one larger than the source")
    free = 0
    for i, row in enumerate(src.rows):
        for j, v in enumerate(row):
            target = dst.rows[i][j]
            forced = _forward_rule(v, i, j, dst.rows[i - 1]) if i else None
            if forced is None:
                if target - v not in (0, 1):
                    return Fraction(0)
                free += 1
            elif forced != target:
                return Fraction(0)
    return Fraction(1, 2 ** free)


def reverse_probability(src: StaircaseTableau, dst: StaircaseTableau) -> Fraction:
    """Probability that the reverse shuffle maps ``src`` (order n+1) to ``dst`` (order n)."""
    check(src)
    check(dst)
    if dst.order + 1 != src.order:
        raise ValueError("target must have order one smaller than the source")
    n = dst.order
    free = 0
    for i in range(n - 1, -1, -1):
        for j in range(i + 1):
            v, target = src.rows[i][j], dst.rows[i][j]
            forced = _reverse_rule(v, j, dst.rows[i + 1])
            if forced is None:
                if v - target not in (0, 1):
                    return Fraction(0)
                free += 1
            elif forced != target:
                return Fraction(0)
    return Fraction(1, 2 ** free)


def forward_distribution(src: StaircaseTableau) -> dict[StaircaseTableau, Fraction]:
    """All outcomes of one forward shuffle, branching only at free moves."""
    check(src)
    n = src.order
    cells = [(i, j) for i in range(n + 1) for j in range(i + 1)]
    out: dict[StaircaseTableau, Fraction] = {}

    def walk(k: int, h: list[list[int]], p: Fraction) -> None:
        if k == len(cells):
            t = StaircaseTableau([*h, bottom_row(n + 1)])
            out[t] = out.get(t, Fraction(0)) + p
            return
        i, j = cells[k]
        v = src.rows[i][j]
        if j == 0:
            h.append([])
        forced = _forward_rule(v, i, j, h[i - 1]) if i else None
        choices = [(forced, p)] if forced is not None else [(v, p / 2), (v + 1, p / 2)]
        for value, q in choices:
            h[i].append(value)
            walk(k + 1, h, q)
            h[i].pop()
        if j == 0:
            h.pop()

    walk(0, [], Fraction(1))
    return out


def reverse_distribution(src: StaircaseTableau) -> dict[StaircaseTableau, Fraction]:
    check(src)
    n = src.order - 1
    cells = [(i, j) for i in range(n - 1, -1, -1) for j in range(i + 1)]
    out: dict[StaircaseTableau, Fraction] = {}
    h: list[list[int]] = [[] for _ in range(n)] + [list(bottom_row(n))]

    def walk(k: int, p: Fraction) -> None:
        if k == len(cells):
            t = StaircaseTableau(h)
            out[t] = out.get(t, Fraction(0)) + p
            return
        i, j = cells[k]
        v = src.rows[i][j]
        forced = _reverse_rule(v, j, h[i + 1])
        choices = [(forced, p)] if forced is not None else [(v, p / 2), (v - 1, p / 2)]
        for value, q in choices:
            h[i].append(value)
            walk(k + 1, q)
            h[i].pop()

    walk(0, Fraction(1))
    return out


@dataclass
class TransitionMatrix:
    """Sparse exact kernel from ST(n-1) (rows) to ST(n) (columns)."""

    order: int
    sources: list[StaircaseTableau]
    targets: list[StaircaseTableau]
    entries: dict[tuple[int, int], Fraction] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.entries.get(key, Fraction(0))

    def row_sums(self) -> list[Fraction]:
        sums = [Fraction(0)] * len(self.sources)
        for (a, _), p in self.entries.items():
            sums[a] += p
        return sums

    def left_multiply(self, mu: list[Fraction]) -> list[Fraction]:
        out = [Fraction(0)] * len(self.targets)
        for (a, b), p in self.entries.items():
            out[b] += mu[a] * p
        return out

    def to_dense(self) -> list[list[Fraction]]:
        dense = [[Fraction(0)] * len(self.targets) for _ in self.sources]
        for (a, b), p in self.entries.items():
            dense[a][b] = p
        return dense


def transition_matrix(n: int) -> TransitionMatrix:
    """Exact forward kernel ST(n-1) -> ST(n)."""
    if n < 1:
        raise ValueError("order must be at least 1")
    sources, targets = enumerate_states(n - 1), enumerate_states(n)
    index = {t: k for k, t in enumerate(targets)}
    m = TransitionMatrix(n, sources, targets)
    for a, src in enumerate(sources):
        for dst, p in forward_distribution(src).items():
            m.entries[(a, index[dst])] = p
    return m


def reverse_transition_matrix(n: int) -> TransitionMatrix:
    """Exact reverse kernel ST(n) -> ST(n-1), stored with ST(n) as sources."""
    if n < 1:
        raise ValueError("order must be at least 1")
    sources, targets = enumerate_states(n), enumerate_states(n - 1)
    index = {t: k for k, t in enumerate(targets)}
    m = TransitionMatrix(n, sources, targets)
    for a, src in enumerate(sources):
        for dst, p in reverse_distribution(src).items():
            m.entries[(a, index[dst])] = p
    return m


# --- verifiers --------------------------------------------------------------

@dataclass
class Verdict:
    ok: bool
    detail: str = ""
    data: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


MAX_VERIFY_ORDER = 4  # exact kernels ST(4) -> ST(5) already take minutes


def verify_adjointness(n: int) -> Verdict:
    """Check P(pi -> pi') = 2**-n * P'(pi' -> pi) for all pi in ST(n-1), pi' in ST(n)."""
    if not 1 <= n <= MAX_VERIFY_ORDER:
        raise ValueError(f"order must be in 1..{MAX_VERIFY_ORDER}")
    fwd = transition_matrix(n)
    rev = reverse_transition_matrix(n)
    scale = Fraction(1, 2 ** n)
    pairs = {(a, b) for a, b in fwd.entries} | {(a, b) for b, a in rev.entries}
    for a, b in sorted(pairs):
        lhs, rhs = fwd[a, b], scale * rev[b, a]
        if lhs != rhs:
            return Verdict(False, f"pair {fwd.sources[a]} -> {fwd.targets[b]}: {lhs} != {rhs}")
    bad_rows = [k for k, s in enumerate(fwd.row_sums()) if s != 1]
    if bad_rows:
        return Verdict(False, f"forward row {bad_rows[0]} does not sum to 1")
    return Verdict(True, f"{len(fwd.sources)}x{len(fwd.targets)} pairs, {len(pairs)} non-zero",
                   {"pairs_checked": len(fwd.sources) * len(fwd.targets),
                    "nonzero": len(pairs)})


def verify_uniform_preservation(n: int) -> Verdict:
    """uniform(ST(n-1)) * P == uniform(ST(n)), exactly.

    Also re-derives ``|ST(n)| / |ST(n-1)|`` from the common column mass.
    """
    if not 1 <= n <= MAX_VERIFY_ORDER:
        raise ValueError(f"order must be in 1..{MAX_VERIFY_ORDER}")
    m = transition_matrix(n)
    sums = m.row_sums()
    if any(s != 1 for s in sums):
        k = next(k for k, s in enumerate(sums) if s != 1)
        return Verdict(False, f"row {k} sums to {sums[k]}")
    size = len(m.sources)
    mu = m.left_multiply([Fraction(1, size)] * size)
    target = Fraction(1, len(m.targets))
    deviation = max(abs(p - target) for p in mu)
    if deviation:
        return Verdict(False, f"max deviation {deviation}", {"max_deviation": deviation})
    column_mass = [p * size for p in mu]
    ratio = 1 / column_mass[0]
    derived = size * ratio
    ok = ratio == 2 ** n and derived == len(m.targets)
    return Verdict(ok, f"|ST({n})| = {ratio} * |ST({n - 1})| = {derived}",
                   {"ratio": ratio, "derived_count": derived})


def trajectory(n: int, bits: Bits) -> Iterator[StaircaseTableau]:
    """States of orders 0..n visited by repeated forward shuffles."""
    t = StaircaseTableau([(1,)])
    yield t
    for _ in range(n):
        t = shuffle_forward(t, bits)
        yield t


def flat_state(t: StaircaseTableau) -> tuple[int, ...]:
    return tuple(v for row in t.rows for v in row)


def state_from_codes(codes, n: int) -> StaircaseTableau:
    return StaircaseTableau(
        tuple(int(codes[flat_index(r, j)]) for j in range(r + 1)) for r in range(n + 1))


def default_bits(seed: int, stream: int = 0) -> BitStream:
    return BitStream(seed, stream)

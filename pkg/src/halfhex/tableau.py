"""Staircase tableaux and their Gelfand-Tsetlin shifts.

A state of order ``n`` is a triangular array ``g`` with rows ``r = 0..n``
(top to bottom); row ``r`` holds ``r + 1`` strictly increasing positions.
The bottom row is frozen at ``(1, 3, ..., 2n + 1)`` and adjacent rows
interlace::

    g[r+1][j] <= g[r][j] < g[r+1][j+1]

Everything here is 0-indexed.  Subtracting ``j + 1`` from each entry gives a
Gelfand-Tsetlin pattern whose bottom row is ``(0, 1, ..., n)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class TableauError(ValueError):
    """Base class for invalid staircase states."""


class ShapeError(TableauError):
    """Rows have the wrong lengths (row r must hold r + 1 entries)."""


class InterlacingError(TableauError):
    """Shape is fine but an order or boundary constraint is violated."""


Rows = tuple[tuple[int, ...], ...]


def _freeze(rows: Iterable[Iterable[int]]) -> Rows:
    return tuple(tuple(int(v) for v in row) for row in rows)


def bottom_row(n: int) -> tuple[int, ...]:
    return tuple(2 * j + 1 for j in range(n + 1))


@dataclass(frozen=True, slots=True)
class StaircaseTableau:
    rows: Rows

    def __init__(self, rows: Iterable[Iterable[int]]):
        object.__setattr__(self, "rows", _freeze(rows))

    @property
    def order(self) -> int:
        return len(self.rows) - 1

    def __getitem__(self, rj: tuple[int, int]) -> int:
        r, j = rj
        return self.rows[r][j]

    def to_list(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    @classmethod
    def from_list(cls, rows: Sequence[Sequence[int]]) -> "StaircaseTableau":
        t = cls(rows)
        check(t)
        return t

    def __str__(self) -> str:
        return " / ".join(" ".join(map(str, row)) for row in self.rows)


@dataclass(frozen=True, slots=True)
class GTPattern:
    rows: Rows

    def __init__(self, rows: Iterable[Iterable[int]]):
        object.__setattr__(self, "rows", _freeze(rows))

    @property
    def order(self) -> int:
        return len(self.rows) - 1


def minimal(n: int) -> StaircaseTableau:
    """The state with every entry at its floor, ``g[r][j] = 2j + 1``."""
    return StaircaseTableau(bottom_row(r) for r in range(n + 1))


def maximal(n: int) -> StaircaseTableau:
    """Every entry at its ceiling, ``g[r][j] = 2j + 1 + (n - r)``."""
    return StaircaseTableau(
        tuple(2 * j + 1 + n - r for j in range(r + 1)) for r in range(n + 1))


def _check_shape(rows: Rows) -> None:
    if len(rows) == 0:
        raise ShapeError("a staircase state needs at least one row")
    for r, row in enumerate(rows):
        if len(row) != r + 1:
            raise ShapeError(f"row {r} has {len(row)} entries, expected {r + 1}")


def _first_violation(rows: Rows) -> str | None:
    n = len(rows) - 1
    if rows[n] != bottom_row(n):
        return f"bottom row {rows[n]} is not {bottom_row(n)}"
    for r, row in enumerate(rows):
        for j, v in enumerate(row):
            if not 1 <= v <= 2 * n + 1:
                return f"g[{r}][{j}] = {v} outside [1, {2 * n + 1}]"
            if j and row[j - 1] >= v:
                return f"row {r} not strictly increasing at {j}"
    for r in range(n):
        up, down = rows[r], rows[r + 1]
        for j in range(r + 1):
            if not down[j] <= up[j] < down[j + 1]:
                return (f"interlacing fails at ({r}, {j}): "
                        f"{down[j]} <= {up[j]} < {down[j + 1]}")
    return None


def validate(t: StaircaseTableau) -> bool:
    """True iff ``t`` is a staircase tableau.

    Raises :class:`ShapeError` when the rows do not even have staircase shape;
    order violations just return ``False``.
    """
    _check_shape(t.rows)
    return _first_violation(t.rows) is None


def check(t: StaircaseTableau) -> StaircaseTableau:
    """Like :func:`validate` but raises :class:`InterlacingError` with the reason."""
    _check_shape(t.rows)
    msg = _first_violation(t.rows)
    if msg is not None:
        raise InterlacingError(msg)
    return t


def to_gt(t: StaircaseTableau) -> GTPattern:
    check(t)
    return GTPattern(tuple(v - j - 1 for j, v in enumerate(row)) for row in t.rows)


def validate_gt(p: GTPattern) -> bool:
    rows = p.rows
    _check_shape(rows)
    n = len(rows) - 1
    if rows[n] != tuple(range(n + 1)):
        return False
    for r in range(n):
        up, down = rows[r], rows[r + 1]
        if any(not down[j] <= up[j] <= down[j + 1] for j in range(r + 1)):
            return False
    return True


def from_gt(p: GTPattern) -> StaircaseTableau:
    if not validate_gt(p):
        raise InterlacingError("not a Gelfand-Tsetlin pattern with bottom row (0..n)")
    return StaircaseTableau(tuple(v + j + 1 for j, v in enumerate(row)) for row in p.rows)


def volume(t: StaircaseTableau) -> int:
    """Number of unit boxes above the minimal state.

    Sum over the non-bottom rows of the GT entries measured from their floor,
    ``sum(h[r][j] - j)``; zero exactly for :func:`minimal`.
    """
    gt = to_gt(t)
    return sum(h - j for row in gt.rows[:-1] for j, h in enumerate(row))


# --- flat array form, used by exhaustive enumeration ------------------------

def flat_index(r: int, j: int) -> int:
    return r * (r + 1) // 2 + j


def to_flat(t: StaircaseTableau) -> np.ndarray:
    return np.fromiter((v for row in t.rows for v in row), dtype=np.int64)


def from_flat(a: Sequence[int], n: int) -> StaircaseTableau:
    return StaircaseTableau(
        tuple(int(a[flat_index(r, j)]) for j in range(r + 1)) for r in range(n + 1))


def validate_many(states: np.ndarray, n: int) -> np.ndarray:
    """Vectorised :func:`validate` over rows of a ``(count, (n+1)(n+2)/2)`` array."""
    states = np.asarray(states)
    ok = np.ones(len(states), dtype=bool)
    for j in range(n + 1):
        ok &= states[:, flat_index(n, j)] == 2 * j + 1
    for r in range(n):
        for j in range(r + 1):
            v = states[:, flat_index(r, j)]
            ok &= states[:, flat_index(r + 1, j)] <= v
            ok &= v < states[:, flat_index(r + 1, j + 1)]
            ok &= (v >= 1) & (v <= 2 * n + 1)
            if j:
                ok &= states[:, flat_index(r, j - 1)] < v
    return ok

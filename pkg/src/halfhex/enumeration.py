"""Exhaustive enumeration and closed-form counts.

Three independent routes to ``|ST(n)| = 2**(n(n+1)/2)``:

* brute force over staircase tableaux (:func:`state_array`, :func:`iter_states`),
* the binomial determinant for non-intersecting lattice paths,
* the Schur staircase product ``prod_{i<j} (x_i + x_j)`` at ``x = 1``.

The q-enumeration pairs the volume statistic with the principal
specialisation ``x_i -> q**i`` of the same product.
"""
from __future__ import annotations

import csv
import itertools
from fractions import Fraction
from math import comb, prod
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .tableau import StaircaseTableau, bottom_row, flat_index, volume

MAX_ENUMERATION_ORDER = 6


def _guard(n: int, limit: int = MAX_ENUMERATION_ORDER) -> None:
    if n < 0:
        raise ValueError("order must be non-negative")
    if n > limit:
        raise ValueError(f"order {n} too large to enumerate (limit {limit})")


def state_array(n: int) -> np.ndarray:
    """All states of order ``n`` as rows of a flat int16 array, lexicographic.

    Entries are laid out row-major (``flat_index``); built bottom-up by
    expanding each entry over its interlacing window.
    """
    _guard(n)
    width = (n + 1) * (n + 2) // 2
    a = np.zeros((1, width), dtype=np.int16)
    for j, v in enumerate(bottom_row(n)):
        a[0, flat_index(n, j)] = v
    for r in range(n - 1, -1, -1):
        for j in range(r + 1):
            lo = a[:, flat_index(r + 1, j)].astype(np.int64)
            hi = a[:, flat_index(r + 1, j + 1)].astype(np.int64) - 1
            counts = hi - lo + 1
            starts = np.cumsum(counts) - counts
            a = np.repeat(a, counts, axis=0)
            offs = np.arange(len(a)) - np.repeat(starts, counts)
            a[:, flat_index(r, j)] = np.repeat(lo, counts) + offs
    order = np.lexsort(a.T[::-1])
    return a[order]


def iter_states(n: int) -> Iterator[StaircaseTableau]:
    """Depth-first generator over ST(n); independent of :func:`state_array`."""
    _guard(n)

    def rows_above(below: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        ranges = [range(below[j], below[j + 1]) for j in range(len(below) - 1)]
        return itertools.product(*ranges)

    def build(stack: list[tuple[int, ...]]) -> Iterator[list[tuple[int, ...]]]:
        if len(stack[-1]) == 1:
            yield stack
            return
        for row in rows_above(stack[-1]):
            yield from build(stack + [row])

    for stack in build([bottom_row(n)]):
        yield StaircaseTableau(reversed(stack))


def enumerate_states(n: int) -> list[StaircaseTableau]:
    """All of ST(n), lexicographically sorted by rows (top row first)."""
    a = state_array(n)
    interned: dict[tuple[int, ...], tuple[int, ...]] = {}
    out = []
    for flat in a.tolist():
        rows = []
        for r in range(n + 1):
            row = tuple(flat[flat_index(r, 0): flat_index(r, 0) + r + 1])
            rows.append(interned.setdefault(row, row))
        out.append(StaircaseTableau(rows))
    return out


def count_closed(n: int) -> int:
    if n < 0:
        raise ValueError("order must be non-negative")
    return 2 ** (n * (n + 1) // 2)


# --- lattice paths and the binomial determinant ---------------------------

def bareiss_det(m: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [list(map(int, row)) for row in m]
    k = len(a)
    if k == 0:
        return 1
    sign, prev = 1, 1
    for c in range(k - 1):
        if a[c][c] == 0:
            swap = next((r for r in range(c + 1, k) if a[r][c] != 0), None)
            if swap is None:
                return 0
            a[c], a[swap] = a[swap], a[c]
            sign = -sign
        for r in range(c + 1, k):
            for s in range(c + 1, k):
                a[r][s] = (a[r][s] * a[c][c] - a[r][c] * a[c][s]) // prev
        prev = a[c][c]
    return sign * a[-1][-1]


def _check_increasing(xs: Sequence[int]) -> None:
    if any(x <= 0 for x in xs):
        raise ValueError("start offsets must be positive")
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("start offsets must be strictly increasing")


def nilp_count_determinant(xs: Sequence[int]) -> int:
    """``det[C(x_i, j)]``: non-intersecting paths (0, -x_i) -> (i, -i)."""
    _check_increasing(xs)
    n = len(xs)
    return bareiss_det([[comb(x, j) for j in range(1, n + 1)] for x in xs])


def vandermonde_ratio(xs: Sequence[int]) -> Fraction:
    """``prod_{i<j} (x_j - x_i) / (j - i)`` exactly as commonly printed.

    On its own this is *not* the path count; multiply by
    :func:`vandermonde_correction` to recover the determinant.
    """
    _check_increasing(xs)
    n = len(xs)
    return prod((Fraction(xs[j] - xs[i], j - i)
                 for i in range(n) for j in range(i + 1, n)), start=Fraction(1))


def vandermonde_correction(xs: Sequence[int]) -> Fraction:
    return prod((Fraction(x, i) for i, x in enumerate(xs, start=1)), start=Fraction(1))


def nilp_count_product(xs: Sequence[int]) -> int:
    value = vandermonde_ratio(xs) * vandermonde_correction(xs)
    assert value.denominator == 1
    return int(value)


def monotone_paths(start: tuple[int, int], end: tuple[int, int]) -> Iterator[str]:
    """All R/U step strings from ``start`` to ``end``."""
    dx, dy = end[0] - start[0], end[1] - start[1]
    if dx < 0 or dy < 0:
        return
    for rights in itertools.combinations(range(dx + dy), dx):
        steps = ["U"] * (dx + dy)
        for k in rights:
            steps[k] = "R"
        yield "".join(steps)


def path_points(start: tuple[int, int], steps: str) -> list[tuple[int, int]]:
    x, y = start
    pts = [(x, y)]
    for s in steps:
        if s == "R":
            x += 1
        elif s == "U":
            y += 1
        else:
            raise ValueError(f"bad step {s!r}")
        pts.append((x, y))
    return pts


def nilp_families(xs: Sequence[int]) -> Iterator[tuple[str, ...]]:
    """Brute-force non-intersecting families from (0, -x_i) to (i, -i)."""
    _check_increasing(xs)
    n = len(xs)
    options = []
    for i, x in enumerate(xs, start=1):
        start, end = (0, -x), (i, -i)
        options.append([(p, frozenset(path_points(start, p))) for p in monotone_paths(start, end)])

    def extend(i: int, used: frozenset, chosen: tuple[str, ...]):
        if i == n:
            yield chosen
            return
        for steps, pts in options[i]:
            if used.isdisjoint(pts):
                yield from extend(i + 1, used | pts, chosen + (steps,))

    yield from extend(0, frozenset(), ())


def nilp_count_bruteforce(xs: Sequence[int]) -> int:
    return sum(1 for _ in nilp_families(xs))


# --- polynomials and the Schur product ------------------------------------

class Poly:
    """Dense integer polynomial in ``q``; ``coeffs[k]`` multiplies ``q**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[int] = (0,)):
        c = list(int(v) for v in coeffs) or [0]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def monomial(cls, k: int, coeff: int = 1) -> "Poly":
        return cls([0] * k + [coeff])

    def __add__(self, other):
        if isinstance(other, int):
            other = Poly([other])
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        return Poly([(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(m)])

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly([other * v for v in self.coeffs])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Poly([other])
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, q):
        return sum(c * q ** k for k, c in enumerate(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lowest_degree(self) -> int:
        return next((k for k, c in enumerate(self.coeffs) if c), 0)

    def shift(self, k: int) -> "Poly":
        if k >= 0:
            return Poly([0] * k + list(self.coeffs))
        if any(self.coeffs[:-k]):
            raise ValueError("shift would drop non-zero terms")
        return Poly(self.coeffs[-k:])

    def __repr__(self) -> str:
        return f"Poly({list(self.coeffs)})"


def schur_staircase_product(xs: Sequence):
    """``prod_{1 <= i < j <= len(xs)} (x_i + x_j)``.

    This is the staircase Schur polynomial in ``len(xs) = n + 1`` variables;
    ``xs`` may hold ints, Fractions or :class:`Poly` values.
    """
    out = 1
    for i, j in itertools.combinations(range(len(xs)), 2):
        out = (xs[i] + xs[j]) * out
    return out


def q_enumerate_closed(n: int) -> Poly:
    """Principal specialisation ``x_i -> q**i`` of the staircase product."""
    out = schur_staircase_product([Poly.monomial(i) for i in range(1, n + 2)])
    return out if isinstance(out, Poly) else Poly([out])


def q_enumerate_bruteforce(n: int) -> Poly:
    _guard(n, 5)
    coeffs: dict[int, int] = {}
    for t in iter_states(n):
        v = volume(t)
        coeffs[v] = coeffs.get(v, 0) + 1
    return Poly([coeffs.get(k, 0) for k in range(max(coeffs) + 1)])


def q_normalization(n: int) -> int:
    """Exponent ``c(n)`` with ``closed = q**c(n) * bruteforce``.

    Read off the lowest-degree term of the closed form (the brute force
    polynomial starts at ``q**0`` because the minimal state has volume 0).
    """
    return q_enumerate_closed(n).lowest_degree()


def write_counts_csv(path: str | Path, max_order: int) -> None:
    """Golden-file export: order, closed count, determinant, q-polynomial."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["order", "count_closed", "det_count", "q_shift", "q_coefficients"])
        for n in range(max_order + 1):
            det = nilp_count_determinant([2 * i for i in range(1, n + 1)])
            closed = q_enumerate_closed(n)
            c = closed.lowest_degree()
            w.writerow([n, count_closed(n), det, c,
                        " ".join(map(str, closed.shift(-c).coeffs))])

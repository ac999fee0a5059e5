"""Aztec-diamond particle dynamics, the half-diamond, and domino heights.

Particles: ``x(j, i)`` is particle ``i`` (1-based) on row ``j`` (1-based);
``AztecParticles.rows[j-1][i-1]`` stores it.  One step of the dynamics
moves every particle by its own fair coin ``gamma(t, j, i)`` and then
applies two corrections against the *previous* positions of row ``j - 1``:

* blocking: minus one when the tentative position equals ``x(j-1, i) + 1``;
* pushing: plus one when the tentative position equals ``x(j-1, i-1)``.

A new row ``t + 1`` is born at ``(1, 2, ..., t + 1)``.

Half-diamond.  Only rows ``j <= (t + 1) // 2`` are kept at time ``t``,
and at odd times ``t = 2m + 1`` row ``m + 1`` enters at the equally
spaced positions ``(2, 4, ..., 2m + 2)``.  Reading row ``j`` at time
``n + j`` (shift by the row index) and subtracting one gives the
half-hexagon state of order ``n``; see :func:`change_of_variables`.

Regions are sets of unit squares named by their lower-left corner.  Heights
live on square corners; walking an edge that no domino crosses changes the
height by +1 when the square on the left of the walk is even (``x + y``
even) and by -1 otherwise, a crossed edge changes it by -3 or +3.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator, Literal, Protocol

from .shuffle import transition_matrix
from .tableau import StaircaseTableau, check


class AztecError(ValueError):
    pass


class UntileableError(AztecError):
    """No consistent boundary height: the region has no domino tiling."""


class Bits(Protocol):
    def bit(self, step: int, row: int, col: int) -> int: ...


# --- particles ----------------------------------------------------------------

@dataclass(frozen=True)
class AztecParticles:
    time: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(int(v) for v in r) for r in self.rows))

    def x(self, j: int, i: int) -> int:
        return self.rows[j - 1][i - 1]

    @property
    def count(self) -> int:
        return sum(len(r) for r in self.rows)


def interlacing_violation(p: AztecParticles, bounds: bool = False) -> str | None:
    """First violated constraint, or None.

    Equal-time rows interlace as ``x(j-1, i-1) <= x(j, i) <= x(j-1, i)``.
    With ``bounds`` also check ``i <= x(j, i) <= i + t - j``, which holds
    for the unconstrained process only.
    """
    for j, row in enumerate(p.rows, start=1):
        if len(row) != j:
            return f"row {j} holds {len(row)} particles"
        if any(b <= a for a, b in zip(row, row[1:])):
            return f"row {j} not strictly increasing"
        if bounds:
            for i, v in enumerate(row, start=1):
                if not i <= v <= i + p.time - j:
                    return f"x({j},{i}) = {v} outside [{i}, {i + p.time - j}]"
        if j > 1:
            up = p.rows[j - 2]
            for i, v in enumerate(row, start=1):
                if i >= 2 and up[i - 2] > v:
                    return f"x({j - 1},{i - 1}) > x({j},{i})"
                if i <= j - 1 and v > up[i - 1]:
                    return f"x({j},{i}) > x({j - 1},{i})"
    return None


def aztec_initial() -> AztecParticles:
    return AztecParticles(1, ((1,),))


def ad_step(p: AztecParticles, gamma: Callable[[int, int, int], int],
            newborn: bool = True) -> AztecParticles:
    """Advance from time ``t`` to ``t + 1``.

    ``gamma(t + 1, j, i)`` supplies the coin of particle ``(j, i)``;
    ``newborn`` appends row ``t + 1`` at ``(1, ..., t + 1)``.
    """
    t = p.time
    out = []
    for j in range(1, len(p.rows) + 1):
        old = p.rows[j - 1]
        up = p.rows[j - 2] if j > 1 else ()
        new = []
        for i in range(1, j + 1):
            tent = old[i - 1] + gamma(t + 1, j, i)
            if i <= j - 1 and tent == up[i - 1] + 1:
                tent -= 1
            if i >= 2 and tent == up[i - 2]:
                tent += 1
            new.append(tent)
        out.append(tuple(new))
    if newborn:
        out.append(tuple(range(1, t + 2)))
    q = AztecParticles(t + 1, tuple(out))
    msg = interlacing_violation(q)
    if msg:
        raise AztecError(f"interlacing lost at time {t + 1}: {msg}")
    return q


def half_diamond_constraint(p: AztecParticles, m: int) -> AztecParticles:
    """At time ``2m + 1`` put row ``m + 1`` at ``(2, 4, ..., 2m + 2)``.

    The last entry ``2m + 2`` is the one forced by interlacing with row ``m``
    and the even spacing; rows below ``m + 1`` are dropped, and a missing row
    ``m + 1`` is created.
    """
    if p.time != 2 * m + 1:
        raise AztecError(f"constraint for m={m} applies at time {2 * m + 1}, not {p.time}")
    if len(p.rows) < m:
        raise AztecError(f"rows 1..{m} must exist at time {p.time}")
    rows = p.rows[:m] + (tuple(2 * i for i in range(1, m + 2)),)
    q = AztecParticles(p.time, rows)
    msg = interlacing_violation(q)
    if msg:
        raise AztecError(f"half-diamond constraint breaks interlacing: {msg}")
    return q


def half_diamond_initial() -> AztecParticles:
    return half_diamond_constraint(aztec_initial(), 0)


def half_diamond_step(p: AztecParticles, gamma: Callable[[int, int, int], int]) -> AztecParticles:
    """One shuffle of the half-diamond: time ``t`` to ``t + 1``."""
    t = p.time
    if len(p.rows) != (t + 1) // 2:
        raise AztecError(f"half-diamond at time {t} must have {(t + 1) // 2} rows")
    q = ad_step(p, gamma, newborn=False)
    if (t + 1) % 2:
        q = half_diamond_constraint(q, t // 2)
    return q


class AlignedBits:
    """Coins of the particle dynamics read from half-hexagon shuffle addresses.

    ``gamma(t, j, i)`` is the bit the shuffle from order ``t - j - 1`` uses
    for row ``j - 1``, column ``i - 1``.
    """

    def __init__(self, bits: Bits):
        self.bits = bits

    def __call__(self, t: int, j: int, i: int) -> int:
        return self.bits.bit(t - j - 1, j - 1, i - 1)


def half_diamond_trajectory(T: int, gamma: Callable[[int, int, int], int]) -> list[AztecParticles]:
    """Half-diamond states at times ``1..T``."""
    if T < 1:
        raise ValueError("time must be positive")
    traj = [half_diamond_initial()]
    while traj[-1].time < T:
        traj.append(half_diamond_step(traj[-1], gamma))
    return traj


def change_of_variables(traj: list[AztecParticles], n: int) -> StaircaseTableau:
    """Half-hexagon state of order ``n``: row ``r`` is ``x(r+1, .)`` at time ``n + r + 1``, minus one."""
    by_time = {p.time: p for p in traj}
    rows = []
    for r in range(n + 1):
        t = n + r + 1
        if t not in by_time or len(by_time[t].rows) <= r:
            raise AztecError(f"trajectory lacks row {r + 1} at time {t}")
        rows.append(tuple(v - 1 for v in by_time[t].rows[r]))
    return check(StaircaseTableau(rows))


def x_view(traj: list[AztecParticles]) -> list[StaircaseTableau]:
    """All half-hexagon states readable from a trajectory."""
    last = max(p.time for p in traj)
    return [change_of_variables(traj, n) for n in range((last - 1) // 2 + 1)]


def co_simulate(order: int, bits: Bits) -> tuple[list[StaircaseTableau], list[StaircaseTableau]]:
    """States of orders ``0..order`` from the shuffle and from the particle dynamics, same coins."""
    from .shuffle import trajectory

    direct = list(trajectory(order, bits))
    traj = half_diamond_trajectory(2 * order + 1, AlignedBits(bits))
    return direct, x_view(traj)


def x_view_kernel(n: int) -> dict[tuple[StaircaseTableau, StaircaseTableau], Fraction]:
    """Exact law of (state of order n - 1, state of order n) under the particle dynamics.

    The half-diamond is run to time ``2n + 1`` with every coin branched; the
    rows that make up the two states are recorded along the way.
    """
    if n < 1:
        raise ValueError("order must be at least 1")
    T = 2 * n + 1
    wanted = {}  # time -> [(which, row index r)]
    for which, k in ((0, n - 1), (1, n)):
        for r in range(k + 1):
            wanted.setdefault(k + r + 1, []).append((which, r))

    def record(p: AztecParticles, rec: tuple) -> tuple:
        rec = list(rec)
        for which, r in wanted.get(p.time, ()):
            rec[which] = rec[which] + ((r, tuple(v - 1 for v in p.rows[r])),)
        return tuple(rec)

    start = half_diamond_initial()
    dist: dict[tuple, Fraction] = {(start, record(start, ((), ()))): Fraction(1)}
    for _ in range(T - 1):
        nxt: dict[tuple, Fraction] = {}
        for (p, rec), w in dist.items():
            cells = [(j, i) for j in range(1, len(p.rows) + 1) for i in range(1, j + 1)]
            share = w / 2 ** len(cells)
            for mask in range(2 ** len(cells)):
                coins = {c: (mask >> k) & 1 for k, c in enumerate(cells)}
                q = half_diamond_step(p, lambda t, j, i: coins[(j, i)])
                key = (q, record(q, rec))
                nxt[key] = nxt.get(key, Fraction(0)) + share
        dist = nxt
    joint: dict[tuple[StaircaseTableau, StaircaseTableau], Fraction] = {}
    for (_, rec), w in dist.items():
        a, b = (StaircaseTableau(row for _, row in sorted(part)) for part in rec)
        joint[(a, b)] = joint.get((a, b), Fraction(0)) + w
    return joint


def compare_kernels(n: int) -> tuple[bool, str]:
    """Conditional X-view kernel against the exact shuffle matrix ST(n-1) -> ST(n)."""
    joint = x_view_kernel(n)
    marginal: dict[StaircaseTableau, Fraction] = {}
    for (a, _), w in joint.items():
        marginal[a] = marginal.get(a, Fraction(0)) + w
    m = transition_matrix(n)
    src = {t: k for k, t in enumerate(m.sources)}
    dst = {t: k for k, t in enumerate(m.targets)}
    if set(marginal) != set(src):
        return False, f"order {n - 1}: X-view visits {len(marginal)} of {len(src)} states"
    for a in m.sources:
        for b in m.targets:
            cond = joint.get((a, b), Fraction(0)) / marginal[a]
            if cond != m[src[a], dst[b]]:
                return False, f"{a} -> {b}: X-view {cond}, shuffle {m[src[a], dst[b]]}"
    return True, f"order {n - 1} -> {n}: {len(m.sources)}x{len(m.targets)} entries equal"


# --- regions -----------------------------------------------------------------

Square = tuple[int, int]
Phase = Literal["parity", "balanced"]


@dataclass(frozen=True)
class PlanarRegion:
    name: str
    order: int
    squares: frozenset[Square]
    predicate: Callable[[int, int], bool] | None = None

    def __contains__(self, sq: Square) -> bool:
        return sq in self.squares

    @property
    def area(self) -> int:
        return len(self.squares)


def in_aztec_diamond(n: int, x: int, y: int) -> bool:
    """Square ``[x, x+1] x [y, y+1]`` has its interior inside ``|x| + |y| < n + 1``."""
    return all(abs(cx) + abs(cy) <= n + 1 for cx in (x, x + 1) for cy in (y, y + 1))


def aztec_diamond(n: int) -> PlanarRegion:
    sq = frozenset((x, y) for x in range(-n - 1, n + 1) for y in range(-n - 1, n + 1)
                   if in_aztec_diamond(n, x, y))
    return PlanarRegion(f"A_{n}", n, sq, lambda x, y: in_aztec_diamond(n, x, y))


def _half_rule(n: int, phase: Phase) -> Callable[[int, int], bool]:
    # Over the open square the floors are constant, so test the lower-left corner.
    odd = n % 2 == 1 if phase == "parity" else ((n + 1) // 2) % 2 == 1
    if odd:
        return lambda x, y: y + 1 >= 2 * ((x + 1) // 2)
    return lambda x, y: y >= 2 * (x // 2)


def in_half_diamond(n: int, x: int, y: int, phase: Phase = "parity") -> bool:
    return in_aztec_diamond(n, x, y) and _half_rule(n, phase)(x, y)


def half_diamond(n: int, phase: Phase = "parity") -> PlanarRegion:
    """H_n.  ``phase="parity"`` applies the even/odd floor rule by the parity of ``n``.

    That rule cuts an unequal number of black and white squares when
    ``n % 4`` is 2 or 3; ``phase="balanced"`` picks the rule by the parity of
    ``(n + 1) // 2`` instead, which is tileable for every ``n``.
    """
    if phase not in ("parity", "balanced"):
        raise ValueError(f"unknown phase {phase!r}")
    rule = _half_rule(n, phase)
    sq = frozenset(s for s in aztec_diamond(n).squares if rule(*s))
    return PlanarRegion(f"H_{n}", n, sq, lambda x, y: in_aztec_diamond(n, x, y) and rule(x, y))


def region_membership(r: PlanarRegion, square: Square) -> bool:
    if r.predicate is not None:
        return bool(r.predicate(*square))
    return square in r.squares


def color_balance(r: PlanarRegion) -> int:
    """Even squares minus odd squares."""
    return sum(1 if (x + y) % 2 == 0 else -1 for x, y in r.squares)


# --- heights -----------------------------------------------------------------

Vertex = tuple[int, int]
Domino = tuple[Square, str]  # lower-left square, "h" or "v"


def _edge_squares(p: Vertex, q: Vertex) -> tuple[Square, Square]:
    """(left square, right square) when walking the unit edge p -> q."""
    (x, y), (u, w) = p, q
    if u == x + 1:
        return (x, y), (x, y - 1)
    if u == x - 1:
        return (u, y - 1), (u, y)
    if w == y + 1:
        return (x - 1, y), (x, y)
    return (x, y - 1), (x - 1, y - 1)


def _free_step(p: Vertex, q: Vertex) -> int:
    left, _ = _edge_squares(p, q)
    return 1 if (left[0] + left[1]) % 2 == 0 else -1


def _neighbours(v: Vertex) -> Iterator[Vertex]:
    x, y = v
    yield (x + 1, y)
    yield (x - 1, y)
    yield (x, y + 1)
    yield (x, y - 1)


def boundary_edges(r: PlanarRegion) -> set[frozenset[Vertex]]:
    out = set()
    for x, y in r.squares:
        for edge, other in (
                (((x, y), (x + 1, y)), (x, y - 1)),
                (((x, y + 1), (x + 1, y + 1)), (x, y + 1)),
                (((x, y), (x, y + 1)), (x - 1, y)),
                (((x + 1, y), (x + 1, y + 1)), (x + 1, y))):
            if other not in r.squares:
                out.add(frozenset(edge))
    return out


@dataclass
class HeightField:
    heights: dict[Vertex, int]

    def __getitem__(self, v: Vertex) -> int:
        return self.heights[v]

    def restrict(self, vertices: Iterable[Vertex]) -> dict[Vertex, int]:
        return {v: self.heights[v] for v in vertices}


def _propagate(edges: set[frozenset[Vertex]], step: Callable[[Vertex, Vertex], int],
               base: Vertex, base_value: int) -> dict[Vertex, int]:
    adj: dict[Vertex, list[Vertex]] = {}
    for e in edges:
        p, q = tuple(e)
        adj.setdefault(p, []).append(q)
        adj.setdefault(q, []).append(p)
    if not adj:
        return {}
    h: dict[Vertex, int] = {}
    for start in sorted(adj):
        if start in h:
            continue
        seed = base if base in adj and base not in h else start
        h[seed] = base_value
        queue = deque([seed])
        while queue:
            p = queue.popleft()
            for q in adj[p]:
                value = h[p] + step(p, q)
                if q not in h:
                    h[q] = value
                    queue.append(q)
                elif h[q] != value:
                    raise UntileableError(f"height at {q} is both {h[q]} and {value}")
    return h


def _base_vertex(r: PlanarRegion) -> Vertex:
    return min((x, y) for x, y in r.squares)


def boundary_height(r: PlanarRegion, base: Vertex | None = None, base_value: int = 0) -> HeightField:
    """Tiling-independent heights on the boundary, or :class:`UntileableError`.

    Every boundary edge is uncrossed; the walk must close consistently.  A
    region with more than one boundary component has each component pinned
    separately (no tiling information links them), so the check there is the
    closure of each loop plus the colour balance.
    """
    base = _base_vertex(r) if base is None else base
    h = HeightField(_propagate(boundary_edges(r), _free_step, base, base_value))
    if color_balance(r) != 0:
        raise UntileableError(f"{r.name}: colour imbalance {color_balance(r)}")
    return h


def validate_domino_tiling(r: PlanarRegion, dominoes: Iterable[Domino]) -> dict[Square, int]:
    """Map square -> domino index; raises on overlap, gaps or bad records."""
    owner: dict[Square, int] = {}
    for k, ((x, y), o) in enumerate(dominoes):
        if o not in ("h", "v"):
            raise AztecError(f"domino {k}: orientation must be 'h' or 'v'")
        for sq in ((x, y), (x + 1, y) if o == "h" else (x, y + 1)):
            if sq not in r.squares:
                raise AztecError(f"domino {k} leaves the region at {sq}")
            if sq in owner:
                raise AztecError(f"domino {k} overlaps domino {owner[sq]} at {sq}")
            owner[sq] = k
    if len(owner) != len(r.squares):
        raise AztecError(f"{len(r.squares) - len(owner)} squares uncovered")
    return owner


def height_of_tiling(r: PlanarRegion, dominoes: Iterable[Domino],
                     base: Vertex | None = None, base_value: int = 0) -> HeightField:
    """Heights at every corner of every square of ``r``."""
    owner = validate_domino_tiling(r, list(dominoes))

    def step(p: Vertex, q: Vertex) -> int:
        left, right = _edge_squares(p, q)
        s = _free_step(p, q)
        if left in owner and right in owner and owner[left] == owner[right]:
            return -3 * s
        return s

    edges = set()
    for x, y in r.squares:
        edges.update({frozenset({(x, y), (x + 1, y)}), frozenset({(x, y + 1), (x + 1, y + 1)}),
                      frozenset({(x, y), (x, y + 1)}), frozenset({(x + 1, y), (x + 1, y + 1)})})
    base = _base_vertex(r) if base is None else base
    try:
        return HeightField(_propagate(edges, step, base, base_value))
    except UntileableError as e:
        raise AztecError(f"not a tiling: {e}") from None


def tiling_from_height(r: PlanarRegion, h: HeightField) -> list[Domino]:
    """Recover the dominoes: interior edges whose height jumps by 3 are crossed."""
    out = []
    for x, y in sorted(r.squares):
        if (x + 1, y) in r.squares and abs(h[(x + 1, y)] - h[(x + 1, y + 1)]) == 3:
            out.append(((x, y), "h"))
        if (x, y + 1) in r.squares and abs(h[(x, y + 1)] - h[(x + 1, y + 1)]) == 3:
            out.append(((x, y), "v"))
    validate_domino_tiling(r, out)
    return out


def enumerate_domino_tilings(r: PlanarRegion) -> Iterator[list[Domino]]:
    """Brute force, lowest-leftmost free square first; small regions only."""
    squares = sorted(r.squares, key=lambda s: (s[1], s[0]))
    free = set(r.squares)
    chosen: list[Domino] = []

    def extend():
        first = next((s for s in squares if s in free), None)
        if first is None:
            yield list(chosen)
            return
        x, y = first
        for o, other in (("h", (x + 1, y)), ("v", (x, y + 1))):
            if other in free:
                free.difference_update({first, other})
                chosen.append((first, o))
                yield from extend()
                chosen.pop()
                free.update({first, other})

    yield from extend()


def write_tiling(path: str | Path, region: PlanarRegion, dominoes: Iterable[Domino]) -> None:
    doc = {"region": region.name, "order": region.order,
           "squares": sorted([list(s) for s in region.squares]),
           "dominoes": [[x, y, o] for (x, y), o in dominoes]}
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def read_tiling(path: str | Path) -> tuple[PlanarRegion, list[Domino]]:
    doc = json.loads(Path(path).read_text())
    region = PlanarRegion(doc.get("region", "custom"), int(doc.get("order", 0)),
                          frozenset((int(x), int(y)) for x, y in doc["squares"]))
    dominoes = [((int(x), int(y)), str(o)) for x, y, o in doc["dominoes"]]
    validate_domino_tiling(region, dominoes)
    return region, dominoes

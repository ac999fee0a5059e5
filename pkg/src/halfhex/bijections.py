"""The five equivalent pictures of a half-hexagon state and the maps between them.

Geometry is exact.  Points of the triangular lattice are integer pairs
``(a, b)`` meaning ``a*v + b*w`` with ``v = (1, 0)`` and ``w = (1/2, sqrt3/2)``.

Unit triangles::

    U(a, b) = {(a, b), (a+1, b), (a, b+1)}        points up
    D(a, b) = {(a+1, b), (a, b+1), (a+1, b+1)}    points down

Every lozenge contains exactly one up triangle, so a lozenge is named by
its kind and the anchor of that up triangle:

    ``"v"``   U(a, b) + D(a, b-1)  (shared edge along v; the particles)
    ``"wv"``  U(a, b) + D(a, b)    (shared edge along w - v)
    ``"w"``   U(a, b) + D(a-1, b)  (shared edge along w)

The region ``R_n`` is the trapezoid with corners ``-nv, nv, nw, n(w-v)``
plus ``n`` three-triangle notches hanging below its bottom edge.  Inside a
row of triangles (fixed ``b``) the triangles are ordered by the key
``2a`` (up) or ``2a + 1`` (down).

Particle ``(r, p)`` (tableau row ``r < n``, position ``p``) is the ``"v"``
lozenge anchored at ``(p - n - 1, n - 1 - r)``.  The tableau's bottom row
has no lozenge: it is the frozen boundary that shapes the notches.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Literal

from .tableau import InterlacingError, StaircaseTableau, bottom_row, check

Kind = Literal["v", "w", "wv"]
Tile = tuple[str, int, int]
Triangle = tuple[str, int, int]  # ("U" | "D", a, b)


class CompletionError(ValueError):
    """Vertical edges that admit no perfect matching (signals an interlacing bug)."""


class TilingError(ValueError):
    """Tiles overlap, leave holes, or stick out of the region."""


class PathError(ValueError):
    """A path family with wrong endpoints, wrong steps, or a collision."""


# --- the region --------------------------------------------------------------

@lru_cache(maxsize=64)
def region_rows(n: int) -> tuple[tuple[int, ...], ...]:
    """Triangle keys of R_n, one tuple per row ``b = -1..n-1`` (index ``b + 1``)."""
    if n < 0:
        raise ValueError("order must be non-negative")
    notch = tuple(k for c in range(-n + 1, n, 2) for k in (2 * c - 1, 2 * c, 2 * c + 1))
    full = tuple(tuple(range(-2 * n, 2 * (n - b - 1) + 1)) for b in range(n))
    return (notch,) + full


def key_triangle(key: int, b: int) -> Triangle:
    return ("D", (key - 1) // 2, b) if key & 1 else ("U", key // 2, b)


@lru_cache(maxsize=8)
def region_triangles(n: int) -> frozenset[Triangle]:
    return frozenset(key_triangle(k, b - 1)
                     for b, row in enumerate(region_rows(n)) for k in row)


def triangle_points(t: Triangle) -> frozenset[tuple[int, int]]:
    kind, a, b = t
    if kind == "U":
        return frozenset({(a, b), (a + 1, b), (a, b + 1)})
    return frozenset({(a + 1, b), (a, b + 1), (a + 1, b + 1)})


def tile_triangles(tile: Tile) -> tuple[Triangle, Triangle]:
    kind, a, b = tile
    if kind == "v":
        return ("U", a, b), ("D", a, b - 1)
    if kind == "wv":
        return ("U", a, b), ("D", a, b)
    if kind == "w":
        return ("U", a, b), ("D", a - 1, b)
    raise TilingError(f"unknown lozenge kind {kind!r}")


def tile_from_pair(up: Triangle, down: Triangle) -> Tile:
    _, a, b = up
    _, c, d = down
    if (c, d) == (a, b - 1):
        return ("v", a, b)
    if (c, d) == (a, b):
        return ("wv", a, b)
    if (c, d) == (a - 1, b):
        return ("w", a, b)
    raise TilingError(f"{up} and {down} are not adjacent")


def path_endpoints(n: int, i: int) -> tuple[tuple[float, float], tuple[float, float]]:
    """Images of (0, -2i) and (i, -i) in the (v, w) basis."""
    return (-n + 2 * i, -0.5), (-n, i - 0.5)


def path_point_to_lattice(n: int, x: int, y: int) -> tuple[int, float]:
    """Affine image of path point ``(x, y)``: Up becomes ``-v`` and Right becomes ``w - v``."""
    return -n - x - y, x - 0.5


# --- models -------------------------------------------------------------------

@dataclass(frozen=True)
class ParticleSystem:
    order: int
    particles: frozenset[tuple[int, int]]

    def rows(self) -> list[list[int]]:
        rows: list[list[int]] = [[] for _ in range(self.order + 1)]
        for r, p in self.particles:
            if not 0 <= r <= self.order:
                raise InterlacingError(f"particle row {r} outside 0..{self.order}")
            rows[r].append(p)
        return [sorted(row) for row in rows]


@dataclass(frozen=True)
class HalfHexMatching:
    """Vertical edges of a perfect matching of the dual honeycomb graph.

    ``(r, p)`` is the edge whose center sits at ``(p - n - 1/2) v + (n - 1 - r) w``;
    the rest of the matching is forced and produced by :meth:`completion`.
    """

    order: int
    vertical_edges: frozenset[tuple[int, int]]

    def center(self, edge: tuple[int, int]) -> tuple[int, int]:
        """Doubled (v, w) coordinates of the edge center."""
        r, p = edge
        n = self.order
        return 2 * p - 2 * n - 1, 2 * (n - 1 - r)

    def completion(self) -> list[tuple[Triangle, Triangle]]:
        return [tile_triangles(t) for t in _complete(self.order, self.vertical_edges)]


@dataclass(frozen=True)
class LozengeTiling:
    order: int
    tiles: frozenset[Tile]

    def counts(self) -> dict[str, int]:
        out = {"v": 0, "w": 0, "wv": 0}
        for kind, _, _ in self.tiles:
            out[kind] += 1
        return out


@dataclass(frozen=True)
class LatticePathFamily:
    """Path ``i`` (1-based, ``paths[i-1]``) runs from (0, -2i) to (i, -i) over R/U steps."""

    order: int
    paths: tuple[str, ...]

    def points(self, i: int) -> list[tuple[int, int]]:
        x, y = 0, -2 * i
        pts = [(x, y)]
        for s in self.paths[i - 1]:
            if s == "R":
                x += 1
            elif s == "U":
                y += 1
            else:
                raise PathError(f"bad step {s!r}")
            pts.append((x, y))
        return pts


# --- validity -------------------------------------------------------------

_DOWN_OFFSET = {"v": (0, -1), "wv": (0, 0), "w": (-1, 0)}


@lru_cache(maxsize=8)
def _region_anchors(n: int) -> tuple[frozenset, frozenset]:
    tris = region_triangles(n)
    return (frozenset((a, b) for k, a, b in tris if k == "U"),
            frozenset((a, b) for k, a, b in tris if k == "D"))


def validate_tiling(t: LozengeTiling) -> None:
    ups = {(a, b) for _, a, b in t.tiles}
    try:
        downs = {(a + _DOWN_OFFSET[k][0], b + _DOWN_OFFSET[k][1]) for k, a, b in t.tiles}
    except KeyError as e:
        raise TilingError(f"unknown lozenge kind {e.args[0]!r}") from None
    if len(ups) != len(t.tiles) or len(downs) != len(t.tiles):
        raise TilingError("two lozenges share a triangle")
    region_up, region_down = _region_anchors(t.order)
    if ups != region_up or downs != region_down:
        outside = sorted((ups - region_up) | (downs - region_down))
        if outside:
            raise TilingError(f"lozenge leaves the region at {outside[0]}")
        missing = sorted((region_up - ups) | (region_down - downs))
        raise TilingError(f"triangle at {missing[0]} uncovered")


def validate_paths(f: LatticePathFamily) -> None:
    n = f.order
    if len(f.paths) != n:
        raise PathError(f"expected {n} paths, got {len(f.paths)}")
    seen: set[tuple[int, int]] = set()
    for i in range(1, n + 1):
        steps = f.paths[i - 1]
        if steps.count("R") != i or steps.count("U") != i or len(steps) != 2 * i:
            raise PathError(f"path {i} must have {i} R and {i} U steps")
        pts = f.points(i)
        if seen.intersection(pts):
            raise PathError(f"path {i} meets an earlier path")
        seen.update(pts)


def validate_matching(m: HalfHexMatching) -> None:
    """Vertical edges must interlace and their completion must cover every vertex."""
    particles_to_st(matching_to_particles(m))
    covered = [tri for edge in m.completion() for tri in edge]
    if len(covered) != len(set(covered)) or set(covered) != region_triangles(m.order):
        raise CompletionError("completion is not a perfect matching")


# --- tableau <-> particles ------------------------------------------------

def st_to_particles(t: StaircaseTableau) -> ParticleSystem:
    check(t)
    return ParticleSystem(t.order, frozenset((r, p) for r, row in enumerate(t.rows) for p in row))


def particles_to_st(p: ParticleSystem) -> StaircaseTableau:
    rows = p.rows()
    if sum(len(r) for r in rows) != len(p.particles):
        raise InterlacingError("duplicate particles")
    return check(StaircaseTableau(rows))


# --- particles <-> matching -------------------------------------------------

def particles_to_matching(p: ParticleSystem) -> HalfHexMatching:
    particles_to_st(p)
    n = p.order
    m = HalfHexMatching(n, frozenset((r, q) for r, q in p.particles if r < n))
    _complete(n, m.vertical_edges)
    return m


def matching_to_particles(m: HalfHexMatching) -> ParticleSystem:
    n = m.order
    bottom = {(n, q) for q in bottom_row(n)}
    return ParticleSystem(n, frozenset(m.vertical_edges) | bottom)


def _complete(n: int, vertical: Iterable[tuple[int, int]]) -> list[Tile]:
    """Lozenges forced by the vertical edges, "v" tiles included."""
    removed: dict[int, set[int]] = {}
    tiles: list[Tile] = []
    for r, q in vertical:
        a, b = q - n - 1, n - 1 - r
        tiles.append(("v", a, b))
        removed.setdefault(b, set()).add(2 * a)
        removed.setdefault(b - 1, set()).add(2 * a + 1)
    for b1, row in enumerate(region_rows(n)):
        b = b1 - 1
        gone = removed.pop(b, ())
        rest = [k for k in row if k not in gone]
        if len(row) - len(rest) != len(gone):
            raise CompletionError(f"vertical edge outside row {b} of the region")
        if len(rest) & 1:
            raise CompletionError(f"odd number of free triangles in row {b}")
        for x, y in zip(rest[::2], rest[1::2]):
            if y != x + 1:
                raise CompletionError(f"row {b}: triangles {x} and {y} are not adjacent")
            tiles.append(("wv", x // 2, b) if x % 2 == 0 else ("w", (x + 1) // 2, b))
    if removed:
        raise CompletionError(f"vertical edge outside the region (rows {sorted(removed)})")
    return tiles


# --- matching <-> lozenges --------------------------------------------------

def matching_to_lozenges(m: HalfHexMatching) -> LozengeTiling:
    """Each matched edge of the dual graph becomes the lozenge it crosses."""
    return LozengeTiling(m.order, frozenset(tile_from_pair(u, d) for u, d in m.completion()))


def lozenges_to_matching(t: LozengeTiling) -> HalfHexMatching:
    validate_tiling(t)
    n = t.order
    return HalfHexMatching(n, frozenset((n - 1 - b, a + n + 1) for kind, a, b in t.tiles if kind == "v"))


# --- lozenges <-> paths -----------------------------------------------------

def lozenges_to_paths(t: LozengeTiling) -> LatticePathFamily:
    """Follow each path across "wv" (Up) and "v" (Right) lozenges."""
    validate_tiling(t)
    n = t.order
    tiles = t.tiles
    paths = []
    for i in range(1, n + 1):
        a, b = -n + 2 * i, -1
        steps = []
        while a > -n:
            if ("wv", a - 1, b) in tiles:
                steps.append("U")
                a -= 1
            elif ("v", a - 1, b + 1) in tiles:
                steps.append("R")
                a, b = a - 1, b + 1
            else:
                raise TilingError(f"path {i} stuck at ({a}, {b})")
        if b != i - 1:
            raise TilingError(f"path {i} ends at height {b}, expected {i - 1}")
        paths.append("".join(steps))
    return LatticePathFamily(n, tuple(paths))


def paths_to_lozenges(f: LatticePathFamily) -> LozengeTiling:
    """Path lozenges from the steps; the holes fill with "w" lozenges."""
    validate_paths(f)
    n = f.order
    tiles: set[Tile] = set()
    for i, steps in enumerate(f.paths, start=1):
        a, b = -n + 2 * i, -1
        for s in steps:
            if s == "U":
                tiles.add(("wv", a - 1, b))
                a -= 1
            else:
                tiles.add(("v", a - 1, b + 1))
                a, b = a - 1, b + 1
    used_up = {(a, b) for _, a, b in tiles}
    tiles.update(("w", a, b) for a, b in _region_anchors(n)[0] - used_up)
    t = LozengeTiling(n, frozenset(tiles))
    validate_tiling(t)
    return t


# --- composites ----------------------------------------------------------

def st_to_paths(t: StaircaseTableau) -> LatticePathFamily:
    return lozenges_to_paths(matching_to_lozenges(particles_to_matching(st_to_particles(t))))


def paths_to_st(f: LatticePathFamily) -> StaircaseTableau:
    return particles_to_st(matching_to_particles(lozenges_to_matching(paths_to_lozenges(f))))


def round_trip(t: StaircaseTableau) -> StaircaseTableau:
    """tableau -> particles -> matching -> lozenges -> paths and all the way back."""
    return paths_to_st(st_to_paths(t))


# --- brute-force oracles -------------------------------------------------

def _adjacency(n: int) -> dict[Triangle, list[Triangle]]:
    """Dual graph of R_n from shared triangle edges (two common vertices)."""
    tris = sorted(region_triangles(n))
    by_edge: dict[frozenset, list[Triangle]] = {}
    for tri in tris:
        pts = sorted(triangle_points(tri))
        for k in range(3):
            edge = frozenset(pts[:k] + pts[k + 1:])
            by_edge.setdefault(edge, []).append(tri)
    adj: dict[Triangle, list[Triangle]] = {tri: [] for tri in tris}
    for pair in by_edge.values():
        if len(pair) == 2:
            x, y = pair
            adj[x].append(y)
            adj[y].append(x)
    return adj


def enumerate_matchings(n: int) -> Iterator[frozenset[frozenset[Triangle]]]:
    """All perfect matchings of the dual graph of R_n by backtracking."""
    if n > 4:
        raise ValueError("brute-force matching enumeration is limited to order 4")
    adj = _adjacency(n)
    order = sorted(adj, key=lambda t: (t[2], 2 * t[1] + (t[0] == "D")))

    def extend(free: set[Triangle], chosen: list[frozenset[Triangle]]):
        if not free:
            yield frozenset(chosen)
            return
        first = next(t for t in order if t in free)
        for other in adj[first]:
            if other in free:
                free -= {first, other}
                chosen.append(frozenset({first, other}))
                yield from extend(free, chosen)
                chosen.pop()
                free |= {first, other}

    yield from extend(set(adj), [])


def enumerate_tilings(n: int) -> Iterator[LozengeTiling]:
    """All lozenge tilings of R_n, placing the three shapes directly."""
    if n > 4:
        raise ValueError("brute-force tiling enumeration is limited to order 4")
    region = region_triangles(n)
    order = sorted(region, key=lambda t: (t[2], 2 * t[1] + (t[0] == "D")))
    candidates: dict[Triangle, list[Tile]] = {t: [] for t in region}
    for tri in region:
        if tri[0] != "U":
            continue
        for kind in ("v", "w", "wv"):
            tile = (kind, tri[1], tri[2])
            if all(x in region for x in tile_triangles(tile)):
                for x in tile_triangles(tile):
                    candidates[x].append(tile)

    def extend(free: set[Triangle], chosen: list[Tile]):
        if not free:
            yield LozengeTiling(n, frozenset(chosen))
            return
        first = next(t for t in order if t in free)
        for tile in candidates[first]:
            cells = tile_triangles(tile)
            if all(c in free for c in cells):
                free.difference_update(cells)
                chosen.append(tile)
                yield from extend(free, chosen)
                chosen.pop()
                free.update(cells)

    yield from extend(set(region), [])


def enumerate_path_families(n: int) -> Iterator[LatticePathFamily]:
    from .enumeration import nilp_families

    for fam in nilp_families([2 * i for i in range(1, n + 1)]):
        yield LatticePathFamily(n, fam)


# --- JSON-ready dicts -----------------------------------------------------

def to_dict(obj) -> dict:
    if isinstance(obj, StaircaseTableau):
        return {"model": "tableau", "order": obj.order, "rows": obj.to_list()}
    if isinstance(obj, ParticleSystem):
        return {"model": "particles", "order": obj.order,
                "particles": [list(x) for x in sorted(obj.particles)]}
    if isinstance(obj, HalfHexMatching):
        return {"model": "matching", "order": obj.order,
                "vertical_edges": [list(x) for x in sorted(obj.vertical_edges)]}
    if isinstance(obj, LozengeTiling):
        return {"model": "lozenges", "order": obj.order,
                "tiles": [list(x) for x in sorted(obj.tiles)]}
    if isinstance(obj, LatticePathFamily):
        return {"model": "paths", "order": obj.order, "paths": list(obj.paths)}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def from_dict(d: dict):
    model, n = d["model"], int(d["order"])
    if model == "tableau":
        return StaircaseTableau.from_list(d["rows"])
    if model == "particles":
        p = ParticleSystem(n, frozenset((int(r), int(q)) for r, q in d["particles"]))
        particles_to_st(p)
        return p
    if model == "matching":
        m = HalfHexMatching(n, frozenset((int(r), int(q)) for r, q in d["vertical_edges"]))
        validate_matching(m)
        return m
    if model == "lozenges":
        t = LozengeTiling(n, frozenset((str(k), int(a), int(b)) for k, a, b in d["tiles"]))
        validate_tiling(t)
        return t
    if model == "paths":
        f = LatticePathFamily(n, tuple(d["paths"]))
        validate_paths(f)
        return f
    raise ValueError(f"unknown model {model!r}")


MODELS = ("tableau", "particles", "matching", "lozenges", "paths")


def convert(t: StaircaseTableau, model: str):
    """The tableau ``t`` in any of the five pictures."""
    if model == "tableau":
        return t
    p = st_to_particles(t)
    if model == "particles":
        return p
    m = particles_to_matching(p)
    if model == "matching":
        return m
    lz = matching_to_lozenges(m)
    if model == "lozenges":
        return lz
    if model == "paths":
        return lozenges_to_paths(lz)
    raise ValueError(f"unknown model {model!r}")


def to_tableau(obj) -> StaircaseTableau:
    if isinstance(obj, StaircaseTableau):
        return obj
    if isinstance(obj, LatticePathFamily):
        obj = paths_to_lozenges(obj)
    if isinstance(obj, LozengeTiling):
        obj = lozenges_to_matching(obj)
    if isinstance(obj, HalfHexMatching):
        obj = matching_to_particles(obj)
    if isinstance(obj, ParticleSystem):
        return particles_to_st(obj)
    raise TypeError(f"not a half-hexagon model: {type(obj).__name__}")

"""Limit shapes: the Aztec-diamond height formula and the empirical arctic curve.

Coordinates for the formula are the unit square ``[0, 1]^2``; the half
diamond is its lower half ``y < 1/2``.  With ``u = x - 1/2``,
``v = 1/2 - y`` and ``s = sqrt(1/4 - u^2 - v^2)``::

    Z = -(2/pi) * [ u * atan2(s, v) + atan(2uv / s) / 2 - v * atan(u / s) ]

Two things differ from the way the formula is usually typeset.  The first
arctangent is taken as ``atan2(s, v)``, which equals ``atan(s / v)`` for
``y < 1/2`` and continues it through ``y = 1/2``; and the overall sign is
negated.  Only with both changes does ``G = x + Z`` agree with the frozen
values ``x + y`` and ``x - y`` on the circle and equal ``1/2`` on the
middle line.  :func:`romik_Z_printed` keeps the typeset form for
comparison.

The empirical side samples half-hexagons, records how often each site
holds a particle, and reads off the frozen boundary row by row in the
trapezoid with corners ``(+-1, 0)`` and ``(+-1/2, sqrt3/2)``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Sequence

import numpy as np

from . import _kernels
from .shuffle import stream_keys

SQRT3 = math.sqrt(3.0)


class DomainError(ValueError):
    pass


# --- the formula -------------------------------------------------------------

def _uvs(x: float, y: float) -> tuple[float, float, float]:
    u, v = x - 0.5, 0.5 - y
    r2 = 0.25 - u * u - v * v
    if r2 <= 0:
        raise DomainError(f"({x}, {y}) is not inside the inscribed circle")
    return u, v, math.sqrt(r2)


def romik_Z(x: float, y: float) -> float:
    u, v, s = _uvs(x, y)
    return -(2 / math.pi) * (u * math.atan2(s, v) + 0.5 * math.atan(2 * u * v / s)
                              - v * math.atan(u / s))


def romik_Z_printed(x: float, y: float) -> float:
    """The typeset expression, undefined on ``y = 1/2``."""
    u, v, s = _uvs(x, y)
    if v == 0:
        raise DomainError("the typeset first term divides by zero at y = 1/2")
    return (2 / math.pi) * (u * math.atan(s / v) + 0.5 * math.atan(2 * u * v / s)
                            - v * math.atan(u / s))


def arctic_boundary(y: float) -> tuple[float, float]:
    if not 0 <= y <= 1:
        raise DomainError("y must lie in [0, 1]")
    w = math.sqrt(y * (1 - y))
    return 0.5 - w, 0.5 + w


def romik_G(x: float, y: float) -> float:
    """Limit height on ``[0, 1]^2``, continuous everywhere.

    Below the middle line the frozen values are ``x + y`` and ``x - y``;
    above it they continue as ``y - x`` and ``2 - x - y``.
    """
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise DomainError(f"({x}, {y}) outside the unit square")
    lo, hi = arctic_boundary(y)
    if lo < x < hi:
        if (x - 0.5) ** 2 + (y - 0.5) ** 2 < 0.25:
            return x + romik_Z(x, y)
        # on the circle up to rounding; fall through to the frozen value
    left = x <= 0.5
    if y <= 0.5:
        return x + y if left else x - y
    return y - x if left else 2 - x - y


# --- affine map to the trapezoid ----------------------------------------------

# (0, 0) -> (-1, 0), (1, 0) -> (1, 0), (0, 1/2) -> (-1/2, sqrt3/2)
AFFINE_MATRIX = np.array([[2.0, 1.0], [0.0, SQRT3]])
AFFINE_OFFSET = np.array([-1.0, 0.0])


def affine_to_trapezoid(p: Sequence[float]) -> np.ndarray:
    """Image of a point of ``[0, 1] x [0, 1/2]``.

    An affine map takes the rectangle to a parallelogram, so three corners
    land on trapezoid corners and the fourth, ``(1, 1/2)``, goes to
    ``(3/2, sqrt3/2)``.
    """
    return AFFINE_MATRIX @ np.asarray(p, dtype=float) + AFFINE_OFFSET


def affine_from_trapezoid(q: Sequence[float]) -> np.ndarray:
    return np.linalg.solve(AFFINE_MATRIX, np.asarray(q, dtype=float) - AFFINE_OFFSET)


# --- density ----------------------------------------------------------------

@dataclass
class DensityField:
    """``counts[r, p]``: samples with a particle at row ``r``, position ``p``."""

    order: int
    samples: int
    counts: np.ndarray
    seed: int | None = None

    @property
    def frequency(self) -> np.ndarray:
        return self.counts / self.samples

    def row(self, r: int) -> np.ndarray:
        """Frequencies at positions ``1..order + r + 1`` of row ``r``."""
        return self.frequency[r, 1: self.order + r + 2]

    def merge(self, other: "DensityField") -> "DensityField":
        if other.order != self.order:
            raise ValueError("orders differ")
        return DensityField(self.order, self.samples + other.samples, self.counts + other.counts)


def empirical_density(n: int, samples: int, seed: int, first_stream: int = 0) -> DensityField:
    """Particle frequencies over ``samples`` uniform states (streams ``first_stream, ...``)."""
    if n < 1 or samples < 1:
        raise ValueError("order and sample count must be positive")
    counts = np.zeros((n + 1, 2 * n + 2), dtype=np.int64)
    _kernels.accumulate_density(n, stream_keys(seed, first_stream, samples), counts)
    return DensityField(n, samples, counts, seed)


def site_to_trapezoid(n: int, r: int, p: float) -> tuple[float, float]:
    """Center of the particle lozenge at row ``r``, position ``p``, scaled by ``1/n``."""
    a, b = p - n - 1, n - 1 - r
    return (a + 0.5 + b / 2) / n, b * (SQRT3 / 2) / n


def frozen_boundary(d: DensityField, threshold: float = 0.05) -> list[tuple[float, float]]:
    """Points where the density first leaves a frozen plateau, scanning in from each end of each row.

    A site is frozen when its frequency is within ``threshold`` of 0 or 1.
    A side contributes a point only when it starts with a frozen plateau
    and the row is not frozen throughout.
    """
    if not 0 < threshold < 0.5:
        raise ValueError("threshold must lie in (0, 1/2)")
    n = d.order
    pts = []
    for r in range(n + 1):
        row = d.row(r)
        frozen = (row <= threshold) | (row >= 1 - threshold)
        loose = np.flatnonzero(~frozen)
        if len(loose) == 0:
            continue
        first, last = loose[0], loose[-1]
        if first > 0:
            pts.append(site_to_trapezoid(n, r, first + 1))
        if last < len(row) - 1:
            pts.append(site_to_trapezoid(n, r, last + 1))
    return pts


def inside_trapezoid(x: float, y: float, eps: float = 1e-12) -> bool:
    return -eps <= y <= SQRT3 / 2 + eps and abs(x) <= 1 - y / SQRT3 + eps


# --- curve fits ---------------------------------------------------------------

Model = Literal["quadratic", "conic"]


@dataclass
class CurveFit:
    model: str
    coefficients: np.ndarray
    sup_residual: float
    rms_residual: float
    discriminant: float | None = None
    extra: dict = field(default_factory=dict)


class DegenerateFitError(ValueError):
    pass


def _sorted_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (m, 2) array")
    if len(pts) < 10:
        raise DegenerateFitError("need at least 10 points")
    # canonical order, so the fit does not depend on the input order
    return pts[np.lexsort((pts[:, 1], pts[:, 0]))]


def fit_curve(points, model: Model = "quadratic") -> CurveFit:
    """Least-squares fit of ``y = c0 + c1 x + c2 x^2`` or of a general conic.

    Quadratic residuals are vertical distances.  The conic
    ``A x^2 + B xy + C y^2 + D x + E y + F = 0`` is the smallest right
    singular vector of the design matrix (unit coefficient norm); its
    residuals are Sampson distances and ``discriminant`` is
    ``B^2 - 4AC`` (zero for a parabola, negative for an ellipse).
    """
    pts = _sorted_points(points)
    x, y = pts[:, 0], pts[:, 1]
    if model == "quadratic":
        V = np.column_stack([np.ones_like(x), x, x * x])
        if np.linalg.matrix_rank(V) < 3:
            raise DegenerateFitError("fewer than three distinct abscissae")
        coef, *_ = np.linalg.lstsq(V, y, rcond=None)
        res = np.abs(V @ coef - y)
        dist = _parabola_distance(coef, x, y)
        return CurveFit("quadratic", coef, float(res.max()), float(np.sqrt(np.mean(res ** 2))),
                        extra={"sup_distance": float(dist.max()),
                               "rms_distance": float(np.sqrt(np.mean(dist ** 2)))})
    if model == "conic":
        # centre and scale for conditioning, then map the conic back
        mx, my = x.mean(), y.mean()
        scale = max(np.abs(x - mx).max(), np.abs(y - my).max())
        if scale == 0:
            raise DegenerateFitError("all points coincide")
        X, Y = (x - mx) / scale, (y - my) / scale
        D = np.column_stack([X * X, X * Y, Y * Y, X, Y, np.ones_like(X)])
        _, sing, vt = np.linalg.svd(D, full_matrices=False)
        if len(sing) < 6 or sing[-2] <= 1e-12 * sing[0]:
            raise DegenerateFitError("points do not determine a unique conic")
        A, B, C, Dx, Ey, F = vt[-1]
        # back to original coordinates: X = (x - mx)/s, Y = (y - my)/s
        s = scale
        a2, b2, c2 = A / s**2, B / s**2, C / s**2
        d2 = Dx / s - 2 * a2 * mx - b2 * my
        e2 = Ey / s - 2 * c2 * my - b2 * mx
        f2 = (A * mx**2 + B * mx * my + C * my**2) / s**2 - Dx * mx / s - Ey * my / s + F
        coef = np.array([a2, b2, c2, d2, e2, f2])
        coef /= np.linalg.norm(coef)
        res = _sampson(coef, x, y)
        a2, b2, c2 = coef[:3]
        disc = float(b2 * b2 - 4 * a2 * c2)
        return CurveFit("conic", coef, float(res.max()), float(np.sqrt(np.mean(res ** 2))), disc)
    raise ValueError(f"unknown model {model!r}")


def _parabola_distance(c: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Euclidean distance from each point to ``y = c0 + c1 t + c2 t^2``."""
    c0, c1, c2 = c
    out = np.empty(len(x))
    for k, (px, py) in enumerate(zip(x, y)):
        # d/dt [(t - px)^2 + (f(t) - py)^2] = 0 is a cubic in t
        g0 = c0 - py
        cubic = [2 * c2 * c2, 3 * c1 * c2, 1 + c1 * c1 + 2 * c2 * g0, c1 * g0 - px]
        roots = np.roots(cubic) if c2 else np.roots(cubic[2:])
        ts = roots[np.abs(roots.imag) < 1e-9].real
        f = c0 + c1 * ts + c2 * ts * ts
        out[k] = np.sqrt(np.min((ts - px) ** 2 + (f - py) ** 2))
    return out


def _sampson(c: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    A, B, C, D, E, F = c
    val = A * x * x + B * x * y + C * y * y + D * x + E * y + F
    gx = 2 * A * x + B * y + D
    gy = B * x + 2 * C * y + E
    g = np.sqrt(gx * gx + gy * gy)
    return np.abs(val) / np.where(g > 0, g, np.inf)


def normalized_discriminant(fit: CurveFit) -> float:
    """``(B^2 - 4AC) / (A^2 + B^2 + C^2)``: scale-free, 0 for a parabola, -4 at most for a circle."""
    A, B, C = fit.coefficients[:3]
    return float((B * B - 4 * A * C) / (A * A + B * B + C * C))


# --- CSV -----------------------------------------------------------------------

def write_density_csv(path: str | Path, d: DensityField) -> None:
    freq = d.frequency
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["row", "position", "frequency"])
        for r in range(d.order + 1):
            for p in range(1, d.order + r + 2):
                w.writerow([r, p, f"{freq[r, p]:.6f}"])


def read_density_csv(path: str | Path, samples: int) -> DensityField:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    n = max(int(x["row"]) for x in rows)
    counts = np.zeros((n + 1, 2 * n + 2), dtype=np.int64)
    for x in rows:
        counts[int(x["row"]), int(x["position"])] = round(float(x["frequency"]) * samples)
    return DensityField(n, samples, counts)


def write_fits_csv(path: str | Path, fits: Sequence[CurveFit]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["model", "coefficients", "sup_residual", "rms_residual", "discriminant"])
        for f in fits:
            w.writerow([f.model, " ".join(f"{c:.10g}" for c in f.coefficients),
                        f"{f.sup_residual:.6g}", f"{f.rms_residual:.6g}",
                        "" if f.discriminant is None else f"{f.discriminant:.6g}"])


def write_points_csv(path: str | Path, points) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y"])
        for x, y in points:
            w.writerow([f"{x:.6f}", f"{y:.6f}"])

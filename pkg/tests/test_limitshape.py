import math
import random

import mpmath as mp
import numpy as np
import pytest

from halfhex import limitshape as ls

Z_06_03 = -0.07361315625286056691637579266  # sign-corrected value at (0.6, 0.3)


def z_typeset_mp(x, y, dps=40):
    """Second transcription: the three-arctan display exactly as typeset, in mpmath."""
    with mp.workdps(dps):
        x, y = mp.mpf(x), mp.mpf(y)
        half = mp.mpf(1) / 2
        root = mp.sqrt(mp.mpf(1) / 4 - (x - half) ** 2 - (y - half) ** 2)
        return 2 / mp.pi * ((x - half) * mp.atan(root / (half - y))
                            + half * mp.atan(2 * (x - half) * (half - y) / root)
                            - (half - y) * mp.atan((x - half) / root))


def test_z_dual_transcription():
    assert ls.romik_Z(0.6, 0.3) == pytest.approx(Z_06_03, abs=1e-15)
    assert ls.romik_Z_printed(0.6, 0.3) == pytest.approx(float(z_typeset_mp(0.6, 0.3)), abs=1e-15)
    rng = random.Random(3)
    for _ in range(200):
        x, y = rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.49)
        if (x - 0.5) ** 2 + (y - 0.5) ** 2 < 0.24:
            assert ls.romik_Z(x, y) == pytest.approx(-float(z_typeset_mp(x, y)), abs=1e-13)


def test_z_special_lines():
    for y in np.linspace(0.05, 0.95, 19):
        assert ls.romik_Z(0.5, y) == pytest.approx(0, abs=1e-15)
    for x in np.linspace(0.01, 0.99, 99):
        assert ls.romik_Z(x, 0.5) == pytest.approx(0.5 - x, abs=1e-14)
    with pytest.raises(ls.DomainError):
        ls.romik_Z_printed(0.3, 0.5)
    with pytest.raises(ls.DomainError):
        ls.romik_Z(0.0, 0.0)


def test_z_odd_in_x():
    for x, y in [(0.3, 0.2), (0.6, 0.3), (0.45, 0.7), (0.2, 0.5)]:
        assert ls.romik_Z(1 - x, y) == pytest.approx(-ls.romik_Z(x, y), abs=1e-14)


def test_g_examples():
    assert ls.romik_G(0.1, 0.1) == pytest.approx(0.2, abs=1e-15)
    assert ls.romik_G(0.9, 0.1) == pytest.approx(0.8, abs=1e-15)
    xs = np.linspace(0, 1, 1000)
    assert max(abs(ls.romik_G(x, 0.5) - 0.5) for x in xs) < 1e-12


@pytest.mark.parametrize("x, y, expected", [
    ("1/10", "1/10", "1/5"), ("1/20", "1/4", "3/10"), ("9/10", "1/10", "4/5"),
    ("19/20", "1/5", "3/4"), ("1/10", "9/10", "4/5"), ("9/10", "9/10", "1/5"),
])
def test_g_frozen_branches_exact(x, y, expected):
    from fractions import Fraction as F

    fx, fy, fe = F(x), F(y), F(expected)
    assert F(ls.romik_G(float(fx), float(fy))).limit_denominator(1000) == fe


def test_g_continuity_and_symmetry():
    worst = 0.0
    for theta in np.linspace(0, 2 * np.pi, 2000, endpoint=False):
        for eps in (1e-9,):
            cx, cy = 0.5 + 0.5 * np.cos(theta), 0.5 + 0.5 * np.sin(theta)
            inner = ls.romik_G(0.5 + (0.5 - eps) * np.cos(theta), 0.5 + (0.5 - eps) * np.sin(theta))
            outer_x = 0.5 + (0.5 + eps) * np.cos(theta)
            outer_y = 0.5 + (0.5 + eps) * np.sin(theta)
            if 0 <= outer_x <= 1 and 0 <= outer_y <= 1:
                worst = max(worst, abs(inner - ls.romik_G(outer_x, outer_y)))
    assert worst < 1e-6
    for x in np.linspace(0, 1, 41):
        for y in np.linspace(0, 1, 41):
            assert ls.romik_G(x, y) + ls.romik_G(1 - x, y) == pytest.approx(1, abs=1e-9)


def test_arctic_boundary_examples():
    assert ls.arctic_boundary(0.5) == (0.0, 1.0)
    assert ls.arctic_boundary(0.0) == (0.5, 0.5)
    lo, hi = ls.arctic_boundary(0.1)
    assert lo == pytest.approx(0.2, abs=1e-15) and hi == pytest.approx(0.8, abs=1e-15)
    with pytest.raises(ls.DomainError):
        ls.arctic_boundary(1.5)


def test_affine_map():
    corners = {(0, 0): (-1, 0), (1, 0): (1, 0), (0, 0.5): (-0.5, math.sqrt(3) / 2)}
    for src, dst in corners.items():
        assert ls.affine_to_trapezoid(src) == pytest.approx(dst, abs=1e-15)
    # three corners fix an affine map; the fourth cannot also land on a corner
    assert ls.affine_to_trapezoid((1, 0.5)) == pytest.approx((1.5, math.sqrt(3) / 2))
    assert ls.affine_to_trapezoid((0.5, 0.25)) == pytest.approx((0.25, 0.4330127018922193), abs=1e-15)
    rng = np.random.default_rng(0)
    for p in rng.uniform(0, [1, 0.5], size=(100, 2)):
        assert ls.affine_from_trapezoid(ls.affine_to_trapezoid(p)) == pytest.approx(p, abs=1e-12)


def test_density_order1_law():
    d = ls.empirical_density(1, 20000, seed=1)
    assert d.row(0)[0] == pytest.approx(0.5, abs=0.015)
    assert d.row(0)[0] + d.row(0)[1] == pytest.approx(1.0)


def test_density_row_sums_and_determinism():
    d = ls.empirical_density(12, 37, seed=4)
    for r in range(13):
        assert d.counts[r].sum() == 37 * (r + 1)
    assert np.array_equal(d.counts, ls.empirical_density(12, 37, seed=4).counts)
    both = ls.empirical_density(12, 20, seed=4).merge(ls.empirical_density(12, 17, seed=4, first_stream=20))
    assert np.array_equal(both.counts, d.counts)


def test_density_csv_round_trip(tmp_path):
    d = ls.empirical_density(6, 50, seed=2)
    ls.write_density_csv(tmp_path / "d.csv", d)
    back = ls.read_density_csv(tmp_path / "d.csv", 50)
    assert np.array_equal(back.counts, d.counts)


def test_frozen_boundary_properties(density200):
    d = density200
    assert np.array_equal(d.row(200)[::2], np.ones(201))
    pts = ls.frozen_boundary(d)
    assert all(ls.inside_trapezoid(x, y) for x, y in pts)
    assert len(pts) > 200
    assert min(y for _, y in pts) == 0.0
    with pytest.raises(ValueError):
        ls.frozen_boundary(d, 0.7)


@pytest.mark.parametrize("n", range(1, 5))
def test_density_reflection_symmetry_exact(n):
    # exact law from enumeration: site p of row r mirrors site n + r + 2 - p
    from halfhex.enumeration import enumerate_states

    counts = np.zeros((n + 1, 2 * n + 2), dtype=np.int64)
    for t in enumerate_states(n):
        for r, row in enumerate(t.rows):
            counts[r, list(row)] += 1
    for r in range(n + 1):
        row = counts[r, 1: n + r + 2]
        assert np.array_equal(row, row[::-1])


def test_fit_synthetic_parabola():
    x = np.linspace(-1, 1, 41)
    pts = np.column_stack([x, 0.8 - 0.7 * x * x])
    q = ls.fit_curve(pts, "quadratic")
    assert q.coefficients == pytest.approx([0.8, 0, -0.7], abs=1e-12)
    assert q.sup_residual < 1e-12
    c = ls.fit_curve(pts, "conic")
    assert c.sup_residual < 1e-10
    assert abs(ls.normalized_discriminant(c)) < 1e-9


def test_fit_synthetic_ellipse():
    t = np.linspace(0.1, np.pi - 0.1, 60)
    pts = np.column_stack([0.9 * np.cos(t), 0.5 * np.sin(t)])
    c = ls.fit_curve(pts, "conic")
    assert c.sup_residual < 1e-10
    assert c.discriminant < 0
    assert ls.fit_curve(pts, "quadratic").sup_residual > 0.05


def test_fit_reorder_invariant():
    rng = np.random.default_rng(5)
    x = rng.uniform(-1, 1, 50)
    pts = np.column_stack([x, 1 - x * x + rng.normal(0, 0.01, 50)])
    for model in ("quadratic", "conic"):
        a = ls.fit_curve(pts, model)
        b = ls.fit_curve(pts[rng.permutation(50)], model)
        assert np.array_equal(a.coefficients, b.coefficients)
        assert a.sup_residual == b.sup_residual


def test_fit_degenerate():
    with pytest.raises(ls.DegenerateFitError):
        ls.fit_curve([(0, 0)] * 5)
    with pytest.raises(ls.DegenerateFitError):
        ls.fit_curve([(1.0, float(k)) for k in range(12)], "quadratic")
    with pytest.raises(ValueError):
        ls.fit_curve(np.zeros((12, 2)), "cubic")

"""Core geometry: distances, hulls, heights, volumes, range queries."""

import math

import numpy as np
import pytest

from rectiscope import (
    AffineSubspace,
    Ball,
    DiscreteMeasure,
    InputError,
    SpatialIndex,
    affine_hull,
    dist_to_affine,
    h_min,
    menger_curvature,
    range_query,
    simplex_volume,
)
from rectiscope.core import diameter

from conftest import random_cloud
from oracles import random_rotation


def test_dist_to_affine_axis_cases():
    x_axis = AffineSubspace([0.0, 0.0], [[1.0, 0.0]])
    assert dist_to_affine([0.0, 1.0], x_axis) == pytest.approx(1.0, abs=1e-15)
    assert dist_to_affine(x_axis.base, x_axis) == 0.0
    span = AffineSubspace([0.0, 0.0, 0.0], [[1.0, 0.0, 0.0]])
    assert dist_to_affine([1.0, 1.0, 1.0], span) == pytest.approx(math.sqrt(2.0))


def test_dist_to_affine_dimension_mismatch():
    line = AffineSubspace([0.0, 0.0], [[1.0, 0.0]])
    with pytest.raises(InputError):
        dist_to_affine([1.0, 2.0, 3.0], line)


def test_affine_hull_examples():
    hull = affine_hull([[0.0, 0.0], [1.0, 0.0]])
    assert hull.dim == 1
    assert dist_to_affine([5.0, 0.0], hull) < 1e-12

    repeated = affine_hull([[0.0, 0.0], [0.0, 0.0]])
    assert repeated.dim == 0
    assert np.allclose(repeated.base, [0.0, 0.0])

    full = affine_hull([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    assert full.dim == 2


def test_affine_hull_contains_inputs(rng):
    for _ in range(50):
        k = int(rng.integers(1, 6))
        pts = rng.standard_normal((k + 1, 5))
        hull = affine_hull(pts)
        for p in pts:
            assert dist_to_affine(p, hull) < 1e-10


def test_h_min_examples():
    assert h_min([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]) == pytest.approx(
        1.0 / math.sqrt(2.0)
    )
    assert h_min([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]) == 0.0
    tetra = np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, math.sqrt(3.0) / 2.0, 0.0],
            [0.5, math.sqrt(3.0) / 6.0, math.sqrt(2.0 / 3.0)],
        ]
    )
    assert h_min(tetra) == pytest.approx(math.sqrt(2.0 / 3.0))


def test_h_min_zero_iff_affinely_dependent(rng):
    for _ in range(30):
        k = int(rng.integers(1, 5))
        pts = rng.standard_normal((k + 1, 5))
        assert h_min(pts) > 0.0
        # force dependence: move the last vertex onto the hull of the others
        coeffs = rng.random(k)
        coeffs /= coeffs.sum()
        degenerate = pts.copy()
        degenerate[-1] = coeffs @ pts[:-1]
        assert h_min(degenerate) == 0.0
    assert h_min([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]) == 0.0


def test_simplex_volume_examples():
    assert simplex_volume([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]) == pytest.approx(0.5)
    tetra = np.array(
        [
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.5, math.sqrt(3.0) / 2.0, 0.0],
            [0.5, math.sqrt(3.0) / 6.0, math.sqrt(2.0 / 3.0)],
        ]
    )
    assert simplex_volume(tetra) == pytest.approx(1.0 / (6.0 * math.sqrt(2.0)))
    assert simplex_volume([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]) == 0.0


def test_height_times_face_volume_identity(rng):
    # dist(v, aff(S minus v)) * vol_{k-1}(S minus v) == k * vol_k(S)
    for _ in range(60):
        k = int(rng.integers(1, 6))
        pts = rng.standard_normal((k + 1, 6))
        target = k * simplex_volume(pts)
        for i in range(k + 1):
            face = np.delete(pts, i, axis=0)
            lhs = dist_to_affine(pts[i], affine_hull(face)) * simplex_volume(face)
            assert lhs == pytest.approx(target, rel=1e-9)


def test_h_min_bounded_by_diameter(rng):
    for _ in range(40):
        k = int(rng.integers(1, 5))
        pts = rng.standard_normal((k + 1, 5))
        assert h_min(pts) <= diameter(pts) + 1e-12


def test_rigid_motion_invariance(rng):
    for _ in range(20):
        k = int(rng.integers(1, 5))
        pts = rng.standard_normal((k + 1, 5))
        rot = random_rotation(5, rng)
        shift = rng.standard_normal(5)
        moved = pts @ rot.T + shift
        assert h_min(moved) == pytest.approx(h_min(pts), rel=1e-9, abs=1e-12)
        assert simplex_volume(moved) == pytest.approx(
            simplex_volume(pts), rel=1e-9
        )


def test_menger_curvature_examples():
    equilateral = [[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]]
    assert menger_curvature(*equilateral) == pytest.approx(math.sqrt(3.0))
    assert menger_curvature([0.0, 0.0], [1.0, 0.0], [2.0, 0.0]) == 0.0
    assert menger_curvature([0.0, 0.0], [1.0, 0.0], [0.0, 1.0]) == pytest.approx(
        math.sqrt(2.0)
    )
    assert menger_curvature([1.0, 2.0], [1.0, 2.0], [0.0, 1.0]) == 0.0


def test_menger_curvature_permutation_symmetric(rng):
    import itertools

    pts = rng.standard_normal((3, 4))
    values = {
        menger_curvature(*[pts[i] for i in perm])
        for perm in itertools.permutations(range(3))
    }
    assert max(values) - min(values) < 1e-12


def test_range_query_matches_linear_scan(rng):
    for _ in range(1000):
        count = int(rng.integers(1, 120))
        m = int(rng.integers(1, 4))
        mu = random_cloud(rng, count, m)
        center = rng.uniform(-1.2, 1.2, m)
        radius = float(rng.uniform(0.05, 2.0))
        got = mu.index.query(center, radius)
        expect = np.flatnonzero(((mu.points - center) ** 2).sum(axis=1) <= radius**2)
        assert np.array_equal(got, expect)


def test_range_query_boundary_atom_included():
    mu = DiscreteMeasure([[0.0, 0.0], [2.0, 0.0]], [1.0, 1.0], 1)
    ball = Ball([0.0, 0.0], 2.0)
    assert range_query(mu.index, ball).tolist() == [0, 1]


def test_range_query_trivial_cases(rng):
    mu = random_cloud(rng, 30, 2)
    all_idx = mu.index.query(np.zeros(2), 100.0)
    assert all_idx.tolist() == list(range(30))
    from rectiscope import min_pairwise_distance

    gap = min_pairwise_distance(mu)
    i = 7
    only = mu.index.query(mu.points[i], gap / 2.0)
    assert only.tolist() == [i]


def test_measure_validation():
    with pytest.raises(InputError):
        DiscreteMeasure([[0.0, 0.0]], [0.0], 1)  # zero weight
    with pytest.raises(InputError):
        DiscreteMeasure([[0.0, np.inf]], [1.0], 1)
    with pytest.raises(InputError):
        DiscreteMeasure([[0.0, 0.0]], [1.0], 3)  # n > m
    with pytest.raises(InputError):
        DiscreteMeasure(np.empty((0, 2)), [], 1)
    with pytest.raises(InputError):
        Ball([0.0, 0.0], 0.0)


def test_measure_restrict_preserves_weights(rng):
    mu = random_cloud(rng, 20, 2)
    sub = mu.restrict([3, 5, 7])
    assert np.array_equal(sub.points, mu.points[[3, 5, 7]])
    assert np.array_equal(sub.weights, mu.weights[[3, 5, 7]])


def test_spatial_index_concurrent_reads(rng):
    from concurrent.futures import ThreadPoolExecutor

    mu = random_cloud(rng, 400, 3)
    index = SpatialIndex(mu.points)
    centers = rng.uniform(-1, 1, (64, 3))

    def ask(c):
        return index.query(c, 0.7).tolist()

    with ThreadPoolExecutor(max_workers=8) as pool:
        parallel = list(pool.map(ask, centers))
    serial = [ask(c) for c in centers]
    assert parallel == serial

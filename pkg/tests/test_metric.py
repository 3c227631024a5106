import math

import numpy as np
import pytest

from hilbertflat import (
    BadOrdering,
    HilbertStructure,
    NotCollinear,
    PointAtInfinity,
    PointNotInterior,
    ProjectiveMap,
    apply_projective,
    build_polytope,
    cross_ratio,
    distance,
    distance_many,
    finsler_many,
    finsler_norm,
)

from conftest import interior_points

HALF_LOG3 = 0.5 * math.log(3.0)


def test_cross_ratio_oracle():
    # collinear 1-D configuration a=-1, p=0, q=1/2, b=1 gives ratio 3
    a, p, q, b = [np.array([v, 0.0]) for v in (-1.0, 0.0, 0.5, 1.0)]
    assert np.isclose(cross_ratio(a, p, q, b), 3.0, rtol=0, atol=1e-14)


def test_cross_ratio_errors():
    mk = lambda *vs: [np.array(v, dtype=float) for v in vs]
    with pytest.raises(NotCollinear):
        cross_ratio(*mk([0, 0], [1, 0], [2, 0.5], [3, 0]))
    with pytest.raises(BadOrdering):
        cross_ratio(*mk([0, 0], [2, 0], [1, 0], [3, 0]))


def test_interval_half_log3(interval):
    H = HilbertStructure(interval)
    assert abs(distance(H, [0.0], [0.5]) - HALF_LOG3) <= 1e-12


def test_square_half_log3(square):
    H = HilbertStructure(square)
    assert abs(distance(H, [0.5, 0.5], [0.75, 0.5]) - HALF_LOG3) <= 1e-12


def test_distance_identity_and_positivity(square):
    H = HilbertStructure(square)
    p = np.array([0.3, 0.4])
    assert distance(H, p, p) == 0.0
    X = interior_points(square, 200, seed=1)
    Y = interior_points(square, 200, seed=2)
    d = distance_many(H, X, Y)
    gaps = np.linalg.norm(X - Y, axis=1)
    assert np.all(d[gaps > 1e-9] > 0.0)


@pytest.mark.parametrize("fixture", ["square", "pentagon", "cube"])
def test_distance_symmetry_bit_exact(fixture, request):
    P = request.getfixturevalue(fixture)
    H = HilbertStructure(P)
    X = interior_points(P, 300, seed=4)
    Y = interior_points(P, 300, seed=5)
    assert np.array_equal(distance_many(H, X, Y), distance_many(H, Y, X))
    assert distance(H, X[0], Y[0]) == distance(H, Y[0], X[0])


@pytest.mark.parametrize("fixture", ["square", "pentagon", "cube"])
def test_triangle_inequality(fixture, request):
    P = request.getfixturevalue(fixture)
    H = HilbertStructure(P)
    X = interior_points(P, 500, seed=6)
    Y = interior_points(P, 500, seed=7)
    Z = interior_points(P, 500, seed=8)
    slack = distance_many(H, X, Y) + distance_many(H, Y, Z) - distance_many(H, X, Z)
    assert slack.min() >= -1e-9


def test_distance_batch_matches_scalar(pentagon):
    H = HilbertStructure(pentagon)
    X = interior_points(pentagon, 50, seed=9)
    Y = interior_points(pentagon, 50, seed=10)
    d = distance_many(H, X, Y)
    for i in range(len(X)):
        assert abs(d[i] - distance(H, X[i], Y[i])) < 1e-12


def test_distance_requires_interior(square):
    H = HilbertStructure(square)
    with pytest.raises(PointNotInterior):
        distance(H, [0.0, 0.5], [0.5, 0.5])
    with pytest.raises(PointNotInterior):
        distance_many(H, np.array([[1.5, 0.5]]), np.array([[0.5, 0.5]]))


def test_finsler_norm_basics(square):
    H = HilbertStructure(square)
    p = np.array([0.5, 0.5])
    v = np.array([1.0, 0.0])
    # 0.5*|v|*(1/t+ + 1/t-) with both exit times 1/2
    assert np.isclose(finsler_norm(H, p, v), 2.0, rtol=0, atol=1e-12)
    assert finsler_norm(H, p, np.zeros(2)) == 0.0
    # positive homogeneity
    F1 = finsler_norm(H, p, v)
    F3 = finsler_norm(H, p, 3.0 * v)
    assert np.isclose(F3, 3.0 * F1, rtol=1e-12)


def test_finsler_batch_matches_scalar(cube):
    H = HilbertStructure(cube)
    X = interior_points(cube, 60, seed=11)
    rng = np.random.default_rng(12)
    V = rng.normal(size=(60, 3))
    F = finsler_many(H, X, V)
    for i in range(len(X)):
        assert abs(F[i] - finsler_norm(H, X[i], V[i])) < 1e-12


@pytest.mark.parametrize("fixture", ["interval", "square", "pentagon", "cube"])
def test_finsler_matches_distance_quotient(fixture, request):
    # |d(p, p+tv)/t - F(p, v)| <= 1e-4 * F at t = 1e-6
    P = request.getfixturevalue(fixture)
    H = HilbertStructure(P)
    X = interior_points(P, 100, seed=13, margin=2e-2)
    rng = np.random.default_rng(14)
    V = rng.normal(size=(100, P.dimension))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    t = 1e-6
    F = finsler_many(H, X, V)
    d = distance_many(H, X, X + t * V)
    assert np.all(np.abs(d / t - F) <= 1e-4 * F)


def _pentagon_maps():
    c, s = np.cos(0.3), np.sin(0.3)
    return [
        ProjectiveMap([[1.2 * c, -1.2 * s, 0.1], [0.8 * s, 0.8 * c, -0.05], [0, 0, 1]]),
        ProjectiveMap([[1, 0, 0], [0, 1, 0], [0.1, 0.05, 1]]),
        ProjectiveMap([[0.9, 0.2, 0.05], [-0.1, 1.1, 0.02], [-0.08, 0.12, 1.1]]),
    ]


@pytest.mark.parametrize("map_index", [0, 1, 2])
def test_projective_invariance(pentagon, map_index):
    T = _pentagon_maps()[map_index]
    H = HilbertStructure(pentagon)
    Q = build_polytope(apply_projective(T, pentagon.vertices))
    HQ = HilbertStructure(Q)
    X = interior_points(pentagon, 300, seed=15)
    Y = interior_points(pentagon, 300, seed=16)
    d0 = distance_many(H, X, Y)
    d1 = distance_many(HQ, apply_projective(T, X), apply_projective(T, Y))
    assert np.abs(d1 - d0).max() <= 1e-9


def test_projective_map_validation():
    from hilbertflat import DegenerateInput

    with pytest.raises(DegenerateInput):
        ProjectiveMap(np.zeros((3, 3)))
    with pytest.raises(DegenerateInput):
        ProjectiveMap(np.eye(4)[:3])
    T = ProjectiveMap([[1, 0, 0], [0, 1, 0], [-1, 0, 1]])
    with pytest.raises(PointAtInfinity):
        apply_projective(T, [1.0, 0.0])
    # batch form matches mapping points one at a time
    T2 = _pentagon_maps()[2]
    X = np.array([[0.1, 0.2], [-0.3, 0.15], [0.0, 0.0]])
    batch = apply_projective(T2, X)
    for i, x in enumerate(X):
        assert np.allclose(batch[i], apply_projective(T2, x), rtol=0, atol=1e-15)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from ballgap.ballmath import ball_volume
from ballgap.exceptions import DegenerateInput, OriginNotInterior, TooFewPoints
from ballgap.hull import convex_hull, from_facets, gauge, polytope_volume, surface_area

from oracles import cube_vertices, octahedron, random_sphere, regular_polygon, rejection_volume


def test_octahedron():
    P = convex_hull(octahedron())
    assert P.n_facets == 8
    assert P.n_ridges() == 12
    assert P.n_vertices == 6
    assert P.euler_characteristic() == 2
    assert np.allclose(P.offsets, 1 / math.sqrt(3), atol=1e-14)
    assert polytope_volume(P) == pytest.approx(4 / 3, rel=1e-14)
    assert surface_area(P) == pytest.approx(4 * math.sqrt(3), rel=1e-14)
    assert P.check() == []


def test_cube_is_triangulated():
    P = convex_hull(cube_vertices())
    assert P.n_facets == 12
    assert P.euler_characteristic() == 2
    assert polytope_volume(P) == pytest.approx(8 / (3 * math.sqrt(3)), rel=1e-12)
    assert surface_area(P) == pytest.approx(6 * 4 / 3, rel=1e-12)


@pytest.mark.parametrize("n", [3, 5, 12, 100])
def test_regular_polygon(n):
    P = convex_hull(regular_polygon(n, phase=0.1))
    assert P.n_facets == n
    assert polytope_volume(P) == pytest.approx(0.5 * n * math.sin(2 * math.pi / n), rel=1e-12)
    assert surface_area(P) == pytest.approx(2 * n * math.sin(math.pi / n), rel=1e-12)


@pytest.mark.parametrize("d,n", [(2, 40), (3, 200), (4, 120), (5, 80), (6, 60)])
def test_against_qhull(d, n):
    X = random_sphere(np.random.default_rng(d * 100 + n), n, d)
    P = convex_hull(X)
    ref = ConvexHull(X)
    assert P.n_facets == len(ref.simplices)
    assert polytope_volume(P) == pytest.approx(ref.volume, rel=1e-10)
    assert surface_area(P) == pytest.approx(ref.area, rel=1e-10)
    ours = {tuple(sorted(f)) for f in P.facets.tolist()}
    theirs = {tuple(sorted(f)) for f in ref.simplices.tolist()}
    assert ours == theirs


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_random_hull_is_regular(d, seed):
    X = random_sphere(np.random.default_rng(seed), 6 * d + 10, d)
    P = convex_hull(X, seed=seed)
    assert P.check(origin=False) == []
    assert all(len(fs) == 2 for fs in P.ridges().values())
    assert d * P.n_facets == 2 * P.n_ridges()
    if d == 3:
        assert P.euler_characteristic() == 2
    # every input point lies inside or on the hull
    assert (X @ P.normals.T - P.offsets).max() <= 1e-9


def test_volume_matches_rejection_oracle():
    rng = np.random.default_rng(1)
    P = convex_hull(random_sphere(rng, 60, 3))
    vol, se = rejection_volume(P, 400_000, np.random.default_rng(2))
    assert abs(polytope_volume(P) - vol) <= 3 * se
    assert polytope_volume(P) < ball_volume(3)


def test_duplicates_and_interior_points():
    X = np.vstack([octahedron(), octahedron()[:2] + 1e-12])
    P = convex_hull(X)
    assert P.n_facets == 8
    assert len(P.duplicates) == 2
    Y = np.vstack([octahedron(), [[1, 1, 1]]])
    Y = np.vstack([Y[:6], [[1.0, 0.0, 1e-14]]])
    assert convex_hull(Y).n_facets == 8


def test_hemisphere_points_origin_outside():
    X = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0], [0.6, 0.8, 0]])
    P = convex_hull(X)
    assert P.check(origin=False) == []
    with pytest.raises(OriginNotInterior):
        polytope_volume(P)


def test_errors():
    with pytest.raises(TooFewPoints):
        convex_hull(np.eye(3))
    with pytest.raises(TooFewPoints):
        convex_hull(np.vstack([np.eye(3), np.eye(3)]))
    with pytest.raises(DegenerateInput):
        convex_hull(regular_polygon(8) @ np.eye(2, 3))  # a flat great circle in R^3
    with pytest.raises(ValueError):
        convex_hull(np.array([[0.0, 0.0, 0.0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]))


def test_from_facets_round_trip():
    P = convex_hull(octahedron())
    Q = from_facets(P.vertices, P.facets)
    assert np.allclose(Q.offsets, P.offsets)
    assert polytope_volume(Q) == pytest.approx(polytope_volume(P))
    with pytest.raises(DegenerateInput):
        from_facets(P.vertices, P.facets[:, :2])
    with pytest.raises(DegenerateInput):
        from_facets(P.vertices, P.facets + 10)


def test_gauge():
    P = convex_hull(octahedron())
    pts = np.array([[0, 0, 0], [1, 0, 0], [0.5, 0.5, 0.5], [1, 1, 1]])
    assert np.allclose(gauge(P, pts), [0, 1, 1.5, 3])

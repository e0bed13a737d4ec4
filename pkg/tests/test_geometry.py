import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballgap.ballmath import ball_volume
from ballgap.exceptions import DegenerateFacet, OutOfRange
from ballgap.geometry import (
    Cap,
    SimplexFacet,
    cap_of,
    facet_hyperplane,
    facet_stats,
    facet_table,
    sphere_point,
)

from oracles import random_facet_points, svd_plane, triangle_area


def test_sphere_point_renormalizes():
    p = sphere_point([3.0, 4.0])
    assert np.allclose(p, [0.6, 0.8])
    assert abs(np.linalg.norm(p) - 1) <= 1e-12
    with pytest.raises(ValueError):
        sphere_point([1.0])


@pytest.mark.parametrize("d", [2, 3])
def test_hyperplane_of_coordinate_facet(d):
    plane = facet_hyperplane(SimplexFacet.from_points(np.eye(d)))
    assert np.allclose(plane.normal, np.ones(d) / math.sqrt(d), atol=1e-14)
    assert plane.offset == pytest.approx(1 / math.sqrt(d), abs=1e-14)


def test_hyperplane_matches_affine_hull_fit():
    rng = np.random.default_rng(7)
    for _ in range(20):
        X = random_facet_points(rng, 4)
        plane = facet_hyperplane(SimplexFacet.from_points(X))
        n, t = svd_plane(X)
        assert plane.offset == pytest.approx(t, abs=1e-10)
        assert np.allclose(plane.normal, n, atol=1e-10)
        assert np.allclose(X @ plane.normal, plane.offset, atol=1e-10)


def test_degenerate_facet_rejected():
    X = np.array([[1.0, 0, 0], [0, 1.0, 0], [-1.0, 0, 0]])  # plane through the origin
    with pytest.raises(DegenerateFacet):
        facet_hyperplane(SimplexFacet.from_points(X))
    with pytest.raises(DegenerateFacet):
        SimplexFacet.from_points(np.eye(3)[:2])


@pytest.mark.parametrize(
    "offset,h,r",
    [
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 1.0),
        (1 / math.sqrt(3), 1 - 1 / math.sqrt(3), math.sqrt(2 / 3)),
    ],
)
def test_cap_of_offset(offset, h, r):
    cap = cap_of(offset)
    assert cap.height == pytest.approx(h, abs=1e-15)
    assert cap.radius == pytest.approx(r, abs=1e-12)
    assert cap.radius == pytest.approx(math.sqrt(1 - offset**2), abs=1e-12)


def test_cap_flags_central_plane_and_range():
    assert cap_of(0.0).central
    assert not cap_of(0.5).central
    for bad in (-0.1, 1.5):
        with pytest.raises(OutOfRange):
            cap_of(bad)


@given(st.floats(0.0, 1.0))
def test_cap_radius_identity(h):
    cap = Cap(h)
    assert cap.radius**2 == pytest.approx(2 * h - h * h, abs=1e-12)


def test_octant_facet_stats():
    st_ = facet_stats(SimplexFacet.from_points(np.eye(3)))
    assert np.allclose(st_.cg_facet, 1 / 3)
    assert np.allclose(st_.cg_disk, 1 / 3)
    assert st_.offset_norm == pytest.approx(0, abs=1e-15)
    assert st_.area == pytest.approx(math.sqrt(3) / 2, abs=1e-14)


def test_segment_facet_stats():
    st_ = facet_stats(SimplexFacet.from_points(np.eye(2)))
    assert st_.area == pytest.approx(math.sqrt(2), abs=1e-14)
    assert st_.h == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-15)


def test_area_matches_cross_product():
    rng = np.random.default_rng(3)
    for _ in range(50):
        X = random_facet_points(rng, 3)
        st_ = facet_stats(SimplexFacet.from_points(X))
        assert st_.area == pytest.approx(triangle_area(*X), abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_facet_invariants(d, seed):
    X = random_facet_points(np.random.default_rng(seed), d)
    s = facet_stats(SimplexFacet.from_points(X))
    assert s.r**2 + s.offset**2 == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(s.cg_disk, (1 - s.h) * s.normal, atol=1e-10)
    assert s.offset_norm <= s.r + 1e-10
    # centroid Pythagoras: |cg|^2 = (1 - h)^2 + |cg - cg_disk|^2
    assert s.cg_facet @ s.cg_facet == pytest.approx((1 - s.h) ** 2 + s.offset_norm**2, abs=1e-10)
    assert 0 < s.area <= ball_volume(d - 1) * s.r ** (d - 1) + 1e-10


def test_facet_table_matches_scalar_path():
    rng = np.random.default_rng(11)
    V = np.vstack([random_facet_points(rng, 4) for _ in range(5)])
    F = np.arange(20).reshape(5, 4)
    t = facet_table(V, F)
    for j in range(5):
        s = facet_stats(SimplexFacet.from_points(V[F[j]]))
        assert t.areas[j] == pytest.approx(s.area, rel=1e-12)
        assert t.heights[j] == pytest.approx(s.h, abs=1e-12)
        assert t.offset_norms[j] == pytest.approx(s.offset_norm, abs=1e-12)

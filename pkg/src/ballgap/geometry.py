"""Exact primitives for simplices inscribed in the unit sphere.

A facet is ``d`` unit vectors in ``R^d``; its hyperplane, cap, centroids and
area all follow from the matrix ``X`` whose columns are those vectors.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import EPS_HULL, EPS_UNIT, check_points
from .ballmath import log_factorial
from .exceptions import DegenerateFacet, OutOfRange


def sphere_point(coords):
    """Project ``coords`` (length ``d >= 2``) onto the unit sphere."""
    return check_points(np.atleast_2d(coords))[0]


@dataclass(frozen=True)
class Hyperplane:
    normal: np.ndarray
    offset: float

    @property
    def central(self):
        """True when the plane passes through the origin."""
        return self.offset <= EPS_UNIT


@dataclass(frozen=True)
class Cap:
    """Cap cut from the unit ball; only the height is stored."""

    height: float

    @property
    def radius(self):
        h = self.height
        return math.sqrt(max(2.0 * h - h * h, 0.0))

    @property
    def central(self):
        return self.height >= 1.0 - EPS_UNIT


@dataclass(frozen=True)
class SimplexFacet:
    vertex_ids: tuple
    X: np.ndarray

    @classmethod
    def from_points(cls, points, vertex_ids=None):
        """Build a facet from ``d`` points given as rows (normalized on the way in)."""
        P = check_points(points)
        n, d = P.shape
        if n != d:
            raise DegenerateFacet(f"a facet in R^{d} needs {d} vertices, got {n}")
        ids = tuple(range(d)) if vertex_ids is None else tuple(int(i) for i in vertex_ids)
        X = P.T.copy()
        X.setflags(write=False)
        return cls(ids, X)

    @property
    def dim(self):
        return self.X.shape[0]

    @property
    def points(self):
        return self.X.T


@dataclass(frozen=True)
class FacetStats:
    h: float
    r: float
    cg_facet: np.ndarray
    cg_disk: np.ndarray
    offset_norm: float
    area: float
    normal: np.ndarray
    offset: float
    abs_det: float


def _abs_det(X):
    det = abs(float(np.linalg.det(X)))
    scale = float(np.prod(np.linalg.norm(X, axis=0)))
    if not det > EPS_HULL * scale:
        raise DegenerateFacet(f"|det X| = {det:.3e} below tolerance")
    return det


def facet_hyperplane(facet):
    """Hyperplane through the facet, normal pointing away from the origin."""
    X = facet.X
    _abs_det(X)
    a = np.linalg.solve(X.T, np.ones(X.shape[0]))
    t = 1.0 / np.linalg.norm(a)
    return Hyperplane(a * t, float(t))


def cap_of(plane_or_offset):
    """Cap cut off by a hyperplane, or by a plane at the given distance from the origin."""
    t = plane_or_offset.offset if isinstance(plane_or_offset, Hyperplane) else plane_or_offset
    t = float(t)
    if not -EPS_UNIT <= t <= 1.0 + EPS_UNIT:
        raise OutOfRange(f"hyperplane offset {t} outside [0, 1]")
    return Cap(min(max(1.0 - t, 0.0), 1.0))


def facet_stats(facet):
    X = facet.X
    d = X.shape[0]
    det = _abs_det(X)
    plane = facet_hyperplane(facet)
    cap = cap_of(plane)
    cg_facet = X.mean(axis=1)
    cg_disk = plane.offset * plane.normal
    # vol_d([0, F]) = area * offset / d
    area = math.exp(math.log(det) - log_factorial(d - 1)) / plane.offset
    return FacetStats(
        h=cap.height,
        r=cap.radius,
        cg_facet=cg_facet,
        cg_disk=cg_disk,
        offset_norm=float(np.linalg.norm(cg_facet - cg_disk)),
        area=area,
        normal=plane.normal,
        offset=plane.offset,
        abs_det=det,
    )


@dataclass(frozen=True)
class FacetTable:
    """Per-facet quantities of a whole polytope, one row per facet."""

    normals: np.ndarray
    offsets: np.ndarray
    abs_dets: np.ndarray
    heights: np.ndarray
    radii: np.ndarray
    centroids: np.ndarray
    offset_norms: np.ndarray
    areas: np.ndarray

    def __len__(self):
        return len(self.offsets)


def facet_matrices(vertices, facets):
    """Stack of ``X_j`` matrices, shape ``(m, d, d)``, columns are vertices."""
    V = np.asarray(vertices, dtype=np.float64)
    F = np.asarray(facets, dtype=np.intp)
    return np.transpose(V[F], (0, 2, 1))


def facet_table(vertices, facets):
    """Vectorized :func:`facet_stats` over all facets of a polytope.

    Normals are oriented away from the origin; a facet whose plane passes
    through the origin raises :class:`DegenerateFacet`.
    """
    V = np.asarray(vertices, dtype=np.float64)
    F = np.asarray(facets, dtype=np.intp)
    m, d = F.shape
    X = facet_matrices(V, F)
    sign, logdet = np.linalg.slogdet(X)
    abs_dets = np.where(sign != 0, np.exp(logdet), 0.0)
    scale = np.prod(np.linalg.norm(X, axis=1), axis=1)
    bad = ~(abs_dets > EPS_HULL * scale)
    if np.any(bad):
        j = int(np.flatnonzero(bad)[0])
        raise DegenerateFacet(f"facet {j} {F[j].tolist()} is degenerate or contains the origin")
    a = np.linalg.solve(np.transpose(X, (0, 2, 1)), np.ones((m, d, 1)))[..., 0]
    offsets = 1.0 / np.linalg.norm(a, axis=1)
    normals = a * offsets[:, None]
    heights = np.clip(1.0 - offsets, 0.0, 1.0)
    radii = np.sqrt(np.maximum(2.0 * heights - heights**2, 0.0))
    centroids = V[F].mean(axis=1)
    offset_norms = np.linalg.norm(centroids - offsets[:, None] * normals, axis=1)
    areas = abs_dets / math.factorial(d - 1) / offsets
    return FacetTable(normals, offsets, abs_dets, heights, radii, centroids, offset_norms, areas)

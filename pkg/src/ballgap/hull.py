"""Incremental (beneath-beyond) convex hull of points on the unit sphere.

Facets are stored as sorted vertex tuples with outward planes. Each
unprocessed point sits in the conflict list of one facet it sees; inserting
a point removes its visible region (found by walking ridges from the
conflict facet), cones the horizon to the new point, and redistributes the
orphaned conflict points over the new facets only.
"""

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ._validation import EPS_HULL, check_points
from .geometry import facet_table
from .exceptions import (
    DegenerateFacet,
    DegenerateInput,
    NumericalFailure,
    OriginNotInterior,
    TooFewPoints,
)

logger = logging.getLogger(__name__)

DUPLICATE_TOL = 1e-10
PERTURBATION = 1e-10


@dataclass(frozen=True)
class Polytope:
    """Simplicial polytope with vertices on the unit sphere.

    ``facets`` index rows of ``vertices``; ``normals``/``offsets`` describe the
    outward facet planes ``normal . x = offset``. ``interior`` lists input
    points that did not end up as vertices (after duplicate merging).
    """

    vertices: np.ndarray
    facets: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    perturbed: bool = False
    interior: tuple = ()
    duplicates: tuple = ()
    _table: list = field(default_factory=list, repr=False, compare=False)

    @property
    def dim(self):
        return self.vertices.shape[1]

    @property
    def n_vertices(self):
        return len(np.unique(self.facets))

    @property
    def n_facets(self):
        return len(self.facets)

    @property
    def table(self):
        if not self._table:
            self._table.append(facet_table(self.vertices, self.facets))
        return self._table[0]

    def ridges(self):
        """Map each ridge (sorted ``d-1`` vertex tuple) to its incident facet indices."""
        out = {}
        for j, f in enumerate(self.facets):
            f = tuple(sorted(int(v) for v in f))
            for skip in range(len(f)):
                out.setdefault(f[:skip] + f[skip + 1 :], []).append(j)
        return out

    def n_ridges(self):
        return len(self.ridges())

    def check(self, origin=True):
        """Validate ridge regularity, orientation and (optionally) origin interiority.

        Returns a list of problems; empty means valid.
        """
        problems = []
        bad = [r for r, fs in self.ridges().items() if len(fs) != 2]
        if bad:
            problems.append(f"{len(bad)} ridges without exactly two facets")
        if origin and len(self.offsets) and self.offsets.min() <= 0:
            problems.append("origin not strictly interior")
        used = np.unique(self.facets)
        excess = self.vertices[used] @ self.normals.T - self.offsets
        if excess.size and excess.max() > EPS_HULL:
            problems.append(f"vertex beyond a facet by {excess.max():.3e}")
        return problems

    def euler_characteristic(self):
        """``V - E + F`` for ``d = 3``."""
        if self.dim != 3:
            raise ValueError("Euler check is defined here for d = 3 only")
        return self.n_vertices - self.n_ridges() + self.n_facets


def _plane(P, verts, interior):
    """Outward unit normal and offset of the hyperplane through ``P[verts]``."""
    A = P[list(verts)]
    base = A[0]
    M = A[1:] - base
    _, s, vt = np.linalg.svd(M)
    normal = vt[-1]
    if s[-1] <= EPS_HULL * max(s[0], 1.0):
        raise DegenerateFacet("flat facet")
    off = float(normal @ base)
    if normal @ interior > off:
        normal, off = -normal, -off
    return normal, off


def _planes_batch(P, facets, interior):
    A = P[np.asarray(facets)]
    M = A[:, 1:] - A[:, :1]
    _, s, vt = np.linalg.svd(M)
    normals = vt[:, -1, :]
    if np.any(s[:, -1] <= EPS_HULL * np.maximum(s[:, 0], 1.0)):
        raise DegenerateFacet("flat facet")
    offs = np.einsum("ij,ij->i", normals, A[:, 0])
    flip = normals @ interior > offs
    normals[flip] *= -1
    offs[flip] *= -1
    return normals, offs


def _initial_simplex(P):
    """Indices of ``d + 1`` points spanning a simplex of large volume."""
    n, d = P.shape
    chosen = [int(np.argmax(P[:, 0])), ]
    far = np.linalg.norm(P - P[chosen[0]], axis=1)
    chosen.append(int(np.argmax(far)))
    while len(chosen) < d + 1:
        base = P[chosen[0]]
        Q, _ = np.linalg.qr((P[chosen[1:]] - base).T)
        rel = P - base
        resid = rel - (rel @ Q) @ Q.T
        dist = np.linalg.norm(resid, axis=1)
        k = int(np.argmax(dist))
        if dist[k] <= EPS_HULL * 10:
            raise DegenerateInput(f"affine rank of the input is below {d}")
        chosen.append(k)
    return chosen


def _hull_facets(P):
    n, d = P.shape
    simplex = _initial_simplex(P)
    interior = P[simplex].mean(axis=0)

    facets = {}  # id -> (verts tuple sorted, normal, offset)
    ridge_map = {}
    conflicts = {}
    next_id = 0

    def add_facets(vert_lists):
        nonlocal next_id
        normals, offs = _planes_batch(P, vert_lists, interior)
        ids = []
        for verts, nrm, off in zip(vert_lists, normals, offs):
            fid = next_id
            next_id += 1
            facets[fid] = (verts, nrm, off)
            for skip in range(d):
                ridge = verts[:skip] + verts[skip + 1 :]
                ridge_map.setdefault(ridge, set()).add(fid)
            ids.append(fid)
        return ids, normals, offs

    def remove_facet(fid):
        verts = facets.pop(fid)[0]
        for skip in range(d):
            ridge = verts[:skip] + verts[skip + 1 :]
            inc = ridge_map[ridge]
            inc.discard(fid)
            if not inc:
                del ridge_map[ridge]
        return conflicts.pop(fid, None)

    def assign(candidates, ids, normals, offs):
        if len(candidates) == 0:
            return np.empty(0, dtype=np.intp)
        dist = P[candidates] @ normals.T - offs
        best = np.argmax(dist, axis=1)
        above = dist[np.arange(len(candidates)), best] > EPS_HULL
        for k in np.unique(best[above]):
            conflicts[ids[k]] = candidates[above & (best == k)]
        return candidates[~above]

    init = [tuple(sorted(c)) for c in combinations(simplex, d)]
    ids, normals, offs = add_facets(init)
    rest = np.setdiff1d(np.arange(n), simplex)
    interior_pts = list(assign(rest, ids, normals, offs))

    while conflicts:
        fid = next(iter(conflicts))
        pts = conflicts[fid]
        p = int(pts[0])
        if len(pts) > 1:
            conflicts[fid] = pts[1:]
        else:
            del conflicts[fid]
        x = P[p]
        # visible region: BFS over ridges from the conflict facet
        visible = {fid}
        stack = [fid]
        horizon = []
        while stack:
            g = stack.pop()
            verts = facets[g][0]
            for skip in range(d):
                ridge = verts[:skip] + verts[skip + 1 :]
                for h in ridge_map[ridge]:
                    if h == g or h in visible:
                        continue
                    _, nrm, off = facets[h]
                    if nrm @ x - off > EPS_HULL:
                        visible.add(h)
                        stack.append(h)
                    else:
                        horizon.append(ridge)
        orphans = [remove_facet(g) for g in visible]
        orphans = [o for o in orphans if o is not None and len(o)]
        new = [tuple(sorted(r + (p,))) for r in horizon]
        ids, normals, offs = add_facets(new)
        if orphans:
            interior_pts.extend(assign(np.concatenate(orphans), ids, normals, offs))
    out = [v[0] for v in facets.values()]
    nrm = np.array([v[1] for v in facets.values()])
    off = np.array([v[2] for v in facets.values()])
    return np.array(out, dtype=np.intp), nrm, off, interior_pts


def _merge_duplicates(P):
    keep = []
    dups = []
    from scipy.spatial import cKDTree

    tree = cKDTree(P)
    pairs = tree.query_pairs(DUPLICATE_TOL, output_type="ndarray")
    drop = set()
    for i, j in sorted(map(tuple, pairs)):
        if i not in drop:
            drop.add(j)
            dups.append((int(j), int(i)))
    keep = np.array([i for i in range(len(P)) if i not in drop], dtype=np.intp)
    return keep, dups


def _validate(P, facets, normals, offsets):
    if facets.size == 0:
        return "no facets"
    poly = Polytope(P, facets, normals, offsets)
    problems = poly.check(origin=False)
    return "; ".join(problems) if problems else None


def convex_hull(points, seed=0):
    """Convex hull of points on the unit sphere as a simplicial :class:`Polytope`.

    Points are renormalized; points closer than ``1e-10`` are merged. If the
    floating-point construction comes out inconsistent, it is retried once on
    a copy perturbed by ``1e-10`` (seeded by ``seed``); the returned vertices
    are always the unperturbed inputs.
    """
    P = check_points(points)
    n, d = P.shape
    if n < d + 1:
        raise TooFewPoints(f"need at least {d + 1} points in R^{d}, got {n}")
    keep, dups = _merge_duplicates(P)
    Q = P[keep]
    if len(Q) < d + 1:
        raise TooFewPoints(f"only {len(Q)} distinct points")

    perturbed = False
    try:
        facets, normals, offsets, inner = _hull_facets(Q)
        problem = _validate(Q, facets, normals, offsets)
    except (DegenerateFacet, KeyError) as exc:
        problem = str(exc) or type(exc).__name__
    if problem:
        logger.info("hull retry with perturbation: %s", problem)
        rng = np.random.default_rng(seed)
        Qp = Q + PERTURBATION * rng.standard_normal(Q.shape)
        try:
            facets, _, _, inner = _hull_facets(Qp)
        except (DegenerateFacet, KeyError) as exc:
            raise NumericalFailure(f"hull failed after perturbation: {exc}") from exc
        perturbed = True
        normals, offsets = _planes_batch(Q, facets, Q.mean(axis=0))
        problem = _validate(Q, facets, normals, offsets)
        if problem:
            raise NumericalFailure(f"inconsistent hull after perturbation: {problem}")

    facets = keep[facets]
    facets.sort(axis=1)
    interior = tuple(sorted(int(keep[i]) for i in inner))
    return Polytope(P, facets, normals, offsets, perturbed, interior, tuple(dups))


def from_facets(vertices, facets):
    """Rebuild a :class:`Polytope` from a vertex table and facet index lists."""
    V = check_points(vertices)
    F = np.sort(np.asarray(facets, dtype=np.intp), axis=1)
    if F.ndim != 2 or F.shape[1] != V.shape[1]:
        raise DegenerateInput(f"facets must have {V.shape[1]} vertices each")
    if F.min() < 0 or F.max() >= len(V):
        raise DegenerateInput("facet index out of range")
    try:
        table = facet_table(V, F)
    except DegenerateFacet as exc:
        raise OriginNotInterior(str(exc)) from exc
    used = set(np.unique(F).tolist())
    interior = tuple(i for i in range(len(V)) if i not in used)
    return Polytope(V, F, table.normals, table.offsets, False, interior)


def require_origin_interior(P):
    if len(P.offsets) == 0 or P.offsets.min() <= 0:
        raise OriginNotInterior("origin is not strictly inside the polytope")
    return P


def polytope_volume(P):
    """Volume by cones from the origin: sum of ``|det X_j| / d!``."""
    require_origin_interior(P)
    return float(P.table.abs_dets.sum() / math.factorial(P.dim))


def surface_area(P):
    return float(P.table.areas.sum())


def gauge(P, X):
    """``max_j normal_j . x / offset_j``: a point is in ``P`` iff its gauge is at most 1."""
    require_origin_interior(P)
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    scaled = P.normals / P.offsets[:, None]
    out = np.empty(len(X))
    step = max(1, 4_000_000 // max(len(scaled), 1))
    for i in range(0, len(X), step):
        out[i : i + step] = (X[i : i + step] @ scaled.T).max(axis=1)
    return out

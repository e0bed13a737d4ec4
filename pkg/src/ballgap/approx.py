"""Net-based inscribed polytopes and their distance to the ball.

A maximal ``theta``-separated subset of a uniform candidate pool on the
sphere is also a ``theta``-covering of that pool; its convex hull is the
approximating polytope. Facet data then drive the Hausdorff and
symmetric-difference measurements and the facet classification used by the
lower-bound audit.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import minimize, nnls
from scipy.spatial import cKDTree

from ._validation import EPS_HULL, check_dimension, check_points, check_samples
from .ballmath import ball_volume, sphere_surface, surface_ratio
from .cone import rng_for, umbrella_gaps
from .exceptions import BallgapError, OutOfRange, PoolTooSmall, PreconditionViolated
from .geometry import Cap
from .hull import convex_hull, gauge, polytope_volume, require_origin_interior, surface_area
from .montecarlo import MCEstimate

MAX_BISECTIONS = 40
OFF_CENTER_RATIO = (2**22 - 1) / 2**22


@dataclass(frozen=True)
class NetConfig:
    """Parameters for :func:`greedy_net`; give either ``theta`` or ``n``."""

    d: int
    theta: float = None
    n: int = None
    seed: int = 1
    pool_size: int = None
    symmetric: bool = False

    def __post_init__(self):
        check_dimension(self.d)
        if (self.theta is None) == (self.n is None):
            raise OutOfRange("specify exactly one of theta and n")
        if self.theta is not None and not 0.0 < self.theta <= 2.0:
            raise OutOfRange(f"theta must lie in (0, 2], got {self.theta}")
        if self.n is not None and self.n < 2 * self.d:
            raise OutOfRange(f"n={self.n} is below 2d={2 * self.d}")

    @property
    def pool(self):
        if self.pool_size is not None:
            return int(self.pool_size)
        return 200 * (self.n if self.n is not None else _count_guess(self.d, self.theta))


def _count_guess(d, theta):
    # caps of angular radius theta/2 packed with density ~1/2
    cap = ball_volume(d - 1) * (theta / 2) ** (d - 1)
    return max(2 * d, int(math.ceil(0.5 * sphere_surface(d) / cap)))


def sphere_pool(d, size, seed, symmetric=False):
    """Uniform points on the sphere; ``symmetric`` prepends ``+-e_i``."""
    rng = rng_for(seed, 2)
    X = rng.standard_normal((int(size), d))
    X /= np.linalg.norm(X, axis=1)[:, None]
    if symmetric:
        E = np.eye(d)
        X = np.vstack([E, -E, X])
    return X


class _GreedyPool:
    """Greedy maximal separated subsets of one fixed pool, for any radius."""

    def __init__(self, pool):
        self.pool = pool
        self.tree = cKDTree(pool)

    def select(self, theta):
        blocked = np.zeros(len(self.pool), dtype=bool)
        chosen = []
        i = 0
        n = len(self.pool)
        while i < n:
            if blocked[i]:
                i += 1
                continue
            chosen.append(i)
            blocked[self.tree.query_ball_point(self.pool[i], theta)] = True
            i += 1
        return np.array(chosen, dtype=np.intp)


def _net_for_count(greedy, n):
    # count(theta) is a nonincreasing step function; bisect onto [n, n + slack]
    slack = max(1, n // 100)
    lo, hi = 0.0, 2.0
    best = None
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        sel = greedy.select(mid)
        if len(sel) >= n:
            if best is None or len(sel) < len(best[1]) or (len(sel) == len(best[1]) and mid > best[0]):
                best = (mid, sel)
            if len(sel) == n:
                break
            lo = mid
        else:
            hi = mid
        if best is not None and len(best[1]) <= n + slack and hi - lo < 1e-12:
            break
    if best is None:
        raise PoolTooSmall(f"pool of {len(greedy.pool)} points cannot provide {n} net points")
    theta, sel = best
    return theta, sel[:n]


@dataclass(frozen=True)
class Net:
    points: np.ndarray
    theta: float
    pool: np.ndarray = field(repr=False)


def greedy_net(cfg):
    """Greedy ``theta``-separated set, maximal against a uniform candidate pool.

    With ``cfg.n`` set, ``theta`` is found by bisection and the selection is
    cut to exactly ``n`` points (dropping the last ones added).
    """
    pool_size = cfg.pool
    if cfg.n is not None and pool_size < 50 * cfg.n:
        raise PoolTooSmall(f"pool_size={pool_size} below 50*n={50 * cfg.n}")
    pool = sphere_pool(cfg.d, pool_size, cfg.seed, cfg.symmetric)
    return net_from_pool(pool, theta=cfg.theta, n=cfg.n)


def net_from_pool(pool, theta=None, n=None):
    """Greedy net drawn from an explicit candidate pool, scanned in row order."""
    pool = check_points(pool)
    greedy = _GreedyPool(pool)
    if n is None:
        theta = float(theta)
        sel = greedy.select(theta)
    else:
        theta, sel = _net_for_count(greedy, int(n))
    return Net(pool[sel], float(theta), pool)


def build_qn(d, n, seed=1, pool_size=None, symmetric=False):
    """Convex hull of a greedy net with exactly ``n`` points."""
    net = greedy_net(NetConfig(d=d, n=n, seed=seed, pool_size=pool_size, symmetric=symmetric))
    P = convex_hull(net.points, seed=seed)
    require_origin_interior(P)
    return P


def hausdorff_gap(P):
    """Hausdorff distance between an inscribed, origin-containing polytope and the ball.

    Equals the largest facet cap height; :func:`hausdorff_distance` computes
    it independently from nearest-point projections.
    """
    require_origin_interior(P)
    return float(P.table.heights.max())


def project_to_simplex(A, u):
    """Nearest point to ``u`` in the convex hull of the rows of ``A`` (a few rows)."""
    M = 1e4
    lam, _ = nnls(np.vstack([A.T, M * np.ones(len(A))]), np.concatenate([u, [M]]))
    support = np.flatnonzero(lam > 0)
    # drop the penalty bias: exact least squares on the support with sum(lam) = 1
    B = A[support]
    k = len(support)
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = B @ B.T
    K[:k, k] = K[k, :k] = 1.0
    rhs = np.concatenate([B @ u, [1.0]])
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0][:k]
    if np.all(sol >= 0):
        x = sol @ B
    else:
        x = (lam / lam.sum()) @ A
    return x, float(np.linalg.norm(u - x))


def nearest_point(P, u):
    """Nearest point of ``P`` to ``u`` and its distance.

    From outside, the nearest point lies on a facet whose plane separates
    ``u`` from ``P``, so only those facets are searched.
    """
    excess = P.normals @ u - P.offsets
    visible = np.flatnonzero(excess > 0)
    if len(visible) == 0:
        return np.asarray(u, dtype=np.float64), 0.0
    best = (None, np.inf)
    for j in visible:
        x, r = project_to_simplex(P.vertices[P.facets[j]], u)
        if r < best[1]:
            best = (x, r)
    return best


def hausdorff_distance(P, refine=16):
    """Largest distance from a sphere point to ``P``, by direct search.

    Every facet's cap apex is a candidate; when the foot of the apex on the
    facet plane lies inside the facet, its distance to ``P`` is exactly the
    cap height, otherwise it is found by projection. The ``refine`` best
    candidates are then polished by local ascent on the sphere.
    """
    require_origin_interior(P)
    t = P.table
    X = np.transpose(P.vertices[P.facets], (0, 2, 1))
    bary = np.linalg.solve(X, t.normals[..., None])[..., 0]
    inside = np.all(bary >= -1e-12, axis=1)
    dist = t.heights.copy()
    for j in np.flatnonzero(~inside):
        dist[j] = nearest_point(P, t.normals[j])[1]
    best = float(dist.max())
    order = np.argsort(dist)[::-1][:refine]

    def neg(v):
        nv = np.linalg.norm(v)
        u = v / nv
        x, r = nearest_point(P, u)
        if r == 0:
            return 0.0, np.zeros_like(v)
        g = (u - x) / r
        g = (g - (g @ u) * u) / nv
        return -r, -g

    for j in order:
        res = minimize(neg, t.normals[j], jac=True, method="L-BFGS-B", options={"maxiter": 50})
        best = max(best, -float(res.fun))
    return best


def hausdorff_gap_sampled(P, directions=100_000, seed=1):
    """Brute-force lower estimate of the Hausdorff distance from random sphere directions.

    Uses the separation ``max_j (normal_j . u - offset_j)``, which never
    exceeds the true distance from ``u`` to ``P``.
    """
    rng = rng_for(seed, 3)
    best = 0.0
    left = int(directions)
    while left:
        m = min(left, max(1, 2_000_000 // P.n_facets))
        U = rng.standard_normal((m, P.dim))
        U /= np.linalg.norm(U, axis=1)[:, None]
        best = max(best, float((U @ P.normals.T - P.offsets).max()))
        left -= m
    return best


@dataclass(frozen=True)
class SymmetricDifference:
    exact_decomposition: MCEstimate
    rejection_oracle: MCEstimate
    exact_volume_gap: float

    def agree(self, k=3.0):
        a, b = self.exact_decomposition, self.rejection_oracle
        return abs(a.value - b.value) <= k * math.hypot(a.stderr, b.stderr)


def symmetric_difference(P, samples=1_000_000, seed=1, facet_samples=10_000):
    """``vol(B) - vol(P)`` two ways: summed umbrella gaps and ball rejection sampling.

    ``facet_samples`` draws go to each facet's gap; ``samples`` uniform
    ball points go to the rejection estimate.
    """
    require_origin_interior(P)
    samples = check_samples(samples)
    vals, errs = umbrella_gaps(P.vertices, P.facets, facet_samples, seed)
    decomposition = MCEstimate(
        float(vals.sum()), float(np.sqrt(np.sum(errs**2))), int(facet_samples) * P.n_facets, int(seed)
    )
    vol = ball_volume(P.dim)
    rng = rng_for(seed, 4)
    outside = 0
    left = samples
    while left:
        m = min(left, 1 << 16)
        Y = uniform_ball(rng, m, P.dim)
        outside += int(np.count_nonzero(gauge(P, Y) > 1.0))
        left -= m
    frac = outside / samples
    rejection = MCEstimate(vol * frac, vol * math.sqrt(frac * (1 - frac) / (samples - 1)), samples, int(seed))
    return SymmetricDifference(decomposition, rejection, vol - polytope_volume(P))


def uniform_ball(rng, m, d):
    X = rng.standard_normal((m, d))
    X /= np.linalg.norm(X, axis=1)[:, None]
    return X * rng.random(m)[:, None] ** (1.0 / d)


class Label(str, Enum):
    SHALLOW = "SHALLOW"
    OFF_CENTER = "OFF_CENTER"
    GOOD = "GOOD"
    OTHER = "OTHER"


@dataclass(frozen=True)
class Thresholds:
    shallow: float
    good_upper: float
    off_center_ratio: float
    n: int
    effective_n: int


@dataclass(frozen=True)
class FacetClass:
    facet: int
    label: Label
    h: float
    r: float
    offset_norm: float
    shallow: bool
    off_center: bool
    good: bool
    thresholds: Thresholds = field(repr=False)


def shallow_threshold(d, n_eff, surface_p):
    return (surface_p / sphere_surface(d) / (4.0 * n_eff)) ** (2.0 / (d - 1)) / 8.0


def net_height_bound(d, n, factor=1.0):
    """``16/7 (factor * surface ratio / n)^(2/(d-1))``: the cap-height bound of a net of ``n`` points."""
    return 16.0 / 7.0 * (factor * surface_ratio(d) / n) ** (2.0 / (d - 1))


def classify_facets(P, n, effective="2n"):
    """Label every facet shallow, off-center, good or other.

    ``n`` is the vertex count of the polytopes being compared. The shallow
    cut uses the effective count (``2n`` because the comparison polytope is
    the hull of two ``n``-vertex polytopes, or ``n``); the upper cap-height
    cut of the good class always uses ``n``.
    """
    require_origin_interior(P)
    if effective not in ("n", "2n"):
        raise OutOfRange(f"effective must be 'n' or '2n', got {effective!r}")
    n_eff = 2 * n if effective == "2n" else n
    d = P.dim
    t = P.table
    surf = float(t.areas.sum())
    th = Thresholds(
        shallow=shallow_threshold(d, n_eff, surf),
        good_upper=net_height_bound(d, n),
        off_center_ratio=OFF_CENTER_RATIO,
        n=int(n),
        effective_n=int(n_eff),
    )
    shallow = t.heights <= th.shallow
    off = t.offset_norms >= th.off_center_ratio * t.radii
    good = (t.heights >= th.shallow) & (t.heights <= th.good_upper) & ~off
    out = []
    for j in range(len(t)):
        if shallow[j]:
            lab = Label.SHALLOW
        elif off[j]:
            lab = Label.OFF_CENTER
        elif good[j]:
            lab = Label.GOOD
        else:
            lab = Label.OTHER
        out.append(
            FacetClass(j, lab, float(t.heights[j]), float(t.radii[j]), float(t.offset_norms[j]),
                       bool(shallow[j]), bool(off[j]), bool(good[j]), th)
        )
    return out


def class_areas(P, classes):
    """Total facet area of the shallow, off-center and good sets."""
    a = P.table.areas
    return {
        "shallow": float(sum(a[c.facet] for c in classes if c.shallow)),
        "off_center": float(sum(a[c.facet] for c in classes if c.off_center)),
        "good": float(sum(a[c.facet] for c in classes if c.good)),
    }


@dataclass(frozen=True)
class CapSearch:
    direction: np.ndarray
    cap: Cap
    mass_fraction: float
    found: bool
    directions_tried: int


def lemma7_search(points, delta, weights=None, directions=2000, seed=1):
    """Look for a cap of height ``2 delta`` holding at least half of a weighted cloud.

    The cloud's centroid must lie in a cap of height ``delta``. The search
    starts from the centroid direction and then scans random directions,
    returning the best cap seen.
    """
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    w = np.ones(len(X)) if weights is None else np.asarray(weights, dtype=np.float64)
    if np.any(w < 0) or w.sum() <= 0:
        raise OutOfRange("weights must be nonnegative with positive total")
    if not 0.0 < delta <= 1.0:
        raise OutOfRange(f"delta must lie in (0, 1], got {delta}")
    if np.any(np.linalg.norm(X, axis=1) > 1.0 + 1e-12):
        raise OutOfRange("cloud must lie in the unit ball")
    w = w / w.sum()
    cg = w @ X
    norm = float(np.linalg.norm(cg))
    if norm < 1.0 - delta:
        raise PreconditionViolated(f"|cg| = {norm:.6g} < 1 - delta = {1 - delta:.6g}")
    cut = 1.0 - 2.0 * delta
    rng = rng_for(seed, 5)
    U = rng.standard_normal((int(directions), X.shape[1]))
    U /= np.linalg.norm(U, axis=1)[:, None]
    U = np.vstack([cg / norm, U])
    mass = np.minimum(((X @ U.T) >= cut).astype(float).T @ w, 1.0)
    k = int(np.argmax(mass))
    return CapSearch(U[k], Cap(min(2.0 * delta, 1.0)), float(mass[k]), bool(mass[k] >= 0.5), len(U))


def improve_polytope(P, rounds=100, step=None, seed=1):
    """Best-effort local improvement: move vertices along the sphere to grow the volume.

    Each round takes a projected gradient step of size ``step`` (default
    ``0.1 / sqrt(n)``) for every vertex and re-hulls. A round is kept only if
    the volume increases.
    """
    V = P.vertices[np.unique(P.facets)]
    n, d = V.shape
    step = 0.1 / math.sqrt(n) if step is None else step
    current = convex_hull(V, seed=seed)
    vol = polytope_volume(current)
    for _ in range(rounds):
        X = np.transpose(current.vertices[current.facets], (0, 2, 1))
        # d|det X| / dX = |det X| X^{-T}; column i is the gradient for vertex i
        grads = np.abs(np.linalg.det(X))[:, None, None] * np.transpose(np.linalg.inv(X), (0, 2, 1))
        g = np.zeros_like(current.vertices)
        for k in range(d):
            np.add.at(g, current.facets[:, k], grads[:, :, k])
        g -= np.einsum("ij,ij->i", g, current.vertices)[:, None] * current.vertices
        gn = np.linalg.norm(g, axis=1)
        gn[gn == 0] = 1.0
        moved = current.vertices + step * g / gn[:, None]
        moved /= np.linalg.norm(moved, axis=1)[:, None]
        try:
            trial = convex_hull(moved, seed=seed)
            require_origin_interior(trial)
        except BallgapError:
            step *= 0.5
            continue
        if trial.n_vertices == n and polytope_volume(trial) > vol:
            current, vol = trial, polytope_volume(trial)
        else:
            step *= 0.5
    return current


def del_bound(d):
    """``32/7 (surface ratio)^(2/(d-1))``."""
    d = check_dimension(d)
    return 32.0 / 7.0 * surface_ratio(d) ** (2.0 / (d - 1))


def theorem_regime(d):
    """Smallest vertex count covered by the lower-bound argument, ``(512 pi d / 7)^((d-1)/2)``."""
    return (512.0 * math.pi * d / 7.0) ** ((d - 1) / 2.0)


def surface_regime(d):
    """``(128 pi d / 7)^((d-1)/2)``, from which on the net polytope has at least half the sphere's surface."""
    return (128.0 * math.pi * d / 7.0) ** ((d - 1) / 2.0)


def c_hat(gap, d, n):
    """Normalized gap ``gap * n^(2/(d-1)) / (d vol(B))``."""
    return gap * n ** (2.0 / (d - 1)) / (d * ball_volume(d))

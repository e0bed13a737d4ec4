"""scikit-learn style front end for the net-polytope construction."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import check_dimension, check_points
from .approx import NetConfig, greedy_net, hausdorff_gap, net_from_pool
from .ballmath import ball_volume
from .exceptions import OutOfRange, PoolTooSmall
from .hull import convex_hull, gauge, polytope_volume, require_origin_interior, surface_area


class InscribedPolytopeApproximator(TransformerMixin, BaseEstimator):
    """Approximate the unit ball by the hull of a greedy spherical net.

    Parameters
    ----------
    n_vertices : int, optional
        Target vertex count; ``theta`` is then found by bisection.
    theta : float, optional
        Net separation, used when ``n_vertices`` is not given.
    dim : int, optional
        Ambient dimension; inferred from ``X`` when ``fit`` gets a pool.
    pool_size : int, optional
        Size of the random candidate pool (default ``200 * n``).
    seed : int
    symmetric : bool
        Put ``+-e_i`` at the front of the random pool.

    Attributes
    ----------
    polytope_ : Polytope
    vertices_ : ndarray of shape (n, d)
    theta_ : float
    hausdorff_ : float
    volume_gap_ : float
        ``vol(B) - vol(P)``.
    """

    def __init__(self, n_vertices=None, theta=None, dim=None, pool_size=None, seed=1, symmetric=False):
        self.n_vertices = n_vertices
        self.theta = theta
        self.dim = dim
        self.pool_size = pool_size
        self.seed = seed
        self.symmetric = symmetric

    def fit(self, X=None, y=None):
        """Build the polytope. ``X``, if given, is the candidate pool (rows are projected onto the sphere)."""
        if X is None:
            if self.dim is None:
                raise OutOfRange("either pass a candidate pool X or set dim")
            cfg = NetConfig(
                d=check_dimension(self.dim),
                theta=self.theta if self.n_vertices is None else None,
                n=self.n_vertices,
                seed=self.seed,
                pool_size=self.pool_size,
                symmetric=self.symmetric,
            )
            net = greedy_net(cfg)
        else:
            pool = check_points(X)
            if self.n_vertices is not None and len(pool) < self.n_vertices:
                raise PoolTooSmall(f"pool of {len(pool)} points is smaller than n_vertices")
            if self.n_vertices is None and self.theta is None:
                raise OutOfRange("set n_vertices or theta")
            net = net_from_pool(pool, theta=self.theta, n=self.n_vertices)
        P = convex_hull(net.points, seed=self.seed)
        require_origin_interior(P)
        self.polytope_ = P
        self.vertices_ = P.vertices
        self.theta_ = net.theta
        self.n_features_in_ = P.dim
        self.hausdorff_ = hausdorff_gap(P)
        self.volume_gap_ = ball_volume(P.dim) - polytope_volume(P)
        self.surface_area_ = surface_area(P)
        return self

    def transform(self, X):
        """Gauge of each row with respect to the polytope, shape ``(n_samples, 1)``."""
        check_is_fitted(self, "polytope_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return gauge(self.polytope_, X)[:, None]

    def predict(self, X):
        """1 for rows inside the polytope, 0 outside."""
        return (self.transform(X)[:, 0] <= 1.0).astype(int)

    def score(self, X=None, y=None):
        """Negative volume gap; larger is better."""
        check_is_fitted(self, "polytope_")
        return -self.volume_gap_

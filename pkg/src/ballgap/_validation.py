"""Input validation helpers shared by the public functions."""

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import OutOfRange

EPS_UNIT = 1e-12
EPS_HULL = 1e-9


def check_dimension(d, low=2, high=None, name="d"):
    if isinstance(d, bool) or int(d) != d:
        raise OutOfRange(f"{name} must be an integer, got {d!r}")
    d = int(d)
    if d < low or (high is not None and d > high):
        hi = "inf" if high is None else high
        raise OutOfRange(f"{name}={d} outside [{low}, {hi}]")
    return d


def check_points(points, min_dim=2, normalize=True):
    """Return a float (n, d) array of points, renormalized onto the unit sphere.

    Rows with zero norm are rejected; tiny deviations from unit length are
    projected away rather than reported. Rows already within ``EPS_UNIT`` of
    unit length are kept bit for bit, so normalizing twice changes nothing.
    """
    X = check_array(points, dtype=np.float64, ensure_min_features=min_dim)
    if not normalize:
        return X
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0):
        raise OutOfRange("zero vector cannot be projected onto the sphere")
    if X is points:
        X = X.copy()
    off = np.abs(norms - 1.0) > EPS_UNIT
    X[off] /= norms[off, None]
    return X


def check_samples(samples, minimum=10_000):
    samples = int(samples)
    if samples < minimum:
        raise OutOfRange(f"samples={samples} below minimum {minimum}")
    return samples

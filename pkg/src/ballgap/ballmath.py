"""Gamma-function helpers, ball and cap volumes, and orthant Gaussian moments."""

import math

import numpy as np
from scipy import integrate

from ._validation import check_dimension, check_samples
from .exceptions import OutOfRange
from .montecarlo import sharded_mean


def log_gamma(x):
    """Natural log of the gamma function for ``x > 0``."""
    if not x > 0:
        raise OutOfRange(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def log_factorial(k):
    return log_gamma(k + 1.0)


def ball_volume(d):
    """Volume of the unit ball in dimension ``d`` (``d = 0`` gives 1)."""
    d = check_dimension(d, low=0)
    return math.exp(0.5 * d * math.log(math.pi) - log_gamma(0.5 * d + 1.0))


def sphere_surface(d):
    """Surface area of the unit sphere bounding the ``d``-ball."""
    d = check_dimension(d, low=1)
    return d * ball_volume(d)


def ball_volume_upper(d):
    """Stirling-type upper bound ``pi^((d-1)/2) (2e)^(d/2) / d^((d+1)/2)``."""
    d = check_dimension(d, low=1)
    return math.exp(
        0.5 * (d - 1) * math.log(math.pi)
        + 0.5 * d * math.log(2 * math.e)
        - 0.5 * (d + 1) * math.log(d)
    )


def surface_ratio(d):
    """``sphere_surface(d) / ball_volume(d - 1)``, the recurring constant of the net bounds."""
    d = check_dimension(d)
    return sphere_surface(d) / ball_volume(d - 1)


def stirling_bounds(x):
    """Bracket ``Gamma(x + 1)`` between ``sqrt(2 pi) x^(x+1/2) e^-x`` and that times ``e^(1/(12x))``."""
    if not x > 0:
        raise OutOfRange(f"stirling_bounds requires x > 0, got {x!r}")
    lower = math.exp(0.5 * math.log(2 * math.pi) + (x + 0.5) * math.log(x) - x)
    return lower, lower * math.exp(1.0 / (12.0 * x))


def cap_volume(d, h):
    """Volume of the cap of height ``h`` cut from the unit ``d``-ball."""
    d = check_dimension(d, low=1)
    if not 0.0 <= h <= 1.0:
        raise OutOfRange(f"cap height must lie in [0, 1], got {h!r}")
    if h == 0.0:
        return 0.0
    if d == 1:
        return float(h)
    val, _ = integrate.quad(
        lambda t: (1.0 - t * t) ** (0.5 * (d - 1)),
        1.0 - h,
        1.0,
        epsabs=1e-13 * ball_volume(d),
        epsrel=1e-13,
        limit=200,
    )
    return ball_volume(d - 1) * val


def cap_surface_packing_bound(d, theta):
    """Lower bound on the surface of a sphere cap around a net point.

    Returns ``(theta/2 * sqrt(1 - theta^2/16))^(d-1) * vol(B^(d-1))``.
    """
    d = check_dimension(d)
    if not 0.0 <= theta <= math.sqrt(2.0) + 1e-15:
        raise OutOfRange(f"theta must lie in (0, sqrt(2)], got {theta!r}")
    base = 0.5 * theta * math.sqrt(1.0 - theta * theta / 16.0)
    return base ** (d - 1) * ball_volume(d - 1)


def orthant_moment_power(d, k):
    """Integral of ``(sum y)^k exp(-(sum y)^2)`` over the positive orthant."""
    d = check_dimension(d, low=1)
    k = check_dimension(k, low=0, name="k")
    return math.exp(log_gamma(0.5 * (k + d)) - math.log(2.0) - log_factorial(d - 1))


def orthant_moment_square(d):
    """Integral of ``(sum y_i^2) exp(-(sum y)^2)`` over the positive orthant."""
    d = check_dimension(d, low=1)
    return math.exp(
        2 * math.log(d) - math.log(2.0) - log_factorial(d + 1) + log_gamma(0.5 * d)
    )


def orthant_moment_cross(d):
    """Integral of ``y_i y_j exp(-(sum y)^2)``, ``i != j``, over the positive orthant."""
    d = check_dimension(d, low=2)
    return math.exp(
        log_gamma(0.5 * d) - math.log(4.0 * (d + 1)) - log_factorial(d - 1)
    )


def halfnormal_scale(d):
    # exp(-(sum y)^2) <= exp(-|y|^2) on the orthant, so scale 1/sqrt(2) bounds the weight in every d
    return 1.0 / math.sqrt(2.0)


def mc_orthant_moment(d, kind="power", k=0, pair=(0, 1), samples=1_000_000, seed=1, shards=1):
    """Importance-sampled estimate of an orthant moment.

    ``kind`` is ``"power"`` (uses ``k``), ``"square"`` or ``"cross"`` (uses
    the 0-based coordinate ``pair``). Proposals are independent half-normals.
    """
    d = check_dimension(d, low=1)
    samples = check_samples(samples)
    if kind == "cross":
        i, j = pair
        if d < 2 or i == j or not (0 <= i < d and 0 <= j < d):
            raise OutOfRange(f"cross moment needs two distinct coordinates < d, got {pair}")
    elif kind == "power":
        k = check_dimension(k, low=0, name="k")
    elif kind != "square":
        raise OutOfRange(f"unknown moment kind {kind!r}")

    sigma = halfnormal_scale(d)
    log_q0 = d * (0.5 * math.log(2.0 / math.pi) - math.log(sigma))

    def draw(rng, m):
        y = np.abs(rng.standard_normal((m, d))) * sigma
        s = y.sum(axis=1)
        log_w = -s * s + 0.5 * np.einsum("ij,ij->i", y, y) / sigma**2 - log_q0
        if kind == "power":
            g = s**k
        elif kind == "square":
            g = np.einsum("ij,ij->i", y, y)
        else:
            g = y[:, pair[0]] * y[:, pair[1]]
        return g * np.exp(log_w)

    return sharded_mean(draw, samples, seed, shards)

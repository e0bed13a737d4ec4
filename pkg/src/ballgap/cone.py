"""Spherical simplices, their solid cones, and the umbrella gap above a facet.

The spherical measure of the radial projection of a facet is

    2 / Gamma(d/2) * |det X| * integral over y >= 0 of exp(-y' G y),  G = X'X,

and the solid sector over it has ``1/d`` of that volume. The orthant integral
is estimated by importance sampling with independent half-normal proposals,
using ``exp(-(sum y)^2)`` (whose integral is known in closed form) as a
control variate. Because ``y' G y <= (sum y)^2`` on the orthant, the
remaining integrand is nonnegative and small for shallow facets, which is
what makes per-facet gaps cheap to resolve.

When two vertices are more than a right angle apart the half-normal rate
has to shrink to the smallest eigenvalue of G and the weights can collapse.
Those facets use the polar form of the same integral instead, averaging
``|X w|^-d`` over ``w`` uniform on the standard simplex.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_samples
from .ballmath import log_factorial, log_gamma, orthant_moment_power, sphere_surface
from .geometry import _abs_det, facet_matrices, facet_stats
from .montecarlo import MCEstimate, sharded_mean

FACET_CHUNK = 64
NONNEG_TOL = -1e-12


def rng_for(seed, *key):
    """Generator for a named sub-stream of ``seed``; distinct keys never overlap."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(key)))


@dataclass(frozen=True)
class ConeResult:
    cone_volume: float
    spherical_measure: MCEstimate
    solid_volume: MCEstimate


def cone_volume(facet):
    """``|det X| / d!``, the volume of the simplex spanned by the origin and the facet."""
    det = _abs_det(facet.X)
    return math.exp(math.log(det) - log_factorial(facet.dim))


def proposal_rate(G):
    """Half-normal rate ``lam`` (density ~ exp(-lam |y|^2)) keeping weights bounded.

    ``y' G y >= lam |y|^2`` must hold on the orthant. With unit diagonal and
    nonnegative off-diagonal entries ``lam = 1`` works; otherwise fall back
    to the smallest eigenvalue.
    """
    G = np.asarray(G)
    off = G - np.diag(np.diag(G))
    lam = float(np.min(np.diag(G)))
    if np.any(off < 0):
        lam = min(lam, float(np.linalg.eigvalsh(G)[0]))
    return lam


def _polar_excess(X, omega):
    """Excess ``|X w|^-d - 1`` for simplex-uniform ``w``, in orthant-integral units.

    Writing ``y = rho * w`` with ``sum w = 1`` and integrating ``rho`` out
    turns the orthant integral into ``Gamma(d/2) / (2 (d-1)!)`` times the
    mean of ``(w' G w)^(-d/2)``. The excess is bounded by ``t^-d - 1``.
    """
    d = omega.shape[-1]
    v = omega @ np.swapaxes(X, -1, -2)
    n2 = np.einsum("...ij,...ij->...i", v, v)
    return orthant_moment_power(d, 0) * np.expm1(-0.5 * d * np.log(n2))


def _excess_draw(X, lam):
    d = X.shape[0]
    if np.any((X.T @ X)[~np.eye(d, dtype=bool)] < 0):
        # lam can be tiny here and half-normal weights degenerate
        def polar(rng, m):
            w = rng.standard_exponential((m, d))
            return _polar_excess(X, w / w.sum(axis=1)[:, None])

        return polar

    sigma = 1.0 / math.sqrt(2.0 * lam)
    log_q0 = d * math.log(2.0 * math.sqrt(lam / math.pi))

    def draw(rng, m):
        y = np.abs(rng.standard_normal((m, d))) * sigma
        s = y.sum(axis=1)
        quad = np.einsum("ij,ij->i", y @ X.T, y @ X.T)
        log_q = log_q0 - lam * np.einsum("ij,ij->i", y, y)
        # exp(-quad) - exp(-s^2), both divided by q
        return np.exp(-quad - log_q) * -np.expm1(quad - s * s)

    return draw


def spherical_measure(facet, samples=1_000_000, seed=1, shards=1):
    """Monte Carlo estimate of the (d-1)-measure of the facet's radial projection."""
    samples = check_samples(samples)
    X = facet.X
    d = X.shape[0]
    det = _abs_det(X)
    lam = proposal_rate(X.T @ X)
    excess = sharded_mean(_excess_draw(X, lam), samples, seed, shards)
    prefactor = 2.0 / math.exp(log_gamma(0.5 * d)) * det
    return excess.scaled(prefactor, prefactor * orthant_moment_power(d, 0))


def solid_volume(facet, samples=1_000_000, seed=1, shards=1):
    return spherical_measure(facet, samples, seed, shards).scaled(1.0 / facet.dim)


def cone_result(facet, samples=1_000_000, seed=1, shards=1):
    sm = spherical_measure(facet, samples, seed, shards)
    return ConeResult(cone_volume(facet), sm, sm.scaled(1.0 / facet.dim))


def sphere_sampling_oracle(facet, samples=1_000_000, seed=1, shards=1):
    """Hit-or-miss estimate of the spherical measure from uniform sphere directions.

    A direction ``xi`` lies in the radial projection iff ``X^-1 xi >= 0``.
    """
    samples = check_samples(samples)
    X = facet.X
    d = X.shape[0]
    _abs_det(X)
    Xinv_T = np.linalg.inv(X).T
    area = sphere_surface(d)

    def draw(rng, m):
        xi = rng.standard_normal((m, d))
        xi /= np.linalg.norm(xi, axis=1)[:, None]
        y = xi @ Xinv_T
        return area * np.all(y >= NONNEG_TOL, axis=1)

    return sharded_mean(draw, samples, seed, shards)


def umbrella_gap(facet, samples=1_000_000, seed=1, shards=1):
    """Volume between the facet's cone and the spherical sector over it."""
    sm = spherical_measure(facet, samples, seed, shards)
    return sm.scaled(1.0 / facet.dim, -cone_volume(facet))


def gap_lower_bound_vertex(facet):
    d = facet.dim
    cg = facet.X.mean(axis=1)
    return d * d / (2.0 * (d + 1)) * (1.0 - float(cg @ cg)) * cone_volume(facet)


def gap_lower_bound_facet(facet):
    # sqrt(1 - r^2) equals the plane offset, so this coincides with the vertex form.
    st = facet_stats(facet)
    d = facet.dim
    cg = st.cg_facet
    return d * math.sqrt(max(1.0 - st.r**2, 0.0)) / (2.0 * (d + 1)) * (1.0 - float(cg @ cg)) * st.area


def umbrella_gaps(vertices, facets, samples=10_000, seed=1):
    """Umbrella gap of every facet of a polytope.

    Returns ``(values, stderrs)``. Each facet gets ``samples`` independent
    draws; facets are processed in fixed-size chunks with their own
    sub-streams, so results depend only on ``seed``.
    """
    samples = check_samples(samples)
    X_all = facet_matrices(vertices, facets)
    m, d = X_all.shape[0], X_all.shape[1]
    values = np.empty(m)
    stderrs = np.empty(m)
    log_pref = math.log(2.0) - log_gamma(0.5 * d)
    abs_dets = np.abs(np.linalg.det(X_all))
    G_all = np.transpose(X_all, (0, 2, 1)) @ X_all
    off = ~np.eye(d, dtype=bool)
    polar = np.any(G_all[:, off] < 0, axis=1)
    lams = np.array([1.0 if p else proposal_rate(G) for p, G in zip(polar, G_all)])
    for c, start in enumerate(range(0, m, FACET_CHUNK)):
        stop = min(start + FACET_CHUNK, m)
        rng = rng_for(seed, 1, c)
        X = X_all[start:stop]
        lam = lams[start:stop]
        b = stop - start
        y = np.abs(rng.standard_normal((b, samples, d))) / np.sqrt(2.0 * lam)[:, None, None]
        s = y.sum(axis=2)
        z = y @ np.transpose(X, (0, 2, 1))
        quad = np.einsum("bij,bij->bi", z, z)
        log_q = d * np.log(2.0 * np.sqrt(lam / math.pi))[:, None] - lam[:, None] * np.einsum(
            "bij,bij->bi", y, y
        )
        w = np.exp(-quad - log_q) * -np.expm1(quad - s * s)
        mask = polar[start:stop]
        if mask.any():
            e = rng.standard_exponential((int(mask.sum()), samples, d))
            w[mask] = _polar_excess(X[mask], e / e.sum(axis=2)[..., None])
        mean = w.mean(axis=1)
        se = w.std(axis=1, ddof=1) / math.sqrt(samples)
        pref = np.exp(log_pref) * abs_dets[start:stop] / d
        # pref * z0 is exactly the cone volume, so only the excess term remains
        values[start:stop] = pref * mean
        stderrs[start:stop] = pref * se
    return values, stderrs

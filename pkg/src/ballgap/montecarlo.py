"""Seeded, shardable Monte Carlo means with standard errors."""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

CHUNK = 1 << 17


@dataclass(frozen=True)
class MCEstimate:
    """A stochastic result with its standard error.

    ``stderr`` is the sample standard deviation divided by ``sqrt(samples)``.
    Identical ``(seed, samples, shards)`` reproduce ``value`` bit for bit.
    """

    value: float
    stderr: float
    samples: int
    seed: int
    shards: int = 1

    def scaled(self, factor, offset=0.0):
        """Return ``factor * self + offset`` with the error scaled accordingly."""
        return MCEstimate(
            factor * self.value + offset,
            abs(factor) * self.stderr,
            self.samples,
            self.seed,
            self.shards,
        )

    def zscore(self, reference):
        if self.stderr == 0:
            return 0.0 if self.value == reference else np.inf
        return (self.value - reference) / self.stderr

    def agrees_with(self, reference, k=3.0, other_stderr=0.0):
        combined = np.hypot(self.stderr, other_stderr)
        return abs(self.value - reference) <= k * combined

    def as_dict(self):
        return {
            "value": self.value,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
            "shards": self.shards,
        }


def max_workers():
    """Worker cap from ``BALLGAP_THREADS`` (falls back to the CPU count)."""
    env = os.environ.get("BALLGAP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _shard_moments(draw, count, seed):
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    left = count
    while left > 0:
        m = min(CHUNK, left)
        vals = np.asarray(draw(rng, m), dtype=np.float64)
        total += vals.sum()
        total_sq += np.dot(vals, vals)
        left -= m
    return total, total_sq


def sharded_mean(draw, samples, seed, shards=1):
    """Estimate ``E[draw]`` from ``samples`` draws split over ``shards``.

    ``draw(rng, m)`` must return ``m`` i.i.d. values. Shard ``i`` is seeded
    with ``seed + i``; shards are merged in index order so the result does
    not depend on how many worker threads ran them.
    """
    samples = int(samples)
    shards = max(1, min(int(shards), samples))
    sizes = [samples // shards + (i < samples % shards) for i in range(shards)]
    seeds = [int(seed) + i for i in range(shards)]
    workers = min(shards, max_workers())
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(_shard_moments, [draw] * shards, sizes, seeds))
    else:
        parts = [_shard_moments(draw, m, s) for m, s in zip(sizes, seeds)]
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / max(samples - 1, 1)
    return MCEstimate(float(mean), float(np.sqrt(var / samples)), samples, int(seed), shards)

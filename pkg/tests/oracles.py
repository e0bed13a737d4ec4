"""Independent reference computations used only by the tests."""

import math

import numpy as np


def lhuilier_area(a, b, c):
    """Area of the spherical triangle with unit-vector corners a, b, c (l'Huilier)."""
    ang = lambda u, v: math.acos(max(-1.0, min(1.0, float(np.dot(u, v)))))
    A, B, C = ang(b, c), ang(a, c), ang(a, b)
    s = 0.5 * (A + B + C)
    prod = math.tan(s / 2) * math.tan((s - A) / 2) * math.tan((s - B) / 2) * math.tan((s - C) / 2)
    return 4.0 * math.atan(math.sqrt(max(prod, 0.0)))


def planar_angle(u, v):
    return math.acos(max(-1.0, min(1.0, float(np.dot(u, v)))))


def svd_plane(points):
    """Unit normal (away from origin) and offset of the affine hull of the rows."""
    P = np.asarray(points, dtype=float)
    _, _, vt = np.linalg.svd(P[1:] - P[0])
    n = vt[-1]
    t = float(n @ P[0])
    if t < 0:
        n, t = -n, -t
    return n, t


def triangle_area(a, b, c):
    return 0.5 * float(np.linalg.norm(np.cross(b - a, c - a)))


def random_sphere(rng, n, d):
    X = rng.standard_normal((n, d))
    return X / np.linalg.norm(X, axis=1)[:, None]


def random_facet_points(rng, d, min_det=1e-3):
    while True:
        X = random_sphere(rng, d, d)
        if abs(np.linalg.det(X)) > min_det:
            return X


def regular_polygon(n, phase=0.0):
    t = phase + 2 * np.pi * np.arange(n) / n
    return np.column_stack([np.cos(t), np.sin(t)])


def octahedron():
    return np.vstack([np.eye(3), -np.eye(3)])


def cube_vertices():
    return np.array([[a, b, c] for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)]) / math.sqrt(3)


def rejection_volume(P, samples, rng):
    """Volume of an origin-containing polytope by uniform sampling in the unit ball."""
    d = P.dim
    X = rng.standard_normal((samples, d))
    X /= np.linalg.norm(X, axis=1)[:, None]
    X *= rng.random(samples)[:, None] ** (1.0 / d)
    inside = np.all(X @ P.normals.T <= P.offsets, axis=1)
    vol_b = math.pi ** (d / 2) / math.gamma(d / 2 + 1)
    p = inside.mean()
    return vol_b * p, vol_b * math.sqrt(p * (1 - p) / samples)

"""Inequality audits of an inscribed polytope against the ball.

Each audit is an ordered list of named checks. A check records both sides,
the relation, the margin (positive means satisfied) and the tolerance used;
Monte Carlo sides carry their standard error into the tolerance.
"""

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .approx import (
    c_hat,
    class_areas,
    classify_facets,
    hausdorff_gap,
    net_height_bound,
    surface_regime,
    symmetric_difference,
    theorem_regime,
)
from .ballmath import ball_volume, sphere_surface
from .cone import umbrella_gaps
from .exceptions import RegimeViolation
from .hull import polytope_volume, require_origin_interior, surface_area

REL_TOL = 1e-12
MC_SIGMAS = 3.0

CSV_FIELDS = ["name", "lhs", "rhs", "relation", "margin", "tolerance", "applicable", "passed"]


@dataclass
class Check:
    name: str
    lhs: float
    rhs: float
    relation: str
    margin: float = 0.0
    tolerance: float = 0.0
    applicable: bool = True
    passed: bool = True

    def __post_init__(self):
        self.lhs = float(self.lhs)
        self.rhs = float(self.rhs)
        if self.relation == "<=":
            self.margin = self.rhs - self.lhs
        elif self.relation == ">=":
            self.margin = self.lhs - self.rhs
        else:
            raise ValueError(f"unknown relation {self.relation!r}")
        if not self.tolerance:
            self.tolerance = REL_TOL * max(abs(self.lhs), abs(self.rhs))
        self.passed = bool((not self.applicable) or self.margin >= -self.tolerance)


def mc_check(name, lhs, rhs, relation, stderr):
    return Check(name, lhs, rhs, relation, tolerance=MC_SIGMAS * stderr + REL_TOL * max(abs(lhs), abs(rhs)))


@dataclass
class AuditReport:
    kind: str
    checks: list
    metadata: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self):
        return [c.name for c in self.checks]

    def to_dict(self):
        return {
            "kind": self.kind,
            "passed": self.passed,
            "metadata": self.metadata,
            "checks": [asdict(c) for c in self.checks],
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for c in self.checks:
            w.writerow({k: getattr(c, k) for k in CSV_FIELDS})
        return buf.getvalue()

    def summary(self):
        lines = [f"{self.kind}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            flag = "n/a " if not c.applicable else ("ok  " if c.passed else "FAIL")
            lines.append(f"  {flag} {c.name}: {c.lhs:.6g} {c.relation} {c.rhs:.6g}")
        return "\n".join(lines)


def _metadata(P, n, **extra):
    meta = {
        "d": int(P.dim),
        "n": int(n),
        "n_vertices": int(P.n_vertices),
        "n_facets": int(P.n_facets),
        "perturbed": bool(P.perturbed),
    }
    meta.update(extra)
    return meta


def theorem1_audit(P, n, samples=10_000, seed=1, effective="2n"):
    """Walk the lower-bound argument link by link on measured facet data.

    ``n`` is the vertex count in the bound; ``samples`` is the number of
    Monte Carlo draws per facet for the umbrella gaps. Outside the regime
    ``n >= (512 pi d / 7)^((d-1)/2)`` the audit still runs, marks the report
    out of regime and emits a :class:`RegimeViolation` warning.
    """
    require_origin_interior(P)
    d = P.dim
    t = P.table
    regime = theorem_regime(d)
    in_regime = n >= regime
    if not in_regime:
        warnings.warn(
            f"n={n} is below the lower-bound regime {regime:.4g} for d={d}", RegimeViolation, stacklevel=2
        )
    exponent = 2.0 / (d - 1)
    surf_b = sphere_surface(d)
    surf_p = float(t.areas.sum())
    gap = ball_volume(d) - polytope_volume(P)

    classes = classify_facets(P, n, effective)
    areas = class_areas(P, classes)
    n_eff = classes[0].thresholds.effective_n
    good = np.array([c.good for c in classes])

    vals, errs = umbrella_gaps(P.vertices, P.facets, samples, seed)
    um_good = float(vals[good].sum())
    um_good_err = float(np.sqrt(np.sum(errs[good] ** 2)))

    h = t.heights[good]
    r = t.radii[good]
    area = t.areas[good]
    deficit = 1.0 - np.einsum("ij,ij->i", t.centroids[good], t.centroids[good])
    umbrella_lb = float(np.sum(d * np.sqrt(1.0 - r**2) / (2.0 * (d + 1)) * deficit * area))
    quarter = float(np.sum(np.sqrt(1.0 - r**2) / 4.0 * deficit * area))
    eighth = float(np.sum(deficit * area) / 8.0)
    height_sum = float(np.sum(h * area) / 2**24)
    floor = (surf_p / surf_b / (8.0 * n)) ** exponent
    area_sum = floor * float(area.sum()) / 2**27
    surf_term = floor * surf_p / 2**29
    final = surf_b * n ** (-exponent) / 2**36
    ratio = float(np.min(deficit / h)) if good.any() else math.inf

    checks = [
        Check("cap_height_le_1/8", t.heights.max(), 0.125, "<="),
        Check("cap_radius_le_1/2", t.radii.max(), 0.5, "<="),
        Check("sphere_surface_le_2x_polytope_surface", surf_b, 2.0 * surf_p, "<="),
        Check("cap_height_le_doubled_net_bound", t.heights.max(), net_height_bound(d, n_eff, factor=2.0), "<="),
        Check("shallow_surface_le_quarter", areas["shallow"], 0.25 * surf_p, "<="),
        Check("off_center_surface_le_quarter", areas["off_center"], 0.25 * surf_p, "<="),
        Check("good_surface_ge_half", areas["good"], 0.5 * surf_p, ">="),
        mc_check("volume_gap_ge_good_umbrellas", gap, um_good, ">=", um_good_err),
        mc_check("good_umbrellas_ge_umbrella_lower_bound", um_good, umbrella_lb, ">=", um_good_err),
        Check("umbrella_lower_bound_ge_quarter_form", umbrella_lb, quarter, ">="),
        Check("quarter_form_ge_eighth_form", quarter, eighth, ">="),
        Check("centroid_deficit_ge_2^-21_height", ratio, 2.0**-21, ">="),
        Check("eighth_form_ge_2^-24_height_sum", eighth, height_sum, ">="),
        Check("height_sum_ge_2^-27_area_sum", height_sum, area_sum, ">="),
        Check("area_sum_ge_2^-29_surface", area_sum, surf_term, ">="),
        Check("surface_term_ge_2^-36_bound", surf_term, final, ">="),
        Check("volume_gap_ge_2^-36_bound", gap, final, ">="),
    ]
    meta = _metadata(
        P, n,
        effective=effective,
        effective_n=int(n_eff),
        in_regime=bool(in_regime),
        regime_threshold=regime,
        samples_per_facet=int(samples),
        seed=int(seed),
        volume_gap=gap,
        c_hat=c_hat(gap, d, n),
        good_facets=int(good.sum()),
    )
    return AuditReport("theorem1", checks, meta)


def upper_bound_audit(P, n, samples=1_000_000, seed=1, facet_samples=10_000, oracle=True):
    """Check the net-polytope upper bounds on Hausdorff distance, volume gap and surface.

    With ``oracle`` the summed umbrella gaps and a ball rejection estimate
    (``samples`` points) are also compared against the exact volume gap.
    """
    require_origin_interior(P)
    d = P.dim
    vol = ball_volume(d)
    surf_b = sphere_surface(d)
    surf_p = surface_area(P)
    exponent = 2.0 / (d - 1)
    d_h = hausdorff_gap(P)
    net_bound = net_height_bound(d, n)
    gap = vol - polytope_volume(P)
    upper = 64.0 / 7.0 * math.pi * d * n ** (-exponent) * vol
    surf_ok = n >= surface_regime(d)

    checks = [
        Check("hausdorff_le_net_bound", d_h, net_bound, "<="),
        Check("volume_gap_le_inradius_bound", gap, vol * (1.0 - (1.0 - d_h) ** d), "<="),
        Check(
            "volume_gap_le_net_inradius_bound", gap, vol * (1.0 - (1.0 - min(net_bound, 1.0)) ** d), "<="
        ),
        Check("volume_gap_le_upper_bound", gap, upper, "<="),
        Check(
            "net_surface_bound_le_polytope_surface",
            (1.0 - min(net_bound, 1.0)) ** (d - 1) * surf_b,
            surf_p,
            "<=",
        ),
        Check("sphere_surface_le_2x_polytope_surface", surf_b, 2.0 * surf_p, "<=", applicable=surf_ok),
        Check("c_hat_le_upper_envelope", c_hat(gap, d, n), 64.0 / 7.0 * math.pi, "<="),
    ]
    meta = _metadata(
        P, n,
        surface_regime=surface_regime(d),
        hausdorff=d_h,
        volume_gap=gap,
        seed=int(seed),
    )
    if oracle:
        sd = symmetric_difference(P, samples, seed, facet_samples)
        dec, rej = sd.exact_decomposition, sd.rejection_oracle
        checks.append(mc_check("decomposition_le_volume_gap", dec.value, gap, "<=", dec.stderr))
        checks.append(mc_check("decomposition_ge_volume_gap", dec.value, gap, ">=", dec.stderr))
        both = math.hypot(dec.stderr, rej.stderr)
        checks.append(mc_check("decomposition_le_rejection", dec.value, rej.value, "<=", both))
        checks.append(mc_check("decomposition_ge_rejection", dec.value, rej.value, ">=", both))
        meta.update(samples=int(samples), samples_per_facet=int(facet_samples),
                    decomposition=dec.as_dict(), rejection=rej.as_dict())
    return AuditReport("upper_bounds", checks, meta)

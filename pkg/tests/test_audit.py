import json
import math
import warnings

import jsonschema
import pytest

from ballgap.audit import Check, mc_check, theorem1_audit, upper_bound_audit
from ballgap.exceptions import RegimeViolation
from ballgap.hull import convex_hull
from ballgap.serialize import schema

from oracles import octahedron, regular_polygon

LOWER_BOUND_ORDER = [
    "cap_height_le_1/8",
    "cap_radius_le_1/2",
    "sphere_surface_le_2x_polytope_surface",
    "cap_height_le_doubled_net_bound",
    "shallow_surface_le_quarter",
    "off_center_surface_le_quarter",
    "good_surface_ge_half",
    "volume_gap_ge_good_umbrellas",
    "good_umbrellas_ge_umbrella_lower_bound",
    "umbrella_lower_bound_ge_quarter_form",
    "quarter_form_ge_eighth_form",
    "centroid_deficit_ge_2^-21_height",
    "eighth_form_ge_2^-24_height_sum",
    "height_sum_ge_2^-27_area_sum",
    "area_sum_ge_2^-29_surface",
    "surface_term_ge_2^-36_bound",
    "volume_gap_ge_2^-36_bound",
]


def test_check_margin_and_tolerance():
    c = Check("x", 1.0, 2.0, "<=")
    assert c.margin == 1.0 and c.passed
    c = Check("x", 1.0, 2.0, ">=")
    assert c.margin == -1.0 and not c.passed
    assert Check("x", 1.0, 1.0 + 1e-14, ">=").passed
    assert Check("x", 1.0, 2.0, ">=", applicable=False).passed
    assert mc_check("x", 1.0, 1.2, ">=", stderr=0.1).passed
    assert not mc_check("x", 1.0, 1.4, ">=", stderr=0.1).passed
    with pytest.raises(ValueError):
        Check("x", 1, 2, "==")


def test_octahedron_out_of_regime():
    P = convex_hull(octahedron())
    with pytest.warns(RegimeViolation):
        rep = theorem1_audit(P, 6, samples=10_000)
    assert rep.names() == LOWER_BOUND_ORDER
    assert not rep.metadata["in_regime"]
    assert rep.metadata["regime_threshold"] == pytest.approx(689.4, abs=0.05)
    assert not rep["cap_height_le_1/8"].passed


def test_octahedron_upper_bounds():
    P = convex_hull(octahedron())
    rep = upper_bound_audit(P, 6, samples=200_000, facet_samples=50_000)
    c = rep["volume_gap_le_upper_bound"]
    assert c.lhs == pytest.approx(2.8554, abs=1e-4)
    assert c.rhs == pytest.approx(64 / 7 * math.pi * 3 / 6 * 4 * math.pi / 3, rel=1e-12)
    assert c.rhs == pytest.approx(60.15, abs=0.01)
    assert c.passed
    assert not rep["sphere_surface_le_2x_polytope_surface"].applicable


def test_regular_100_gon_upper_bound():
    P = convex_hull(regular_polygon(100))
    rep = upper_bound_audit(P, 100, samples=100_000)
    c = rep["volume_gap_le_upper_bound"]
    assert c.lhs == pytest.approx(math.pi - 50 * math.sin(math.pi / 50), rel=1e-10)
    assert c.lhs == pytest.approx(0.002067, abs=1e-6)
    assert c.rhs == pytest.approx(64 / 7 * math.pi * 2 * 1e-4 * math.pi, rel=1e-12)
    assert rep.passed


def test_d2_n300_in_regime(qn):
    P = qn(2, 300)
    with warnings.catch_warnings():
        warnings.simplefilter("error", RegimeViolation)
        rep = theorem1_audit(P, 300, samples=10_000)
    assert rep.metadata["in_regime"]
    assert rep.passed, rep.summary()


def test_d3_n700_all_links(qn):
    P = qn(3, 700)
    rep = theorem1_audit(P, 700, samples=10_000)
    assert rep.metadata["in_regime"]
    assert rep.passed, rep.summary()
    c = rep.metadata["c_hat"]
    assert 2**-36 <= c <= 64 / 7 * math.pi
    ub = upper_bound_audit(P, 700, samples=200_000)
    assert ub.passed, ub.summary()


def test_report_serialization(qn):
    rep = upper_bound_audit(qn(2, 50), 50, samples=20_000)
    doc = json.loads(rep.to_json())
    jsonschema.validate(doc, schema("audit_report"))
    assert doc["passed"] == all(c["passed"] for c in doc["checks"])
    lines = rep.to_csv().strip().splitlines()
    assert lines[0] == "name,lhs,rhs,relation,margin,tolerance,applicable,passed"
    assert len(lines) == len(rep.checks) + 1
    assert "upper_bounds: PASS" in rep.summary()
    with pytest.raises(KeyError):
        rep["missing"]

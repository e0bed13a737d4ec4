import json

import jsonschema
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ballgap import serialize
from ballgap.hull import convex_hull
from ballgap.serialize import PolytopeFormatError

from oracles import octahedron, random_sphere


def test_schema_valid_and_round_trip(tmp_path):
    P = convex_hull(octahedron())
    doc = serialize.polytope_to_dict(P)
    jsonschema.validate(doc, serialize.schema("polytope"))
    path = tmp_path / "p.json"
    serialize.save(P, path)
    Q = serialize.load(path)
    assert np.array_equal(Q.vertices, P.vertices)
    assert np.array_equal(Q.facets, P.facets)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10_000))
def test_round_trip_is_bit_exact(d, seed):
    P = convex_hull(random_sphere(np.random.default_rng(seed), 4 * d + 4, d))
    Q = serialize.loads(serialize.dumps(P))
    assert np.array_equal(Q.vertices, P.vertices)
    assert np.array_equal(Q.facets, P.facets)


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"dimension": 3}',
        '{"dimension": 3, "vertices": [[1, 0]], "facets": [[0, 0, 0]]}',
        '{"dimension": 2, "vertices": [[1, 0], [0, 1]], "facets": [[0, 1, 1]]}',
        '{"dimension": 2, "vertices": [[1, 0], [0, 1]], "facets": [[0, 5]]}',
        '{"dimension": 2, "vertices": [[1, 0], [-1, 0]], "facets": [[0, 1]]}',
    ],
)
def test_corrupt_documents(text):
    with pytest.raises(PolytopeFormatError):
        serialize.loads(text)


def test_schema_rejects_bad_shape():
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"dimension": 1, "vertices": [], "facets": []}, serialize.schema("polytope"))
    assert json.loads(json.dumps(serialize.schema("audit_report")))["type"] == "object"

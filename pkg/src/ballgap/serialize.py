"""Polytope JSON documents: ``{"dimension", "vertices", "facets"}``."""

import json
from importlib import resources

import numpy as np

from .exceptions import BallgapError
from .hull import from_facets


class PolytopeFormatError(BallgapError, ValueError):
    pass


def schema(name):
    """Load a bundled JSON schema (``"polytope"`` or ``"audit_report"``)."""
    text = resources.files("ballgap").joinpath(f"schemas/{name}.schema.json").read_text()
    return json.loads(text)


def polytope_to_dict(P):
    return {
        "dimension": int(P.dim),
        "vertices": [[float(x) for x in row] for row in P.vertices],
        "facets": [[int(i) for i in f] for f in P.facets],
    }


def polytope_from_dict(doc):
    try:
        d = int(doc["dimension"])
        V = np.asarray(doc["vertices"], dtype=np.float64)
        F = np.asarray(doc["facets"], dtype=np.intp)
    except (KeyError, TypeError, ValueError) as exc:
        raise PolytopeFormatError(f"malformed polytope document: {exc}") from exc
    if V.ndim != 2 or V.shape[1] != d:
        raise PolytopeFormatError(f"vertices must be rows of length {d}")
    if F.ndim != 2 or F.shape[1] != d:
        raise PolytopeFormatError(f"facets must list {d} vertex indices each")
    try:
        return from_facets(V, F)
    except ValueError as exc:
        raise PolytopeFormatError(str(exc)) from exc


def dumps(P, **kw):
    # json writes floats with repr, which round-trips doubles exactly
    return json.dumps(polytope_to_dict(P), **kw)


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PolytopeFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise PolytopeFormatError("polytope document must be a JSON object")
    return polytope_from_dict(doc)


def save(P, path):
    with open(path, "w") as fh:
        fh.write(dumps(P))
        fh.write("\n")


def load(path):
    with open(path) as fh:
        return loads(fh.read())

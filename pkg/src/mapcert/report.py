"""JSON report schema and serialization of certificates and invariants."""

from __future__ import annotations

import json
import math

import jsonschema
import numpy as np

from .engine import FINITE_COVER, HOMEOMORPHISM, Certificate
from .mapping.immersion import VERIFIED
from .topology.complex import boundary, component_complexes, connected_components, euler_characteristic
from .topology.homology import betti
from .topology.surfaces import classify_component, classify_surface, orientability

VERDICTS = ["Homeomorphism", "FiniteCover", "NotHomeomorphic", "NotCertified", "Inconclusive"]

_NULLABLE_INT = {"type": ["integer", "null"]}

INVARIANTS_SCHEMA = {
    "type": "object",
    "required": ["chi_X", "chi_Y", "boundary_components", "boundary_chis", "orientable",
                 "classifications"],
    "properties": {
        "chi_X": {"type": "integer"},
        "chi_Y": _NULLABLE_INT,
        "boundary_components": {"type": "object"},
        "boundary_chis": {"type": "object"},
        "orientable": {"type": "object"},
        "classifications": {"type": "object"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["verdict", "smooth_analogue", "hypotheses", "invariants", "diagnostics",
                 "timings_ms"],
    "properties": {
        "verdict": {"enum": VERDICTS},
        "theorem": {"type": "string", "pattern": "^T([1-9]|10)b?$"},
        "degree": _NULLABLE_INT,
        "smooth_analogue": {"type": "boolean"},
        "smoothness_note": {"type": "string"},
        "hypotheses": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "status", "evidence"],
                "properties": {"id": {"type": "string"}, "status": {"const": VERIFIED},
                               "evidence": {"type": "object"}},
            },
        },
        "invariants": INVARIANTS_SCHEMA,
        "diagnostics": {"type": "array", "items": {"type": "object"}},
        "trace": {"type": "array", "items": {"type": "string"}},
        "timings_ms": {"type": "object", "additionalProperties": {"type": "number"}},
    },
    "if": {"properties": {"verdict": {"enum": [HOMEOMORPHISM, FINITE_COVER]}}},
    "then": {"required": ["theorem"]},
    "else": {"not": {"required": ["theorem"]}},
}

INVARIANTS_REPORT_SCHEMA = {
    "type": "object",
    "required": ["invariants"],
    "properties": {
        "invariants": {
            "type": "object",
            "required": ["chi", "components", "boundary_components", "boundary_chis", "betti",
                         "torsion", "orientable", "boundary_classifications"],
            "properties": {
                "chi": {"type": "integer"},
                "components": {"type": "integer"},
                "boundary_components": {"type": "integer"},
                "boundary_chis": {"type": "array", "items": {"type": "integer"}},
                "betti": {"type": "array", "items": {"type": "integer"}},
                "torsion": {"type": "array"},
                "orientable": {"type": "boolean"},
                "boundary_classifications": {"type": "array", "items": {"type": "object"}},
            },
        },
    },
}


def jsonable(obj):
    """Convert numpy scalars, tuples and non-finite floats into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if hasattr(obj, "value") and hasattr(obj, "name"):    # enums
        return obj.name
    return obj


def certificate_report(cert: Certificate) -> dict:
    rep = {
        "verdict": cert.verdict,
        "degree": cert.degree,
        "smooth_analogue": cert.smooth_analogue,
        "smoothness_note": cert.smoothness_note,
        "hypotheses": [h.as_dict() for h in cert.hypotheses],
        "invariants": cert.invariants,
        "diagnostics": cert.diagnostics,
        "trace": cert.trace,
        "timings_ms": cert.timings_ms,
    }
    if cert.verdict in (HOMEOMORPHISM, FINITE_COVER):
        rep["theorem"] = cert.theorem
    rep = jsonable(rep)
    validate_report(rep)
    return rep


def validate_report(rep: dict) -> None:
    jsonschema.validate(rep, REPORT_SCHEMA)


def validate_invariants_report(rep: dict) -> None:
    jsonschema.validate(rep, INVARIANTS_REPORT_SCHEMA)


def dumps(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=False)


def invariants_report(complex_) -> dict:
    """Topological invariants of one mesh (the ``invariants`` command)."""
    ncomp, _ = connected_components(complex_)
    bd = boundary(complex_)
    comps = component_complexes(bd.complex) if not bd.is_empty else []
    hp = betti(complex_)
    orientable, _ = orientability(complex_)
    inv = {
        "dim": complex_.dim,
        "f_vector": list(complex_.f_vector),
        "chi": euler_characteristic(complex_),
        "components": ncomp,
        "boundary_components": len(comps),
        "boundary_chis": [euler_characteristic(c) for c, _ in comps],
        "betti": list(hp.betti),
        "torsion": [list(t) for t in hp.torsion],
        "orientable": bool(orientable),
        "boundary_classifications": [classify_component(c) for c, _ in comps],
    }
    if complex_.dim == 2:
        inv["classification"] = [classify_surface(c).as_dict() for c, _ in component_complexes(complex_)]
    rep = jsonable({"invariants": inv})
    validate_invariants_report(rep)
    return rep

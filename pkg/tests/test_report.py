import json

import jsonschema
import pytest

from mapcert import fixtures as F
from mapcert.engine import Certificate, Config, certify
from mapcert.mapping import AmbientSimplyConnected, ExplicitDomain, PiecewiseMap
from mapcert.report import (VERDICTS, certificate_report, invariants_report, jsonable,
                            validate_report)


def cert_for(fx, target=None, y=None):
    P = fx.default if target is None else target
    f = PiecewiseMap(fx.complex, fx.default, P)
    Y = y or ExplicitDomain(fx.complex, fx.default, same_mesh=True)
    return certify(f, Y, Config())


def cases():
    dc = F.double_cover_annulus(3, 16)
    tg = F.tangle(F.rect_grid(6, 6), 14)
    disk = F.disk(3, 12)
    ann = F.annulus()
    return {
        "Homeomorphism": cert_for(ann),
        "FiniteCover": cert_for(dc, dc.realizations["physical"]),
        "NotCertified": cert_for(tg, tg.realizations["physical"]),
        "NotHomeomorphic": cert_for(disk, y=ExplicitDomain(ann.complex, ann.default)),
        "image": cert_for(F.ball_hex(2), y=AmbientSimplyConnected()),
    }


@pytest.fixture(scope="module")
def reports():
    return {k: certificate_report(c) for k, c in cases().items()}


def test_reports_are_valid_json(reports):
    for rep in reports.values():
        back = json.loads(json.dumps(rep))
        validate_report(back)
        assert back["verdict"] in VERDICTS


def test_theorem_present_iff_positive(reports):
    for rep in reports.values():
        assert ("theorem" in rep) == (rep["verdict"] in ("Homeomorphism", "FiniteCover"))
    assert reports["FiniteCover"]["degree"] == 2
    assert reports["image"]["theorem"] == "T9"


def test_schema_rejects_inconsistent_reports(reports):
    bad = dict(reports["Homeomorphism"])
    del bad["theorem"]
    with pytest.raises(jsonschema.ValidationError):
        validate_report(bad)
    bad = dict(reports["NotCertified"], theorem="T3")
    with pytest.raises(jsonschema.ValidationError):
        validate_report(bad)
    bad = dict(reports["Homeomorphism"], verdict="Maybe")
    with pytest.raises(jsonschema.ValidationError):
        validate_report(bad)
    bad = dict(reports["Homeomorphism"])
    bad["hypotheses"] = [dict(bad["hypotheses"][0], status="Failed")]
    with pytest.raises(jsonschema.ValidationError):
        validate_report(bad)


def test_certificate_report_refuses_missing_theorem():
    with pytest.raises(jsonschema.ValidationError):
        certificate_report(Certificate("Homeomorphism", invariants={
            "chi_X": 0, "chi_Y": 0, "boundary_components": {}, "boundary_chis": {},
            "orientable": {}, "classifications": {}}))


def test_jsonable():
    import numpy as np
    out = jsonable({"a": np.int64(3), "b": (np.float64(1.5), float("inf")), 2: np.array([1, 2])})
    assert out == {"a": 3, "b": [1.5, "inf"], "2": [1, 2]}
    json.dumps(out)


@pytest.mark.parametrize("fn,chi,nb", [
    (lambda: F.annulus(), 0, 2), (lambda: F.sphere(1), 2, 0), (lambda: F.ball_hex(2), 1, 1),
    (lambda: F.klein(), 0, 0), (lambda: F.torus_shell(), 0, 2),
])
def test_invariants_report(fn, chi, nb):
    inv = invariants_report(fn().complex)["invariants"]
    assert inv["chi"] == chi and inv["boundary_components"] == nb
    assert len(inv["boundary_chis"]) == nb
    json.dumps(inv)


def test_invariants_report_klein_torsion():
    inv = invariants_report(F.klein().complex)["invariants"]
    assert inv["betti"] == [1, 1, 0] and inv["torsion"][1] == [2]
    assert inv["orientable"] is False
    assert inv["classification"][0]["name"] == "klein bottle"

import csv
import io
import json

import jsonschema
import pytest

from kvcert.certificate import (
    CertificateNode,
    cm_window,
    cone_certificate,
    emit,
    kodaira_violation,
    replay,
    theorem_kod_fails,
    validate,
    window_witnesses,
)
from kvcert.errors import HypothesisFailed, InvalidParams, WindowExceeded


@pytest.fixture(scope="module")
def cone():
    return cone_certificate(2, 3)


def test_cone_report_shape(cone):
    assert cone.dim_Z == 7
    assert cone.index == 1 and cone.omega_Z_line_bundle
    assert cone.assumptions == ["canonical"]
    assert (cone.witness["i"], cone.witness["q"]) == (5, -2)
    cert = cone.certificate
    cert.check_dag()
    assert not cert.depends_on_assumed("not-CM")
    assert cert.node("not-CM").payload["dims"]["holds"] == int(cone.not_cm)


def test_schema_and_replay(cone):
    doc = json.loads(emit(cone.certificate))
    validate(doc)
    assert replay(doc) == []


def test_replay_catches_tampering(cone):
    doc = json.loads(emit(cone.certificate))
    nd = next(n for n in doc["nodes"] if n["id"] == "dim-Z")
    nd["payload"]["dims"]["dim"] = 8
    assert replay(doc) == ["dim-Z"]


def test_schema_rejects_uncited_assumption(cone):
    doc = json.loads(emit(cone.certificate))
    nd = next(n for n in doc["nodes"] if n["status"] == "ASSUMED")
    del nd["citation"]
    with pytest.raises(jsonschema.ValidationError):
        validate(doc)


def test_node_contracts():
    with pytest.raises(ValueError):
        CertificateNode("x", "ASSUMED", "s", {"location": "l", "quote": "q"})
    with pytest.raises(ValueError):
        CertificateNode("x", "COMPUTED", "s", {"location": "l", "quote": "q"})
    with pytest.raises(ValueError):
        CertificateNode("x", "GUESSED", "s", {"location": "l", "quote": "q"})


def test_emit_is_deterministic(cone):
    again = cone_certificate(2, 3)
    assert emit(cone.certificate) == emit(again.certificate)
    assert emit(cone.certificate, "csv") == emit(again.certificate, "csv")


def test_csv_has_one_row_per_node(cone):
    rows = list(csv.reader(io.StringIO(emit(cone.certificate, "csv").decode())))
    assert rows[0] == ["id", "status", "statement", "inputs", "location", "dims", "bounds"]
    assert [r[0] for r in rows[1:]] == cone.certificate.ids()
    with pytest.raises(ValueError):
        emit(cone.certificate, "xml")


def test_theorem_for_p3():
    cert = theorem_kod_fails(3)
    assert cert.verdict["holds"] is True
    assert cert.verdict["lower_bound"] >= 1
    assert replay(json.loads(emit(cert))) == []


def test_theorem_for_p2_reports_its_numbers():
    cert = theorem_kod_fails(2)
    v = cert.verdict
    assert v["holds"] == (v["lower_bound"] >= 1)
    if not v["holds"]:
        assert "diagnostic" in v


def test_refusals():
    with pytest.raises(HypothesisFailed):
        theorem_kod_fails(5)
    with pytest.raises(HypothesisFailed):
        kodaira_violation(3, 3)
    with pytest.raises(HypothesisFailed):
        cone_certificate(3, 3)
    with pytest.raises(InvalidParams):
        kodaira_violation(2, 4)


def test_window():
    table = cm_window(2, 3)
    assert sorted(table) == [-2, -1, 0, 1]
    assert all(len(row) == 5 for row in table.values())
    assert all(iv.is_exact and iv.value == 0 for iv in table[0])
    # Serre duality pairs q with -q-1 and i with 6-i
    for q in (0, 1):
        assert [str(v) for v in table[-q - 1]] == [str(v) for v in reversed(table[q])]
    with pytest.raises(WindowExceeded):
        cm_window(2, 3, q=2)


def test_window_for_p3_has_a_witness():
    w = window_witnesses(cm_window(3, 3))
    assert (-2, 5) in {(q, i) for q, i, _ in w}

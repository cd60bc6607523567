import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stacky import cli, corpus
from stacky.document import (
    InputDocument,
    ReportDocument,
    document_from_polytope,
    format_rational,
    parse,
    parse_rational,
    parse_report,
    serialize,
    serialize_report,
)
from stacky.errors import RangeError, RationalFormatError, SchemaError

P2 = {"kind": "stacky_polytope", "N": {"free_rank": 2, "torsion": []},
      "beta": [[1, 0, -1], [0, 1, -1]], "offsets": ["0/1", "0/1", "1/1"]}
WPS123 = {"kind": "wps", "weights": [1, 2, 3]}


def dumps(obj):
    return json.dumps(obj)


def cube_dup_text():
    return serialize(document_from_polytope(corpus.cube_with_duplicate()))


# -- parsing -----------------------------------------------------------------


def test_parse_examples():
    doc = parse(dumps(WPS123))
    assert doc.kind == "wps" and doc.weights == (1, 2, 3)
    doc = parse(dumps(P2))
    assert doc.N == (2, ()) and doc.offsets == (0, 0, 1)
    assert parse(serialize(doc)) == doc


def test_parse_rejects_non_divisible_torsion():
    bad = dict(P2, N={"free_rank": 2, "torsion": [6, 2]},
               beta=[[1, 0, -1], [0, 1, -1], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(SchemaError) as exc:
        parse(dumps(bad))
    assert exc.value.path == "$.N.torsion"


@pytest.mark.parametrize("value", ["2/4", "1/0", "1/-2", "abc", 0.5, True])
def test_parse_rejects_bad_rationals(value):
    with pytest.raises(RationalFormatError):
        parse(dumps(dict(P2, offsets=["0/1", "0/1", value])))


def test_parse_accepts_integers_and_whole_numbers():
    assert parse_rational("3") == 3
    assert parse_rational(-2) == -2
    assert parse_rational("-3/4") == Fraction(-3, 4)


def test_parse_error_paths():
    with pytest.raises(SchemaError) as exc:
        parse('{"kind": "wps",\n "weights": [1, 2,]}')
    assert "line 2" in str(exc.value)
    with pytest.raises(SchemaError) as exc:
        parse(dumps(dict(P2, beta=[[1, 0, -1], [0, 1]])))
    assert exc.value.path == "$.beta[1]"
    with pytest.raises(SchemaError):
        parse(dumps({"kind": "polygon"}))
    with pytest.raises(SchemaError):
        parse(dumps(dict(WPS123, extra=1)))
    with pytest.raises(RangeError):
        parse(dumps({"kind": "wps", "weights": [1, 0]}))


def test_parse_fan_indices():
    fan = {"kind": "stacky_fan", "N": {"free_rank": 1, "torsion": []}, "beta": [[1, -1]],
           "cones": [[1], [2]]}
    doc = parse(dumps(fan))
    assert doc.cones == ((0,), (1,))
    with pytest.raises(RangeError) as exc:
        parse(dumps(dict(fan, cones=[[1], [3]])))
    assert exc.value.path == "$.cones[1][0]"


def test_serialization_is_canonical():
    doc = parse(dumps(P2))
    text = serialize(doc)
    assert text.endswith("\n")
    assert text == serialize(parse(text))
    raw = json.loads(text)
    assert list(raw) == sorted(raw)
    assert raw["offsets"] == ["0/1", "0/1", "1/1"]


@settings(max_examples=200, deadline=None)
@given(st.fractions(max_denominator=50))
def test_rational_round_trip(x):
    text = format_rational(x)
    assert parse_rational(text) == x
    assert format_rational(parse_rational(text)) == text


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=1, max_size=5))
def test_wps_document_round_trip(weights):
    doc = InputDocument(kind="wps", weights=tuple(weights))
    text = serialize(doc)
    assert parse(text) == doc and serialize(parse(text)) == text


def test_report_round_trip_is_byte_identical():
    for cmd in cli.COMMANDS:
        doc = parse(dumps(WPS123))
        report = cli.run(cmd, doc)
        text = serialize_report(report)
        again = parse_report(text)
        assert again == report
        assert serialize_report(again) == text


# -- commands ----------------------------------------------------------------


def test_run_correspond_weighted_projective():
    report = cli.run("correspond", parse(dumps(WPS123)))
    assert report.exit_code == 0 and report.body["passed"]
    assert report.body["shared"]["weights"] == [[1, 2, 3]]


def test_run_validate_duplicated_cube():
    report = cli.run("validate", parse(cube_dup_text()))
    assert report.exit_code == 1
    msgs = [v["message"] for v in report.body["validation"] if not v["passed"]]
    assert msgs == ["facet 7 redundant"]
    lenient = cli.run("validate", parse(cube_dup_text()), mode="lenient")
    assert lenient.exit_code == 0 and lenient.body["warnings"] == ["facet 7 redundant"]


def test_run_quotient_data_projective_plane():
    body = cli.run("quotient-data", parse(dumps(P2))).body
    assert body["group"]["description"] == "T^1"
    assert body["weights"] == [[1, 1, 1]]
    assert body["tau"] == ["1/1"]
    assert body["f_tau"] == [[], [1], [2], [3], [1, 2], [1, 3], [2, 3]]


def test_run_stabilizers_and_wps():
    body = cli.run("wps", parse(dumps({"kind": "wps", "weights": [1, 1, 2]}))).body
    nontrivial = [s["stratum"] for s in body["stabilizers"] if s["order"] != 1]
    assert nontrivial == [[1, 2]]
    body = cli.run("stabilizers", parse(dumps(WPS123))).body
    orders = {tuple(s["stratum"]): s["order"] for s in body["stabilizers"]}
    assert orders[(1, 2)] == 3 and orders[(1, 3)] == 2 and orders[(2, 3)] == 1


def test_run_labelled():
    report = cli.run("labelled", document_from_polytope(corpus.labelled_simplex()))
    assert report.exit_code == 0 and report.body["labels"] == [1, 1, 2]
    report = cli.run("labelled", document_from_polytope(corpus.gerby_simplex()))
    assert report.exit_code == 1 and report.body["error_type"] == "NotFreeError"


def test_run_fan_documents():
    fan = {"kind": "stacky_fan", "N": {"free_rank": 1, "torsion": []}, "beta": [[1, -1]],
           "cones": [[1], [2]]}
    body = cli.run("fan", parse(dumps(fan))).body
    assert body["passed"] and body["complete"]
    assert body["admissible_family"] == [[], [1], [2]]
    bad = dict(fan, beta=[[1, 0]])
    report = cli.run("validate", parse(dumps(bad)))
    assert report.exit_code == 1


def test_run_torus_quotient_errors_are_mathematical():
    doc = parse(dumps({"kind": "torus_quotient", "rho": [[1, -1]], "offsets": ["0/1", "0/1"]}))
    report = cli.run("quotient-data", doc)
    assert report.exit_code == 1 and report.body["error_type"] == "EmptyOrUnboundedPolytope"


def test_run_rejects_wrong_kind():
    fan = parse(dumps({"kind": "stacky_fan", "N": {"free_rank": 1, "torsion": []},
                       "beta": [[1, -1]], "cones": [[1], [2]]}))
    with pytest.raises(SchemaError):
        cli.run("quotient-data", fan)


def test_run_is_deterministic():
    doc = parse(cube_dup_text())
    a = serialize_report(cli.run("validate", doc))
    b = serialize_report(cli.run("validate", parse(cube_dup_text())))
    assert a == b


# -- entry point -------------------------------------------------------------


def test_main_reads_file_and_stdin(tmp_path, capsys, monkeypatch):
    path = tmp_path / "p2.json"
    path.write_text(dumps(P2))
    assert cli.main(["quotient-data", str(path)]) == 0
    out = capsys.readouterr().out
    assert parse_report(out).body["tau"] == ["1/1"]

    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(dumps(WPS123).encode())))
    assert cli.main(["correspond", "--lenient", "-"]) == 0


def test_main_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["validate", str(bad)]) == 2
    captured = capsys.readouterr()
    assert "input error" in captured.err
    assert parse_report(captured.out).exit_code == 2

    cube = tmp_path / "cube.json"
    cube.write_text(cube_dup_text())
    assert cli.main(["validate", str(cube)]) == 1
    captured = capsys.readouterr()
    assert "facet 7 redundant" in captured.err
    assert cli.main(["validate", "--lenient", str(cube)]) == 0
    capsys.readouterr()

    assert cli.main(["validate", str(tmp_path / "missing.json")]) == 2
    assert cli.main(["validate"]) == 2


def test_main_approx_is_informational(tmp_path, capsys):
    path = tmp_path / "w.json"
    path.write_text(dumps({"kind": "wps", "weights": [1, 2, 3]}))
    cli.main(["quotient-data", "--approx", str(path)])
    body = parse_report(capsys.readouterr().out).body
    assert body["approx"]["tau"] == ["1"]
    assert body["tau"] == ["1/1"]


def test_random_polygon_uses_seed(capsys, monkeypatch):
    monkeypatch.setenv("STACKY_SEED", "5")
    assert cli.main(["random-polygon"]) == 0
    first = capsys.readouterr().out
    assert cli.main(["random-polygon"]) == 0
    assert capsys.readouterr().out == first
    doc = parse(first)
    assert cli.run("correspond", doc).exit_code == 0


def test_console_script(tmp_path):
    path = tmp_path / "w.json"
    path.write_text(dumps(WPS123))
    env = dict(os.environ, STACKY_SEED="1")
    proc = subprocess.run([sys.executable, "-m", "stacky.cli", "correspond", str(path)],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert parse_report(proc.stdout).body["passed"] is True
    assert proc.stderr == ""


def test_report_document_fields():
    report = ReportDocument("validate", 0, {"passed": True})
    raw = json.loads(serialize_report(report))
    assert raw["units"] == "pi" and raw["schema_version"] == 1

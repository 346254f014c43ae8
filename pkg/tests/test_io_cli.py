from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

from nilmetric.cli import run
from nilmetric.construct import DataSet, catalog_ids, example_catalog
from nilmetric.errors import SchemaError
from nilmetric.group import LatticeSpec
from nilmetric.io import dumps, parse_input, parse_text, serialize, to_document
from nilmetric.metgeo import MetricNilLieAlgebra

FIXTURES = Path(__file__).parent / "fixtures"


def h3_doc(**overrides):
    doc = {
        "dim": 3,
        "brackets": [{"i": 1, "j": 2, "coeffs": {"3": 1}}],
        "metric": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    }
    doc.update(overrides)
    return doc


# -- parsing and serialization -------------------------------------------


@pytest.mark.parametrize("name", catalog_ids())
def test_round_trip_catalog(name):
    obj = example_catalog(name)
    text = serialize(obj)
    back = parse_text(text)
    assert serialize(back) == text
    if isinstance(obj, MetricNilLieAlgebra):
        assert back.alg == obj.alg and back.gram == obj.gram
    else:
        assert back == obj


def test_fixtures_parse():
    assert isinstance(parse_input(FIXTURES / "h3_riemannian.json"), MetricNilLieAlgebra)
    assert isinstance(parse_input(FIXTURES / "dim6_cotangent_h3.json"), MetricNilLieAlgebra)
    assert isinstance(parse_input(FIXTURES / "so3_adjoint_dataset.json"), DataSet)
    lat = parse_input(FIXTURES / "dim6_lattice.json")
    assert isinstance(lat, LatticeSpec) and lat.scaling == (1, 1, 1, 2, 1, 2)


def test_fixture_matches_catalog():
    assert parse_input(FIXTURES / "dim6_cotangent_h3.json").gram == example_catalog("dim6_cotangent_h3").gram


def test_rational_strings_accepted():
    m = parse_text(json.dumps(h3_doc(metric=[["1/2", 0, 0], [0, " 3 / 4 ", 0], [0, 0, -2]])))
    assert m.gram[0, 0] * 2 == 1 and m.gram[1, 1] * 4 == 3


@pytest.mark.parametrize(
    "doc, pointer",
    [
        (h3_doc(brackets=[{"i": 1, "j": 2, "coeffs": {"3": 1}}, {"i": 2, "j": 1, "coeffs": {"3": 1}}]), "/brackets/1"),
        (h3_doc(brackets=[{"i": 1, "j": 2, "coeffs": {"3": 1}}, {"i": 1, "j": 2, "coeffs": {"3": 2}}]), "/brackets/1"),
        (h3_doc(metric=[[1, 0, 0], [0, "1/0", 0], [0, 0, 1]]), "/metric/1/1"),
        (h3_doc(metric=[[1, 0, 0], [0, 0.5, 0], [0, 0, 1]]), "/metric/1/1"),
        (h3_doc(metric=[[1, 2, 0], [0, 1, 0], [0, 0, 1]]), "/metric"),
        (h3_doc(brackets=[{"i": 1, "j": 4, "coeffs": {"3": 1}}]), "/brackets/0"),
        (h3_doc(extra=True), ""),
    ],
)
def test_schema_errors_carry_pointer(doc, pointer):
    with pytest.raises(SchemaError) as info:
        parse_text(json.dumps(doc))
    assert info.value.pointer == pointer


def test_mirror_entry_consistent_is_fine():
    m = parse_text(json.dumps(h3_doc(brackets=[{"i": 1, "j": 2, "coeffs": {"3": 1}}, {"i": 2, "j": 1, "coeffs": {"3": -1}}])))
    assert m.bracket((1, 0, 0), (0, 1, 0)) == (0, 0, 1)


def test_invalid_json():
    with pytest.raises(SchemaError):
        parse_text("{not json")


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'
    assert to_document(LatticeSpec((1, 2)))["scaling"] == ["1", "2"]


# -- CLI ------------------------------------------------------------------


def cli(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_report_and_exit_codes(capsys):
    code, out, _ = cli(capsys, "--command", "reductive", "--catalog", "h3_lorentz_2")
    rep = json.loads(out)
    assert code == 0 and rep["exit_code"] == 0 and rep["result"]["verdict"] == "NaturallyReductive"
    assert rep["tool"] == "nilmetric" and len(rep["input_sha256"]) == 64

    code, out, _ = cli(capsys, "--command", "adinv", "--catalog", "h3_riemannian")
    assert code == 2 and json.loads(out)["result"]["witness"] == [1, 2, 3]

    code, out, _ = cli(capsys, "--command", "reductive", "--catalog", "r_x_h3_lorentz")
    assert code == 3 and json.loads(out)["result"]["verdict"] == "Inapplicable"

    code, out, _ = cli(capsys, "--command", "reductive", "--catalog", "dim6_cotangent_h3")
    assert code == 3 and json.loads(out)["error"]["type"] == "DegenerateCenter"

    code, _, err = cli(capsys, "--command", "bogus")
    assert code == 1 and "nilmetric:" in err

    code, out, _ = cli(capsys, "--command", "report")
    assert code == 1


def test_cli_schema_error_pointer(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(h3_doc(metric=[[1, 0, 0], [0, "x", 0], [0, 0, 1]])))
    code, out, _ = cli(capsys, "--command", "validate", "--input", str(bad))
    rep = json.loads(out)
    assert code == 1 and rep["error"]["pointer"] == "/metric/1/1"


def test_cli_invalid_data_set_reports_all_violations(capsys, tmp_path):
    doc = to_document(example_catalog("so3_adjoint_dataset"))
    doc["rep"] = [doc["rep"][0]] * 3
    path = tmp_path / "ds.json"
    path.write_text(json.dumps(doc))
    code, out, _ = cli(capsys, "--command", "validate", "--input", str(path))
    rep = json.loads(out)
    assert code == 2
    kinds = {v["type"] for v in rep["error"]["violations"]}
    assert {"NotFaithful", "TrivialSubrep"} <= kinds


def test_cli_reports_are_byte_identical(capsys, tmp_path):
    texts = []
    for k in range(2):
        target = tmp_path / f"r{k}.json"
        assert run(["--command", "report", "--input", str(FIXTURES / "so3_adjoint_dataset.json"),
                    "--output", str(target)]) == 0
        texts.append(target.read_bytes())
    assert texts[0] == texts[1]
    assert b"timestamp" not in texts[0]


def test_cli_lattice(capsys):
    args = ["--command", "lattice", "--input", str(FIXTURES / "dim6_cotangent_h3.json")]
    code, out, _ = cli(capsys, *args, "--lattice", str(FIXTURES / "dim6_lattice.json"))
    assert code == 0 and json.loads(out)["result"]["status"] == "Closed"
    code, out, _ = cli(capsys, *args, "--lattice", str(FIXTURES / "identity_lattice.json"))
    res = json.loads(out)["result"]
    assert code == 2 and res["witness"] == [4, 5]


def test_cli_construct_pipeline(capsys):
    code, out, _ = cli(capsys, "--command", "construct", "--input", str(FIXTURES / "so3_adjoint_dataset.json"),
                       "--pipeline", "isotropy")
    res = json.loads(out)["result"]
    assert code == 0 and res["isotropy"]["dim"] == 3 and res["algebra"]["dim"] == 6


def test_cli_geodesic_csv(capsys, tmp_path):
    target = tmp_path / "geo.csv"
    code, out, _ = cli(capsys, "--command", "geodesic", "--catalog", "h3_lorentz_1", "--z0", "0,0,1",
                       "--v0", "1,0,0", "--output", str(target))
    rep = json.loads(out)
    assert code == 0 and rep["result"]["samples"] == 51
    rows = list(csv.DictReader(io.StringIO(target.read_text())))
    assert len(rows) == 51
    assert max(float(r["residual"]) for r in rows) <= 1e-8
    assert float(rows[-1]["t"]) == pytest.approx(5.0)


def test_cli_geodesic_to_stdout(capsys):
    code, out, err = cli(capsys, "--command", "geodesic", "--catalog", "h3_riemannian", "--t-end", "1")
    assert code == 0
    assert out.splitlines()[0].startswith("t,")
    assert json.loads(err)["result"]["samples"] == 11


@pytest.mark.parametrize("command", ["validate", "report", "curvature", "sectional", "ricci", "isotropy", "catalog"])
def test_cli_commands_run_on_h3(capsys, command):
    code, out, _ = cli(capsys, "--command", command, "--catalog", "h3_lorentz_1")
    assert code == 0
    assert json.loads(out)["command"] == command


def test_cli_corank_and_catalog_listing(capsys):
    code, out, _ = cli(capsys, "--command", "corank", "--catalog", "dim6_cotangent_h3")
    assert code == 0 and json.loads(out)["result"]["corank"] == 0
    code, out, _ = cli(capsys, "--command", "catalog")
    assert json.loads(out)["result"]["ids"] == catalog_ids()


def test_cli_sectional_vectors(capsys):
    code, out, _ = cli(capsys, "--command", "sectional", "--catalog", "h3_riemannian", "--x", "1,0,0", "--y", "0,1,0")
    assert code == 0 and json.loads(out)["result"]["K"] == "-3/4"

import csv
import io
import json
import subprocess
import sys

import pytest

from diracpi.cli import ConfigError, JobConfig, document_schema, main, render, run, validate_document

SKEW = "0,0,2,0,-2,0,0,0"
TWO_S0 = "2,0,0,0,0,0,2,0"


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_example(capsys):
    code, out, _ = call(capsys, "classify", "--m", "0", "--A", SKEW)
    assert code == 0
    doc = json.loads(out)
    assert doc["result"]["case"] == "1a"
    assert doc["result"]["point_spectrum"] == "NonRealPlane"
    validate_document(doc)


def test_spectrum_example(capsys):
    code, out, _ = call(capsys, "spectrum", "--A", TWO_S0)
    assert code == 0
    recs = json.loads(out)["result"]["eigenvalues"]
    assert len(recs) == 1
    assert recs[0]["multiplicity"] == 1
    assert abs(recs[0]["z"][0]) < 1e-12 and abs(recs[0]["z"][1]) < 1e-12


def test_resolvent_samples_and_negative_values(capsys):
    code, out, _ = call(capsys, "resolvent", "--A", TWO_S0, "--z", "-0.5,1", "--N", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["inputs"]["z"] == [-0.5, 1.0]
    assert len(doc["result"]["samples"]) == 9
    validate_document(doc)


def test_numerical_failure_exit_code(capsys):
    # the whole gap is point spectrum for this coupling
    code, out, err = call(capsys, "resolvent", "--A", SKEW, "--z", "-1,1")
    assert code == 3 and out == ""
    assert "NotInResolventSetError" in err


@pytest.mark.parametrize("argv", [
    ["classify", "--A", "1,2,3"],
    ["classify", "--A", "nan,0,0,0,0,0,0,0"],
    ["spectrum", "--A", TWO_S0, "--m", "0"],
    ["resolvent", "--A", TWO_S0],
    ["classify", "--A", TWO_S0, "--format", "csv"],
    ["approx-spectrum", "--A", TWO_S0, "--profile", "lorentz"],
    ["approx-spectrum", "--A", TWO_S0, "--region", "-2,2,-1,1"],
    ["bogus"],
])
def test_config_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2 and out == ""
    assert err


def test_approx_converge_csv(capsys, tmp_path):
    path = tmp_path / "table.csv"
    code, out, _ = call(capsys, "approx-converge", "--A", TWO_S0, "--z", "0,1",
                        "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert [float(r["eps"]) for r in rows] == [0.2, 0.1, 0.05]
    d = [float(r["hs_distance"]) for r in rows]
    assert d[0] > d[1] > d[2]
    assert all(r["nodes"].isdigit() for r in rows)


def test_approx_spectrum_document(capsys):
    code, out, _ = call(capsys, "approx-spectrum", "--A", TWO_S0, "--eps", "0.2,0.1")
    assert code == 0
    doc = validate_document_json(out)
    res = doc["result"]["results"]
    assert [len(r["eigenvalues"]) for r in res] == [1, 1]
    for r in res:
        assert abs(r["eigenvalues"][0]["z"][1]) <= r["enclosure"]


def validate_document_json(text):
    doc = json.loads(text)
    validate_document(doc)
    return doc


def test_nonrel_converge(capsys):
    code, out, _ = call(capsys, "nonrel-converge", "--A", "-2,0,0,0,0,0,0,0", "--N", "401")
    assert code == 0
    doc = validate_document_json(out)
    d = [row["distance"] for row in doc["result"]["table"]]
    assert d[0] > d[1] > d[2]


def test_oracle_verify(capsys):
    code, out, _ = call(capsys, "oracle-verify", "--A", TWO_S0, "--eps", "0.2", "--L", "8")
    assert code == 0
    doc = validate_document_json(out)
    assert doc["result"]["N"] == 512
    assert doc["result"]["table"][0]["difference"] < 1e-4


def test_output_is_deterministic():
    argv = [sys.executable, "-m", "diracpi", "approx-spectrum", "--A", "2,0,1,0,-0.5,0,2.5,-0.4"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and len(a) > 0


def test_run_and_render_round_trip():
    cfg = JobConfig(command="classify", A=(0, 4, -1, 0), m=1.0, c=(10.0,), z=None,
                    eps=(0.1,), profile="box", region=None, L=None, N=None, tol=1e-12)
    cfg.validate()
    code, doc = run(cfg)
    assert code == 0 and doc["result"]["point_spectrum"] == "WholeGap"
    again = json.loads(render(doc))
    assert again == doc
    back = validate_document(again)
    assert back.A == cfg.A and back.m == cfg.m


def test_tampered_document_rejected():
    cfg = JobConfig(command="classify", A=(0, 4, -1, 0), m=1.0, c=(10.0,), z=None,
                    eps=(0.1,), profile="box", region=None, L=None, N=None, tol=1e-12)
    _, doc = run(cfg)
    doc["inputs"]["eps"] = [-1.0]
    with pytest.raises(ConfigError):
        validate_document(doc)
    doc["command"] = "nope"
    with pytest.raises(ConfigError):
        validate_document(doc)


def test_schemas_exist_for_all_commands():
    for cmd in ("classify", "spectrum", "resolvent", "approx-spectrum", "approx-converge",
                "nonrel-converge", "oracle-verify"):
        assert document_schema(cmd)["properties"]["command"]["const"] == cmd


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0

import csv
import io
import json
from pathlib import Path

import pytest

from dynlab.cli import main

DATA = Path(__file__).resolve().parents[1] / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_curvature_flat_tube_all_zero(capsys):
    code, out, _ = run(capsys, "curvature", "--metric", "flat-tube")
    assert code == 0
    doc = json.loads(out)
    assert all(v == 0.0 for v in doc["max_abs"].values())
    assert len(doc["components"]) == 75 and doc["claims"] == []


def test_curvature_ricca_compare(capsys):
    code, out, _ = run(capsys, "curvature", "--metric", "ricca-tube", "--param", "kappa=0.1", "--compare-paper")
    assert code == 0
    verdicts = {c["id"]: c["verdict"] for c in json.loads(out)["claims"]}
    assert {"Eq.40a@ricca", "Eq.40b", "Eq.40c", "Eq.41a@ricca", "Eq.41b"} <= set(verdicts)


def test_curvature_non_dynamo_eq45(capsys):
    code, out, _ = run(capsys, "curvature", "--metric", "non-dynamo-tube", "--compare-paper")
    claim = json.loads(out)["claims"][0]
    assert code == 0 and claim["id"] == "Eq.45" and claim["verdict"] == "discrepant"
    first = claim["samples"][0]
    assert first["paper_value"] == -3.0 and first["computed_value"] == 0.0


def test_curvature_metric_file_and_grid_csv(capsys):
    code, out, _ = run(capsys, "curvature", "--metric-file", str(DATA / "three_sphere.metric"),
                       "--grid", "r=0.5:1.5:3,theta_R=1:1:1,s=0:0:1", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 3
    import math

    for row in rows:
        assert float(row["R_rthrth"]) == pytest.approx(math.sin(float(row["r"])) ** 2, rel=1e-9)


def test_curvature_opaque_metric_uses_default_realizations(capsys):
    code, out, _ = run(capsys, "curvature", "--metric", "conformal-tube")
    doc = json.loads(out)
    assert code == 0 and "Omega" in doc["metric"]["realizations"]


def test_verify_theorems(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "1")
    rep = json.loads(out)["report"]
    assert code == 0 and rep["verdict"] == "pass" and rep["max_residual"] < 1e-12
    code, out, _ = run(capsys, "verify", "--theorem", "2", "--field-file", str(DATA / "bad_K.fld"))
    rep = json.loads(out)["report"]
    assert code == 0 and rep["verdict"] == "violation"
    code, out, _ = run(capsys, "verify", "--theorem", "2", "--field-file", str(DATA / "good_K.fld"))
    assert json.loads(out)["report"]["verdict"] == "non-stretched tube"
    code, out, _ = run(capsys, "verify", "--theorem", "3")
    res = json.loads(out)["result"]
    assert code == 0 and res["gamma"] == 0.0 and res["classification"] == "marginal"


def test_verify_theorem3_params_and_csv(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "3", "--param", "omega0=0.3", "--format", "csv")
    assert code == 0 and out.startswith("residual,value")
    code, _, err = run(capsys, "verify", "--theorem", "3", "--param", "bogus=1")
    assert code == 1 and "unknown mode parameters" in err


def test_growth(capsys):
    code, out, _ = run(capsys, "growth", "--eta", "1", "--kappa-gauss", "0")
    assert code == 0 and json.loads(out)["result"]["gamma"] == 0.0
    code, out, _ = run(capsys, "growth", "--floquet", "1", "2.71828", "1")
    assert json.loads(out)["result"]["gamma"] == pytest.approx(1.0, abs=1e-5)
    code, out, _ = run(capsys, "growth", "--eta", "0", "--kappa-gauss", "-1")
    assert json.loads(out)["result"]["gamma"] == 1.0
    code, out, _ = run(capsys, "growth", "--eta", "0.5", "--kappa-gauss", "1")
    assert json.loads(out)["result"]["gamma"] == {"re": -0.5, "im": 1.0}


def test_growth_sweep_csv(capsys):
    code, out, _ = run(capsys, "growth", "--eta", "0.5", "--kappa-sweep=-1:1:5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 5 and rows[2]["classification"] == "marginal"


def test_ledger_json_and_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "ledger")
    doc = json.loads(out)
    assert code == 0 and len(doc["claims"]) >= 8
    for claim in doc["claims"]:
        assert claim["verdict"] in {"confirmed", "discrepant", "inconclusive"}
        assert len(claim["samples"]) >= 3
    target = tmp_path / "ledger.csv"
    code, out, _ = run(capsys, "ledger", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("id,equation,verdict")


def test_ledger_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["ledger", "--seed", "7", "--out", str(a)])
    main(["ledger", "--seed", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["curvature", "--metric-file", "missing.metric"],
        ["verify", "--theorem", "2", "--field-file", "missing.fld"],
        ["curvature", "--metric", "flat-tube", "--param", "kappa=1"],
        ["curvature", "--metric", "flat-tube", "--grid", "r=0:1:3"],
        ["growth", "--floquet", "0", "1", "1"],
    ],
)
def test_data_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and "error" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["curvature", "--metric", "moebius"],
        ["growth", "--eta", "abc"],
        ["growth"],
        ["verify"],
        ["ledger", "--format", "xml"],
        ["curvature", "--param", "novalue"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == 2


def test_bad_metric_file_exits_one(capsys, tmp_path):
    p = tmp_path / "bad.metric"
    p.write_text("g_rr = 1 +\n")
    code, _, err = run(capsys, "curvature", "--metric-file", str(p))
    assert code == 1 and "line 1" in err

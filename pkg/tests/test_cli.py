import csv
import json
import subprocess
import sys

import pytest

from eopladder.cli import DEFAULT_CONFIG, GridConfig, main

SMALL = {
    "families": [
        {"kind": "X1Jacobi", "alpha_beta": [["1", "2"]]},
        {"kind": "XmLaguerre", "m": [0, 2], "k": ["1"]},
        {"kind": "XmJacobi", "m": [2], "alpha_beta": [["1/2", "3/2"]]},
    ],
    "n_span": 3,
    "depth": 2,
    "quad_nodes": 200,
    "convergence_nodes": 100,
}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_gen_json(tmp_path):
    out = tmp_path / "g.json"
    assert main(["gen", "--kind", "X1Laguerre", "--k", "1", "--n-max", "2", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert [r["coeffs"] for r in d["rows"]] == [["2", "1"], ["3", "0", "-1"]]
    assert d["admissible"] is True


def test_gen_csv_xm_jacobi(tmp_path):
    out = tmp_path / "g.csv"
    args = ["gen", "--kind", "XmJacobi", "--m", "2", "--alpha", "1/2", "--beta", "3/2", "--n-max", "5",
            "--format", "csv", "--out", str(out)]
    assert main(args) == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert [r[0] for r in rows[1:]] == ["2", "3", "4", "5"]
    for r in rows[1:]:
        coeffs = [c for c in r[1:] if c]
        assert len(coeffs) - 1 == int(r[0])


def test_gen_base_only_is_monic(tmp_path):
    out = tmp_path / "g.json"
    assert main(["gen", "--kind", "XmLaguerre", "--m", "3", "--k", "5/2", "--out", str(out)]) == 0
    rows = json.loads(out.read_text())["rows"]
    assert len(rows) == 1 and rows[0]["coeffs"][-1] == "1"


def test_gen_invalid_spec():
    assert main(["gen", "--kind", "X1Jacobi", "--alpha", "1", "--beta", "1"]) == 2
    assert main(["gen", "--kind", "X1Laguerre", "--k", "-1"]) == 2
    assert main(["gen", "--kind", "XmLaguerre", "--k", "1"]) == 2


def test_verify_small_grid(tmp_path):
    cfg = write(tmp_path, "c.json", SMALL)
    out = tmp_path / "v.json"
    assert main(["verify", "--config", cfg, "--out", str(out), "--jobs", "1"]) == 0
    d = json.loads(out.read_text())
    assert d["summary"]["failed"] == 0
    assert any(f["label"] == "XmJacobi[m=2,alpha=1/2,beta=3/2]" for f in d["flagged"])


def test_verify_deterministic_across_jobs(tmp_path):
    cfg = write(tmp_path, "c.json", SMALL)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "--config", cfg, "--out", str(a), "--jobs", "1"]) == 0
    assert main(["verify", "--config", cfg, "--out", str(b), "--jobs", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_literal_c_fails(tmp_path):
    cfg = write(tmp_path, "c.json", {"families": [{"kind": "X1Jacobi", "alpha_beta": [["1", "2"]]}]})
    out = tmp_path / "v.json"
    assert main(["verify", "--config", cfg, "--out", str(out), "--paper-literal-c", "--jobs", "1"]) == 1
    names = {f["name"] for f in json.loads(out.read_text())["failures"]}
    assert "factorization_BA" in names


def test_verify_alpha_equals_beta(tmp_path):
    cfg = write(tmp_path, "c.json", {"families": [{"kind": "X1Jacobi", "alpha_beta": [["1", "1"], ["1", "2"]]}]})
    out = tmp_path / "v.json"
    assert main(["verify", "--config", cfg, "--out", str(out), "--jobs", "1"]) == 1
    d = json.loads(out.read_text())
    assert d["failures"] == [{"label": "X1Jacobi[m=1,alpha=1,beta=1]", "name": "validate", "n_range": None}]


@pytest.mark.parametrize("text", [
    "{not json",
    json.dumps({"nofamilies": []}),
    json.dumps({"families": [{"kind": "Hermite"}]}),
    json.dumps({"families": [{"kind": "X1Laguerre", "k": [0.5]}]}),
    json.dumps({"families": [{"kind": "X1Laguerre", "k": ["1/0"]}]}),
    json.dumps({"families": [], "depth": "3"}),
])
def test_config_parse_errors(tmp_path, text):
    cfg = write(tmp_path, "bad.json", text)
    assert main(["verify", "--config", cfg, "--jobs", "1"]) == 64


def test_missing_config_file(tmp_path):
    assert main(["ortho", "--config", str(tmp_path / "nope.json")]) == 64


def test_bad_arguments():
    assert main(["gen", "--kind", "Nope"]) == 64


def test_ortho_small_grid(tmp_path):
    cfg = write(tmp_path, "c.json", SMALL)
    out, csv_out = tmp_path / "o.json", tmp_path / "o.csv"
    assert main(["ortho", "--config", cfg, "--out", str(out), "--csv", str(csv_out), "--jobs", "1"]) == 0
    d = json.loads(out.read_text())
    assert d["summary"]["pass"] and d["summary"]["node_count"] == 200
    assert "XmJacobi[m=2,alpha=1/2,beta=3/2]" in d["summary"]["flagged"]
    rows = list(csv.reader(csv_out.read_text().splitlines()))
    assert rows[0] == ["label", "i", "j", "G", "normalized"]
    # full-precision floats survive the round trip
    labels = {r[0] for r in rows[1:]}
    assert "XmLaguerre[m=0,k=1]" in labels


def test_ortho_tight_tolerance_fails(tmp_path):
    cfg = write(tmp_path, "c.json", {"families": [{"kind": "X1Laguerre", "k": ["1"]}]})
    assert main(["ortho", "--config", cfg, "--tol", "1e-16", "--jobs", "1", "--out", str(tmp_path / "o.json")]) == 1


def test_chain_text(capsys):
    assert main(["chain", "--kind", "X1Jacobi", "--alpha", "1", "--beta", "2", "--depth", "3"]) == 0
    out = capsys.readouterr().out
    assert "R_1 = 5" in out and "R_3 = 9" in out
    assert "3  12  12" in out


def test_chain_json(capsys):
    assert main(["chain", "--kind", "XmJacobi", "--m", "2", "--alpha", "1", "--beta", "3/2", "--depth", "3",
                 "--format", "json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["E_table"][-1] == {"n": 5, "telescoped": "39/2", "closed_form": "39/2"}
    assert main(["chain", "--kind", "X1Laguerre", "--k", "1", "--depth", "4", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["R"] == ["1", "1", "1", "1"]


def test_chain_invalid():
    assert main(["chain", "--kind", "X1Jacobi", "--alpha", "2", "--beta", "2"]) == 2


def test_default_config_contents():
    cfg = GridConfig.from_dict(DEFAULT_CONFIG)
    assert not cfg.invalid
    assert len(cfg.specs) == len({s for s in cfg.specs})


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "eopladder", "chain", "--kind", "X1Laguerre", "--k", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "status: pass" in r.stdout


def test_verify_default_grid(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["summary"]["failed"] == 0


def test_shipped_config_matches_default():
    from pathlib import Path

    shipped = Path(__file__).resolve().parents[1] / "configs" / "acceptance_grid.json"
    assert json.loads(shipped.read_text()) == DEFAULT_CONFIG

import json
import subprocess
import sys

import numpy as np
import pytest

from dfs_mbqc.cli import main, sweep_records
from dfs_mbqc.jsonio import kraus_to_json, matrix_from_json
from dfs_mbqc.tomography import analytic_transfer_kraus


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_transfer_dfs(tmp_path):
    cfg = write(tmp_path, "t.json", {"encoding": "dfs", "theta": 0.4, "phi": 1.0,
                                     "noise": {"kind": "collective_dephasing", "gamma_t": 5}})
    out = tmp_path / "out.json"
    assert main(["transfer", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["fidelity_vs_ideal"] - 1) < 1e-10
    rho = matrix_from_json(doc["logical_output"])
    assert abs(np.trace(rho) - 1) < 1e-12


def test_transfer_standard_random_outcomes_deterministic(tmp_path):
    cfg = write(tmp_path, "t.json", {"theta": 0.9, "phi": 0.3, "outcomes": "random",
                                     "noise": {"kind": "independent_dephasing", "gamma_t": 0.5}})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["transfer", "--config", cfg, "--out", str(a), "--seed", "7"]) == 0
    assert main(["transfer", "--config", cfg, "--out", str(b), "--seed", "7"]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert 0 <= doc["probability"] <= 1 + 1e-12
    assert 0 <= doc["fidelity_vs_ideal"] <= 1 + 1e-12


def test_transfer_stdout(capsys):
    assert main(["transfer"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["encoding"] == "standard"


@pytest.mark.parametrize(
    "doc",
    [
        {"encoding": "qudit"},
        {"outcomes": "sometimes"},
        {"noise": {"kind": "independent_dephasing", "gamma_t": -1}},
        {"noise": {"kind": "lossy"}},
        {"kind": "independent_dephasing"},
        {"chain": 1},
        ["not", "an", "object"],
    ],
)
def test_transfer_invalid_config(tmp_path, doc):
    assert main(["transfer", "--config", write(tmp_path, "bad.json", doc)]) == 1


def test_missing_config_file(tmp_path):
    assert main(["transfer", "--config", str(tmp_path / "nope.json")]) == 1


def test_malformed_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["transfer", "--config", str(path)]) == 1


def test_tomography_standard_chain(tmp_path):
    out = tmp_path / "tomo.json"
    cfg = write(tmp_path, "c.json", {"channel": "standard-chain", "gamma_t": 0.5})
    assert main(["tomography", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["basis"] == ["I", "X", "Y", "Z"]
    assert doc["distance_to_analytic_kraus"] < 1e-8
    assert doc["completeness_error"] < 1e-8
    assert 0 <= doc["entanglement_fidelity"] <= 1
    assert abs(doc["entanglement_fidelity"] - 0.5 * np.exp(-0.375) * 2 * np.cosh(0.125) * np.cosh(0.25)) < 1e-10


def test_tomography_dfs_chain(tmp_path):
    out = tmp_path / "tomo.json"
    cfg = write(tmp_path, "c.json", {"channel": "dfs-chain", "gamma_t": 5})
    assert main(["tomography", "--config", cfg, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["average_fidelity"] - 1) < 1e-10


def test_tomography_kraus_file(tmp_path):
    write(tmp_path, "k.json", kraus_to_json(analytic_transfer_kraus(1.0)))
    cfg = write(tmp_path, "c.json", {"channel": "kraus-file", "kraus_path": "k.json"})
    out = tmp_path / "tomo.json"
    assert main(["tomography", "--config", cfg, "--out", str(out)]) == 0
    assert len(json.loads(out.read_text())["kraus"]) == 4


def test_tomography_rejects_non_trace_preserving_kraus(tmp_path):
    write(tmp_path, "k.json", kraus_to_json([0.5 * np.eye(2)]))
    cfg = write(tmp_path, "c.json", {"channel": "kraus-file", "kraus_path": "k.json"})
    assert main(["tomography", "--config", cfg]) == 1


def test_tomography_unknown_channel(tmp_path):
    assert main(["tomography", "--config", write(tmp_path, "c.json", {"channel": "wormhole"})]) == 1


SMALL_SWEEP = {"gamma_t": [0.0, 5.0], "theta": [0.0, 0.5, np.pi / 2], "phi": [0.0, 1.0, 3.0]}


def test_bloch_sweep_records(tmp_path):
    out = tmp_path / "sweep.ndjson"
    cfg = write(tmp_path, "s.json", SMALL_SWEEP)
    assert main(["bloch-sweep", "--config", cfg, "--out", str(out), "--workers", "4"]) == 0
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert len(rows) == 2 * 2 * 3 * 3
    for r in rows:
        norm = np.linalg.norm([r["bloch_x"], r["bloch_y"], r["bloch_z"]])
        assert -1e-12 <= r["fidelity"] <= 1 + 1e-12
        assert -1e-12 <= r["avg_fidelity"] <= 1 + 1e-12
        if r["encoding"] == "dfs" or r["gamma_t"] == 0:
            assert abs(norm - 1) < 1e-10
        elif abs(np.cos(2 * r["theta"])) < 0.5:
            assert norm < 0.1
    zero = {(r["encoding"], r["theta"], r["phi"]): r for r in rows if r["gamma_t"] == 0}
    for (enc, t, p), r in zero.items():
        if enc == "standard":
            other = zero[("dfs", t, p)]
            for k in ("bloch_x", "bloch_y", "bloch_z"):
                assert abs(r[k] - other[k]) < 1e-12


def test_bloch_sweep_deterministic_across_workers(tmp_path):
    cfg = dict(SMALL_SWEEP, gamma_t=[1.0])
    assert sweep_records(cfg, workers=1) == sweep_records(cfg, workers=3)


def test_bloch_sweep_grid_spec(tmp_path):
    cfg = {"gamma_t": [0.5], "theta": {"start": 0, "stop": 1, "num": 3}, "phi": [0.0], "encodings": ["dfs"]}
    rows = sweep_records(cfg)
    assert [r["theta"] for r in rows] == [0.0, 0.5, 1.0]


def test_bloch_sweep_invalid(tmp_path):
    assert main(["bloch-sweep", "--config", write(tmp_path, "s.json", {"gamma_t": [-1.0]})]) == 1
    assert main(["bloch-sweep", "--config", write(tmp_path, "s.json", {"theta": []})]) == 1
    assert main(["bloch-sweep", "--config", write(tmp_path, "s.json", {"encodings": ["x"]})]) == 1


def test_stabilizer_check_passes(capsys):
    assert main(["stabilizer-check"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_stabilizer_check_kappa_flip_fails(tmp_path, capsys):
    cfg = write(tmp_path, "s.json", {"inject": "kappa-flip"})
    assert main(["stabilizer-check", "--config", cfg]) == 2
    out = capsys.readouterr().out
    assert "FAIL" in out and "residual=2.000e+00" in out


def test_stabilizer_check_custom_lattices(tmp_path):
    cfg = write(tmp_path, "s.json", {"lattices": [{"effective": 3, "edges": [[0, 1], [1, 2], [0, 2]]}]})
    out = tmp_path / "r.json"
    assert main(["stabilizer-check", "--config", cfg, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["checks"][0]["passed"]


def test_dfs3_check_reports_control(tmp_path, capsys):
    cfg = write(tmp_path, "d.json", {"samples": 20, "states": 4})
    assert main(["dfs3-check", "--config", cfg, "--seed", "3"]) == 0
    assert "expected-fail control" in capsys.readouterr().out


def test_all_checks_pass(capsys):
    assert main(["checks"]) == 0
    assert "10/10 checks passed" in capsys.readouterr().out


def test_console_entry_point(tmp_path):
    out = tmp_path / "o.json"
    proc = subprocess.run(
        [sys.executable, "-m", "dfs_mbqc.cli", "transfer", "--out", str(out)], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["probability"] == pytest.approx(0.25)

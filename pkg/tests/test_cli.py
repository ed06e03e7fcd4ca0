import json

import numpy as np
import pytest

from posstab import cli
from posstab.matcore import read_matrix, write_matrix

POS = np.array([[0.6, 0.4, 0.1], [0.5, 0.5, 0.3], [0.1, 0.1, 0.7]])
SUB = np.array([[0.4, 0.4, 0.1], [0.5, 0.3, 0.3], [0.1, 0.1, 0.5]])


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, M in (("pos", POS), ("sub", SUB)):
        paths[name] = tmp_path / f"{name}.csv"
        write_matrix(M, paths[name])
    paths["dir"] = tmp_path
    return paths


def test_stabilize_report(files):
    out, rep = files["dir"] / "x.csv", files["dir"] / "r.json"
    assert cli.run(["stabilize", "--input", str(files["pos"]), "--output", str(out), "--report", str(rep)]) == 0
    report = json.loads(rep.read_text())
    assert report["schema"] == 1
    assert report["mode"] == "schur-stabilize"
    assert report["distance"] == pytest.approx(0.0903, abs=5e-4)
    assert report["distance_squared"] == pytest.approx(report["distance"] ** 2, abs=1e-12)
    assert report["classification"] == "positive_global"
    assert report["certificate_summary"]["accepted"]
    assert report["spectral_value"] == pytest.approx(1.0, abs=1e-8)
    assert set(report) >= {"input_path", "iterations", "trace"}
    X = read_matrix(out)
    assert np.linalg.norm(X - POS) == pytest.approx(report["distance"], abs=1e-15)


def test_destabilize_and_verify(files):
    out, rep = files["dir"] / "x.csv", files["dir"] / "r.json"
    assert cli.run(["destabilize", "--input", str(files["sub"]), "--output", str(out), "--report", str(rep)]) == 0
    assert json.loads(rep.read_text())["distance"] == pytest.approx(0.1009, abs=5e-4)
    assert cli.run(["verify", "--input", str(out), "--against", str(files["sub"]), "--kind", "destabilize"]) == 0
    assert cli.run(["verify", "--input", str(files["sub"]), "--against", str(files["sub"])]) == 0
    assert cli.run(["verify", "--input", str(files["pos"]), "--against", str(files["pos"])]) == 2


def test_hurwitz_commands(files, tmp_path):
    M = tmp_path / "m.json"
    write_matrix(np.array([[-1.0, 1.0], [0.5, -2.0]]), M)
    assert cli.run(["hurwitz-destabilize", "--input", str(M), "--output", str(tmp_path / "x.json")]) == 0
    assert cli.run(["stabilize", "--mode", "hurwitz", "--input", str(files["pos"])]) == 0
    assert cli.run(["hurwitz-stabilize", "--input", str(M)]) == 0


def test_enumerate_minima_table(tmp_path, capsys):
    assert cli.run(["enumerate-minima", "--dim", "3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "partition,distance,stationary"
    assert len(lines) - 1 >= 4
    assert all(line.endswith(",true") for line in lines[1:])


def test_exit_codes(files, tmp_path):
    assert cli.run(["destabilize", "--input", str(files["pos"])]) == 2
    assert cli.run(["stabilize", "--input", str(tmp_path / "missing.csv")]) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3\n")
    assert cli.run(["stabilize", "--input", str(bad)]) == 1
    neg = tmp_path / "neg.csv"
    write_matrix(-np.eye(2), neg)
    assert cli.run(["destabilize", "--input", str(neg)]) == 2
    assert cli.run(["stabilize"]) == 1
    assert cli.run(["enumerate-minima"]) == 2


def test_repro_reports_table(capsys):
    code = cli.run(["repro"])
    out = capsys.readouterr().out
    assert "passed" in out.splitlines()[-1]
    assert code == (0 if out.count("FAIL") == 0 else 3)

import json
import math
import subprocess
import sys

import pytest

from gsp4lab.cli import main
from gsp4lab.harness.dataset import ingest


def run_json(capsys, argv):
    assert main(argv) == 0
    doc = json.loads(capsys.readouterr().out)
    assert list(doc) == ["command", "inputs", "seed", "results", "version"]
    return {r["name"]: r for r in doc["results"]}


def test_mass(capsys):
    rows = run_json(capsys, ["mass", "--p", "2", "3"])
    assert abs(rows["plancherel mass p=2.0"]["value"] - 1) < 1e-6
    assert rows["literal mu_p mass p=3.0"]["abs_err"] < 1e-10


def test_measure_csv(tmp_path):
    out = tmp_path / "grid.csv"
    assert main(["measure", "--p", "3", "--n", "5", "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,y,density" and len(lines) == 26


def test_sample_round_trip(tmp_path):
    out = tmp_path / "fam.csv"
    assert main(["sample", "--p", "2", "3", "--n", "20", "--seed", "5", "--format", "csv", "--out", str(out)]) == 0
    ds = ingest(out)
    assert ds.size == 20 and ds.primes == [2, 3]


def test_hecke_and_euler(capsys):
    rows = run_json(capsys, ["hecke", "--theta1", "1.5707963267948966", "--theta2", "1.5707963267948966", "--p", "2"])
    assert rows["lambda'(p^2)"]["value"] == pytest.approx(-2.5)
    assert rows["b_F(p)"]["abs_err"] < 1e-12
    rows = run_json(capsys, ["euler", "--theta1", "0", "--theta2", "3.141592653589793", "--p", "3", "--n", "2"])
    assert [rows[f"spin Q c{i}"]["value"] for i in range(5)] == pytest.approx([1, 0, -2, 0, 1], abs=1e-12)


def test_char(capsys):
    rows = run_json(capsys, ["char", "--k1", "3", "--k2", "3", "--c1", "1.5707963267948966", "--c2", "1.0471975511965976"])
    assert rows["limit at delta1"]["value"] == pytest.approx(-1 / (4 * math.pi**2))
    assert rows["formal degree"]["value"] == 6


def test_char_singular_reports_error(capsys):
    assert main(["char", "--k1", "3", "--k2", "3", "--c1", "1.0", "--c2", "1.0"]) == 2
    assert "error" in capsys.readouterr().err


def test_density_and_report(tmp_path, capsys):
    data = tmp_path / "fam.csv"
    main(["sample", "--p", "2", "3", "5", "7", "--n", "30", "--seed", "1", "--format", "csv", "--out", str(data)])
    rows = run_json(capsys, ["density", "--u", "1", "--data", str(data), "--log-c", "2.0"])
    assert rows["prediction spin"]["value"] == 1.5 and "spin prime sum order 1" in rows
    rows = run_json(capsys, ["report", "--data", str(data), "--p", "3"])
    assert rows["1"]["value"] == 1.0 and "Kolmogorov distance" in rows


def test_budget(capsys):
    rows = run_json(capsys, ["budget", "--aspect", "level", "--p", "2", "--k1", "4", "--k2", "3", "--N", "3"])
    assert rows["A"]["value"] == pytest.approx(4 / 9)


def test_verify_deterministic(tmp_path):
    outs, codes = [], []
    for i in range(2):
        out = tmp_path / f"v{i}.json"
        proc = subprocess.run([sys.executable, "-m", "gsp4lab", "verify", "--seed", "3", "--out", str(out)],
                              capture_output=True, text=True)
        codes.append(proc.returncode)
        outs.append(out.read_bytes())
        lines = proc.stderr.strip().splitlines()
        assert len(lines) == 10 and all(line.startswith(("[PASS]", "[FAIL]")) for line in lines)
    assert outs[0] == outs[1]
    assert codes[0] == codes[1] and codes[0] in (0, 1)

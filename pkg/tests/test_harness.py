import json
import math

import numpy as np
import pytest
from scipy import integrate as si

from gsp4lab.errors import MissingPrime, SchemaViolation
from gsp4lab.harness import report
from gsp4lab.harness.dataset import FamilyDataset, ingest, prime_seed, serialize, synth_family
from gsp4lab.harness.stats import error_budget, equidist_report, euler_phi, kolmogorov_distance
from gsp4lab.measures import mu_p_density


def write_csv(tmp_path, text, meta=None, name="fam.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    meta = meta or {"k1": 4, "k2": 3, "N": 1, "coords": "omega"}
    path.with_name(path.stem + ".meta.json").write_text(json.dumps(meta), encoding="utf-8")
    return path


GOOD = "form_id,p,x,y\nA,2,0.5,-1.0\nA,3,1.0,0.25\nB,2,-2.0,2.0\n"


def test_ingest_good_csv(tmp_path):
    ds = ingest(write_csv(tmp_path, GOOD))
    assert len(ds) == 3 and ds.size == 2 and ds.forms == ("A", "B")
    assert ds.primes == [2, 3]
    xs, ys = ds.at_prime(2)
    assert xs.tolist() == [0.5, -2.0] and ys.tolist() == [-1.0, 2.0]
    with pytest.raises(MissingPrime):
        ds.at_prime(3)


@pytest.mark.parametrize("text, meta", [
    ("form_id,p,x,y\nA,2,2.5,0.0\n", None),
    ("form_id,p,x,y\nA,3,0.0,0.0\n", {"k1": 4, "k2": 3, "N": 6, "coords": "omega"}),
    ("form_id,p,x,y\nA,2,0.0,0.0\nA,2,1.0,0.0\n", None),
    ("form_id,p,x\nA,2,0.0\n", None),
    ("form_id,p,x,y\nA,4,0.0,0.0\n", None),
    ("form_id,p,x,y\nA,2,abc,0.0\n", None),
    ("form_id,p,x,y\nA,2.0,0.0,0.0\n", None),
    ("form_id,p,x,y\nA,2,nan,0.0\n", None),
    ("form_id,p,x,y\r\nA,2,0.0,0.0\r\n", None),
    ("form_id,p,x,y\nA,2,0.0\n", None),
    ("form_id,p,x,y\nA,2,0.0,0.0\n", {"k1": 3, "k2": 4, "N": 1, "coords": "omega"}),
    ("form_id,p,x,y\nA,2,0.0,0.0\n", {"k1": 4, "k2": 3, "N": 1, "coords": "angles"}),
    ("form_id,p,theta1,theta2\nA,2,0.0,4.0\n", {"k1": 4, "k2": 3, "N": 1, "coords": "angles"}),
])
def test_ingest_rejects(tmp_path, text, meta):
    with pytest.raises(SchemaViolation):
        ingest(write_csv(tmp_path, text, meta))


def test_ingest_missing_sidecar(tmp_path):
    path = tmp_path / "lonely.csv"
    path.write_text(GOOD, encoding="utf-8")
    with pytest.raises(SchemaViolation):
        ingest(path)


def test_ingest_angles_normalized(tmp_path):
    meta = {"k1": 4, "k2": 3, "N": 1, "coords": "angles"}
    ds = ingest(write_csv(tmp_path, "form_id,p,theta1,theta2\nA,5,2.0,1.0\n", meta))
    assert ds.xs[0] == 2 * math.cos(1.0) and ds.ys[0] == 2 * math.cos(2.0)


def test_ingest_json_and_errors(tmp_path):
    doc = {"metadata": {"k1": 5, "k2": 3, "N": 7, "coords": "omega"},
           "records": [{"form_id": "A", "p": 2, "x": 0.1, "y": 0.2},
                       {"form_id": "B", "p": 2, "x": -0.1, "y": 1.2}]}
    path = tmp_path / "fam.json"
    path.write_text(json.dumps(doc))
    ds = ingest(path)
    assert (ds.k1, ds.k2, ds.N, len(ds)) == (5, 3, 7, 2)
    doc["records"][0]["extra"] = 1
    path.write_text(json.dumps(doc))
    with pytest.raises(SchemaViolation):
        ingest(path)
    path.write_text("{not json")
    with pytest.raises(SchemaViolation):
        ingest(path)


def test_conductor_column(tmp_path):
    text = "form_id,p,x,y,conductor\nA,2,0.0,0.0,10\nA,3,0.0,0.0,10\nB,2,0.0,0.0,1000\n"
    ds = ingest(write_csv(tmp_path, text))
    assert ds.log_conductor() == pytest.approx(0.5 * (math.log(10) + math.log(1000)))
    bad = "form_id,p,x,y,conductor\nA,2,0.0,0.0,10\nA,3,0.0,0.0,11\n"
    with pytest.raises(SchemaViolation):
        ingest(write_csv(tmp_path, bad, name="bad.csv")).log_conductor()


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip(tmp_path, fmt):
    ds = synth_family([2, 5], 50, (6, 4), 3, seed=11)
    path = serialize(ds, tmp_path / f"rt.{fmt}", fmt)
    back = ingest(path, fmt)
    assert back == ds
    assert np.array_equal(back.xs, ds.xs) and back.source == "ingested"


def test_round_trip_with_conductors(tmp_path):
    ds = FamilyDataset(4, 4, 1, ("a", "b"), np.array([2, 2]), np.array([0.1, 1 / 3]),
                       np.array([-2.0, 2 / 7]), np.array([5.0, 7.5]))
    assert ingest(serialize(ds, tmp_path / "c.csv")) == ds
    assert ingest(serialize(ds, tmp_path / "c.json")) == ds


def test_synth_family():
    a = synth_family([2, 3], 100, (4, 3), 5, seed=1)
    b = synth_family([2, 3], 100, (4, 3), 5, seed=1)
    assert a == b and a.source == "synthetic(1)" and a.size == 100 and len(a) == 200
    assert a != synth_family([2, 3], 100, (4, 3), 5, seed=2)
    # the stream at a prime does not depend on which other primes are drawn
    c = synth_family([3], 100, (4, 3), 5, seed=1)
    assert np.array_equal(a.at_prime(3)[0], c.at_prime(3)[0])
    assert prime_seed(1, 2) != prime_seed(1, 3)
    empty = synth_family([2], 0, (4, 3), 1, seed=0)
    assert len(empty) == 0 and empty.size == 0
    with pytest.raises(SchemaViolation):
        synth_family([3], 10, (4, 3), 6, seed=0)
    with pytest.raises(ValueError):
        synth_family([2], 3, (4, 3), 1, seed=0, antithetic=True)


def test_equidist_report_trivial_rows():
    ds = synth_family([3], 1000, (4, 3), 1, seed=3, antithetic=True)
    rows = {r.name: r for r in equidist_report(ds, 3, ["1", "x", "y"])}
    assert rows["1"].difference == 0.0
    assert rows["x"].value == 0.0 and rows["x"].difference == 0.0
    assert rows["y"].difference == 0.0
    with pytest.raises(MissingPrime):
        equidist_report(ds, 5, ["1"])


def test_equidist_report_sampling():
    ds = synth_family([3], 100_000, (4, 3), 1, seed=4)
    for r in equidist_report(ds, 3, ["xy", "x2", ("sum", lambda x, y: x + y)]):
        assert abs(r.difference) <= 4 * r.std_err
        assert r.as_dict()["abs_err"] == abs(r.difference)


def test_equidist_convergence_with_n():
    def rms(n):
        diffs = []
        for seed in range(20):
            ds = synth_family([3], n, (4, 3), 1, seed=1000 + seed)
            diffs.append(equidist_report(ds, 3, ["xy"])[0].difference)
        return math.sqrt(np.mean(np.square(diffs)))

    # average shrink per doubling over three doublings; 1/sqrt(2) ~ 0.707 expected
    per_doubling = (rms(16000) / rms(2000)) ** (1 / 3)
    assert 0.55 < per_doubling < 0.85


def test_kolmogorov_distance():
    ds = synth_family([3], 100_000, (4, 3), 1, seed=6)
    xs, ys = ds.at_prime(3)
    assert kolmogorov_distance(xs, ys, 3) < 0.01
    # a point mass at the origin is far from mu_3
    assert kolmogorov_distance(np.zeros(100), np.zeros(100), 3) > 0.2


def test_kolmogorov_reference_value():
    # F_emp of a single point (0, 0) at threshold (0, 0) is 1; the reference is mu_3([-2, 0]^2)
    ref = si.dblquad(lambda y, x: mu_p_density(x, y, 3, normalized=True), -2, 0, -2, 0, epsabs=1e-10)[0]
    d = kolmogorov_distance(np.zeros(1), np.zeros(1), 3, n_thresholds=3)
    assert d >= 1 - ref - 1e-9


def test_euler_phi():
    assert euler_phi(1) == 1
    assert euler_phi(12) == sum(1 for k in range(1, 13) if math.gcd(k, 12) == 1) == 4
    assert euler_phi(97) == 96
    with pytest.raises(ValueError):
        euler_phi(0)


def test_error_budget():
    lv = error_budget("level", 2, 1.0, 4, 3, 3)
    assert lv.A == pytest.approx(4 / 9) and lv.phi_N == 2 and lv.B1 == lv.B2 == 0
    assert lv.remainder == pytest.approx(2 * 2 / 27)
    wt = error_budget("weight", 2, 1.0, 10, 10, 1)
    assert wt.B1 == pytest.approx(2 / 72) and wt.B2 == pytest.approx(2 / 17)
    b2 = [error_budget("weight", 2, 1.0, k + 2, k, 1).B2 for k in range(3, 60)]
    assert all(a > b for a, b in zip(b2, b2[1:])) and b2[-1] < 0.02
    assert error_budget("level", 3, 1.0, 4, 3, 5, a=2, b=1).remainder == pytest.approx(27 * 4 / 125)
    with pytest.raises(ValueError):
        error_budget("level", 3, 1.0, 4, 3, 6)
    with pytest.raises(ValueError):
        error_budget("height", 3, 1.0, 4, 3, 5)


def test_report_shape():
    rep = report.make_report("mass", {"p": [2]}, None, [report.result("m", np.float64(1.0), 1.0, 0.0)])
    assert list(rep) == ["command", "inputs", "seed", "results", "version"]
    assert list(rep["results"][0]) == ["name", "value", "reference", "abs_err", "std_err"]
    text = report.dumps(rep)
    assert json.loads(text)["results"][0]["value"] == 1.0
    assert report.dumps(rep) == text
    inf_rep = report.make_report("x", {}, 1, [report.result("m", math.inf)])
    assert json.loads(report.dumps(inf_rep))["results"][0]["value"] == "inf"

import io
import json
import os
from pathlib import Path

import pytest

from metricjets.cli import run
from metricjets.io import load

GOLDEN = Path(__file__).parent / "golden"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert call("make", "--preset", "pm", "--m", "2", "--r", "4", "-o", "p2.json")[0] == 0
    assert call("make", "--preset", "qm", "--m", "2", "--r", "4", "-o", "q2.json")[0] == 0
    return tmp_path


def check_golden(name, text):
    path = GOLDEN / name
    if os.environ.get("METRICJETS_UPDATE_GOLDEN"):
        path.write_text(text)
    assert text == path.read_text()


@pytest.mark.parametrize("name,argv", [
    ("census_r5.json", ["census", "--r", "5", "--json"]),
    ("dim_n2_r5.json", ["dim", "--n", "2", "--r", "5", "--verify", "--json"]),
    ("equiv_p2_q2.json", ["equiv", "-a", "p2.json", "-b", "q2.json", "--json"]),
    ("invariants_p2.json", ["invariants", "p2.json", "--order", "4", "--json"]),
    ("make_xxy_seed7.json", ["make", "--preset", "xxy", "--r", "4", "--seed", "7", "--json"]),
])
def test_json_reports_are_pinned(workdir, name, argv):
    code, out, _ = call(*argv)
    assert code == 0
    report = json.loads(out)
    assert report["schema"] == "metricjets.report" and report["version"] == 1
    check_golden(name, out)


def test_census_text():
    code, out, _ = call("census", "--r", "5")
    assert code == 0
    assert out.splitlines() == ["strata for r=5: O(2), D_1, D_2, D_3, K_1", "count: 5"]


def test_dim_text():
    _, out, _ = call("dim", "--n", "2", "--r", "5", "--verify")
    assert out.splitlines()[0] == "dim M(n=2, r=5) = 9"
    assert [line.split("= ")[1] for line in out.splitlines()[1:5]] == ["1", "2", "3", "4"]
    assert out.splitlines()[-1].endswith("agree")


def test_equiv_text(workdir):
    code, out, _ = call("equiv", "-a", "p2.json", "-b", "q2.json")
    assert code == 0 and out.startswith("equivalent; rotation witness alpha^2 = i")
    call("make", "--preset", "pm", "--m", "2", "--r", "5", "-o", "p2r5.json")
    assert call("equiv", "-a", "p2.json", "-b", "p2r5.json")[0] == 1


def test_make_is_reproducible_and_classifies(workdir):
    a = call("make", "--preset", "pmq", "--m", "1", "--r", "5", "--seed", "3")[1]
    b = call("make", "--preset", "pmq", "--m", "1", "--r", "5", "--seed", "3")[1]
    assert a == b
    Path("k1.json").write_text(a)
    call("make", "--preset", "pm", "--m", "3", "--r", "5", "--seed", "4", "-o", "d3.json")
    code, out, _ = call("classify", "k1.json", "d3.json", "p2.json", "--jobs", "2")
    assert code == 0
    assert out.splitlines() == ["k1.json: K_1", "d3.json: D_3", "p2.json: D_2"]


def test_normalize_writes_a_normal_form(workdir):
    call("make", "--preset", "xxy", "--r", "4", "--seed", "1", "-o", "g.json")
    code, out, _ = call("normalize", "g.json", "-o", "n.json")
    assert code == 0 and "written to n.json" in out
    from metricjets.normal_form import gauss_check

    assert gauss_check(load("n.json").value)


def test_curvature_and_tensors(workdir):
    code, out, _ = call("curvature", "p2.json")
    assert code == 0 and "K(0) = 0" in out
    code, out, _ = call("curvature", "p2.json", "--decimal", "5")
    assert code == 0 and "Hess K(0)" in out
    code, out, _ = call("tensors", "p2.json", "--json")
    assert code == 0
    assert all(t["identities"] for t in json.loads(out)["result"]["tensors"])


def test_reframed_input(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    doc = {"format": "metricjets.jet", "version": 1, "kind": "metric", "dim": 2, "order": 2,
           "coefficients": {"1,1": {"0,0": "4", "1,0": "1"}, "1,2": {}, "2,2": {"0,0": "1"}}}
    Path("g.json").write_text(json.dumps(doc))
    code, out, _ = call("normalize", "g.json")
    assert code == 0 and "frame change" in out


def test_domain_errors_exit_1(workdir):
    Path("bad.json").write_text(Path("p2.json").read_text().replace('"order": 4', '"order": 1'))
    code, _, err = call("classify", "bad.json")
    assert code == 1 and "degree" in err
    code, _, err = call("make", "--preset", "pm", "--m", "3", "--r", "4")
    assert code == 1 and "r >= 5" in err
    code, _, err = call("invariants", "missing.json", "--order", "2")
    assert code == 1


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["dim", "--n", "2"],
    ["invariants", "x.json", "--order", "5"],
    ["make", "--preset", "nope", "--r", "4"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert call(*argv)[0] == 2

import io
import json

import pytest

from kltgeom import cli, verify
from kltgeom.cohom import cyclic_group


def call(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), out=buf)
    text = buf.getvalue()
    return code, (json.loads(text) if text else None), text


@pytest.fixture
def z3_inv(tmp_path):
    g = cyclic_group(3)
    data = g.to_json()
    data["sigma"] = [0, 2, 1]
    path = tmp_path / "z3-inv.json"
    path.write_text(json.dumps(data))
    return str(path)


def test_dual_hesse_report():
    code, rep, _ = call("arrange", "dual-hesse")
    assert code == 0 and rep["passed"]
    res = rep["results"]
    assert res["points"] == 12 and res["lines"] == 9
    assert rep["command"] == "arrange dual-hesse"
    assert "KLT-CY" in json.dumps(res)


def test_h1_from_table_file(z3_inv):
    code, rep, _ = call("cohom", "h1", "--table", z3_inv)
    assert code == 0
    assert rep["results"]["count"] == 1


def test_distance_zero():
    code, rep, _ = call("models", "distance", "--u", "[1,0,0]", "--v", "[1,0,0]")
    assert code == 0
    assert rep["results"]["distance"] == 0.0


def test_report_keys_and_defaults():
    _, rep, _ = call("lattice", "canonical", "--k", "12")
    assert set(rep) == {"command", "inputs_digest", "seed", "results", "passed"}
    assert rep["seed"] == 0
    assert len(rep["inputs_digest"]) == 64


def test_global_flags_in_either_position():
    _, a, _ = call("--seed", "5", "models", "cat0-sample", "--n", "2")
    _, b, _ = call("models", "cat0-sample", "--n", "2", "--seed", "5")
    assert a["seed"] == b["seed"] == 5
    assert a["results"] == b["results"]


@pytest.mark.parametrize(
    "argv",
    [
        ("models", "cat0-sample", "--seed", "3"),
        ("actions", "complement-path", "--x", "[0.3,-0.5]", "--y", "[-0.3,-0.5]",
         "--horoball", '{"base": [0, 1], "level": 0.5}', "--model", "poincare"),
        ("cohom", "free-check", "--word-length", "5"),
    ],
)
def test_byte_identical_reports(argv):
    assert call(*argv)[2] == call(*argv)[2]


def test_digest_changes_with_inputs():
    _, a, _ = call("lattice", "canonical", "--k", "9")
    _, b, _ = call("lattice", "canonical", "--k", "10")
    assert a["inputs_digest"] != b["inputs_digest"]


def test_proper_count():
    gens = "[[[3.7621956910836314,3.626860407847019,0],[3.626860407847019,3.7621956910836314,0],[0,0,1]]]"
    code, rep, _ = call("actions", "proper-count", "--generators", gens, "--radius", "1.5")
    assert code == 0 and rep["results"]["count"] == 3


def test_free_check_witness_for_sl2z():
    code, rep, _ = call("cohom", "free-check", "--gens", "[[[1,1],[0,1]],[[1,0],[1,1]]]", "--word-length", "12")
    assert code == 0
    assert rep["results"]["witness"] is not None


def test_usage_errors_exit_2(capsys):
    assert cli.run(["nosuch"], out=io.StringIO()) == 2
    assert cli.run(["models", "distance", "--u", "[1,0,0]"], out=io.StringIO()) == 2
    assert cli.run(["--samples", "0", "models", "cat0-sample"], out=io.StringIO()) == 2
    capsys.readouterr()


def test_malformed_json_reports_location(capsys):
    code = cli.run(["models", "distance", "--u", "[1,0,", "--v", "[1,0,0]"], out=io.StringIO())
    assert code == 2
    err = capsys.readouterr().err
    assert "--u" in err and "line 1 column" in err


def test_malformed_json_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"order": 2,\n "table": [0, 1, 1 0]}')
    assert cli.run(["cohom", "h1", "--table", str(bad)], out=io.StringIO()) == 2
    assert "line 2 column" in capsys.readouterr().err


def test_invalid_point_exit_2(capsys):
    assert cli.run(["models", "distance", "--u", "[2,0,0]", "--v", "[1,0,0]"], out=io.StringIO()) == 2
    capsys.readouterr()


def test_failed_check_exit_1():
    # twelve points on one line: the collinearity bound fails
    pts = json.dumps([[1, i, 0] for i in range(12)])
    code, rep, _ = call("arrange", "aut-sharp", "--points", pts)
    assert code == 1 and rep["passed"] is False


def test_verify_paper_fails_iff_some_criterion_fails(monkeypatch, capsys):
    def fake(results):
        return lambda **kw: results

    good = [verify.CheckResult(i, f"c{i}", True) for i in range(1, 13)]
    monkeypatch.setattr(verify, "run_all", fake(good))
    code, rep, _ = call("verify-paper")
    assert code == 0 and [c["criterion"] for c in rep["results"]["criteria"]] == list(range(1, 13))
    bad = list(good)
    bad[6] = verify.CheckResult(7, "c7", False)
    monkeypatch.setattr(verify, "run_all", fake(bad))
    code, rep, _ = call("verify-paper")
    assert code == 1 and rep["passed"] is False
    assert "[FAIL]  7 c7" in capsys.readouterr().err

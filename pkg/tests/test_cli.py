import io
import json
import re
import subprocess
import sys

import pytest

from thetametric.cli import dumps, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    report, code = run(list(argv), stdout=out, stderr=err)
    return report, code, out.getvalue(), err.getvalue()


def test_validate_space_pass_and_fail():
    rep, code, out, _ = call("validate-space", "--space", "builtin:paper-3pt")
    assert code == 0 and rep["status"] == "pass" and out.startswith("validate-space: pass")
    rep, code, _, _ = call("validate-space", "--space", "builtin:paper-3pt", "--action", "builtin:k_sum:k=1")
    assert code == 1 and rep["result"]["families"] == 1
    assert [(v["i"], v["j"], v["k"]) for v in rep["violations"]] == [("y", "z", "x"), ("z", "y", "x")]


def test_validate_space_plain_flag():
    rep, code, _, _ = call("validate-space", "--space", "builtin:remark-metric", "--action", "builtin:k_sum:k=0.5", "--plain")
    assert code == 1
    assert rep["result"]["plain_metric"] == {"A1": True, "A2": True, "triangle": True}
    assert {"i": "2", "j": "3", "k": "1", "lhs": 2.0, "rhs": 1.0} in rep["violations"]


def test_space_from_file(tmp_path):
    f = tmp_path / "sp.json"
    f.write_text(json.dumps({"points": ["a", "b"], "distances": [[0, 1], [1, 0]]}))
    a = tmp_path / "act.json"
    a.write_text(json.dumps({"kind": "sum_plus_prod", "params": {}}))
    rep, code, _, _ = call("validate-space", "--space", str(f), "--action", str(a))
    assert code == 0 and rep["result"]["points"] == ["a", "b"]


@pytest.mark.parametrize(
    "argv",
    [
        ["validate-space", "--space", "/no/such/file.json", "--action", "builtin:k_sum"],
        ["validate-space", "--space", "builtin:nope"],
        ["validate-space", "--action", "builtin:k_sum"],
        ["eta", "--action", "builtin:k_sum", "--r", "1"],
        ["eta", "--action", "builtin:k_sum", "--r", "1", "--s", "2"],
        ["eta", "--action", "builtin:k_sum:k", "--r", "1", "--s", "0.5"],
        ["eta", "--action", "builtin:k_sum:k=3", "--r", "1", "--s", "0.5"],
        ["banach", "--space", "builtin:contraction-5pt", "--map", "/missing/map.json"],
        ["banach", "--space", "builtin:paper-3pt", "--map", "builtin:paper-3pt"],
        ["ball", "--space", "builtin:paper-3pt", "--center", "w", "--radius", "1"],
        ["uniformity-base", "--action", "builtin:k_sum", "--n", "0"],
        ["caristi", "--space", "builtin:paper-3pt"],
        ["check-action", "--action", "builtin:k_sum", "--grid", "1"],
        ["validate-space", "--space", "builtin:paper-3pt", "--json-out", "/no/such/dir/out.json"],
        ["nonsense"],
    ],
)
def test_input_errors_exit_2_without_report(argv):
    rep, code, out, err = call(*argv)
    assert code == 2 and rep is None and out == ""


def test_bad_json_file(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    _, code, _, err = call("validate-space", "--space", str(f), "--action", "builtin:k_sum")
    assert code == 2 and "not valid JSON" in err
    m = tmp_path / "map.json"
    m.write_text(json.dumps({"wrong": 1}))
    _, code, _, _ = call("banach", "--space", "builtin:contraction-5pt", "--map", str(m))
    assert code == 2


def test_eta_command():
    rep, code, _, _ = call("eta", "--action", "builtin:k_sum", "--r", "10", "--s", "4")
    assert code == 0 and rep["result"]["eta"] == 6.0
    rep, code, _, _ = call("eta", "--action", "builtin:k_sum:k=0.25", "--r", "1", "--s", "0.1")
    assert code == 1 and rep["violations"][0]["condition"] == "StrictRangeError"
    rep, code, _, _ = call("eta", "--action", "builtin:k_sum:k=0.25", "--r", "1", "--s", "0.1", "--mode", "existence")
    assert code == 0 and rep["result"]["eta"] == pytest.approx(3.9)


def test_check_action_command():
    rep, code, _, _ = call("check-action", "--action", "builtin:k_sum:k=0.25", "--random", "200")
    assert code == 1 and rep["result"]["axioms"]["III_strict"] is False
    assert rep["config"]["sampler"]["random_points"] == 200
    rep, code, _, _ = call("check-action", "--action", "builtin:sum_plus_prod", "--random", "200")
    assert code == 0 and rep["result"]["regular"] is True


def test_ball_and_uniformity():
    rep, code, _, _ = call("ball", "--space", "builtin:paper-3pt", "--center", "x", "--radius", "3")
    assert code == 0 and rep["result"]["ball"] == ["x", "y"]
    rep, code, _, _ = call("uniformity-base", "--action", "builtin:sum_plus_prod", "--n", "2")
    assert code == 0 and rep["result"]["m"] == 5


def test_separate_command():
    rep, code, _, _ = call("separate", "--space", "builtin:paper-3pt")
    assert code == 0 and len(rep["result"]["separations"]) == 3
    rep, code, _, _ = call("separate", "--space", "builtin:paper-3pt", "--x", "y", "--y", "z", "--action", "builtin:k_sum")
    assert code == 1


def test_banach_command():
    rep, code, _, _ = call("banach", "--space", "builtin:contraction-5pt", "--map", "builtin:contraction-5pt", "--x0", "q4")
    assert code == 0
    r = rep["result"]
    assert r["fixed_point"] == "q0" and r["exhaustive_fixed_points"] == ["q0"] and r["alpha_hat"] == 0.5
    assert r["iterates"] == ["q4", "q3", "q2", "q1", "q0", "q0"]
    rep, code, _, _ = call("banach", "--space", "builtin:contraction-5pt", "--map", "builtin:contraction-5pt", "--max-iter", "2", "--x0", "q4")
    assert code == 1 and rep["result"]["status"] == "max_iter"


def test_caristi_and_endpoint_commands():
    rep, code, _, _ = call("caristi", "--space", "builtin:caristi-chain")
    assert code == 0 and rep["result"]["point"] == "p2" and rep["result"]["minimal"] == ["p2"]
    rep, code, _, _ = call("endpoint", "--space", "builtin:caristi-chain")
    assert code == 0 and rep["result"]["point"] == "p2"
    rep, code, _, _ = call("caristi", "--space", "builtin:caristi-cuberoot")
    assert code == 0 and rep["result"]["point"] == "p2"


def test_caristi_hypothesis_failure(tmp_path):
    m = tmp_path / "map.json"
    m.write_text(json.dumps({"map": {"p0": "p1", "p1": "p2", "p2": "p0"}}))
    rep, code, _, _ = call("caristi", "--space", "builtin:caristi-chain", "--map", str(m))
    assert code == 1 and rep["result"]["point"] is None and rep["violations"][0]["witness"] == "p2"


def test_json_floats_have_17_digits(tmp_path):
    out = tmp_path / "r.json"
    _, code, _, _ = call("eta", "--action", "builtin:sum_plus_prod", "--r", "1", "--s", "0.3", "--json-out", str(out), "--quiet")
    text = out.read_text()
    # (1 - 0.3) / 1.3
    assert re.search(r'"eta": 0\.5384615384615384\d', text)
    assert json.loads(text)["result"]["eta"] == pytest.approx(0.7 / 1.3, rel=1e-15)
    assert dumps({"a": float("inf"), "b": float("nan"), "c": 0.1}) == '{"a": "Infinity", "b": "NaN", "c": 0.10000000000000001}\n'


def test_quiet_suppresses_stdout():
    _, code, out, _ = call("eta", "--action", "builtin:k_sum", "--r", "2", "--s", "1", "--quiet")
    assert code == 0 and out == ""


def _strip_timing(text):
    obj = json.loads(text)
    obj.pop("timing")
    return dumps(obj)


@pytest.mark.parametrize(
    "argv",
    [
        ["check-action", "--action", "builtin:k_sum:k=0.25", "--random", "300", "--seed", "7"],
        ["validate-space", "--space", "builtin:paper-3pt", "--action", "builtin:k_sum"],
        ["caristi", "--space", "builtin:caristi-chain", "--random", "300"],
    ],
)
def test_reports_are_byte_identical(tmp_path, argv):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    call(*argv, "--json-out", str(a), "--quiet")
    call(*argv, "--json-out", str(b), "--quiet")
    assert _strip_timing(a.read_text()) == _strip_timing(b.read_text())


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "thetametric", "uniformity-base", "--action", "builtin:k_sum", "--n", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "m = 3" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "thetametric", "eta"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == ""

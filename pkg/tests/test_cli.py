import json

from esplib.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_suslin_worked_pair(capsys):
    code, out, _ = run(capsys, "suslin", "--r", "1", "--v", "2,3", "--w=-1,1")
    assert code == 0
    d = json.loads(out)
    assert d["S_text"] == [["2", "3"], ["-1", "-1"]]
    assert all(d["verdicts"].values())


def test_suslin_symbolic_and_range(capsys):
    code, out, _ = run(capsys, "suslin", "--r", "2")
    assert code == 0 and json.loads(out)["verdicts"]["suslin_identity"]
    code, _, err = run(capsys, "suslin", "--r", "9")
    assert code == 2 and "r out of range" in err


def test_forms(capsys):
    code, out, _ = run(capsys, "forms", "--r", "2")
    d = json.loads(out)
    assert code == 0 and all(d["facts"].values()) and d["sigma"]["images"] == [1, 2, 4, 3]
    code, out, _ = run(capsys, "forms", "--n", "2")
    assert code == 0 and json.loads(out)["n"] == 2


def test_orbit_absolute_and_relative(capsys):
    code, out, _ = run(capsys, "orbit", "--ring", "Z/4")
    d = json.loads(out)
    assert code == 0 and d["orbits"] == {"linear": 240, "sympl": 240} and d["equal"]
    code, out, _ = run(capsys, "orbit", "--ring", "Z/8", "--ideal", "(2)")
    d = json.loads(out)
    assert code == 0 and d["certified"] and d["equal"]


def test_orbit_rejects_infinite_ring(capsys):
    code, _, _ = run(capsys, "orbit", "--ring", "Z")
    assert code == 2


def test_reduce_then_replay(tmp_path, capsys):
    path = tmp_path / "cert.json"
    code, _, _ = run(capsys, "reduce", "--ring", "Z", "--row", "2,3,6", "-o", str(path))
    assert code == 0
    code, out, _ = run(capsys, "replay", str(path))
    assert code == 0 and out.strip() == "replay OK"
    d = json.loads(path.read_text())
    d["word"]["letters"][1]["E"][2] = "7"
    path.write_text(json.dumps(d))
    code, out, _ = run(capsys, "replay", str(path))
    assert code == 1 and out.strip() == "replay FAILED at letter 2"
    code, _, _ = run(capsys, "replay", str(path), "--ring", "Z/8")
    assert code == 2


def test_reduce_non_unimodular_is_usage_error(capsys):
    code, _, err = run(capsys, "reduce", "--ring", "Z", "--row", "4,6")
    assert code == 2 and err


def test_peel(capsys):
    code, out, _ = run(capsys, "peel", "--ring", "Z/8", "--size", "6", "--seed", "3")
    d = json.loads(out)
    assert code == 0 and d["kind"] == "matrix" and len(d["trace"]) == len(d["word"]["letters"])
    code, out, _ = run(capsys, "peel", "--ring", "Z/8", "--ideal", "(2)", "--size", "4")
    assert code == 0


def test_lift(capsys):
    code, out, _ = run(capsys, "lift", "--host", "Z", "--ideal", "(2)", "--v", "3,2", "--w=3,-4")
    assert code == 0 and json.loads(out)["suslin_lift_check"]
    code, out, _ = run(capsys, "lift", "--host", "Z/9", "--ideal", "(3)", "--size", "3")
    assert code == 0 and json.loads(out)["verified"]
    code, _, _ = run(capsys, "lift", "--host", "Z", "--ideal", "(2)", "--v", "2,2")
    assert code == 2


def test_transvect(capsys):
    code, out, _ = run(capsys, "transvect", "--ring", "Z", "--a", "3", "--v", "1,2,3,4")
    assert code == 0 and json.loads(out)["symplectic"]
    code, _, _ = run(capsys, "transvect", "--ring", "Z", "--v", "1,0,0,0", "--w", "0,1,0,0")
    assert code == 2


def test_seed_determinism(capsys):
    a = run(capsys, "peel", "--ring", "Z/8", "--seed", "5")[1]
    b = run(capsys, "peel", "--ring", "Z/8", "--seed", "5")[1]
    assert a == b


def test_bad_ring_is_usage_error(capsys):
    code, _, _ = run(capsys, "reduce", "--ring", "Q", "--row", "1,2")
    assert code == 2

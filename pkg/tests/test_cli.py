import json


from torsionlab.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    lines = [json.loads(x) for x in out.splitlines() if x.strip()]
    return code, lines


def records(lines):
    return [x for x in lines if "check" in x]


def test_torsion_times2(capsys, fixtures_dir):
    code, lines = run(capsys, "torsion", fixtures_dir / "times2.json")
    assert code == 0
    # torsion is 1/det of the degree-1 change matrix here, see the README convention
    assert records(lines)[0]["value"] == "2"


def test_torsion_identity(capsys, fixtures_dir):
    code, lines = run(capsys, "torsion", fixtures_dir / "identity.json")
    assert code == 0
    assert records(lines)[0]["value"] == "1"


def test_torsion_broken(capsys, fixtures_dir):
    code, lines = run(capsys, "torsion", fixtures_dir / "broken.json")
    assert code == 3
    assert lines[-1]["degree"] == 2


def test_malformed(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _ = run(capsys, "torsion", p)
    assert code == 2
    code, _ = run(capsys, "torsion", tmp_path / "missing.json")
    assert code == 2


def test_thurston(capsys, fixtures_dir):
    track = fixtures_dir / "track.json"
    left, right, bad = (fixtures_dir / f"cocycle_{k}.json" for k in ("left", "right", "bad"))
    code, lines = run(capsys, "thurston", track, left, right)
    assert code == 0 and records(lines)[0]["value"] == "1/2"
    code, lines = run(capsys, "thurston", track, left, left)
    assert code == 0 and records(lines)[0]["value"] == "0"
    code, lines = run(capsys, "thurston", track, left, right, "--to", "wp")
    assert records(lines)[0]["value"] == "-8"
    code, _ = run(capsys, "thurston", track, bad, right)
    assert code == 6


def test_verify_octagon_all(capsys, fixtures_dir):
    code, lines = run(capsys, "verify", fixtures_dir / "octagon_sp4.json", "--suite", "all", "--samples", "5")
    assert code == 0
    checks = records(lines)
    assert {c["check"] for c in checks} >= {"invariance", "main-theorem", "symplectic"}
    assert all(c["pass"] for c in checks)


def test_verify_negative(capsys, fixtures_dir):
    code, _ = run(capsys, "verify", fixtures_dir / "trivial_sp4.json", "--suite", "main-theorem")
    assert code == 5
    code, _ = run(capsys, "verify", fixtures_dir / "perturbed_sp4.json", "--suite", "main-theorem")
    assert code == 4
    code, _ = run(capsys, "verify", fixtures_dir / "wrong_relator_sp4.json", "--suite", "main-theorem")
    assert code == 4


def test_verify_deterministic(capsys, fixtures_dir, tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("TORSIONLAB_THREADS", threads)
        out = tmp_path / f"r{threads}.jsonl"
        code = main(["verify", str(fixtures_dir / "octagon_sp4.json"), str(fixtures_dir / "trivial_sp4.json"),
                     "--suite", "symplectic", "--samples", "8", "--seed", "5", "--out", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    header = json.loads(outs[0].splitlines()[0])
    assert header["header"]["seed"] == 5

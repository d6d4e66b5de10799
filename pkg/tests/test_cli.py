import io
import json
from pathlib import Path

import pytest

from foliation_residues import corpus
from foliation_residues.cli import run

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def call(argv):
    out = io.StringIO()
    code = run(argv, out)
    return code, out.getvalue()


def write_job(tmp_path, task, payload):
    path = tmp_path / f"{task}.json"
    path.write_text(json.dumps({"schema": "1", "task": task, "payload": payload}))
    return str(path)


def test_sing_on_sharp_example_job():
    code, text = call([str(JOBS / "sharp_example_sing.json")])
    report = json.loads(text)
    assert code == 0
    assert report["dim"] == "3"
    assert sorted(report["generators"]) == sorted(f"z{j}^2" for j in range(4, 10))


def test_residue_job():
    code, text = call([str(JOBS / "radial_residue.json")])
    report = json.loads(text)
    assert code == 0
    assert (report["value"], report["multiplicity"]) == ("1", "1")


def test_slice_residue_job():
    code, text = call([str(JOBS / "pullback_slice_residue.json"), "--seed", "7"])
    report = json.loads(text)
    assert code == 0
    assert report["value"] == "1"
    assert report["certified"] == {"transverse": True, "origin_only_zero": True}
    assert report["slice"]["seed"] == "7"


def test_every_shipped_job_runs():
    for path in sorted(JOBS.glob("*.json")):
        code, text = call([str(path)])
        assert code == 0, path.name
        json.loads(text)


def test_flags_override_payload(tmp_path):
    job = write_job(tmp_path, "residue", {"field": ["z1^2", "z2^3"], "phi": "c2"})
    assert json.loads(call([job])[1])["value"] == "6"
    assert json.loads(call([job, "--phi", "c1^2"])[1])["value"] == "12"
    job = write_job(tmp_path, "residue", {"field": ["z1 - 1/2", "z2"]})
    report = json.loads(call([job, "--point", "1/2,0"])[1])
    assert report["point"] == ["1/2", "0"] and report["value"] == "1"


def test_lex_order_flag(tmp_path):
    F = corpus.pullback(corpus.radial(3), 4)
    job = write_job(tmp_path, "sing", {"foliation": F.to_json()})
    a = json.loads(call([job])[1])
    b = json.loads(call([job, "--order", "lex"])[1])
    assert a["dim"] == b["dim"] == "1"


def test_poisson_job(tmp_path):
    F = corpus.non_poisson()
    code, text = call([write_job(tmp_path, "poisson", {"foliation": F.to_json()})])
    report = json.loads(text)
    assert code == 0 and report["jacobi"] is False and report["rank"] == "4"


def test_certified_failures_exit_2(tmp_path):
    job = write_job(tmp_path, "residue", {"field": ["z1^2 - 1", "z2"]})
    code, text = call([job])
    assert code == 2 and json.loads(text)["error"]["type"] == "NotIsolated"
    F = corpus.sharp_example()
    job = write_job(tmp_path, "slice-residue", {"foliation": F.to_json(), "point": ["1"] + ["0"] * 8})
    code, text = call([job, "--retries", "2"])
    err = json.loads(text)["error"]
    assert code == 2 and err["type"] == "RetriesExhausted"
    assert err["slice_ideal_dimension"] == "3" and len(err["attempts"]) == 2


def test_malformed_input_exits_1(tmp_path):
    bad_schema = tmp_path / "a.json"
    bad_schema.write_text(json.dumps({"schema": "1", "task": "residue", "payload": {"field": ["z1"], "extra": 1}}))
    bad_poly = write_job(tmp_path, "residue", {"field": ["z1 +* z2", "z2"]})
    not_json = tmp_path / "b.json"
    not_json.write_text("{")
    missing = tmp_path / "missing.json"
    off_sing = write_job(tmp_path, "slice-residue", {"foliation": corpus.radial(2).to_json(), "point": ["1", "0"]})
    for argv in ([str(bad_schema)], [bad_poly], [str(not_json)], [str(missing)], [off_sing],
                 [str(JOBS / "radial_residue.json"), "--retries", "0"]):
        code, text = call(argv)
        assert code == 1, argv
        assert "error" in json.loads(text)


def test_standard_input(tmp_path, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO((JOBS / "radial_residue.json").read_text()))
    code, text = call(["-"])
    assert code == 0 and json.loads(text)["value"] == "1"


def test_topology_jobs():
    report = json.loads(call([str(JOBS / "sphere_homology.json")])[1])
    assert report["betti"] == ["1", "0", "1"]
    report = json.loads(call([str(JOBS / "torus_pairing.json")])[1])
    assert report["pairing"] in ([["0", "1"], ["-1", "0"]], [["0", "-1"], ["1", "0"]])


def test_output_is_deterministic_and_stringly():
    a = call([str(JOBS / "pullback_slice_residue.json"), "--seed", "3"])
    b = call([str(JOBS / "pullback_slice_residue.json"), "--seed", "3"])
    assert a == b

    def leaves(x):
        if isinstance(x, dict):
            for v in x.values():
                yield from leaves(v)
        elif isinstance(x, list):
            for v in x:
                yield from leaves(v)
        else:
            yield x

    assert all(isinstance(v, (str, bool)) or v is None for v in leaves(json.loads(a[1])))

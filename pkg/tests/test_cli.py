import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from nogo import cli, report
from nogo.scenario import build_ghz, build_hardy, scenario_document, serialize_scenario

CORPUS = Path(__file__).parent / "data" / "corpus"


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc, indent=2))
    return path


def test_verify_hardy_text():
    code, out, _ = invoke("verify", "hardy")
    assert code == 0
    assert "contradiction ExcludedButPredicted: (alice, bob) = (-, -)" in out
    assert "p = 0.0833333333333" in out
    assert "(alice, daniela) != (-, 0)" in out


def test_verify_hardy_json():
    code, out, _ = invoke("verify", "hardy", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) >= {"scenario", "cuts", "constraints", "contradictions", "settings", "version"}
    (r,) = doc["contradictions"]
    assert r["kind"] == "ExcludedButPredicted" and r["pattern"] == {"alice": "-", "bob": "-"}
    assert abs(r["probability"] - 1 / 12) < 1e-12
    assert len(r["derivation"]) == 3
    for cut in doc["cuts"]:
        assert set(cut) >= {"velocity", "measured", "before", "after", "distribution", "zero_patterns"}


def test_verify_ghz():
    code, out, _ = invoke("verify", "ghz", "--format", "json")
    assert code == 0
    assert [r["kind"] for r in json.loads(out)["contradictions"]] == ["EmptyTable"]


def test_large_epsilon_hides_hardy_and_exits_2():
    code, out, _ = invoke("verify", "hardy", "--epsilon", "0.2")
    assert code == 2
    assert "(alice, bob) = (-, -)" not in out


def test_expect_consistent_inverts():
    assert invoke("verify", "hardy", "--expect-consistent")[0] == 2
    assert invoke("verify", "hardy", "--epsilon", "0.2", "--expect-consistent")[0] == 0


@pytest.mark.parametrize("name", ["hardy", "ghz"])
def test_json_reports_are_byte_identical(name):
    first = invoke("verify", name, "--format", "json")[1]
    second = invoke("verify", name, "--format", "json")[1]
    assert first == second
    proc = subprocess.run([sys.executable, "-m", "nogo", "verify", name, "--format", "json"], capture_output=True)
    assert proc.returncode == 0
    assert proc.stdout.decode() == first


def test_run_serialized_hardy_equals_verify(tmp_path):
    path = tmp_path / "hardy.json"
    path.write_text(serialize_scenario(build_hardy()))
    assert invoke("run", str(path), "--format", "json") == invoke("verify", "hardy", "--format", "json")


def test_export_round_trips(tmp_path):
    code, out, _ = invoke("export", "ghz")
    assert code == 0 and out == serialize_scenario(build_ghz())


def test_run_ghz_replica_with_explicit_state(tmp_path):
    doc = scenario_document(build_ghz())
    doc["name"] = "ghz-replica"
    amps = [[0, 0]] * 8
    amps[0] = amps[7] = ["1/sqrt(2)", 0]
    doc["state"] = {"amplitudes": amps}
    code, out, _ = invoke("run", str(write(tmp_path, "replica.json", doc)), "--format", "json")
    assert code == 0
    replica = json.loads(out)
    builtin = json.loads(invoke("verify", "ghz", "--format", "json")[1])
    assert [r["kind"] for r in replica["contradictions"]] == ["EmptyTable"]
    assert replica["cuts"] == builtin["cuts"]


def test_timelike_requirement_exits_3():
    code, out, err = invoke("run", str(CORPUS / "SpacelikeRequired.json"))
    assert code == 3 and out == ""
    assert "SpacelikeRequired" in err


@pytest.mark.parametrize("path", sorted(CORPUS.glob("*.json")), ids=lambda p: p.stem)
def test_every_corpus_file_exits_3(path):
    code, _, err = invoke("run", str(path))
    assert code == 3
    assert path.stem in err


def test_missing_file_exits_3(tmp_path):
    code, _, err = invoke("run", str(tmp_path / "nope.json"))
    assert code == 3 and "cannot read" in err


def test_frames_hardy():
    code, out, _ = invoke("frames", "hardy", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert sorted(c["velocity"][0] for c in doc["cuts"]) == [-0.25, 0, 0, 0.25]
    text = invoke("frames", "hardy")[1]
    assert "v=(-0.25)  on: alice, daniela  before: charlie  after: bob" in text


def test_frames_ghz():
    doc = json.loads(invoke("frames", "ghz", "--format", "json")[1])
    speeds = [sum(c * c for c in cut["velocity"]) ** 0.5 for cut in doc["cuts"]]
    assert len(speeds) == 8
    assert sum(abs(s - 0.11547) < 1e-4 for s in speeds) == 6


def test_frames_on_timelike_chain_lists_skips(tmp_path):
    doc = scenario_document(build_hardy())
    for m, t in zip(doc["measurements"], (0, 2, 1, 3)):
        m["t"], m["x"] = t, [0]
    doc["spacelike_required"] = []
    code, out, _ = invoke("frames", str(write(tmp_path, "chain.json", doc)))
    assert code == 0
    assert "0 surfaces" in out and "skipped 11 subsets" in out


def test_run_without_contradiction_exits_2(tmp_path):
    doc = scenario_document(build_hardy())
    doc["state"] = {"amplitudes": [[1, 0], [0, 0], [0, 0], [0, 0]]}
    path = write(tmp_path, "product.json", doc)
    code, out, _ = invoke("run", str(path))
    assert code == 2 and "no contradiction" in out
    assert invoke("run", str(path), "--expect-consistent")[0] == 0


def test_small_max_dim_exits_3():
    code, _, err = invoke("verify", "hardy", "--max-dim", "8")
    assert code == 3 and "CapacityExceeded" in err


def test_internal_error_exits_1(monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "run", boom)
    code, _, err = invoke("verify", "hardy")
    assert code == 1 and "boom" in err


def test_bad_flags_are_usage_errors():
    with pytest.raises(SystemExit) as exc:
        invoke("verify", "hardy", "--epsilon", "-1")
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        invoke("verify", "bell")


def test_report_echoes_engine_probabilities():
    from nogo.fiqt import analyse

    doc = report.run(build_hardy())
    _, predictions = analyse(build_hardy())
    for cut, p in zip(doc["cuts"], predictions):
        for entry in cut["distribution"]:
            assert abs(entry["probability"] - p.distribution[tuple(entry["outcome"])]) < 1e-12

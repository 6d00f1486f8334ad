import json
import subprocess
import sys

import pytest

from reactive_supervision.cli import main

from conftest import tw, write_jsonl


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_match(capsys):
    assert run(["match", "--sequence", "ABAC", "--person", "1"], capsys)[:2] == (0, "sarc=2 obl=1 eli=3\n")
    assert run(["match", "--sequence", "ABAA", "--person", "1"], capsys)[:2] == (0, "NOMATCH\n")
    assert run(["match", "--sequence", "AB", "--person", "2"], capsys)[1] == "sarc=1 obl=- eli=-\n"


def test_classify(capsys):
    code, out, _ = run(["classify", "--text", "Why are you being sarcastic?"], capsys)
    assert code == 0 and out.startswith("person=2")
    code, out, _ = run(["classify", "--text", "I wasn't being sarcastic"], capsys)
    assert out.startswith("person=unknown reason=negation_present")


@pytest.mark.parametrize("argv", [
    [],
    ["match", "--sequence", "ABAC"],
    ["match", "--sequence", "ABAC", "--person", "4"],
    ["match", "--sequence", "BAC", "--person", "1"],
    ["harvest", "--source", "/does/not/exist.jsonl", "--out", "x"],
    ["synth", "--mix", "/nope.json", "--seed", "1", "--out", "a", "--truth", "b"],
    ["synth", "--mix", __file__, "--seed", "1", "--ambiguous", "1.5", "--out", "a", "--truth", "b"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_usage_error_has_no_side_effects(tmp_path, capsys):
    corpus = write_jsonl(tmp_path / "c.jsonl", [tw("1")])
    out = tmp_path / "out.jsonl"
    assert main(["harvest", "--source", str(corpus), "--max-thread-len", "1", "--out", str(out)]) == 2
    assert not out.exists()


def test_operational_error(tmp_path, capsys):
    corpus = write_jsonl(tmp_path / "c.jsonl", [tw(f"{i}") for i in range(2)])
    code, _, err = run(["negatives", "--source", str(corpus), "--count", "5",
                        "--out", str(tmp_path / "n.jsonl")], capsys)
    assert code == 1 and "eligible" in err


def test_synth_harvest_stats(tmp_path, capsys):
    mix = tmp_path / "mix.json"
    mix.write_text(json.dumps({"ABAC:1": 6, "AB:2": 4, "ABC:3": 2}))
    corpus, truth, out = tmp_path / "c.jsonl", tmp_path / "t.jsonl", tmp_path / "d.jsonl"
    assert main(["synth", "--mix", str(mix), "--seed", "42", "--ambiguous", "0.25",
                 "--out", str(corpus), "--truth", str(truth)]) == 0
    assert main(["harvest", "--source", str(corpus), "--out", str(out),
                 "--report", str(tmp_path / "r.json")]) == 0
    report = json.loads((tmp_path / "r.json").read_text())
    truths = [json.loads(l) for l in truth.read_text().splitlines()]
    matched = [t for t in truths if "sarc_index" in t["expected"]]
    assert report["emitted"] == len(matched) == 9
    capsys.readouterr()
    assert main(["stats", "--in", str(out), "--format", "json", "--top-k", "5"]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["person_breakdown"]["total"]["sarcastic"] == 9
    assert main(["stats", "--in", str(out), "--format", "text"]) == 0
    assert "Breakdown by person class" in capsys.readouterr().out


def test_negatives_and_hashtags(tmp_path, capsys):
    tweets = [tw(f"e{i}", text=f"plain {i}") for i in range(4)]
    tweets += [tw("h1", text="what a day #sarcasm"), tw("h2", text="#irony rules")]
    corpus = write_jsonl(tmp_path / "c.jsonl", tweets)
    lex = tmp_path / "lex.txt"
    lex.write_text("#sarcasm\n#irony\n")
    out = tmp_path / "n.jsonl"
    assert main(["negatives", "--source", str(corpus), "--count", "4", "--lexicon", str(lex),
                 "--seed", "3", "--out", str(out)]) == 0
    ids = sorted(json.loads(l)["sar_id"] for l in out.read_text().splitlines())
    assert ids == ["e0", "e1", "e2", "e3"]
    hout = tmp_path / "h.jsonl"
    assert main(["hashtags", "--source", str(corpus), "--tags", "#sarcasm,#irony",
                 "--out", str(hout)]) == 0
    assert [json.loads(l)["id"] for l in hout.read_text().splitlines()] == ["h1"]


def test_module_entry_point_exit_code():
    proc = subprocess.run([sys.executable, "-m", "reactive_supervision", "match", "--sequence", "ABAC"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    assert "usage" in proc.stderr

import json

import pytest
from hypothesis import given, settings, strategies as st

from reactive_supervision.core import PersonClass
from reactive_supervision.cues import classify_cue
from reactive_supervision.matcher import match_roles
from reactive_supervision.sequencer import canonicalize
from reactive_supervision.synth import (
    CUE_BANK, ExpectedDiscard, InvalidTemplate, generate_corpus, generate_thread,
    oracle_roles, parse_mix, reference_mix, REFERENCE_PATTERN_ROWS,
)

FIRST, SECOND, THIRD = PersonClass.FIRST, PersonClass.SECOND, PersonClass.THIRD


def test_oracle_examples():
    r = oracle_roles("ABAC", FIRST)
    assert (r.sarcastic_index, r.oblivious_index, r.eliciting_index) == (2, 1, 3)
    assert oracle_roles("AAB", THIRD) is None
    r = oracle_roles("AABC", THIRD)
    assert (r.sarcastic_index, r.oblivious_index, r.eliciting_index) == (3, 2, None)


def test_oracle_requires_leading_a():
    assert oracle_roles("BAA", FIRST) is None
    assert oracle_roles("A", SECOND) is None


@pytest.mark.parametrize("person", [FIRST, SECOND, THIRD])
def test_cue_bank_classifies_to_its_person(person):
    for text in CUE_BANK[person]:
        assert classify_cue(text).person is person, text


def test_generate_first_abac():
    pt = generate_thread(FIRST, "ABAC", seed=7)
    assert canonicalize(pt.thread).letters == "ABAC"
    assert classify_cue(pt.thread.cue.text).person is FIRST
    assert pt.truth.sarcastic_index == 2


def test_generate_third_abc():
    pt = generate_thread(THIRD, "ABC", seed=1)
    assert (pt.truth.sarcastic_index, pt.truth.oblivious_index) == (2, 1)


@pytest.mark.parametrize("template", ["BAC", "ACB", "", "ABc", "AB1"])
def test_invalid_templates(template):
    with pytest.raises(InvalidTemplate):
        generate_thread(FIRST, template, seed=0)


def test_discard_truth():
    pt = generate_thread(FIRST, "ABAA", seed=3)
    assert pt.truth == ExpectedDiscard("nomatch")


@settings(max_examples=60)
@given(st.sampled_from([FIRST, SECOND, THIRD]), st.integers(0, 2**32 - 1))
def test_random_thread_truth_agrees_with_matcher(person, seed):
    pt = generate_thread(person, None, seed=seed)
    seq = canonicalize(pt.thread)
    assert seq.letters == pt.template
    assert match_roles(seq, person) == pt.truth


def test_corpus_counts_and_truth():
    corpus = generate_corpus({("ABAC", FIRST): 100}, 0.0, seed=42)
    assert len(corpus.threads) == 100
    assert all(pt.matched for pt in corpus.threads)


def test_fully_ambiguous():
    corpus = generate_corpus({("ABAC", FIRST): 20, ("AB", SECOND): 20}, 1.0, seed=1)
    assert all(isinstance(pt.truth, ExpectedDiscard) for pt in corpus.threads)
    for pt in corpus.threads:
        assert match_roles(canonicalize(pt.thread), pt.planted_person) is None


def test_ambiguous_fraction_exact():
    corpus = generate_corpus({("ABC", THIRD): 50}, 0.2, seed=5)
    assert sum(not pt.matched for pt in corpus.threads) == 10


def test_seeded_determinism(tmp_path):
    mix = {("ABAC", FIRST): 5, ("AB", SECOND): 5, ("ABC", THIRD): 5}
    paths = []
    for k in range(2):
        c, t = tmp_path / f"c{k}.jsonl", tmp_path / f"t{k}.jsonl"
        generate_corpus(mix, 0.3, seed=99).write(c, t)
        paths.append((c.read_bytes(), t.read_bytes()))
    assert paths[0] == paths[1]
    other = tmp_path / "other.jsonl"
    generate_corpus(mix, 0.3, seed=100).write(other)
    assert other.read_bytes() != paths[0][0]


def test_truth_file_schema(tmp_path):
    corpus = generate_corpus({("ABAC", FIRST): 2, ("ABAA", FIRST): 1}, 0.0, seed=0)
    corpus.write(tmp_path / "c.jsonl", tmp_path / "t.jsonl")
    recs = [json.loads(l) for l in (tmp_path / "t.jsonl").read_text().splitlines()]
    assert len(recs) == 3
    for rec in recs:
        assert "thread_root_id" in rec
        exp = rec["expected"]
        assert set(exp) in ({"person", "sarc_index", "obl_index", "eli_index"}, {"discard_reason"})


def test_parse_mix_forms():
    a = parse_mix({"ABAC:1": 3, "AB:2": 1})
    b = parse_mix([{"template": "ABAC", "person": 1, "count": 3},
                   {"template": "AB", "person": "2", "count": 1}])
    assert a == b == {("ABAC", FIRST): 3, ("AB", SECOND): 1}
    with pytest.raises(ValueError):
        parse_mix({"ABAC:4": 1})


def test_reference_mix_scaling():
    mix = reference_mix(10_000)
    assert sum(mix.values()) == 10_000
    weight = sum(c for *_, c in REFERENCE_PATTERN_ROWS)
    for t, p, c in REFERENCE_PATTERN_ROWS:
        assert abs(mix[(t, p)] - c * 10_000 / weight) < 1
    assert reference_mix(sum(c for *_, c in REFERENCE_PATTERN_ROWS)) == {(t, p): c for t, p, c in REFERENCE_PATTERN_ROWS}

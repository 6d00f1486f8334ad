import json
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from reactive_supervision.core import PersonClass
from reactive_supervision.pipeline import harvest
from reactive_supervision.sources import FileCorpus
from reactive_supervision.stats import (
    LAG_BUCKETS, POSITION_BUCKETS, CorpusStats, EmptyInput, corpus_summary, pattern_histogram,
    percent, person_breakdown, position_lag_matrix, render_json, render_text, word_count,
)
from reactive_supervision.synth import generate_corpus

FIRST, SECOND, THIRD = PersonClass.FIRST, PersonClass.SECOND, PersonClass.THIRD


def row(person, seq, position, lag, obl=False, eli=False, text="a b c"):
    return {"label": "sarcastic", "person": person,
            "perspective": "intended" if person == 1 else "perceived",
            "sar_id": "s", "sar_text": text, "cue_id": "c", "cue_text": "x",
            "obl_id": "o" if obl else None, "obl_text": None,
            "eli_id": "e" if eli else None, "eli_text": None,
            "author_sequence": seq, "position": position, "cue_lag": lag}


def neg(text="a b"):
    return {"label": "non_sarcastic", "person": None, "perspective": None, "sar_id": "n",
            "sar_text": text, "author_sequence": None, "position": None, "cue_lag": None}


ABAC1 = row(1, "ABAC", 1, 2, obl=True, eli=True)
ABA1 = row(1, "ABA", 0, 2, obl=True)
AB2 = row(2, "AB", 0, 1)
ABC3 = row(3, "ABC", 0, 2, obl=True)


def harvested(mix, seed=0, ambiguous=0.0, tmp_path=None):
    corpus = generate_corpus(mix, ambiguous, seed=seed)
    path = tmp_path / f"corpus{seed}.jsonl"
    corpus.write(path)
    instances, _ = harvest(FileCorpus(path))
    return corpus, instances


def test_breakdown_counting():
    bd = person_breakdown([ABAC1, row(1, "ABCA", 0, 3), ABC3])
    assert bd[1] == {"sarcastic": 2, "oblivious": 1, "eliciting": 1}
    assert bd[3] == {"sarcastic": 1, "oblivious": 1, "eliciting": 0}
    assert bd["total"] == {"sarcastic": 3, "oblivious": 2, "eliciting": 1}


def test_breakdown_empty():
    bd = person_breakdown([])
    assert all(v == 0 for p in (1, 2, 3, "total") for v in bd[p].values())


def test_breakdown_planted_abac(tmp_path):
    _, instances = harvested({("ABAC", FIRST): 10}, tmp_path=tmp_path)
    assert person_breakdown(instances)[1] == {"sarcastic": 10, "oblivious": 10, "eliciting": 10}


def test_histogram_planted_mix(tmp_path):
    _, instances = harvested({("ABAC", FIRST): 5, ("ABA", FIRST): 3, ("AB", SECOND): 4},
                             tmp_path=tmp_path)
    h = pattern_histogram(instances, top_k=5)
    assert h[1] == [{"pattern": "ABAC", "sarcastic": 5, "oblivious": 5, "eliciting": 5},
                    {"pattern": "ABA", "sarcastic": 3, "oblivious": 3, "eliciting": 0}]
    assert h[2] == [{"pattern": "AB", "sarcastic": 4, "oblivious": 0, "eliciting": 0}]
    assert h[3] == []


def test_histogram_top_k_zero():
    h = pattern_histogram([ABAC1, ABA1, AB2], top_k=0)
    assert h[1] == [{"pattern": "Other", "sarcastic": 2, "oblivious": 2, "eliciting": 1}]
    assert [r["pattern"] for r in h[2]] == ["Other"]


def test_histogram_single():
    assert pattern_histogram([AB2], 5)[2] == [
        {"pattern": "AB", "sarcastic": 1, "oblivious": 0, "eliciting": 0}]


def test_matrix_single_cell():
    m = position_lag_matrix([ABAC1] * 7)
    assert m.cell(2, 1) == 100.0
    assert sum(m.cell(l, p) for l in LAG_BUCKETS for p in POSITION_BUCKETS) == 100.0


def test_matrix_ab_second():
    assert position_lag_matrix([AB2] * 3).cell(1, 0) == 100.0


def test_matrix_quarter_split():
    m = position_lag_matrix([AB2] + [ABAC1] * 3)
    assert (m.cell(1, 0), m.cell(2, 1)) == (25.0, 75.0)
    assert m.row_total(1) == 25.0 and m.column_total(1) == 75.0


def test_matrix_buckets():
    m = position_lag_matrix([row(1, "A" + "B" * 8 + "A", 7, 3)])
    assert m.cell("3+", "5+") == 100.0


def test_matrix_empty():
    with pytest.raises(EmptyInput):
        position_lag_matrix([])
    with pytest.raises(EmptyInput):
        corpus_summary([neg()])


def test_percent_half_up():
    assert percent(1, 8) == 12.5
    assert percent(1, 16) == 6.3  # 6.25 rounds up
    assert percent(1, 3) == 33.3


def test_summary_means():
    s = corpus_summary([row(2, "AB", 0, 1), row(1, "ABAC", 1, 2)])
    assert s["mean_thread_length"] == 3.0
    assert s["mean_cue_lag"] == 1.5


def test_summary_root_fraction():
    s = corpus_summary([ABA1, ABA1])
    assert s["root_fraction"] == {"intended": 1.0, "perceived": None}


def test_word_count_strips_urls_and_mentions():
    assert word_count("@bob look https://t.co/xyz at this www.x.com") == 3
    s = corpus_summary([row(1, "ABA", 0, 2, text="one two three"), neg("a b")])
    assert s["word_count_histogram"] == {"sarcastic/intended": {3: 1}, "non_sarcastic": {2: 1}}


def test_summary_planted_means(tmp_path):
    # lengths 4,3,2 and lags 2,2,1 in proportions 2:1:1
    _, instances = harvested({("ABAC", FIRST): 20, ("ABA", FIRST): 10, ("AB", SECOND): 10},
                             tmp_path=tmp_path)
    s = corpus_summary(instances)
    assert s["mean_thread_length"] == (20 * 4 + 10 * 3 + 10 * 2) / 40
    assert s["mean_cue_lag"] == (20 * 2 + 10 * 2 + 10 * 1) / 40


rows_st = st.lists(st.sampled_from([ABAC1, ABA1, AB2, ABC3, row(3, "ABCB", 1, 2, True, True),
                                    row(1, "ABBBA", 0, 4), neg()]), max_size=30)


@given(rows_st, rows_st)
def test_merge(x, y):
    assert CorpusStats.from_instances(x + y) == CorpusStats.from_instances(x) + CorpusStats.from_instances(y)


@given(rows_st)
def test_subtotals_and_cells(rows):
    stats = CorpusStats.from_instances(rows)
    bd = stats.person_breakdown()
    for top_k in (0, 1, 5):
        h = stats.pattern_histogram(top_k)
        for p in (1, 2, 3):
            for kind in ("sarcastic", "oblivious", "eliciting"):
                assert sum(r[kind] for r in h[p]) == bd[p][kind]
    if stats.n_sarcastic:
        m = stats.position_lag_matrix()
        assert sum(m.counts.values()) == stats.n_sarcastic
        exact = sum(m.exact(l, p) for l in LAG_BUCKETS for p in POSITION_BUCKETS)
        assert exact == pytest.approx(100.0)
        rounded = sum(m.cell(l, p) for l in LAG_BUCKETS for p in POSITION_BUCKETS)
        assert abs(rounded - 100.0) <= 0.05 * len(m.counts) + 1e-9


def test_renderers():
    stats = CorpusStats.from_instances([ABAC1, ABA1, AB2, ABC3, neg()])
    text = render_text(stats, top_k=2)
    assert "Breakdown by person class" in text and "Cue lag" in text
    data = json.loads(render_json(stats, top_k=2))
    assert data["person_breakdown"]["1"]["sarcastic"] == 2
    assert data["position_lag_matrix"]["cells"]["2"]["1"] == 25.0
    empty = json.loads(render_json(CorpusStats(), 5))
    assert empty["summary"] is None

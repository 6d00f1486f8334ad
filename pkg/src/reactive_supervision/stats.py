"""Corpus statistics over harvested datasets.

All aggregates are kept as raw counts in :class:`CorpusStats`, so partial
results computed over disjoint shards can be merged with ``+``; percentages
and means are derived on demand.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

TWEET_TYPES = ("sarcastic", "oblivious", "eliciting")
PERSONS = (1, 2, 3)
PERSON_NAMES = {1: "1st (Intended)", 2: "2nd (Perceived)", 3: "3rd (Perceived)"}
LAG_BUCKETS = ("1", "2", "3+")
POSITION_BUCKETS = ("0", "1", "2", "3", "4", "5+")
OTHER = "Other"

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"@\w+")


class EmptyInput(ValueError):
    pass


def word_count(text: str) -> int:
    """Whitespace tokens left after removing URLs and @mentions."""
    return len(_MENTION_RE.sub(" ", _URL_RE.sub(" ", text)).split())


def lag_bucket(cue_lag: int) -> str:
    return "3+" if cue_lag >= 3 else str(cue_lag)


def position_bucket(position: int) -> str:
    return "5+" if position >= 5 else str(position)


def percent(count: int, total: int) -> float:
    """100 * count / total rounded half-up to one decimal."""
    value = (Decimal(100 * count) / Decimal(total)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
    return float(value)


def _as_record(row) -> dict:
    return row if isinstance(row, dict) else row.to_record()


@dataclass
class CorpusStats:
    person_counts: Counter = field(default_factory=Counter)   # (person, type)
    pattern_counts: Counter = field(default_factory=Counter)  # (person, sequence, type)
    cell_counts: Counter = field(default_factory=Counter)     # (lag bucket, position bucket)
    root_counts: Counter = field(default_factory=Counter)     # (perspective, "root" | "all")
    word_counts: Counter = field(default_factory=Counter)     # (group, n words)
    n_sarcastic: int = 0
    n_negative: int = 0
    sum_thread_length: int = 0
    sum_cue_lag: int = 0

    @classmethod
    def from_instances(cls, rows: Iterable) -> "CorpusStats":
        stats = cls()
        for row in rows:
            stats.add(row)
        return stats

    def add(self, row):
        rec = _as_record(row)
        if rec["label"] != "sarcastic":
            self.n_negative += 1
            self.word_counts[("non_sarcastic", word_count(rec["sar_text"]))] += 1
            return
        person, seq = int(rec["person"]), rec["author_sequence"]
        present = {
            "sarcastic": True,
            "oblivious": rec.get("obl_id") is not None,
            "eliciting": rec.get("eli_id") is not None,
        }
        for kind, ok in present.items():
            if ok:
                self.person_counts[(person, kind)] += 1
                self.pattern_counts[(person, seq, kind)] += 1
        position, lag = int(rec["position"]), int(rec["cue_lag"])
        self.cell_counts[(lag_bucket(lag), position_bucket(position))] += 1
        self.n_sarcastic += 1
        self.sum_thread_length += len(seq)
        self.sum_cue_lag += lag
        perspective = rec["perspective"]
        self.root_counts[(perspective, "all")] += 1
        if position == 0:
            self.root_counts[(perspective, "root")] += 1
        self.word_counts[(f"sarcastic/{perspective}", word_count(rec["sar_text"]))] += 1

    def __add__(self, other: "CorpusStats") -> "CorpusStats":
        return CorpusStats(
            person_counts=self.person_counts + other.person_counts,
            pattern_counts=self.pattern_counts + other.pattern_counts,
            cell_counts=self.cell_counts + other.cell_counts,
            root_counts=self.root_counts + other.root_counts,
            word_counts=self.word_counts + other.word_counts,
            n_sarcastic=self.n_sarcastic + other.n_sarcastic,
            n_negative=self.n_negative + other.n_negative,
            sum_thread_length=self.sum_thread_length + other.sum_thread_length,
            sum_cue_lag=self.sum_cue_lag + other.sum_cue_lag,
        )

    merge = __add__

    # derived views

    def person_breakdown(self) -> dict:
        out = {p: {k: self.person_counts[(p, k)] for k in TWEET_TYPES} for p in PERSONS}
        out["total"] = {k: sum(out[p][k] for p in PERSONS) for k in TWEET_TYPES}
        return out

    def pattern_histogram(self, top_k: int = 5) -> dict[int, list[dict]]:
        """Rows per person class, most frequent first, tail rolled into "Other"."""
        if top_k < 0:
            raise ValueError("top_k must be >= 0")
        out = {}
        for p in PERSONS:
            seqs = {s for (q, s, _k) in self.pattern_counts if q == p}
            if not seqs:
                out[p] = []
                continue
            rows = [{"pattern": s, **{k: self.pattern_counts[(p, s, k)] for k in TWEET_TYPES}}
                    for s in seqs]
            rows.sort(key=lambda r: (-r["sarcastic"], len(r["pattern"]), r["pattern"]))
            head, tail = rows[:top_k], rows[top_k:]
            if tail:
                head.append({"pattern": OTHER,
                             **{k: sum(r[k] for r in tail) for k in TWEET_TYPES}})
            out[p] = head
        return out

    def position_lag_matrix(self) -> "PositionLagMatrix":
        if self.n_sarcastic == 0:
            raise EmptyInput("no sarcastic instances")
        return PositionLagMatrix(dict(self.cell_counts), self.n_sarcastic)

    def summary(self) -> dict:
        if self.n_sarcastic == 0:
            raise EmptyInput("no sarcastic instances")
        root_fraction = {}
        for perspective in ("intended", "perceived"):
            n = self.root_counts[(perspective, "all")]
            root_fraction[perspective] = self.root_counts[(perspective, "root")] / n if n else None
        histogram: dict[str, dict[int, int]] = {}
        for (group, n_words), c in sorted(self.word_counts.items()):
            histogram.setdefault(group, {})[n_words] = c
        return {
            "n_sarcastic": self.n_sarcastic,
            "n_negative": self.n_negative,
            "mean_thread_length": self.sum_thread_length / self.n_sarcastic,
            "mean_cue_lag": self.sum_cue_lag / self.n_sarcastic,
            "root_fraction": root_fraction,
            "word_count_histogram": histogram,
        }


@dataclass(frozen=True)
class PositionLagMatrix:
    counts: dict  # (lag bucket, position bucket) -> count
    total: int

    def count(self, lag: str, position: str) -> int:
        return self.counts.get((lag, position), 0)

    def cell(self, lag, position) -> float:
        return percent(self.count(str(lag), str(position)), self.total)

    def exact(self, lag, position) -> float:
        return 100.0 * self.count(str(lag), str(position)) / self.total

    def row_total(self, lag) -> float:
        return percent(sum(self.count(str(lag), p) for p in POSITION_BUCKETS), self.total)

    def column_total(self, position) -> float:
        return percent(sum(self.count(lag, str(position)) for lag in LAG_BUCKETS), self.total)

    def percentages(self) -> dict[str, dict[str, float]]:
        return {lag: {pos: self.cell(lag, pos) for pos in POSITION_BUCKETS} for lag in LAG_BUCKETS}

    def to_dict(self) -> dict:
        return {
            "total_instances": self.total,
            "cells": self.percentages(),
            "lag_totals": {lag: self.row_total(lag) for lag in LAG_BUCKETS},
            "position_totals": {pos: self.column_total(pos) for pos in POSITION_BUCKETS},
        }


def person_breakdown(instances) -> dict:
    return CorpusStats.from_instances(instances).person_breakdown()


def pattern_histogram(instances, top_k: int = 5) -> dict[int, list[dict]]:
    return CorpusStats.from_instances(instances).pattern_histogram(top_k)


def position_lag_matrix(instances) -> PositionLagMatrix:
    return CorpusStats.from_instances(instances).position_lag_matrix()


def corpus_summary(instances) -> dict:
    return CorpusStats.from_instances(instances).summary()


def _table(header: list[str], rows: list[list], title: str) -> str:
    cells = [header] + [["" if v is None else str(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    fmt = lambda r: "  ".join(c.ljust(w) if i == 0 else c.rjust(w)  # noqa: E731
                              for i, (c, w) in enumerate(zip(r, widths)))
    rule = "-" * len(fmt(header))
    return "\n".join([title, rule, fmt(header), rule, *(fmt(r) for r in cells[1:]), rule])


def render_text(stats: CorpusStats, top_k: int = 5) -> str:
    parts = ["# word counts: whitespace tokens after URL and @mention removal;"
             " percentages rounded half-up to one decimal"]
    bd = stats.person_breakdown()
    rows = []
    for p in PERSONS:
        obl = "-" if p == 2 else bd[p]["oblivious"]
        rows.append([PERSON_NAMES[p], bd[p]["sarcastic"], obl, bd[p]["eliciting"]])
    rows.append(["Total", *(bd["total"][k] for k in TWEET_TYPES)])
    parts.append(_table(["Person", "Sarcastic", "Oblivious", "Eliciting"], rows,
                        "Breakdown by person class"))

    hist = stats.pattern_histogram(top_k)
    rows = []
    for p in PERSONS:
        for r in hist[p]:
            rows.append([f"{PERSON_NAMES[p]} {r['pattern']}", r["sarcastic"],
                         "-" if p == 2 else r["oblivious"], r["eliciting"]])
        rows.append([f"{PERSON_NAMES[p]} Subtotal", *(bd[p][k] for k in TWEET_TYPES)])
    parts.append(_table(["Pattern", "Sarcastic", "Oblivious", "Eliciting"], rows,
                        f"Author patterns (top {top_k} per class)"))

    if stats.n_sarcastic:
        m = stats.position_lag_matrix()
        rows = [[lag, *(m.cell(lag, p) for p in POSITION_BUCKETS), m.row_total(lag)]
                for lag in LAG_BUCKETS]
        rows.append(["Total", *(m.column_total(p) for p in POSITION_BUCKETS), 100.0])
        parts.append(_table(["Cue lag", *POSITION_BUCKETS, "Total"], rows,
                            "% of sarcastic tweets by position (columns) and cue lag (rows)"))
        s = stats.summary()
        lines = ["Summary", f"sarcastic: {s['n_sarcastic']}", f"negative: {s['n_negative']}",
                 f"mean_thread_length: {s['mean_thread_length']:.3f}",
                 f"mean_cue_lag: {s['mean_cue_lag']:.3f}"]
        for persp, frac in s["root_fraction"].items():
            lines.append(f"root_fraction[{persp}]: {'-' if frac is None else f'{frac:.3f}'}")
        parts.append("\n".join(lines))
    return "\n\n".join(parts) + "\n"


def to_json(stats: CorpusStats, top_k: int = 5) -> dict:
    out = {
        "person_breakdown": {str(k): v for k, v in stats.person_breakdown().items()},
        "pattern_histogram": {str(k): v for k, v in stats.pattern_histogram(top_k).items()},
        "position_lag_matrix": None,
        "summary": None,
    }
    if stats.n_sarcastic:
        out["position_lag_matrix"] = stats.position_lag_matrix().to_dict()
        summary = stats.summary()
        summary["word_count_histogram"] = {
            g: {str(n): c for n, c in h.items()} for g, h in summary["word_count_histogram"].items()
        }
        out["summary"] = summary
    return out


def render_json(stats: CorpusStats, top_k: int = 5) -> str:
    return json.dumps(to_json(stats, top_k), indent=2) + "\n"

"""Fetch, classify, traverse and match: the harvesting loop.

Also home to the negative sampler and the trailing-hashtag baseline
collector used for rate comparisons.
"""
from __future__ import annotations

import enum
import json
import logging
import random
import unicodedata
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator

from .core import ConversationThread, Perspective, PersonClass, Tweet, validate_thread
from .cues import QUERY_PHRASE, classify_cue, is_cue_candidate, tokenize
from .matcher import match_roles
from .sequencer import TooManyAuthors, canonicalize, positions_of
from .sources import MalformedRecord

log = logging.getLogger(__name__)


class InsufficientSupply(Exception):
    pass


class Label(enum.Enum):
    SARCASTIC = "sarcastic"
    NON_SARCASTIC = "non_sarcastic"


class BrokenReason(enum.Enum):
    MISSING_PARENT = "missing_parent"
    MALFORMED_PARENT = "malformed_parent"
    TOO_LONG = "too_long"
    CYCLE = "cycle"


@dataclass(frozen=True)
class Broken:
    reason: BrokenReason
    detail: str = ""


@dataclass(frozen=True)
class LabeledInstance:
    label: Label
    sarcastic_tweet: Tweet
    person: PersonClass | None = None
    perspective: Perspective | None = None
    cue_tweet: Tweet | None = None
    oblivious_tweet: Tweet | None = None
    eliciting_tweet: Tweet | None = None
    author_sequence: str | None = None
    position: int | None = None
    cue_lag: int | None = None

    def __post_init__(self):
        if self.label is Label.SARCASTIC:
            required = (self.cue_tweet, self.person, self.perspective,
                        self.author_sequence, self.position, self.cue_lag)
            if any(v is None for v in required):
                raise ValueError("sarcastic instance is missing role fields")
            if self.position + self.cue_lag != len(self.author_sequence) - 1:
                raise ValueError("position + cue_lag must equal sequence length - 1")
        else:
            extras = (self.person, self.perspective, self.cue_tweet, self.oblivious_tweet,
                      self.eliciting_tweet, self.author_sequence, self.position, self.cue_lag)
            if any(v is not None for v in extras):
                raise ValueError("non-sarcastic instance carries role fields")

    def to_record(self) -> dict:
        def tid(t):
            return t.id if t is not None else None

        def text(t):
            return t.text if t is not None else None

        return {
            "label": self.label.value,
            "person": self.person.value if self.person is not None else None,
            "perspective": self.perspective.value if self.perspective is not None else None,
            "sar_id": self.sarcastic_tweet.id,
            "sar_text": self.sarcastic_tweet.text,
            "cue_id": tid(self.cue_tweet),
            "cue_text": text(self.cue_tweet),
            "obl_id": tid(self.oblivious_tweet),
            "obl_text": text(self.oblivious_tweet),
            "eli_id": tid(self.eliciting_tweet),
            "eli_text": text(self.eliciting_tweet),
            "author_sequence": self.author_sequence,
            "position": self.position,
            "cue_lag": self.cue_lag,
        }


@dataclass
class HarvestConfig:
    query: str = QUERY_PHRASE
    lang_filter: str | None = None
    max_thread_length: int = 100
    max_candidates: int | None = None
    dedup: bool = True

    def __post_init__(self):
        if self.max_thread_length < 2:
            raise ValueError("max_thread_length must be at least 2")
        if self.max_candidates is not None and self.max_candidates < 0:
            raise ValueError("max_candidates must be >= 0")


@dataclass
class HarvestReport:
    fetched: int = 0
    emitted: int = 0
    unknown_skips: int = 0
    broken_skips: int = 0
    nomatch_skips: int = 0
    dedup_skips: int = 0
    unknown_reasons: Counter = field(default_factory=Counter)
    broken_reasons: Counter = field(default_factory=Counter)
    nomatch_by_person: Counter = field(default_factory=Counter)
    emitted_by_person: Counter = field(default_factory=Counter)
    cue_counts: Counter = field(default_factory=Counter)

    @property
    def conserved(self) -> bool:
        skipped = self.unknown_skips + self.broken_skips + self.nomatch_skips + self.dedup_skips
        return self.fetched == self.emitted + skipped

    def to_dict(self) -> dict:
        return {
            "fetched": self.fetched,
            "emitted": self.emitted,
            "unknown_skips": self.unknown_skips,
            "broken_skips": self.broken_skips,
            "nomatch_skips": self.nomatch_skips,
            "dedup_skips": self.dedup_skips,
            "unknown_reasons": dict(sorted(self.unknown_reasons.items())),
            "broken_reasons": dict(sorted(self.broken_reasons.items())),
            "nomatch_by_person": {str(k): v for k, v in sorted(self.nomatch_by_person.items())},
            "emitted_by_person": {str(k): v for k, v in sorted(self.emitted_by_person.items())},
            "multi_cue_tweets": sum(1 for c in self.cue_counts.values() if c > 1),
        }

    def to_text(self) -> str:
        d = self.to_dict()
        lines = []
        for key, value in d.items():
            if isinstance(value, dict):
                inner = " ".join(f"{k}={v}" for k, v in value.items())
                lines.append(f"{key}: {inner}" if inner else f"{key}:")
            else:
                lines.append(f"{key}: {value}")
        return "\n".join(lines)


def traverse(source, cue: Tweet, max_len: int = 100) -> ConversationThread | Broken:
    """Walk parent links from ``cue`` up to the root."""
    chain = [cue]
    seen = {cue.id}
    current = cue
    while current.parent_id is not None:
        if current.parent_id in seen:
            return Broken(BrokenReason.CYCLE, current.parent_id)
        if len(chain) >= max_len:
            return Broken(BrokenReason.TOO_LONG, f"exceeds {max_len} tweets")
        try:
            parent = source.lookup_tweet(current.parent_id)
        except MalformedRecord as exc:
            return Broken(BrokenReason.MALFORMED_PARENT, str(exc))
        if parent is None:
            return Broken(BrokenReason.MISSING_PARENT, current.parent_id)
        if parent.id != current.parent_id:
            return Broken(BrokenReason.MISSING_PARENT, f"lookup of {current.parent_id} returned {parent.id}")
        chain.append(parent)
        seen.add(parent.id)
        current = parent
    return validate_thread(chain)


# outcome of processing one candidate: (kind, detail, instance)
def _process(source, cue: Tweet, config: HarvestConfig):
    decision = classify_cue(cue.text)
    if not decision.is_known:
        return "unknown", decision.reason.value, None
    thread = traverse(source, cue, config.max_thread_length)
    if isinstance(thread, Broken):
        return "broken", thread.reason.value, None
    try:
        sequence = canonicalize(thread)
    except TooManyAuthors:
        return "nomatch", decision.person.value, None
    roles = match_roles(sequence, decision.person)
    if roles is None:
        return "nomatch", decision.person.value, None
    position, cue_lag = positions_of(len(sequence), roles.sarcastic_index)

    def at(i):
        return thread[i] if i is not None else None

    inst = LabeledInstance(
        label=Label.SARCASTIC,
        sarcastic_tweet=thread[roles.sarcastic_index],
        person=roles.person,
        perspective=roles.perspective,
        cue_tweet=thread.cue,
        oblivious_tweet=at(roles.oblivious_index),
        eliciting_tweet=at(roles.eliciting_index),
        author_sequence=sequence.letters,
        position=position,
        cue_lag=cue_lag,
    )
    return "match", None, inst


def _candidates(source, config: HarvestConfig) -> Iterator[Tweet]:
    n = 0
    for cue in source.iter_cues(config.query):
        if config.lang_filter and cue.lang != config.lang_filter:
            continue
        if config.max_candidates is not None and n >= config.max_candidates:
            return
        n += 1
        yield cue


def iter_harvest(source, config: HarvestConfig | None = None,
                 report: HarvestReport | None = None, workers: int = 1) -> Iterator[LabeledInstance]:
    """Yield sarcastic instances in candidate order, updating ``report`` as it goes.

    With ``workers > 1`` candidates are processed concurrently but results
    are consumed in submission order, so the output is identical to a
    single-worker run.
    """
    config = config or HarvestConfig()
    report = report if report is not None else HarvestReport()
    seen_sarcastic: set[str] = set()

    if workers > 1:
        pool = ThreadPoolExecutor(max_workers=workers)
        outcomes = pool.map(lambda cue: (cue, _process(source, cue, config)),
                            _candidates(source, config))
    else:
        pool = None
        outcomes = ((cue, _process(source, cue, config)) for cue in _candidates(source, config))

    try:
        for cue, (kind, detail, inst) in outcomes:
            report.fetched += 1
            if kind == "unknown":
                report.unknown_skips += 1
                report.unknown_reasons[detail] += 1
            elif kind == "broken":
                report.broken_skips += 1
                report.broken_reasons[detail] += 1
            elif kind == "nomatch":
                report.nomatch_skips += 1
                report.nomatch_by_person[detail] += 1
            else:
                sid = inst.sarcastic_tweet.id
                report.cue_counts[sid] += 1
                if config.dedup and sid in seen_sarcastic:
                    report.dedup_skips += 1
                    continue
                seen_sarcastic.add(sid)
                report.emitted += 1
                report.emitted_by_person[inst.person.value] += 1
                yield inst
    finally:
        if pool is not None:
            pool.shutdown(wait=True, cancel_futures=True)


def harvest(source, config: HarvestConfig | None = None,
            workers: int = 1) -> tuple[list[LabeledInstance], HarvestReport]:
    report = HarvestReport()
    instances = list(iter_harvest(source, config, report, workers=workers))
    return instances, report


def write_jsonl(records: Iterable[dict], fh) -> int:
    n = 0
    for rec in records:
        fh.write(json.dumps(rec, ensure_ascii=False, sort_keys=False) + "\n")
        n += 1
    return n


def default_lexicon() -> list[str]:
    text = resources.files("reactive_supervision").joinpath("data/negative_lexicon.txt").read_text("utf-8")
    return parse_lexicon(text)


def parse_lexicon(text: str) -> list[str]:
    # one entry per line; no comment syntax since hashtag entries start with "#"
    return [line.strip().casefold() for line in text.splitlines() if line.strip()]


def mentions_lexicon(text: str, lexicon: Iterable[str]) -> bool:
    """Hashtag entries match as case-folded substrings, word entries as whole tokens."""
    folded = text.casefold()
    tokens = set()
    for tok in tokenize(text):
        tokens.add(tok)
        tokens.add(tok.lstrip("#@"))
    for entry in lexicon:
        entry = entry.casefold()
        if entry.startswith("#"):
            if entry in folded:
                return True
        elif entry in tokens:
            return True
    return False


def sample_negatives(source, count: int, lexicon: Iterable[str] | None = None,
                     lang: str | None = "en", seed: int | None = None,
                     query: str = QUERY_PHRASE) -> list[LabeledInstance]:
    """Draw ``count`` non-cue tweets free of sarcasm-related words or hashtags.

    Without a seed the first eligible tweets in source order are used;
    with a seed the eligible pool is shuffled deterministically first.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if count == 0:
        return []
    lexicon = list(default_lexicon() if lexicon is None else lexicon)
    eligible = []
    for tweet in source.iter_search(None):
        if lang and tweet.lang != lang:
            continue
        if is_cue_candidate(tweet.text, query) or mentions_lexicon(tweet.text, lexicon):
            continue
        eligible.append(tweet)
        if seed is None and len(eligible) == count:
            break
    if len(eligible) < count:
        raise InsufficientSupply(f"only {len(eligible)} eligible tweets, {count} requested")
    if seed is not None:
        random.Random(seed).shuffle(eligible)
    return [LabeledInstance(Label.NON_SARCASTIC, t) for t in eligible[:count]]


def _strip_trailing(text: str) -> str:
    end = len(text)
    while end > 0:
        ch = text[end - 1]
        if ch.isspace() or (unicodedata.category(ch).startswith("P") and ch != "#"):
            end -= 1
        else:
            break
    return text[:end]


def ends_with_hashtag(text: str, hashtags: Iterable[str]) -> bool:
    tail = _strip_trailing(text).casefold()
    for tag in hashtags:
        tag = tag.strip().casefold()
        if not tag:
            continue
        if not tag.startswith("#"):
            tag = "#" + tag
        if tail.endswith(tag):
            before = tail[: -len(tag)]
            # "#sarcasm" must not match the tail of "#notsarcasm" or "foo#sarcasm"
            if not before or not (before[-1].isalnum() or before[-1] in "_#"):
                return True
    return False


@dataclass
class HashtagReport:
    scanned: int
    kept: int
    span_days: float
    per_day: float | None

    def to_dict(self):
        return {"scanned": self.scanned, "kept": self.kept,
                "span_days": round(self.span_days, 6),
                "per_day": None if self.per_day is None else round(self.per_day, 6)}


def hashtag_harvest(source, hashtags: Iterable[str], lang: str | None = None,
                    query: str | None = None) -> tuple[list[Tweet], HashtagReport]:
    """Distant-supervision baseline: keep tweets whose text ends with one of ``hashtags``.

    The collection rate is kept tweets divided by the time span (in days)
    covered by all scanned tweets.  For an HTTP source pass ``query`` (or
    configure ``sample_url``) so there is something to page through.
    """
    tags = [t for t in hashtags if t.strip()]
    if not tags:
        return [], HashtagReport(0, 0, 0.0, None)
    kept, seen = [], set()
    scanned = 0
    lo = hi = None
    queries = [query] if query is not None else [None]
    for q in queries:
        for tweet in source.iter_search(q):
            if tweet.id in seen:
                continue
            seen.add(tweet.id)
            if lang and tweet.lang != lang:
                continue
            scanned += 1
            ts = tweet.created_at
            lo = ts if lo is None or ts < lo else lo
            hi = ts if hi is None or ts > hi else hi
            if ends_with_hashtag(tweet.text, tags):
                kept.append(tweet)
    span = (hi - lo).total_seconds() / 86400 if scanned else 0.0
    per_day = len(kept) / span if span > 0 else None
    return kept, HashtagReport(scanned, len(kept), span, per_day)

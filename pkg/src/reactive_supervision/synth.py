"""Synthetic threads with known answers, and a regex-free role oracle.

``oracle_roles`` restates the role rules as plain counting and scanning so it
shares no code path with :func:`reactive_supervision.matcher.match_roles`.
The generator plants threads whose canonical author sequence equals a given
template and records the oracle's verdict as ground truth.
"""
from __future__ import annotations

import json
import random
import string
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Mapping

from .core import ConversationThread, Perspective, PersonClass, Tweet, validate_thread
from .matcher import RoleAssignment


class InvalidTemplate(ValueError):
    pass


@dataclass(frozen=True)
class ExpectedDiscard:
    reason: str = "nomatch"


@dataclass(frozen=True)
class PlantedThread:
    thread: ConversationThread
    truth: RoleAssignment | ExpectedDiscard
    planted_person: PersonClass
    template: str

    @property
    def matched(self) -> bool:
        return isinstance(self.truth, RoleAssignment)


def oracle_roles(letters: str, person: PersonClass) -> RoleAssignment | None:
    if person not in (PersonClass.FIRST, PersonClass.SECOND, PersonClass.THIRD):
        raise ValueError(f"no roles for {person}")
    n = len(letters)
    if n < 2 or letters[0] != "A":
        return None
    oblivious = None

    if person is PersonClass.FIRST:
        a_positions = [i for i in range(n) if letters[i] == "A"]
        if len(a_positions) != 2:
            return None
        sarcastic = a_positions[1]
        if sarcastic == 2:  # exactly one tweet between cue and sarcastic
            oblivious = 1

    elif person is PersonClass.SECOND:
        if any(ch not in "AB" for ch in letters):
            return None
        b_positions = [i for i in range(n) if letters[i] == "B"]
        if len(b_positions) != 1:
            return None
        sarcastic = b_positions[0]

    else:
        if any(ch not in "ABC" for ch in letters):
            return None
        c_positions = [i for i in range(n) if letters[i] == "C"]
        if len(c_positions) != 1:
            return None
        sarcastic = c_positions[0]
        b_between = [i for i in range(1, sarcastic) if letters[i] == "B"]
        if not b_between:
            return None
        if len(b_between) == 1:
            oblivious = b_between[0]

    eliciting = sarcastic + 1 if sarcastic + 1 < n else None
    return RoleAssignment(
        person=person,
        perspective=Perspective.INTENDED if person is PersonClass.FIRST else Perspective.PERCEIVED,
        sarcastic_index=sarcastic,
        oblivious_index=oblivious,
        eliciting_index=eliciting,
    )


CUE_BANK = {
    PersonClass.FIRST: (
        "I was only being sarcastic lol",
        "I was just being sarcastic!",
        "Shudda been more clear...I was being sarcastic",
        "I'm almost always being sarcastic, but this was real",
        "lol relax i was being sarcastic",
        "Sorry, I'm being sarcastic",
    ),
    PersonClass.SECOND: (
        "Why are you being sarcastic?",
        "Take it you are being sarcastic",
        "are u being sarcastic right now",
        "I can't tell if you're being sarcastic",
        "You're being sarcastic, right?",
    ),
    PersonClass.THIRD: (
        "She was just being sarcastic!",
        "She was being sarcastic. You missed the joke",
        "Mind blown. Had no idea he was being sarcastic",
        "pretty sure he's being sarcastic",
        "Relax, she was only being sarcastic",
    ),
}

_WORDS = (
    "the game last night was wild", "cannot believe this weather", "great idea honestly",
    "love waiting in line for hours", "who even does that", "my coffee is cold again",
    "best monday ever", "this is fine", "what a time to be alive", "that movie though",
    "so true", "nobody asked", "wow thanks for the update", "traffic is lovely today",
    "check the link https://example.com/x", "@friend look at this", "no way", "agreed",
)

BASE_TIME = datetime(2019, 10, 1, tzinfo=timezone.utc)


def check_template(template: str) -> None:
    if not template or any(ch not in string.ascii_uppercase for ch in template):
        raise InvalidTemplate(f"template must be non-empty uppercase letters: {template!r}")
    next_new = 0
    for ch in template:
        idx = ord(ch) - ord("A")
        if idx > next_new:
            raise InvalidTemplate(f"letter {ch} introduced out of order in {template!r}")
        if idx == next_new:
            next_new += 1


def random_template(person: PersonClass, length: int, rng: random.Random,
                    matching: bool = True, max_letters: int = 4) -> str:
    """Random canonical sequence that does (or does not) match ``person``."""
    if length < 2:
        raise ValueError("length must be >= 2")
    for _ in range(10_000):
        letters = ["A"]
        used = 1
        for _ in range(length - 1):
            k = rng.randrange(min(used + 1, max_letters))
            letters.append(string.ascii_uppercase[k])
            used = max(used, k + 1)
        s = "".join(letters)
        if (oracle_roles(s, person) is not None) == matching:
            return s
    raise ValueError(f"no {'matching' if matching else 'ambiguous'} template of length {length}")


def _filler(rng: random.Random) -> str:
    return rng.choice(_WORDS) if rng.random() < 0.5 else " ".join(rng.sample(_WORDS, 2))


def generate_thread(person: PersonClass, template: str | None = None, seed: int = 0,
                    prefix: str = "t", length: int | None = None,
                    base_time: datetime = BASE_TIME) -> PlantedThread:
    """Build a linked thread whose canonical author sequence is ``template``.

    Without a template, a random matching template of ``length`` tweets is
    drawn.  Tweet ids are ``{prefix}-{i}`` where ``i`` is the cue-first index.
    """
    rng = random.Random(seed)
    if template is None:
        shortest = 3 if person is PersonClass.THIRD else 2
        template = random_template(person, length or rng.randint(shortest, 6), rng)
    check_template(template)
    if person not in CUE_BANK:
        raise ValueError(f"cannot plant a cue for {person}")

    n = len(template)
    n_authors = len(set(template))
    raw = [f"user{k}" for k in rng.sample(range(1_000_000), n_authors)]
    author_of = {string.ascii_uppercase[i]: raw[i] for i in range(n_authors)}

    # timestamps increase from root (index n-1) to cue (index 0)
    times = [base_time]
    for _ in range(n - 1):
        times.append(times[-1] + timedelta(minutes=rng.randint(1, 240)))
    times.reverse()

    tweets = []
    for i, letter in enumerate(template):
        text = rng.choice(CUE_BANK[person]) if i == 0 else _filler(rng)
        tweets.append(Tweet(
            id=f"{prefix}-{i}",
            parent_id=f"{prefix}-{i + 1}" if i + 1 < n else None,
            author_id=author_of[letter],
            text=text,
            created_at=times[i],
            lang="en",
        ))
    truth = oracle_roles(template, person) or ExpectedDiscard("nomatch")
    return PlantedThread(validate_thread(tweets), truth, person, template)


@dataclass
class SynthCorpus:
    threads: list[PlantedThread]

    @property
    def tweets(self) -> list[Tweet]:
        # root first within each thread, threads in generation order
        return [t for pt in self.threads for t in reversed(pt.thread.tweets)]

    def truth_records(self) -> list[dict]:
        return [truth_record(pt) for pt in self.threads]

    def write(self, corpus_path, truth_path=None):
        with open(corpus_path, "w", encoding="utf-8") as fh:
            for t in self.tweets:
                fh.write(json.dumps(t.to_record(), ensure_ascii=False) + "\n")
        if truth_path is not None:
            with open(truth_path, "w", encoding="utf-8") as fh:
                for rec in self.truth_records():
                    fh.write(json.dumps(rec) + "\n")


def truth_record(pt: PlantedThread) -> dict:
    if isinstance(pt.truth, RoleAssignment):
        expected = {
            "person": pt.truth.person.value,
            "sarc_index": pt.truth.sarcastic_index,
            "obl_index": pt.truth.oblivious_index,
            "eli_index": pt.truth.eliciting_index,
        }
    else:
        expected = {"discard_reason": pt.truth.reason}
    return {
        "thread_root_id": pt.thread.root.id,
        "cue_id": pt.thread.cue.id,
        "template": pt.template,
        "planted_person": pt.planted_person.value,
        "expected": expected,
    }


def generate_corpus(mix: Mapping[tuple[str, PersonClass], int], ambiguous_fraction: float = 0.0,
                    seed: int = 0) -> SynthCorpus:
    """Plant ``sum(mix.values())`` threads.

    ``round(ambiguous_fraction * total)`` randomly chosen slots keep their
    person class but get a template that matches nothing, so their truth is
    ExpectedDiscard.
    """
    if not 0.0 <= ambiguous_fraction <= 1.0:
        raise ValueError("ambiguous_fraction must be within [0, 1]")
    slots = []
    for (template, person), count in sorted(mix.items(), key=lambda kv: (kv[0][1].value, kv[0][0])):
        check_template(template)
        if count < 0:
            raise ValueError("mix counts must be >= 0")
        slots.extend([(template, person)] * count)
    rng = random.Random(seed)
    rng.shuffle(slots)
    n_amb = round(ambiguous_fraction * len(slots))
    ambiguous = set(rng.sample(range(len(slots)), n_amb))

    threads = []
    width = max(6, len(str(len(slots))))
    for i, (template, person) in enumerate(slots):
        thread_seed = rng.getrandbits(32)
        if i in ambiguous:
            template = random_template(person, random.Random(thread_seed).randint(2, 6),
                                       random.Random(thread_seed ^ 0x5EED), matching=False)
        threads.append(generate_thread(person, template, seed=thread_seed,
                                       prefix=f"t{i:0{width}d}",
                                       base_time=BASE_TIME + timedelta(minutes=7 * i)))
    return SynthCorpus(threads)


def parse_mix(raw) -> dict[tuple[str, PersonClass], int]:
    """Accept ``{"ABAC:1": 10, ...}`` or ``[{"template": "ABAC", "person": 1, "count": 10}, ...]``."""
    mix: dict[tuple[str, PersonClass], int] = {}
    if isinstance(raw, dict):
        items = []
        for key, count in raw.items():
            template, _, person = key.partition(":")
            items.append((template, person, count))
    elif isinstance(raw, list):
        items = [(e["template"], e["person"], e["count"]) for e in raw]
    else:
        raise ValueError("mix must be a JSON object or list")
    for template, person, count in items:
        key = (template.strip().upper(), PersonClass.from_number(person))
        mix[key] = mix.get(key, 0) + int(count)
    return mix


def load_mix(path) -> dict[tuple[str, PersonClass], int]:
    return parse_mix(json.loads(Path(path).read_text(encoding="utf-8")))


# most common patterns per person class in the reference dataset
REFERENCE_PATTERN_ROWS = (
    ("ABAC", PersonClass.FIRST, 2841),
    ("ABA", PersonClass.FIRST, 1818),
    ("ABAB", PersonClass.FIRST, 1551),
    ("AB", PersonClass.SECOND, 2122),
    ("ABA", PersonClass.SECOND, 782),
    ("ABC", PersonClass.THIRD, 1235),
    ("ABCB", PersonClass.THIRD, 119),
    ("ABAC", PersonClass.THIRD, 110),
)


def reference_mix(total: int) -> dict[tuple[str, PersonClass], int]:
    """Scale the reference pattern counts to ``total`` threads (largest remainder)."""
    weight = sum(c for *_, c in REFERENCE_PATTERN_ROWS)
    exact = [(t, p, c * total / weight) for t, p, c in REFERENCE_PATTERN_ROWS]
    floors = {(t, p): int(x) for t, p, x in exact}
    short = total - sum(floors.values())
    by_remainder = sorted(exact, key=lambda e: (-(e[2] - int(e[2])), e[1].value, e[0]))
    for t, p, _ in by_remainder[:short]:
        floors[(t, p)] += 1
    return floors

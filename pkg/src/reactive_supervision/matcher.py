"""Role extraction from canonical author sequences.

Each person class has an anchored pattern whose capture groups mark the cue,
the zone where an oblivious reply may sit, the sarcastic tweet and the zone
below it holding the eliciting tweet.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import Perspective, PersonClass
from .sequencer import AuthorSequence


class UnknownPerson(ValueError):
    pass


@dataclass(frozen=True)
class RolePattern:
    person: PersonClass
    pattern_source: str
    group_roles: tuple[str, ...]

    @property
    def regex(self) -> re.Pattern:
        return _COMPILED[self.person]


PATTERNS = {
    PersonClass.FIRST: RolePattern(
        PersonClass.FIRST,
        r"^(A)([^A]*)(A)([^A]*)$",
        ("cue", "oblivious_zone", "sarcastic", "eliciting_zone"),
    ),
    PersonClass.SECOND: RolePattern(
        PersonClass.SECOND,
        r"^(A)A*(B)(A*)$",
        ("cue", "sarcastic", "eliciting_zone"),
    ),
    PersonClass.THIRD: RolePattern(
        PersonClass.THIRD,
        r"^(A)(A*B[AB]*)(C)([AB]*)$",
        ("cue", "oblivious_zone", "sarcastic", "eliciting_zone"),
    ),
}
_COMPILED = {p: re.compile(rp.pattern_source) for p, rp in PATTERNS.items()}


@dataclass(frozen=True)
class RoleAssignment:
    person: PersonClass
    perspective: Perspective
    sarcastic_index: int
    oblivious_index: int | None = None
    eliciting_index: int | None = None
    cue_index: int = 0


def pattern_for(person: PersonClass) -> RolePattern:
    try:
        return PATTERNS[person]
    except KeyError:
        raise UnknownPerson(f"no search pattern for {person}") from None


def match_roles(sequence: AuthorSequence | str, person: PersonClass) -> RoleAssignment | None:
    """Match ``sequence`` against the pattern for ``person``.

    Returns None when the sequence does not match, i.e. the sarcastic tweet
    cannot be pinpointed and the thread should be discarded.
    """
    rp = pattern_for(person)
    letters = sequence if isinstance(sequence, str) else sequence.letters
    m = rp.regex.match(letters)
    if m is None:
        return None
    groups = dict(zip(rp.group_roles, range(1, len(rp.group_roles) + 1)))

    sarcastic = m.start(groups["sarcastic"])
    eliciting = sarcastic + 1 if m.group(groups["eliciting_zone"]) else None

    oblivious = None
    if "oblivious_zone" in groups:
        g = groups["oblivious_zone"]
        zone = m.group(g)
        if person is PersonClass.FIRST and len(zone) == 1:
            oblivious = m.start(g)
        elif person is PersonClass.THIRD and zone.count("B") == 1:
            oblivious = m.start(g) + zone.index("B")

    return RoleAssignment(
        person=person,
        perspective=Perspective.for_person(person),
        sarcastic_index=sarcastic,
        oblivious_index=oblivious,
        eliciting_index=eliciting,
    )

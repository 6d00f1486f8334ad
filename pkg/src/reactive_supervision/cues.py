"""Rule-based grammatical-person classifier for cue texts.

The classifier is deliberately conservative: whenever the subject of
"being sarcastic" is not a single, clearly identifiable singular pronoun the
cue is labeled UNKNOWN and the thread is later skipped.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .core import PersonClass

QUERY_PHRASE = "being sarcastic"

WINDOW = 4
NEGATION_WINDOW = 2

FIRST_PERSON = frozenset({"i", "i'm", "im", "i've", "i'd"})
SECOND_PERSON = frozenset({"you", "u", "ya", "you're", "ur"})
THIRD_PERSON = frozenset({"she", "he", "s/he", "she's", "he's"})
PLURAL = frozenset({"we", "they", "y'all", "yall", "we're", "they're", "we've", "they've"})
NEGATIONS = frozenset({"not", "never"})

_PRONOUNS = {
    **{w: PersonClass.FIRST for w in FIRST_PERSON},
    **{w: PersonClass.SECOND for w in SECOND_PERSON},
    **{w: PersonClass.THIRD for w in THIRD_PERSON},
}

_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'", "`": "'"})
# words keep inner apostrophes and slashes (i'm, wasn't, s/he); runs of other
# punctuation become a single token
_TOKEN_RE = re.compile(r"[@#]?\w+(?:['/]\w+)*|[^\w\s]+")


class Reason(enum.Enum):
    CLASSIFIED = "classified"
    NO_PRONOUN = "no_pronoun"
    MULTIPLE_PRONOUNS = "multiple_pronouns"
    NEGATION_PRESENT = "negation_present"
    MENTION_SUBJECT = "mention_subject"
    PLURAL_PRONOUN = "plural_pronoun"
    NO_QUERY_PHRASE = "no_query_phrase"


@dataclass(frozen=True)
class CueDecision:
    person: PersonClass
    reason: Reason
    matched_pronoun: str | None = None

    @property
    def is_known(self) -> bool:
        return self.person is not PersonClass.UNKNOWN


def _normalize(text: str) -> str:
    return " ".join(text.translate(_APOSTROPHES).casefold().split())


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.translate(_APOSTROPHES).casefold())


def is_cue_candidate(text: str, query: str = QUERY_PHRASE) -> bool:
    return _normalize(query) in _normalize(text)


def _is_negation(token: str) -> bool:
    return token in NEGATIONS or token.endswith("n't")


def _phrase_start(tokens: list[str]) -> int | None:
    for k in range(len(tokens) - 1):
        if tokens[k] == "being" and tokens[k + 1].startswith("sarcastic"):
            return k
    return None


def _unknown(reason: Reason, token: str | None = None) -> CueDecision:
    return CueDecision(PersonClass.UNKNOWN, reason, token)


def classify_cue(text: str) -> CueDecision:
    """Classify the subject of the first "being sarcastic" in ``text``.

    Only the four tokens before "being" are inspected.  The nearest pronoun
    or @mention in that window is taken as the subject.
    """
    if not is_cue_candidate(text):
        return _unknown(Reason.NO_QUERY_PHRASE)
    tokens = tokenize(text)
    k = _phrase_start(tokens)
    if k is None:
        return _unknown(Reason.NO_QUERY_PHRASE)

    for tok in tokens[max(0, k - NEGATION_WINDOW):k]:
        if _is_negation(tok):
            return _unknown(Reason.NEGATION_PRESENT, tok)

    window = tokens[max(0, k - WINDOW):k]
    subject = None
    classes = set()
    for tok in reversed(window):
        is_mention = tok.startswith("@") and len(tok) > 1
        if subject is None and (is_mention or tok in PLURAL or tok in _PRONOUNS):
            subject = tok
        if tok in _PRONOUNS:
            classes.add(_PRONOUNS[tok])

    if subject is None:
        return _unknown(Reason.NO_PRONOUN)
    if subject.startswith("@"):
        return _unknown(Reason.MENTION_SUBJECT, subject)
    if subject in PLURAL:
        return _unknown(Reason.PLURAL_PRONOUN, subject)
    if len(classes) > 1:
        return _unknown(Reason.MULTIPLE_PRONOUNS, subject)
    return CueDecision(_PRONOUNS[subject], Reason.CLASSIFIED, subject)

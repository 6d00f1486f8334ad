"""Author-sequence canonicalization and position arithmetic."""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Iterable

from .core import ConversationThread

ALPHABET = string.ascii_uppercase


class TooManyAuthors(ValueError):
    pass


@dataclass(frozen=True)
class AuthorSequence:
    letters: str
    author_map: dict[str, str] = field(default_factory=dict, compare=False)

    def __str__(self):
        return self.letters

    def __len__(self):
        return len(self.letters)


def canonical_letters(authors: Iterable[str]) -> tuple[str, dict[str, str]]:
    """Relabel raw author ids as A, B, C, ... in order of first appearance."""
    mapping: dict[str, str] = {}
    out = []
    for author in authors:
        if author not in mapping:
            if len(mapping) == len(ALPHABET):
                raise TooManyAuthors(f"more than {len(ALPHABET)} distinct authors")
            mapping[author] = ALPHABET[len(mapping)]
        out.append(mapping[author])
    return "".join(out), mapping


def canonicalize(thread: ConversationThread) -> AuthorSequence:
    letters, mapping = canonical_letters(thread.authors)
    return AuthorSequence(letters, mapping)


def positions_of(sequence_length: int, sarcastic_index: int) -> tuple[int, int]:
    """Return ``(position, cue_lag)`` for the tweet at ``sarcastic_index``.

    Position counts tweets above the root (root = 0); cue lag counts tweets
    down from the cue, which in cue-first order is the index itself.
    """
    n, j = sequence_length, sarcastic_index
    if not 1 <= j <= n - 1:
        raise IndexError(f"sarcastic index {j} out of range for thread of length {n}")
    return n - 1 - j, j

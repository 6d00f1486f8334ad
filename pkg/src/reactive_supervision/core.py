"""Domain types shared by every stage of the harvester.

Threads are stored cue-first: ``thread.tweets[0]`` is the most recent tweet
(the cue candidate) and ``thread.tweets[-1]`` is the root.  With that layout a
tweet's list index is exactly its distance from the cue.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Sequence


class ThreadError(ValueError):
    """Base class for thread validation failures."""


class BrokenChain(ThreadError):
    pass


class CycleDetected(ThreadError):
    pass


class DuplicateId(ThreadError):
    pass


class PersonClass(enum.Enum):
    FIRST = 1
    SECOND = 2
    THIRD = 3
    UNKNOWN = 0

    @classmethod
    def from_number(cls, value: int | str) -> "PersonClass":
        n = int(value)
        if n not in (1, 2, 3):
            raise ValueError(f"person must be 1, 2 or 3, got {value!r}")
        return cls(n)


class Perspective(enum.Enum):
    INTENDED = "intended"
    PERCEIVED = "perceived"

    @classmethod
    def for_person(cls, person: PersonClass) -> "Perspective":
        if person is PersonClass.FIRST:
            return cls.INTENDED
        if person in (PersonClass.SECOND, PersonClass.THIRD):
            return cls.PERCEIVED
        raise ValueError(f"no perspective for {person}")


def parse_timestamp(value: str) -> datetime:
    # fromisoformat on 3.10 rejects a trailing "Z"
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    ts = datetime.fromisoformat(value)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class Tweet:
    id: str
    parent_id: str | None
    author_id: str
    text: str
    created_at: datetime
    lang: str = "en"

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("tweet id must be a non-empty string")
        if self.parent_id == "":
            raise ValueError("parent_id must be None or a non-empty string")
        if not isinstance(self.author_id, str) or not self.author_id:
            raise ValueError("author_id must be a non-empty string")
        if not isinstance(self.text, str):
            raise ValueError("text must be a string")

    @property
    def is_root(self) -> bool:
        return self.parent_id is None

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "parent_id": self.parent_id,
            "author_id": self.author_id,
            "text": self.text,
            "created_at": format_timestamp(self.created_at),
            "lang": self.lang,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Tweet":
        """Build a tweet from a JSON Lines record; raises ValueError/KeyError/TypeError on bad input."""
        if not isinstance(record, dict):
            raise TypeError("tweet record must be an object")
        parent = record.get("parent_id")
        if parent is not None and not isinstance(parent, str):
            raise TypeError("parent_id must be a string or null")
        for key in ("id", "author_id", "text", "created_at", "lang"):
            if not isinstance(record[key], str):
                raise TypeError(f"{key} must be a string")
        return cls(
            id=record["id"],
            parent_id=parent,
            author_id=record["author_id"],
            text=record["text"],
            created_at=parse_timestamp(record["created_at"]),
            lang=record["lang"],
        )


@dataclass(frozen=True)
class ConversationThread:
    """A validated reply chain, cue first and root last."""

    tweets: tuple[Tweet, ...]

    def __len__(self):
        return len(self.tweets)

    def __getitem__(self, index):
        return self.tweets[index]

    def __iter__(self):
        return iter(self.tweets)

    @property
    def cue(self) -> Tweet:
        return self.tweets[0]

    @property
    def root(self) -> Tweet:
        return self.tweets[-1]

    @property
    def authors(self) -> list[str]:
        return [t.author_id for t in self.tweets]


def validate_thread(tweets: Sequence[Tweet]) -> ConversationThread:
    """Check that ``tweets`` forms a cue-first reply chain ending at a root.

    Each tweet must reply to the one after it, and only the last tweet may
    lack a parent.  The input order is never changed.
    """
    tweets = tuple(tweets)
    if not tweets:
        raise BrokenChain("a thread needs at least one tweet")

    for t in tweets:
        if t.parent_id == t.id:
            raise CycleDetected(f"tweet {t.id} replies to itself")

    seen = set()
    for t in tweets:
        if t.id in seen:
            raise DuplicateId(f"tweet id {t.id} appears twice")
        seen.add(t.id)

    for k in range(len(tweets) - 1):
        child, parent = tweets[k], tweets[k + 1]
        if child.parent_id is None:
            raise BrokenChain(f"tweet {child.id} at index {k} is a root but is not last")
        if child.parent_id != parent.id:
            raise BrokenChain(
                f"tweet {child.id} replies to {child.parent_id}, expected {parent.id}"
            )

    last = tweets[-1]
    if last.parent_id is not None:
        if last.parent_id in seen:
            raise CycleDetected(f"tweet {last.id} replies back into the chain ({last.parent_id})")
        raise BrokenChain(f"last tweet {last.id} is not a root (parent {last.parent_id} missing)")

    return ConversationThread(tweets)

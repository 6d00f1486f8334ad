import json
from datetime import datetime, timedelta, timezone

import pytest

from reactive_supervision.core import Tweet

T0 = datetime(2019, 10, 15, 12, 0, tzinfo=timezone.utc)


def tw(id, parent=None, author="u1", text="hello", minutes=0, lang="en"):
    return Tweet(id=id, parent_id=parent, author_id=author, text=text,
                 created_at=T0 + timedelta(minutes=minutes), lang=lang)


def chain(authors, texts=None, prefix="x"):
    """Cue-first list of tweets with the given raw authors."""
    n = len(authors)
    texts = texts or ["filler"] * n
    return [tw(f"{prefix}{i}", f"{prefix}{i + 1}" if i + 1 < n else None, a, texts[i], minutes=n - i)
            for i, a in enumerate(authors)]


def write_jsonl(path, tweets):
    with open(path, "w", encoding="utf-8") as fh:
        for t in tweets:
            fh.write(json.dumps(t.to_record() if isinstance(t, Tweet) else t) + "\n")
    return path


@pytest.fixture
def corpus_file(tmp_path):
    def make(tweets, name="corpus.jsonl"):
        return write_jsonl(tmp_path / name, tweets)
    return make


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep

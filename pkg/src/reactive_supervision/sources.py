"""Conversation sources: a JSON Lines corpus and a generic search/lookup HTTP API.

Both expose the same small surface used by the pipeline:

* ``search(query, cursor)`` -> one page of tweets matching ``query``
* ``search_cues(query, cursor)`` -> the same, post-filtered to cue candidates
* ``iter_search(query)`` -> every tweet over all pages
* ``lookup_tweet(id)`` -> the tweet or None when it is missing
"""
from __future__ import annotations

import json
import logging
import os
import threading
import time
from collections import Counter, deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator
from urllib.parse import quote

import httpx

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .core import Tweet
from .cues import QUERY_PHRASE, is_cue_candidate

log = logging.getLogger(__name__)


class SourceError(Exception):
    pass


class SourceUnavailable(SourceError):
    pass


class RateLimited(SourceError):
    pass


class MalformedRecord(SourceError):
    pass


DEFAULT_FIELDS = {
    "id": "id",
    "parent_id": "parent_id",
    "author_id": "author_id",
    "text": "text",
    "created_at": "created_at",
    "lang": "lang",
}


@dataclass
class SourceConfig:
    kind: str = "file"
    path: Path | None = None
    query: str = QUERY_PHRASE
    lang_filter: str | None = None
    page_size: int = 100
    # http only
    search_url: str | None = None
    lookup_url: str | None = None
    sample_url: str | None = None
    auth_header: str | None = None
    auth_env: str | None = None
    auth_prefix: str = ""
    rate_limit: int = 180
    rate_window: float = 900.0
    max_retries: int = 5
    backoff_base: float = 1.0
    timeout: float = 30.0
    results_key: str = "data"
    cursor_key: str = "next_cursor"
    fields: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_FIELDS))

    def validate(self):
        if self.kind not in ("file", "http"):
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.page_size <= 0:
            raise ValueError("page_size must be positive")
        if self.kind == "file":
            if self.path is None or not Path(self.path).exists():
                raise ValueError(f"corpus file not found: {self.path}")
        else:
            if not self.search_url or not self.lookup_url:
                raise ValueError("http source needs search_url and lookup_url")
            if self.rate_limit <= 0 or self.rate_window <= 0:
                raise ValueError("rate_limit and rate_window must be positive")
            if self.max_retries < 0:
                raise ValueError("max_retries must be >= 0")
        return self


def load_config(path: str | os.PathLike) -> SourceConfig:
    """Read a TOML source config.  A bare ``.jsonl`` path is accepted as a file corpus."""
    path = Path(path)
    if path.suffix in (".jsonl", ".ndjson"):
        return SourceConfig(kind="file", path=path).validate()
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    fields = {**DEFAULT_FIELDS, **raw.pop("fields", {})}
    known = SourceConfig.__dataclass_fields__
    unknown = set(raw) - set(known)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = SourceConfig(**raw, fields=fields)
    if cfg.path is not None:
        p = Path(cfg.path)
        cfg.path = p if p.is_absolute() else path.parent / p
    return cfg.validate()


def open_source(config: SourceConfig, **kwargs):
    if config.kind == "file":
        return FileCorpus(config.path, page_size=config.page_size, lang_filter=config.lang_filter)
    return HttpSource(config, **kwargs)


class _BaseSource:
    page_size: int

    def search(self, query: str | None, cursor: str | None = None) -> tuple[list[Tweet], str | None]:
        raise NotImplementedError

    def lookup_tweet(self, tweet_id: str) -> Tweet | None:
        raise NotImplementedError

    def search_cues(self, query: str = QUERY_PHRASE, cursor: str | None = None):
        tweets, next_cursor = self.search(query, cursor)
        kept = [t for t in tweets if is_cue_candidate(t.text, query)]
        if len(kept) != len(tweets):
            self.diagnostics["non_cue_dropped"] += len(tweets) - len(kept)
        return kept, next_cursor

    def iter_search(self, query: str | None) -> Iterator[Tweet]:
        cursor = None
        while True:
            tweets, cursor = self.search(query, cursor)
            yield from tweets
            if cursor is None:
                return

    def iter_cues(self, query: str = QUERY_PHRASE) -> Iterator[Tweet]:
        cursor = None
        while True:
            tweets, cursor = self.search_cues(query, cursor)
            yield from tweets
            if cursor is None:
                return


class FileCorpus(_BaseSource):
    """Read-only tweet corpus backed by a JSON Lines file.

    The file is parsed once at construction.  Bad lines are skipped and
    counted in ``diagnostics``; if a bad line still carries a usable id,
    looking that id up raises MalformedRecord instead of returning None.
    """

    def __init__(self, path, page_size: int = 100, lang_filter: str | None = None):
        self.path = Path(path)
        self.page_size = page_size
        self.lang_filter = lang_filter
        self.diagnostics: Counter = Counter()
        self._tweets: list[Tweet] = []
        self._by_id: dict[str, Tweet] = {}
        self._malformed: dict[str, str] = {}
        self._load()

    def _load(self):
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as exc:
                    self.diagnostics["malformed"] += 1
                    log.warning("%s:%d: invalid JSON (%s)", self.path, lineno, exc)
                    continue
                try:
                    tweet = Tweet.from_record(record)
                except (KeyError, TypeError, ValueError) as exc:
                    self.diagnostics["malformed"] += 1
                    rid = record.get("id") if isinstance(record, dict) else None
                    if isinstance(rid, str) and rid:
                        self._malformed[rid] = f"line {lineno}: {exc!r}"
                    log.warning("%s:%d: malformed tweet record (%r)", self.path, lineno, exc)
                    continue
                if tweet.id in self._by_id:
                    self.diagnostics["duplicate_id"] += 1
                    continue
                self._by_id[tweet.id] = tweet
                self._tweets.append(tweet)

    def __len__(self):
        return len(self._tweets)

    def __iter__(self):
        return iter(self._tweets)

    def _matches(self, tweet: Tweet, query: str | None) -> bool:
        if self.lang_filter and tweet.lang != self.lang_filter:
            return False
        return query is None or is_cue_candidate(tweet.text, query)

    def search(self, query, cursor=None):
        start = int(cursor) if cursor else 0
        # query matching is local, so the scan resumes from a tweet offset
        page = []
        pos = start
        while pos < len(self._tweets) and len(page) < self.page_size:
            if self._matches(self._tweets[pos], query):
                page.append(self._tweets[pos])
            pos += 1
        while pos < len(self._tweets) and not self._matches(self._tweets[pos], query):
            pos += 1
        return page, (str(pos) if pos < len(self._tweets) else None)

    def lookup_tweet(self, tweet_id):
        tweet = self._by_id.get(tweet_id)
        if tweet is None and tweet_id in self._malformed:
            raise MalformedRecord(f"{tweet_id}: {self._malformed[tweet_id]}")
        return tweet


class RateLimiter:
    """Sliding-window limiter: at most ``limit`` acquisitions per ``window`` seconds."""

    def __init__(self, limit: int, window: float,
                 clock: Callable[[], float] = time.monotonic,
                 sleep: Callable[[float], None] = time.sleep):
        if limit <= 0:
            raise ValueError("limit must be positive")
        self.limit = limit
        self.window = window
        self.clock = clock
        self.sleep = sleep
        self._stamps: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire(self):
        with self._lock:
            while True:
                now = self.clock()
                while self._stamps and now - self._stamps[0] >= self.window:
                    self._stamps.popleft()
                if len(self._stamps) < self.limit:
                    self._stamps.append(now)
                    return
                self.sleep(self.window - (now - self._stamps[0]))


class HttpSource(_BaseSource):
    """Search/lookup client for a JSON API.

    ``search_url`` may use ``{query}``, ``{cursor}`` and ``{page_size}``;
    ``lookup_url`` uses ``{id}``.  Placeholders are URL-encoded.  Search
    responses carry a list under ``results_key`` and an optional cursor under
    ``cursor_key``; lookups return the tweet object itself (404 = missing).
    """

    def __init__(self, config: SourceConfig, transport: httpx.BaseTransport | None = None,
                 clock=time.monotonic, sleep=time.sleep):
        self.config = config
        self.page_size = config.page_size
        self.diagnostics: Counter = Counter()
        self.sleep = sleep
        self.limiter = RateLimiter(config.rate_limit, config.rate_window, clock=clock, sleep=sleep)
        headers = {}
        if config.auth_header and config.auth_env:
            token = os.environ.get(config.auth_env)
            if token is None:
                raise SourceUnavailable(f"environment variable {config.auth_env} is not set")
            headers[config.auth_header] = config.auth_prefix + token
        self.client = httpx.Client(headers=headers, timeout=config.timeout, transport=transport)

    def close(self):
        self.client.close()

    def _get(self, url: str) -> httpx.Response:
        cfg = self.config
        for attempt in range(cfg.max_retries + 1):
            self.limiter.acquire()
            try:
                resp = self.client.get(url)
            except httpx.TransportError as exc:
                error: SourceError = SourceUnavailable(f"{url}: {exc}")
                delay = cfg.backoff_base * 2 ** attempt
            else:
                if resp.status_code == 429:
                    error = RateLimited(f"{url}: HTTP 429")
                    delay = cfg.backoff_base * 2 ** attempt
                    retry_after = resp.headers.get("Retry-After")
                    if retry_after:
                        try:
                            delay = max(delay, float(retry_after))
                        except ValueError:
                            pass
                elif resp.status_code >= 500:
                    error = SourceUnavailable(f"{url}: HTTP {resp.status_code}")
                    delay = cfg.backoff_base * 2 ** attempt
                else:
                    return resp
            self.diagnostics["retries"] += 1
            if attempt == cfg.max_retries:
                raise error
            log.info("retrying %s in %.2fs (%s)", url, delay, error)
            self.sleep(delay)
        raise AssertionError("unreachable")

    def _to_tweet(self, obj) -> Tweet:
        fmap = self.config.fields
        if not isinstance(obj, dict):
            raise TypeError("tweet payload is not an object")
        record = {k: obj.get(v) for k, v in fmap.items()}
        if record["lang"] is None:
            record["lang"] = "und"
        for k in ("id", "parent_id", "author_id"):
            if isinstance(record[k], int):
                record[k] = str(record[k])
        return Tweet.from_record(record)

    def _format(self, template: str, **values) -> str:
        return template.format(**{k: quote(str(v), safe="") for k, v in values.items()})

    def search(self, query, cursor=None):
        cfg = self.config
        if query is None:
            if not cfg.sample_url:
                raise SourceUnavailable("http source has no sample_url for unfiltered scans")
            url = self._format(cfg.sample_url, cursor=cursor or "", page_size=cfg.page_size)
        else:
            url = self._format(cfg.search_url, query=query, cursor=cursor or "",
                               page_size=cfg.page_size)
        resp = self._get(url)
        if resp.status_code >= 400:
            raise SourceUnavailable(f"{url}: HTTP {resp.status_code}")
        try:
            payload = resp.json()
        except ValueError as exc:
            raise SourceUnavailable(f"{url}: response is not JSON") from exc
        tweets = []
        for obj in payload.get(cfg.results_key) or []:
            try:
                tweet = self._to_tweet(obj)
            except (KeyError, TypeError, ValueError) as exc:
                self.diagnostics["malformed"] += 1
                log.warning("dropping malformed search result: %r", exc)
                continue
            if cfg.lang_filter and tweet.lang != cfg.lang_filter:
                continue
            tweets.append(tweet)
        next_cursor = payload.get(cfg.cursor_key) or None
        return tweets, (str(next_cursor) if next_cursor is not None else None)

    def lookup_tweet(self, tweet_id):
        url = self._format(self.config.lookup_url, id=tweet_id)
        resp = self._get(url)
        if resp.status_code in (404, 410):
            return None
        if resp.status_code >= 400:
            raise SourceUnavailable(f"{url}: HTTP {resp.status_code}")
        try:
            return self._to_tweet(resp.json())
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedRecord(f"{tweet_id}: {exc!r}") from exc

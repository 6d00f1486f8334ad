"""Harvesting through a search/lookup JSON API.

A real deployment points ``search_url``/``lookup_url`` at a live service (see
http_source.example.toml).  Here an in-process fake API stands in, so the
script runs offline; the rate limiter still throttles every request.
"""
import httpx

from reactive_supervision import HarvestConfig, harvest
from reactive_supervision.sources import HttpSource, SourceConfig
from reactive_supervision.synth import generate_corpus, reference_mix

corpus = generate_corpus(reference_mix(30), 0.0, seed=1)
by_id = {t.id: t.to_record() for t in corpus.tweets}
cues = [pt.thread.cue.to_record() for pt in corpus.threads]


def fake_api(request: httpx.Request) -> httpx.Response:
    if request.url.path == "/search":
        start = int(request.url.params.get("cursor") or 0)
        page = cues[start:start + 10]
        nxt = start + 10 if start + 10 < len(cues) else None
        return httpx.Response(200, json={"data": page, "next_cursor": nxt})
    tweet = by_id.get(request.url.path.rsplit("/", 1)[1])
    return httpx.Response(200, json=tweet) if tweet else httpx.Response(404)


class Clock:
    """Simulated time so the rate limit is visible without waiting."""
    now = 0.0

    def __call__(self):
        return self.now

    def sleep(self, s):
        self.now += s


clock = Clock()
config = SourceConfig(
    kind="http",
    search_url="https://api.example/search?q={query}&cursor={cursor}",
    lookup_url="https://api.example/tweets/{id}",
    rate_limit=20, rate_window=60.0, page_size=10,
).validate()
source = HttpSource(config, transport=httpx.MockTransport(fake_api), clock=clock, sleep=clock.sleep)

instances, report = harvest(source, HarvestConfig())
print(report.to_text())
print(f"simulated wall time at 20 req/min: {clock.now / 60:.1f} min")
for inst in instances[:5]:
    print(inst.person.value, inst.author_sequence, repr(inst.cue_tweet.text))

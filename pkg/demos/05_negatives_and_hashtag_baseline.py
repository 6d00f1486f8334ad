"""Negative sampling and the trailing-hashtag baseline.

Negatives are ordinary tweets with no sarcasm-related words or hashtags.
The baseline keeps tweets that end in #sarcasm-style hashtags and reports a
tweets-per-day rate, for comparison with the harvest rate.
"""
import json
import tempfile
from datetime import datetime, timedelta, timezone
from pathlib import Path

from reactive_supervision import FileCorpus, hashtag_harvest, sample_negatives

texts = [
    "monday again", "great, another meeting #sarcasm", "#sarcasm is my love language",
    "coffee time", "so thrilled about the rain #irony", "new phone who dis",
    "that was ironic", "the bus was on time", "lovely traffic today #not", "weekend plans?",
]
t0 = datetime(2019, 10, 1, tzinfo=timezone.utc)
path = Path(tempfile.mkdtemp()) / "tweets.jsonl"
with open(path, "w") as fh:
    for i, text in enumerate(texts):
        fh.write(json.dumps({"id": f"n{i}", "parent_id": None, "author_id": f"u{i}", "text": text,
                             "created_at": (t0 + timedelta(hours=12 * i)).strftime("%Y-%m-%dT%H:%M:%SZ"),
                             "lang": "en"}) + "\n")

source = FileCorpus(path)
for inst in sample_negatives(source, 4, seed=0):
    print("negative:", inst.sarcastic_tweet.text)

kept, report = hashtag_harvest(source, {"#sarcasm", "#irony", "#not"})
print("\nbaseline kept:", [t.text for t in kept])
print(report.to_dict())

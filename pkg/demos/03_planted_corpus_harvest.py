"""End to end on a synthetic corpus with known answers.

We plant threads whose author patterns follow the most common patterns of
the original dataset, make a fifth of them deliberately ambiguous, harvest
them from a JSON Lines file and print the corpus tables.
"""
import tempfile
from pathlib import Path

from reactive_supervision import FileCorpus, harvest
from reactive_supervision.stats import CorpusStats, render_text
from reactive_supervision.synth import generate_corpus, reference_mix

workdir = Path(tempfile.mkdtemp())
mix = reference_mix(2_000)
print("planted mix:", {f"{t}/{p.value}": n for (t, p), n in sorted(mix.items(), key=str)})

corpus = generate_corpus(mix, ambiguous_fraction=0.2, seed=7)
corpus.write(workdir / "corpus.jsonl", workdir / "truth.jsonl")
print(f"{len(corpus.threads)} threads, {len(corpus.tweets)} tweets -> {workdir}")

instances, report = harvest(FileCorpus(workdir / "corpus.jsonl"))
print("\nharvest report")
print(report.to_text())
assert report.conserved

print()
print(render_text(CorpusStats.from_instances(instances), top_k=3))

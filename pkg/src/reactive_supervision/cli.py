"""Command-line entry point.

Exit codes: 0 success, 1 operational error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import pipeline, stats, synth
from .core import PersonClass
from .cues import QUERY_PHRASE, classify_cue
from .matcher import match_roles
from .sources import SourceError, load_config, open_source

log = logging.getLogger("reactive_supervision")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(2, f"\n{self.prog}: error: {message}\n")


def _positive(value):
    n = int(value)
    if n <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _non_negative(value):
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return n


def _fraction(value):
    x = float(value)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError("must be within [0, 1]")
    return x


def _existing(value):
    if not Path(value).exists():
        raise argparse.ArgumentTypeError(f"no such file: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="reactive-supervision",
                description="Harvest sarcasm-labeled tweets from conversation threads.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    h = sub.add_parser("harvest", help="run the cue -> thread -> role pipeline")
    h.add_argument("--source", required=True, type=_existing,
                   help="source config (.toml) or a .jsonl corpus")
    h.add_argument("--query", default=QUERY_PHRASE)
    h.add_argument("--lang", default=None)
    h.add_argument("--max-thread-len", type=int, default=100)
    h.add_argument("--max-candidates", type=_non_negative, default=None)
    h.add_argument("--no-dedup", action="store_true")
    h.add_argument("--workers", type=_positive, default=1)
    h.add_argument("--out", required=True)
    h.add_argument("--report", help="also write the harvest report as JSON here")

    c = sub.add_parser("classify", help="classify the grammatical person of a cue")
    c.add_argument("--text", required=True)

    m = sub.add_parser("match", help="extract role indices from an author sequence")
    m.add_argument("--sequence", required=True)
    m.add_argument("--person", required=True, choices=["1", "2", "3"])

    n = sub.add_parser("negatives", help="sample non-sarcastic tweets")
    n.add_argument("--source", required=True, type=_existing)
    n.add_argument("--count", required=True, type=_non_negative)
    n.add_argument("--lexicon", type=_existing, help="one word or #hashtag per line")
    n.add_argument("--lang", default="en")
    n.add_argument("--seed", type=int, default=None)
    n.add_argument("--out", required=True)

    t = sub.add_parser("hashtags", help="distant-supervision baseline (trailing hashtags)")
    t.add_argument("--source", required=True, type=_existing)
    t.add_argument("--tags", required=True, help='comma separated, e.g. "#sarcasm,#irony"')
    t.add_argument("--lang", default=None)
    t.add_argument("--query", default=None, help="search query for HTTP sources")
    t.add_argument("--out", required=True)

    s = sub.add_parser("stats", help="corpus statistics for a harvested dataset")
    s.add_argument("--in", dest="inp", required=True, type=_existing)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--top-k", type=_non_negative, default=5)

    g = sub.add_parser("synth", help="generate a planted synthetic corpus")
    g.add_argument("--mix", required=True, type=_existing,
                   help='JSON mix, e.g. {"ABAC:1": 100, "AB:2": 50}')
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--ambiguous", type=_fraction, default=0.0)
    g.add_argument("--out", required=True)
    g.add_argument("--truth", required=True)
    return p


def _read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if line.strip():
                try:
                    yield json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from exc


def cmd_harvest(args):
    if args.max_thread_len < 2:
        raise UsageError("--max-thread-len must be at least 2")
    config = pipeline.HarvestConfig(query=args.query, lang_filter=args.lang,
                                    max_thread_length=args.max_thread_len,
                                    max_candidates=args.max_candidates,
                                    dedup=not args.no_dedup)
    source = open_source(load_config(args.source))
    report = pipeline.HarvestReport()
    with open(args.out, "w", encoding="utf-8") as fh:
        records = (inst.to_record()
                   for inst in pipeline.iter_harvest(source, config, report, workers=args.workers))
        pipeline.write_jsonl(records, fh)
    print(report.to_text())
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8")


def cmd_classify(args):
    d = classify_cue(args.text)
    person = d.person.value if d.is_known else "unknown"
    print(f"person={person} reason={d.reason.value} pronoun={d.matched_pronoun or '-'}")


def cmd_match(args):
    seq = args.sequence.strip().upper()
    try:
        synth.check_template(seq)
    except synth.InvalidTemplate as exc:
        raise UsageError(f"--sequence is not a canonical author sequence: {exc}") from None
    roles = match_roles(seq, PersonClass.from_number(args.person))
    if roles is None:
        print("NOMATCH")
        return

    def fmt(v):
        return "-" if v is None else str(v)

    print(f"sarc={roles.sarcastic_index} obl={fmt(roles.oblivious_index)} "
          f"eli={fmt(roles.eliciting_index)}")


def cmd_negatives(args):
    lexicon = None
    if args.lexicon:
        lexicon = pipeline.parse_lexicon(Path(args.lexicon).read_text(encoding="utf-8"))
    source = open_source(load_config(args.source))
    negatives = pipeline.sample_negatives(source, args.count, lexicon, lang=args.lang,
                                          seed=args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        pipeline.write_jsonl((n.to_record() for n in negatives), fh)
    print(f"negatives: {len(negatives)}")


def cmd_hashtags(args):
    tags = [t.strip() for t in args.tags.split(",") if t.strip()]
    source = open_source(load_config(args.source))
    kept, report = pipeline.hashtag_harvest(source, tags, lang=args.lang, query=args.query)
    with open(args.out, "w", encoding="utf-8") as fh:
        pipeline.write_jsonl((t.to_record() for t in kept), fh)
    for key, value in report.to_dict().items():
        print(f"{key}: {'-' if value is None else value}")


def cmd_stats(args):
    corpus_stats = stats.CorpusStats.from_instances(_read_jsonl(args.inp))
    if args.format == "json":
        sys.stdout.write(stats.render_json(corpus_stats, args.top_k))
    else:
        sys.stdout.write(stats.render_text(corpus_stats, args.top_k))


def cmd_synth(args):
    try:
        mix = synth.load_mix(args.mix)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad --mix file: {exc}") from None
    corpus = synth.generate_corpus(mix, args.ambiguous, seed=args.seed)
    corpus.write(args.out, args.truth)
    matched = sum(pt.matched for pt in corpus.threads)
    print(f"threads: {len(corpus.threads)} matched: {matched} "
          f"discard: {len(corpus.threads) - matched} tweets: {len(corpus.tweets)}")


COMMANDS = {
    "harvest": cmd_harvest,
    "classify": cmd_classify,
    "match": cmd_match,
    "negatives": cmd_negatives,
    "hashtags": cmd_hashtags,
    "stats": cmd_stats,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SourceError, pipeline.InsufficientSupply, synth.InvalidTemplate,
            stats.EmptyInput, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end.

Data goes to files (or stdout for the small JSON reports), logs go to
stderr. Exit codes: 0 success, 2 bad configuration or usage, 3 bad
input data, 4 augmentation backend unreachable.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import re
import sys

from .corpus import Corpus, parse_corpus, parse_three_file, parse_trees, write_corpus
from .errors import BackendError, ConfigError, InputError
from .lm import build_filter_pairs
from .pipeline import AugConfig, CorpusStats, augment_corpus, write_provenance
from .slot_index import build_index

log = logging.getLogger("sluaug")

METHOD_CHOICES = ("slot-sub", "slot-sub-lm", "crop", "rotate")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_BACKEND = 4


def _load_corpus(input_path: str, trees_path: str | None = None):
    try:
        with open(input_path, "r", encoding="utf-8") as fh:
            corpus = parse_corpus(fh)
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (input_path, exc)) from exc
    if trees_path is None:
        return corpus
    try:
        with open(trees_path, "r", encoding="utf-8") as fh:
            trees = parse_trees(fh, corpus)
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (trees_path, exc)) from exc
    return Corpus(corpus.utterances, trees)


def _open_out(path: str):
    return open(path, "w", encoding="utf-8", newline="\n")


def _sidecar_paths(output: str) -> tuple[str, str]:
    base = re.sub(r"\.jsonl$", "", output)
    return base + ".prov.jsonl", base + ".stats.json"


def _cmd_augment(args) -> int:
    backend_url = args.backend_url or os.environ.get("SLUAUG_BACKEND_URL")
    method = args.method.replace("-", "_")
    if method in ("crop", "rotate") and not args.trees:
        raise ConfigError("method %s needs --trees" % args.method)
    cfg = AugConfig(
        method=method,
        n_aug=args.n,
        seed=args.seed,
        top_p=args.top_p,
        max_crop=args.max_crop,
        max_rotate=args.max_rotate,
        filter_enabled=args.filter,
        filter_threshold=args.threshold,
        backend_url=backend_url,
        dedup=not args.no_dedup,
        emit_union=args.union,
        top_k=args.top_k,
        workers=args.workers,
        strict=args.strict,
        weighted=args.weighted,
        fail_open=args.fail_open,
    )
    corpus = _load_corpus(args.input, args.trees)
    result = augment_corpus(corpus, cfg)
    prov_path, stats_path = _sidecar_paths(args.output)
    with _open_out(args.output) as fh:
        write_corpus(result.emitted, fh)
    with _open_out(prov_path) as fh:
        write_provenance(result.records, fh)
    with _open_out(stats_path) as fh:
        json.dump(result.stats.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    log.info(
        "%s: %d sources -> %d augmented (%d emitted) into %s",
        args.method, len(corpus), len(result.records),
        len(result.emitted), args.output,
    )
    return EXIT_OK


def _cmd_stats(args) -> int:
    corpus = _load_corpus(args.input)
    doc = CorpusStats.collect(corpus.utterances).to_json()
    payload = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        with _open_out(args.output) as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    return EXIT_OK


def _cmd_validate(args) -> int:
    corpus = _load_corpus(args.input, args.trees)
    log.info(
        "OK: %d utterances%s",
        len(corpus),
        ", %d trees" % len(corpus.trees) if corpus.trees else "",
    )
    return EXIT_OK


def _cmd_index(args) -> int:
    corpus = _load_corpus(args.input)
    idx = build_index(corpus)
    if args.output:
        with _open_out(args.output) as fh:
            idx.dump(fh)
    else:
        idx.dump(sys.stdout)
    return EXIT_OK


def _cmd_filter_pairs(args) -> int:
    corpus = _load_corpus(args.input)
    idx = build_index(corpus)
    rng = random.Random(args.seed)
    pairs = build_filter_pairs(
        corpus, idx, rng, per_sentence=args.per_sentence
    )
    with _open_out(args.output) as fh:
        for pair in pairs:
            fh.write(json.dumps(pair.to_json(), ensure_ascii=False,
                                sort_keys=True))
            fh.write("\n")
    log.info("wrote %d pairs to %s", len(pairs), args.output)
    return EXIT_OK


def _cmd_convert(args) -> int:
    if args.src_format != "three-file":
        raise ConfigError("unknown source format %r" % args.src_format)
    try:
        with open(args.seq_in, encoding="utf-8") as fin, open(
            args.seq_out, encoding="utf-8"
        ) as fout, open(args.label, encoding="utf-8") as flab:
            corpus = parse_three_file(fin, fout, flab)
    except OSError as exc:
        raise InputError("cannot read input: %s" % exc) from exc
    with _open_out(args.output) as fh:
        write_corpus(corpus, fh)
    log.info("converted %d utterances to %s", len(corpus), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sluaug",
        description="Data augmentation for slot-filling/intent corpora.",
    )
    parser.add_argument(
        "--verbose", action="store_true", help="debug logging to stderr"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="generate augmented utterances")
    p.add_argument("--method", required=True, choices=METHOD_CHOICES)
    p.add_argument("--input", required=True, help="corpus JSONL")
    p.add_argument("--output", required=True, help="output JSONL")
    p.add_argument("--trees", help="CoNLL-U parses (crop/rotate)")
    p.add_argument("--n", type=int, default=5,
                   help="augmentations requested per sentence")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--top-p", type=float, default=0.9,
                   help="nucleus sampling mass (slot-sub-lm)")
    p.add_argument("--max-crop", type=int, default=3)
    p.add_argument("--max-rotate", type=int, default=3)
    p.add_argument("--filter", action="store_true",
                   help="score slot-sub-lm outputs with the pair filter")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--backend-url",
                   help="fill-mask service; falls back to SLUAUG_BACKEND_URL")
    p.add_argument("--no-dedup", action="store_true")
    p.add_argument("--union", action="store_true",
                   help="emit source corpus followed by augmentations")
    p.add_argument("--top-k", type=int, default=50)
    p.add_argument("--workers", type=int, default=8)
    p.add_argument("--strict", action="store_true",
                   help="never substitute a value seen only in the same sentence")
    p.add_argument("--weighted", action="store_true",
                   help="sample candidates by corpus frequency")
    p.add_argument("--fail-open", action="store_true",
                   help="keep records when the pair scorer is unreachable")
    p.set_defaults(func=_cmd_augment)

    p = sub.add_parser("stats", help="corpus shape summary as JSON")
    p.add_argument("--input", required=True)
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("validate", help="check corpus and parses, exit 3 on errors")
    p.add_argument("--input", required=True)
    p.add_argument("--trees")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("index", help="dump the slot value index")
    p.add_argument("--input", required=True)
    p.add_argument("--dump", action="store_true", required=True)
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("filter-pairs",
                       help="build accept/reject pairs for filter training")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-sentence", type=int, default=1)
    p.set_defaults(func=_cmd_filter_pairs)

    p = sub.add_parser("convert", help="normalize other layouts to JSONL")
    p.add_argument("--from", dest="src_format", required=True,
                   choices=["three-file"])
    p.add_argument("--seq-in", required=True, help="tokens, one sentence per line")
    p.add_argument("--seq-out", required=True, help="tags, aligned with --seq-in")
    p.add_argument("--label", required=True, help="intent labels, one per line")
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_convert)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except BackendError as exc:
        log.error("%s", exc)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())

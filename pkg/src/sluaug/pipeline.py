"""End-to-end augmentation runs: config, seeding, dedup, stats.

A run maps every corpus utterance through one augmentation method,
deduplicates the results against the source corpus and each other, and
re-ids the survivors. Each utterance gets its own RNG stream derived
from the master seed and the utterance id, so outputs are reproducible
and insertion of new corpus lines does not shuffle existing ones.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

from .corpus import Corpus, Utterance
from .errors import ConfigError, InputError
from .lm import FillMaskClient, HttpFillMask, HttpPairScorer, PairScorerClient, lm_variants
from .records import (
    METHOD_CROP,
    METHOD_ROTATE,
    METHOD_SLOT_SUB,
    METHOD_SLOT_SUB_LM,
    METHODS,
    AugRecord,
)
from .slot_index import build_index
from .slotsub import slot_sub_n
from .tree_ops import crop_variants, rotate_variants


@dataclass(frozen=True)
class AugConfig:
    """Knobs for one augmentation run."""

    method: str
    n_aug: int = 5
    seed: int = 0
    top_p: float = 0.9
    max_crop: int = 3
    max_rotate: int = 3
    filter_enabled: bool = False
    filter_threshold: float = 0.5
    backend_url: str | None = None
    dedup: bool = True
    emit_union: bool = False
    top_k: int = 50
    workers: int = 8
    strict: bool = False
    weighted: bool = False
    fail_open: bool = False

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(
                "unknown method %r; expected one of %s"
                % (self.method, ", ".join(METHODS))
            )
        if self.n_aug < 1:
            raise ConfigError("n must be >= 1, got %d" % self.n_aug)
        if not 0.0 < self.top_p <= 1.0:
            raise ConfigError("top-p must be in (0, 1], got %r" % self.top_p)
        if self.max_crop < 1:
            raise ConfigError("max-crop must be >= 1")
        if self.max_rotate < 1:
            raise ConfigError("max-rotate must be >= 1")
        if not 0.0 <= self.filter_threshold <= 1.0:
            raise ConfigError("threshold must be in [0, 1]")
        if self.filter_enabled and self.method != METHOD_SLOT_SUB_LM:
            raise ConfigError("--filter only applies to slot-sub-lm")
        if self.method == METHOD_SLOT_SUB_LM and not self.backend_url:
            raise ConfigError(
                "slot-sub-lm needs --backend-url or SLUAUG_BACKEND_URL"
            )
        if self.top_k < 1:
            raise ConfigError("top-k must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


def sub_seed(master: int, utterance_id: str) -> int:
    """Stable per-utterance seed derived from the master seed."""
    digest = hashlib.sha256(
        ("%d:%s" % (master, utterance_id)).encode("utf-8")
    ).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class CorpusStats:
    """Shape summary of a set of utterances."""

    utterances: int
    tokens: int
    intents: Mapping[str, int]
    slot_labels: Mapping[str, Mapping[str, int]]

    @classmethod
    def collect(cls, utterances: Sequence[Utterance]) -> "CorpusStats":
        intents: Counter = Counter()
        span_counts: Counter = Counter()
        values: dict[str, set] = {}
        n_tokens = 0
        for u in utterances:
            n_tokens += len(u.tokens)
            intents[u.intent] += 1
            for sp in u.spans():
                span_counts[sp.label] += 1
                values.setdefault(sp.label, set()).add(sp.value)
        labels = {
            label: {
                "spans": span_counts[label],
                "distinct_values": len(values[label]),
            }
            for label in sorted(values)
        }
        return cls(
            utterances=len(utterances),
            tokens=n_tokens,
            intents=dict(sorted(intents.items())),
            slot_labels=labels,
        )

    def to_json(self) -> dict:
        return {
            "utterances": self.utterances,
            "tokens": self.tokens,
            "avg_len": round(self.tokens / self.utterances, 3)
            if self.utterances
            else 0.0,
            "intents": dict(self.intents),
            "slot_labels": {k: dict(v) for k, v in self.slot_labels.items()},
        }


@dataclass(frozen=True)
class StatsReport:
    """What one augmentation run did, in JSON-friendly form."""

    method: str
    seed: int
    n_aug: int
    sources: int
    produced: int
    emitted: int
    discards: Mapping[str, int]
    substitutions: Mapping[str, int]
    input_stats: CorpusStats
    output_stats: CorpusStats

    def to_json(self) -> dict:
        return {
            "method": self.method,
            "seed": self.seed,
            "n_aug": self.n_aug,
            "sources": self.sources,
            "produced": self.produced,
            "emitted": self.emitted,
            "discards": dict(sorted(self.discards.items())),
            "substitutions": dict(sorted(self.substitutions.items())),
            "input": self.input_stats.to_json(),
            "output": self.output_stats.to_json(),
        }


@dataclass(frozen=True)
class AugResult:
    records: tuple[AugRecord, ...]
    emitted: tuple[Utterance, ...]
    stats: StatsReport

    @property
    def augmented(self) -> tuple[Utterance, ...]:
        return tuple(r.result for r in self.records)


def _lm_worker(args):
    u, cfg, fill, scorer, seed = args
    discards: Counter = Counter()
    recs = lm_variants(
        u,
        fill,
        cfg.n_aug,
        seed,
        p=cfg.top_p,
        top_k=cfg.top_k,
        scorer=scorer if cfg.filter_enabled else None,
        threshold=cfg.filter_threshold,
        fail_open=cfg.fail_open,
        dedup=cfg.dedup,
        discards=discards,
    )
    return recs, discards


def augment_corpus(
    corpus: Corpus,
    cfg: AugConfig,
    *,
    fill_client: FillMaskClient | None = None,
    scorer_client: PairScorerClient | None = None,
) -> AugResult:
    """Run one augmentation method over every utterance.

    Tree methods need parses attached to the corpus; the LM method needs
    either an injected fill client or ``cfg.backend_url``. Returns the
    surviving records, the emitted utterances (augmented only, or source
    plus augmented when ``emit_union`` is set), and a stats report.
    """
    discards: Counter = Counter()
    per_source: list[tuple[Utterance, list[AugRecord]]] = []

    if cfg.method == METHOD_SLOT_SUB:
        idx = build_index(corpus)
        for u in corpus:
            recs = slot_sub_n(
                u,
                idx,
                cfg.n_aug,
                sub_seed(cfg.seed, u.id),
                dedup=cfg.dedup,
                strict=cfg.strict,
                weighted=cfg.weighted,
                discards=discards,
            )
            per_source.append((u, recs))
    elif cfg.method == METHOD_SLOT_SUB_LM:
        fill = fill_client
        if fill is None:
            if not cfg.backend_url:
                raise ConfigError(
                    "slot-sub-lm needs --backend-url or SLUAUG_BACKEND_URL"
                )
            fill = HttpFillMask(cfg.backend_url)
            # Fail the whole run up front when the service is down;
            # mid-run hiccups only skip individual records.
            fill.healthcheck()
        scorer = scorer_client
        if cfg.filter_enabled and scorer is None:
            if not cfg.backend_url:
                raise ConfigError("--filter needs --backend-url")
            scorer = HttpPairScorer(cfg.backend_url)
        jobs = [
            (u, cfg, fill, scorer, sub_seed(cfg.seed, u.id)) for u in corpus
        ]
        if cfg.workers > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                results = list(pool.map(_lm_worker, jobs))
        else:
            results = [_lm_worker(j) for j in jobs]
        for (u, *_), (recs, local) in zip(jobs, results):
            discards.update(local)
            per_source.append((u, recs))
    elif cfg.method in (METHOD_CROP, METHOD_ROTATE):
        if not corpus.trees:
            raise InputError(
                "method %r needs dependency trees (--trees)" % cfg.method
            )
        for u in corpus:
            tree = corpus.trees.get(u.id)
            if tree is None:
                discards["no_tree"] += 1
                per_source.append((u, []))
                continue
            seed = sub_seed(cfg.seed, u.id)
            rng = random.Random(seed)
            if cfg.method == METHOD_CROP:
                recs = crop_variants(
                    u, tree, rng,
                    max_crop=cfg.max_crop, seed=seed, discards=discards,
                )
            else:
                recs = rotate_variants(
                    u, tree, rng,
                    max_rotate=cfg.max_rotate, seed=seed, discards=discards,
                )
            per_source.append((u, recs))
    else:  # pragma: no cover - AugConfig already rejects this
        raise ConfigError("unknown method %r" % cfg.method)

    produced = sum(len(recs) for _, recs in per_source)

    # Global dedup: nothing already in the source corpus, nothing twice.
    seen = {u.key() for u in corpus} if cfg.dedup else set()
    kept: list[AugRecord] = []
    for u, recs in per_source:
        serial = 0
        for rec in recs:
            if cfg.dedup:
                key = rec.result.key()
                if key in seen:
                    discards["duplicate_corpus"] += 1
                    continue
                seen.add(key)
            serial += 1
            new_id = "%s::%s::%d" % (u.id, cfg.method, serial)
            kept.append(
                replace(rec, result=replace(rec.result, id=new_id))
            )

    substitutions: Counter = Counter()
    for rec in kept:
        label = rec.op_detail.get("slot")
        if label is not None:
            substitutions[str(label)] += 1

    augmented = [rec.result for rec in kept]
    emitted = (
        list(corpus.utterances) + augmented if cfg.emit_union else augmented
    )
    stats = StatsReport(
        method=cfg.method,
        seed=cfg.seed,
        n_aug=cfg.n_aug,
        sources=len(corpus),
        produced=produced,
        emitted=len(emitted),
        discards=dict(sorted(discards.items())),
        substitutions=dict(sorted(substitutions.items())),
        input_stats=CorpusStats.collect(corpus.utterances),
        output_stats=CorpusStats.collect(emitted),
    )
    return AugResult(tuple(kept), tuple(emitted), stats)


def write_provenance(records: Iterable[AugRecord], sink) -> None:
    """Dump one JSON line of provenance per record, in emission order."""
    own = False
    if isinstance(sink, (str, bytes)):
        sink = open(sink, "w", encoding="utf-8")
        own = True
    try:
        for rec in records:
            sink.write(
                json.dumps(rec.provenance(), ensure_ascii=False, sort_keys=True)
            )
            sink.write("\n")
    finally:
        if own:
            sink.close()

"""Inventory of slot values per label, and candidate sampling.

The index records every distinct (label, value) pair observed in a
corpus together with its occurrence count and source utterance ids.
Substitution candidates for a span are the other values seen under the
same label.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import IO, Mapping

from .corpus import Corpus, SlotSpan, extract_spans

Value = tuple[str, ...]


@dataclass(frozen=True)
class ValueStats:
    count: int
    sources: frozenset[str]


@dataclass(frozen=True)
class SlotIndex:
    """label -> {value: stats}; values iterate in lexicographic order."""

    by_label: Mapping[str, Mapping[Value, ValueStats]]

    def labels(self) -> tuple[str, ...]:
        return tuple(sorted(self.by_label))

    def values(self, label: str) -> tuple[Value, ...]:
        return tuple(self.by_label.get(label, {}))

    def count(self, label: str, value: Value) -> int:
        stats = self.by_label.get(label, {}).get(tuple(value))
        return stats.count if stats else 0

    def __contains__(self, pair: tuple[str, Value]) -> bool:
        label, value = pair
        return tuple(value) in self.by_label.get(label, {})

    def dump(self, sink: IO[str]) -> None:
        doc = {
            label: [
                {"value": list(value), "count": stats.count}
                for value, stats in self.by_label[label].items()
            ]
            for label in self.labels()
        }
        json.dump(doc, sink, ensure_ascii=False, indent=2, sort_keys=True)
        sink.write("\n")


def build_index(corpus: Corpus) -> SlotIndex:
    """Collect every distinct (label, value) pair with counts and sources."""
    counts: dict[str, dict[Value, int]] = {}
    sources: dict[str, dict[Value, set[str]]] = {}
    for u in corpus:
        for span in extract_spans(u):
            counts.setdefault(span.label, {})
            sources.setdefault(span.label, {})
            counts[span.label][span.value] = (
                counts[span.label].get(span.value, 0) + 1
            )
            sources[span.label].setdefault(span.value, set()).add(u.id)
    by_label = {
        label: {
            value: ValueStats(
                counts[label][value], frozenset(sources[label][value])
            )
            for value in sorted(counts[label])
        }
        for label in counts
    }
    return SlotIndex(by_label)


def candidates(
    idx: SlotIndex, sp: SlotSpan, *, exclude_source: str | None = None
) -> tuple[Value, ...]:
    """Values sharing sp's label but differing from sp's value.

    Lexicographically ordered. ``exclude_source`` drops values that only
    occur in that utterance (strict mode: candidates must come from
    other sentences). An unknown label yields an empty sequence.
    """
    pool = idx.by_label.get(sp.label)
    if not pool:
        return ()
    out = []
    for value, stats in pool.items():
        if value == sp.value:
            continue
        if exclude_source is not None and stats.sources <= {exclude_source}:
            continue
        out.append(value)
    return tuple(out)


def sample_candidate(
    idx: SlotIndex,
    sp: SlotSpan,
    rng: random.Random,
    *,
    weighted: bool = False,
    exclude_source: str | None = None,
) -> Value | None:
    """Draw one candidate, or None when there is none.

    Uniform over distinct values by default; ``weighted`` draws
    proportionally to occurrence counts instead.
    """
    pool = candidates(idx, sp, exclude_source=exclude_source)
    if not pool:
        return None
    if weighted:
        weights = [idx.count(sp.label, v) for v in pool]
        return rng.choices(pool, weights=weights, k=1)[0]
    return pool[rng.randrange(len(pool))]

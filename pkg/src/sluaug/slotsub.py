"""Slot substitution: swap one span's value for another seen under the
same label elsewhere in the corpus."""

from __future__ import annotations

import random
from collections import Counter

from .corpus import Utterance, extract_spans
from .records import METHOD_SLOT_SUB, AugRecord, substitute_span
from .slot_index import SlotIndex, candidates, sample_candidate


def slot_sub_once(
    u: Utterance,
    idx: SlotIndex,
    rng: random.Random,
    *,
    seed: int = 0,
    strict: bool = False,
    weighted: bool = False,
) -> AugRecord | None:
    """Substitute one randomly picked span, or None when no span can be.

    The pick is uniform over the spans that have at least one candidate,
    so a substitution happens whenever one is possible at all.
    """
    exclude = u.id if strict else None
    substitutable = [
        sp
        for sp in extract_spans(u)
        if candidates(idx, sp, exclude_source=exclude)
    ]
    if not substitutable:
        return None
    span = substitutable[rng.randrange(len(substitutable))]
    value = sample_candidate(
        idx, span, rng, weighted=weighted, exclude_source=exclude
    )
    assert value is not None  # spans were pre-filtered
    result = substitute_span(u, span, value)
    return AugRecord(
        result=result,
        method=METHOD_SLOT_SUB,
        source_id=u.id,
        op_detail={
            "slot": span.label,
            "start": span.start,
            "end": span.end,
            "old": list(span.value),
            "new": list(value),
        },
        seed=seed,
    )


def slot_sub_n(
    u: Utterance,
    idx: SlotIndex,
    n: int,
    seed: int,
    *,
    dedup: bool = True,
    strict: bool = False,
    weighted: bool = False,
    discards: Counter | None = None,
) -> list[AugRecord]:
    """Apply slot substitution up to n times to one utterance.

    Each application independently re-picks the span and the candidate.
    With ``dedup`` (the default) outputs identical to the source or to an
    earlier output of this batch are dropped, so fewer than n records may
    come back. Deterministic for a given seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    out: list[AugRecord] = []
    seen = {(u.tokens, u.slot_tags)}
    for _ in range(n):
        rec = slot_sub_once(
            u, idx, rng, seed=seed, strict=strict, weighted=weighted
        )
        if rec is None:
            if discards is not None:
                discards["no_candidates"] += 1
            break  # no span is substitutable; retrying cannot help
        key = (rec.result.tokens, rec.result.slot_tags)
        if dedup:
            if key in seen:
                if discards is not None:
                    discards["duplicate"] += 1
                continue
            seen.add(key)
        out.append(rec)
    return out

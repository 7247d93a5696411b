"""Augmentation records and the span-substitution primitive."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .corpus import SlotSpan, Utterance, span_tags

METHOD_SLOT_SUB = "slot_sub"
METHOD_SLOT_SUB_LM = "slot_sub_lm"
METHOD_CROP = "crop"
METHOD_ROTATE = "rotate"
METHODS = (METHOD_SLOT_SUB, METHOD_SLOT_SUB_LM, METHOD_CROP, METHOD_ROTATE)


@dataclass(frozen=True)
class AugRecord:
    """One augmented utterance plus enough provenance to reproduce it."""

    result: Utterance
    method: str
    source_id: str
    op_detail: Mapping[str, object]
    seed: int

    def provenance(self) -> dict:
        return {
            "id": self.result.id,
            "method": self.method,
            "source_id": self.source_id,
            "seed": self.seed,
            "detail": dict(self.op_detail),
        }


def substitute_span(
    u: Utterance, span: SlotSpan, value: tuple[str, ...]
) -> Utterance:
    """Replace one span's tokens with ``value``, re-tagging the new run.

    Context tokens, their tags, and the intent are untouched; the id is
    inherited from the source (the pipeline re-ids emitted records).
    """
    tokens = u.tokens[: span.start] + tuple(value) + u.tokens[span.end :]
    tags = (
        u.slot_tags[: span.start]
        + span_tags(span.label, len(value))
        + u.slot_tags[span.end :]
    )
    return Utterance(u.id, tokens, tags, u.intent)

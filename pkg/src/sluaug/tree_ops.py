"""Sentence crop and rotate over dependency trees.

Crop keeps the root, its function-word children, and exactly one
argument subtree, dropping the rest. Rotate reorders whole argument
subtrees around the root. Both move slot tags together with their
tokens and discard any variant that would tear a slot span apart, so
every surviving span also occurs in the source sentence.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from typing import FrozenSet, Sequence

from .corpus import DepTree, Utterance
from .records import METHOD_CROP, METHOD_ROTATE, AugRecord

# Relations whose subtrees count as movable/droppable arguments, and
# relations that must stay glued to the root (auxiliaries, negation,
# particles). Labels cover the usual UD and spaCy inventories.
DEFAULT_CROPPABLE: FrozenSet[str] = frozenset(
    {"nsubj", "obj", "dobj", "iobj", "dative", "obl", "attr", "prep"}
)
DEFAULT_KEEP: FrozenSet[str] = frozenset(
    {"aux", "auxpass", "neg", "prt", "cop", "expl"}
)

_ATTEMPT_FACTOR = 40  # rejection-sampling budget per requested variant


def _gather(u: Utterance, order: Sequence[int]) -> tuple[tuple[str, ...], tuple[str, ...]]:
    toks = tuple(u.tokens[i] for i in order)
    tags = tuple(u.slot_tags[i] for i in order)
    return toks, tags


def _spans_survive(u: Utterance, order: Sequence[int]) -> bool:
    """Every source span must appear whole, in order, and contiguous."""
    pos = {tok_i: out_i for out_i, tok_i in enumerate(order)}
    for sp in u.spans():
        where = [pos.get(i) for i in range(sp.start, sp.end)]
        present = [w for w in where if w is not None]
        if not present:
            continue  # dropped entirely, fine
        if len(present) != len(where):
            return False  # partially dropped
        if present != list(range(present[0], present[0] + len(present))):
            return False  # split or reordered
    return True


def _make_record(
    u: Utterance,
    order: Sequence[int],
    method: str,
    detail: dict,
    seed: int,
) -> AugRecord:
    toks, tags = _gather(u, order)
    result = Utterance(id=u.id, tokens=toks, slot_tags=tags, intent=u.intent)
    return AugRecord(
        result=result, method=method, source_id=u.id,
        op_detail=detail, seed=seed,
    )


def _sample_down(variants: list, limit: int, rng: random.Random) -> list:
    if len(variants) <= limit:
        return variants
    picks = sorted(rng.sample(range(len(variants)), limit))
    return [variants[i] for i in picks]


def crop_variants(
    u: Utterance,
    tree: DepTree,
    rng: random.Random,
    *,
    max_crop: int = 3,
    seed: int = 0,
    crop_rels: FrozenSet[str] = DEFAULT_CROPPABLE,
    keep_rels: FrozenSet[str] = DEFAULT_KEEP,
    discards: Counter | None = None,
) -> list[AugRecord]:
    """Build cropped sentences, one per droppable argument of the root.

    Each variant keeps the root token, the subtrees of its keep-relation
    children, and the subtree of exactly one crop-relation child. At
    most ``max_crop`` variants are returned, sampled without replacement
    when more exist.
    """

    def skip(reason):
        if discards is not None:
            discards[reason] += 1

    root = tree.root
    kids = tree.children(root)
    anchors = [c for c in kids if tree.rels[c] in crop_rels]
    base = {root}
    for c in kids:
        if tree.rels[c] in keep_rels:
            base.update(tree.subtree(c))

    variants: list[AugRecord] = []
    seen: set[tuple] = set()
    for c in anchors:
        kept = sorted(base | set(tree.subtree(c)))
        if len(kept) == len(u.tokens):
            skip("identity")
            continue
        if not _spans_survive(u, kept):
            skip("span_partial")
            continue
        toks, tags = _gather(u, kept)
        if (toks, tags) in seen:
            skip("duplicate")
            continue
        seen.add((toks, tags))
        dropped = sorted(set(range(len(u.tokens))) - set(kept))
        variants.append(
            _make_record(
                u, kept, METHOD_CROP,
                {
                    "anchor": c,
                    "anchor_rel": tree.rels[c],
                    "kept": kept,
                    "dropped": dropped,
                },
                seed,
            )
        )
    overflow = len(variants) - max_crop
    if overflow > 0 and discards is not None:
        discards["over_limit"] += overflow
    return _sample_down(variants, max_crop, rng)


def _blocks(tree: DepTree, flex_rels: FrozenSet[str]) -> list[list[int]]:
    """Partition token indices into movable blocks plus the root block.

    Each flexible child of the root contributes its whole subtree; the
    root and everything else form one fixed-content block. Blocks are
    ordered by first token index.
    """
    root = tree.root
    flex = [c for c in tree.children(root) if tree.rels[c] in flex_rels]
    blocks = [tree.subtree(c) for c in flex]
    moved = set().union(*blocks) if blocks else set()
    rest = sorted(set(range(len(tree.heads))) - moved)
    blocks.append(rest)
    blocks.sort(key=lambda b: b[0])
    return blocks


def rotate_variants(
    u: Utterance,
    tree: DepTree,
    rng: random.Random,
    *,
    max_rotate: int = 3,
    seed: int = 0,
    flex_rels: FrozenSet[str] = DEFAULT_CROPPABLE,
    discards: Counter | None = None,
) -> list[AugRecord]:
    """Build rotated sentences by permuting argument blocks of the root.

    The identity permutation is never emitted. Small block counts are
    enumerated exhaustively; larger ones fall back to rejection
    sampling. At most ``max_rotate`` variants are returned.
    """

    def skip(reason):
        if discards is not None:
            discards[reason] += 1

    blocks = _blocks(tree, flex_rels)
    k = len(blocks)
    if k < 2:
        skip("too_few_blocks")
        return []

    variants: list[AugRecord] = []
    seen: set[tuple] = set()
    identity = tuple(range(k))

    def consider(perm: tuple[int, ...]) -> None:
        order = [i for b in perm for i in blocks[b]]
        if not _spans_survive(u, order):
            skip("span_split")
            return
        toks, tags = _gather(u, order)
        if (toks, tags) == (u.tokens, u.slot_tags):
            skip("identity")
            return
        if (toks, tags) in seen:
            skip("duplicate")
            return
        seen.add((toks, tags))
        variants.append(
            _make_record(
                u, order, METHOD_ROTATE,
                {
                    "blocks": [list(b) for b in blocks],
                    "order": list(perm),
                },
                seed,
            )
        )

    if k <= 7:  # 7! = 5040, cheap to enumerate
        for perm in itertools.permutations(range(k)):
            if perm != identity:
                consider(perm)
        overflow = len(variants) - max_rotate
        if overflow > 0 and discards is not None:
            discards["over_limit"] += overflow
        return _sample_down(variants, max_rotate, rng)

    budget = _ATTEMPT_FACTOR * max_rotate
    perm = list(range(k))
    while len(variants) < max_rotate and budget > 0:
        budget -= 1
        rng.shuffle(perm)
        if tuple(perm) != identity:
            consider(tuple(perm))
    return variants

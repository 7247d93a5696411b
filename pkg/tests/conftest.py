"""Shared fixtures: checked-in corpora and deterministic generators."""

from __future__ import annotations

import pathlib
import random

import pytest

from sluaug import Corpus, Utterance, parse_corpus, parse_trees
from sluaug.corpus import ROOT, DepTree

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture10() -> Corpus:
    with open(DATA / "fixture10.jsonl", encoding="utf-8") as fh:
        return parse_corpus(fh)


@pytest.fixture(scope="session")
def fig2() -> Corpus:
    with open(DATA / "fig2.jsonl", encoding="utf-8") as fh:
        corpus = parse_corpus(fh)
    with open(DATA / "fig2.conllu", encoding="utf-8") as fh:
        trees = parse_trees(fh, corpus)
    return Corpus(corpus.utterances, trees)


# ---------------------------------------------------------------- generators

FILLERS = [
    "show", "me", "list", "all", "the", "please", "find", "cheapest",
    "earliest", "morning", "evening", "nonstop", "available", "flights",
    "flight", "fares", "from", "to", "on", "with", "via", "around",
]

SLOT_POOLS = {
    "orig": [
        ["boston"], ["denver"], ["atlanta"], ["dallas"], ["oakland"],
        ["pittsburgh"], ["baltimore"], ["philadelphia"], ["san", "jose"],
        ["new", "york"],
    ],
    "dest": [
        ["miami"], ["seattle"], ["phoenix"], ["detroit"], ["memphis"],
        ["nashville"], ["charlotte"], ["milwaukee"], ["san", "diego"],
        ["los", "angeles"],
    ],
    "carrier": [
        ["united"], ["delta"], ["continental"], ["northwest"], ["lufthansa"],
        ["twa"], ["us", "air"], ["american", "airlines"],
    ],
    "day": [
        ["monday"], ["tuesday"], ["wednesday"], ["thursday"], ["friday"],
        ["saturday"], ["sunday"],
    ],
}

INTENTS = ["find_flight", "airfare", "ground_service", "meal_info"]


def synthetic_corpus(n: int, seed: int, spans_per_sentence=(2, 3)) -> Corpus:
    """Flight-domain-shaped corpus with controllable size.

    Every sentence carries two or three slots whose values come from
    pools of 7-10 alternatives, so value substitution has room to
    produce distinct variants.
    """
    rng = random.Random(seed)
    labels = sorted(SLOT_POOLS)
    utterances = []
    for i in range(n):
        k = rng.randint(*spans_per_sentence)
        chosen = rng.sample(labels, k)
        tokens: list[str] = []
        tags: list[str] = []
        for j, label in enumerate(chosen):
            for _ in range(rng.randint(1, 3)):
                tokens.append(rng.choice(FILLERS))
                tags.append("O")
            value = rng.choice(SLOT_POOLS[label])
            tokens.extend(value)
            tags.append("B-" + label)
            tags.extend("I-" + label for _ in value[1:])
        if rng.random() < 0.5:
            tokens.append(rng.choice(FILLERS))
            tags.append("O")
        utterances.append(
            Utterance(
                id="syn%04d" % i,
                tokens=tuple(tokens),
                slot_tags=tuple(tags),
                intent=rng.choice(INTENTS),
            )
        )
    return Corpus(utterances)


def random_tags(length: int, rng: random.Random, labels=("x", "y", "z")) -> list[str]:
    """A valid BIO sequence of the given length."""
    tags: list[str] = []
    while len(tags) < length:
        if rng.random() < 0.5:
            tags.append("O")
        else:
            label = rng.choice(labels)
            tags.append("B-" + label)
            while len(tags) < length and rng.random() < 0.4:
                tags.append("I-" + label)
    return tags


def random_utterance(uid: str, rng: random.Random, min_len=3, max_len=10) -> Utterance:
    length = rng.randint(min_len, max_len)
    tokens = tuple("t%d" % rng.randrange(30) for _ in range(length))
    return Utterance(
        id=uid,
        tokens=tokens,
        slot_tags=tuple(random_tags(length, rng)),
        intent=rng.choice(INTENTS),
    )


RANDOM_RELS = [
    "nsubj", "dobj", "prep", "pobj", "det", "amod", "aux", "neg",
    "compound", "attr", "dative", "advmod",
]


def random_tree(uid: str, length: int, rng: random.Random) -> DepTree:
    """Random connected tree: token 0 is the root, others attach leftward."""
    heads = [ROOT]
    rels = ["ROOT"]
    for i in range(1, length):
        heads.append(rng.randrange(i))
        rels.append(rng.choice(RANDOM_RELS))
    return DepTree(utterance_id=uid, heads=tuple(heads), rels=tuple(rels))


def random_corpus(seed: int, n_utterances=3, with_trees=True) -> Corpus:
    rng = random.Random(seed)
    utts = [
        random_utterance("r%d_%d" % (seed, i), rng)
        for i in range(n_utterances)
    ]
    trees = {}
    if with_trees:
        trees = {
            u.id: random_tree(u.id, len(u.tokens), rng) for u in utts
        }
    return Corpus(utts, trees)

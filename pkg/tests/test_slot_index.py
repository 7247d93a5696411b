"""Slot value index: construction, candidate lookup, sampling."""

from __future__ import annotations

import io
import json
import random

import pytest

from sluaug import SlotSpan, build_index, candidates, sample_candidate


@pytest.fixture(scope="module")
def idx(fixture10):
    return build_index(fixture10)


def span(label, value):
    value = tuple(value)
    return SlotSpan(label, 0, len(value), value)


def test_labels_and_values(idx):
    assert idx.labels() == ("airline", "city", "date", "from_city", "to_city")
    assert idx.values("from_city") == (
        ("boston",),
        ("denver",),
        ("new", "york"),
        ("san", "francisco"),
    )
    assert idx.values("nope") == ()


def test_counts_and_sources(idx):
    assert idx.count("from_city", ("boston",)) == 2  # u01, u10
    assert idx.count("date", ("monday",)) == 2
    assert idx.count("date", ("never",)) == 0
    assert idx.by_label["airline"][("delta",)].sources == {"u04", "u07"}


def test_contains(idx):
    assert ("to_city", ("denver",)) in idx
    assert ("to_city", ("atlanta",)) not in idx
    assert ("ghost", ("denver",)) not in idx


def test_candidates_exclude_own_value(idx):
    got = candidates(idx, span("date", ["monday"]))
    assert got == (("tuesday",),)
    # a value unseen under the label competes with all recorded ones
    got = candidates(idx, span("date", ["friday"]))
    assert got == (("monday",), ("tuesday",))


def test_candidates_unknown_label_empty(idx):
    assert candidates(idx, span("ghost", ["x"])) == ()


def test_candidates_strict_mode(idx):
    # "city" only has boston from u09; strict lookup from u09 finds nothing
    sp = span("city", ["boston"])
    assert candidates(idx, sp) == ()
    sp2 = span("city", ["providence"])
    assert candidates(idx, sp2) == (("boston",),)
    assert candidates(idx, sp2, exclude_source="u09") == ()
    assert candidates(idx, sp2, exclude_source="u01") == (("boston",),)


def test_sample_candidate_uniform_and_deterministic(idx):
    sp = span("from_city", ["boston"])
    rng = random.Random(7)
    draws = {sample_candidate(idx, sp, rng) for _ in range(200)}
    assert draws == set(candidates(idx, sp))
    assert sample_candidate(idx, span("ghost", ["x"]), rng) is None
    a = [sample_candidate(idx, sp, random.Random(3)) for _ in range(5)]
    b = [sample_candidate(idx, sp, random.Random(3)) for _ in range(5)]
    assert a == b


def test_sample_candidate_weighted(idx):
    # to_city counts: denver 2, boston 1, san francisco 2, new york 1.
    # Replacing new york leaves {denver:2, boston:1, san francisco:2}.
    sp = span("to_city", ["new", "york"])
    rng = random.Random(11)
    n = 6000
    hits = {}
    for _ in range(n):
        v = sample_candidate(idx, sp, rng, weighted=True)
        hits[v] = hits.get(v, 0) + 1
    assert hits[("denver",)] / n == pytest.approx(0.4, abs=0.03)
    assert hits[("boston",)] / n == pytest.approx(0.2, abs=0.03)


def test_dump_shape(idx):
    buf = io.StringIO()
    idx.dump(buf)
    doc = json.loads(buf.getvalue())
    assert doc["date"] == [
        {"value": ["monday"], "count": 2},
        {"value": ["tuesday"], "count": 1},
    ]
    # deterministic serialization
    again = io.StringIO()
    idx.dump(again)
    assert again.getvalue() == buf.getvalue()


def test_empty_corpus_index():
    from sluaug import Corpus, Utterance

    corpus = Corpus([Utterance("a", ("hi",), ("O",), "x")])
    idx = build_index(corpus)
    assert idx.labels() == ()
    assert candidates(idx, span("city", ["boston"])) == ()
"""Slot substitution through a fill-mask service.

One span is blanked out and new tokens are decoded left to right: each
position queries the service for a distribution, draws a token by
nucleus (top-p) sampling, substitutes it, and re-queries for the next
position. An optional sentence-pair scorer filters results that do not
fit the original slot, and this module also constructs the accept/reject
pairs that train such a scorer.

Wire protocol (HTTP/JSON, shared with the backend service):

    POST /fill  {"tokens": [...], "blank_index": i, "top_k": k}
                -> {"entries": [[token, prob], ...], "residual_mass": m}
    POST /score {"sent_a": [...], "sent_b": [...]}
                -> {"accept_prob": p}

Remaining blank positions are sent as the literal token "[BLANK]".
"""

from __future__ import annotations

import logging
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Mapping, Protocol, Sequence

import requests

from .corpus import Corpus, SlotSpan, Utterance, extract_spans
from .errors import BackendError, BackendRejected, InputError
from .records import METHOD_SLOT_SUB_LM, AugRecord, substitute_span
from .slot_index import SlotIndex, Value
from .slotsub import slot_sub_once

log = logging.getLogger(__name__)

BLANK = "[BLANK]"

ACCEPT = "accept"
REJECT = "reject"

MASS_TOLERANCE = 1e-3


@dataclass(frozen=True)
class TokenDistribution:
    """Truncated predictive distribution, highest probability first."""

    entries: tuple[tuple[str, float], ...]
    residual_mass: float = 0.0

    def __post_init__(self):
        object.__setattr__(
            self, "entries", tuple((t, float(p)) for t, p in self.entries)
        )
        prev = None
        total = self.residual_mass
        for token, prob in self.entries:
            if not 0.0 < prob <= 1.0:
                raise ValueError(
                    "probability %r of %r outside (0, 1]" % (prob, token)
                )
            if prev is not None and prob > prev:
                raise ValueError("entries not in descending order")
            prev = prob
            total += prob
        if self.entries and abs(total - 1.0) > MASS_TOLERANCE:
            raise ValueError(
                "entries + residual mass sum to %.6f, not 1" % total
            )


def nucleus_sample(
    dist: TokenDistribution, p: float, rng: random.Random
) -> str:
    """Draw a token from the smallest top prefix holding mass >= p.

    The prefix is renormalized before sampling. When the listed entries
    never reach p (mass lost to truncation), the whole list is used.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("top-p must be in (0, 1], got %r" % p)
    if not dist.entries:
        raise BackendError("empty token distribution")
    cut = len(dist.entries)
    cum = 0.0
    for i, (_, prob) in enumerate(dist.entries):
        cum += prob
        if cum >= p:
            cut = i + 1
            break
    nucleus = dist.entries[:cut]
    total = sum(prob for _, prob in nucleus)
    draw = rng.random() * total
    acc = 0.0
    for token, prob in nucleus:
        acc += prob
        if draw < acc:
            return token
    return nucleus[-1][0]


class FillMaskClient(Protocol):
    def fill(
        self, tokens: Sequence[str], blank_index: int, top_k: int
    ) -> TokenDistribution: ...


class PairScorerClient(Protocol):
    def score(self, sent_a: Sequence[str], sent_b: Sequence[str]) -> float: ...


class _HttpBase:
    """POST JSON with bounded retries and exponential backoff."""

    def __init__(
        self,
        base_url: str,
        *,
        timeout: float = 10.0,
        retries: int = 2,
        backoff: float = 0.5,
        session: requests.Session | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._session = session or requests.Session()

    def _post(self, path: str, payload: dict) -> dict:
        url = self.base_url + path
        last: Exception | None = None
        for attempt in range(self.retries + 1):
            try:
                resp = self._session.post(url, json=payload, timeout=self.timeout)
            except requests.RequestException as exc:
                last = exc
            else:
                if resp.status_code < 400:
                    try:
                        return resp.json()
                    except ValueError as exc:
                        raise BackendError(
                            "non-JSON response from %s" % url
                        ) from exc
                if resp.status_code < 500:
                    raise BackendRejected(
                        "%s rejected the request (%d): %s"
                        % (url, resp.status_code, resp.text[:200])
                    )
                last = BackendError(
                    "%s returned %d" % (url, resp.status_code)
                )
            if attempt < self.retries:
                time.sleep(self.backoff * 2**attempt)
        raise BackendError("%s unreachable after %d attempts: %s"
                           % (url, self.retries + 1, last))

    def healthcheck(self) -> dict:
        url = self.base_url + "/healthz"
        try:
            resp = self._session.get(url, timeout=self.timeout)
        except requests.RequestException as exc:
            raise BackendError("%s unreachable: %s" % (url, exc)) from exc
        if resp.status_code != 200:
            raise BackendError("%s returned %d" % (url, resp.status_code))
        return resp.json()


class HttpFillMask(_HttpBase):
    def fill(self, tokens, blank_index, top_k):
        doc = self._post(
            "/fill",
            {
                "tokens": list(tokens),
                "blank_index": blank_index,
                "top_k": top_k,
            },
        )
        try:
            return TokenDistribution(
                tuple((t, p) for t, p in doc["entries"]),
                float(doc.get("residual_mass", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError("invalid fill response: %s" % exc) from None


class HttpPairScorer(_HttpBase):
    def score(self, sent_a, sent_b):
        doc = self._post(
            "/score", {"sent_a": list(sent_a), "sent_b": list(sent_b)}
        )
        try:
            prob = float(doc["accept_prob"])
        except (KeyError, TypeError, ValueError) as exc:
            raise BackendError("invalid score response: %s" % exc) from None
        if not 0.0 <= prob <= 1.0:
            raise BackendError("accept_prob %r out of range" % prob)
        return prob


class StubFillMask:
    """In-process stand-in for the fill-mask service.

    Serves a fixed distribution, or delegates to a callable taking
    (tokens, blank_index, top_k). Counts its calls, which tests use to
    check the one-call-per-blank contract.
    """

    def __init__(
        self,
        dist: TokenDistribution | None = None,
        fn: Callable[[Sequence[str], int, int], TokenDistribution] | None = None,
    ):
        if (dist is None) == (fn is None):
            raise ValueError("pass exactly one of dist/fn")
        self._dist = dist
        self._fn = fn
        self.calls: list[tuple[tuple[str, ...], int]] = []

    def fill(self, tokens, blank_index, top_k):
        self.calls.append((tuple(tokens), blank_index))
        if self._fn is not None:
            return self._fn(tokens, blank_index, top_k)
        return self._dist


class StubScorer:
    """In-process stand-in for the pair scorer."""

    def __init__(
        self,
        prob: float | None = None,
        fn: Callable[[Sequence[str], Sequence[str]], float] | None = None,
    ):
        if (prob is None) == (fn is None):
            raise ValueError("pass exactly one of prob/fn")
        self._prob = prob
        self._fn = fn

    def score(self, sent_a, sent_b):
        if self._fn is not None:
            return self._fn(sent_a, sent_b)
        return self._prob


@dataclass(frozen=True)
class MaskQuery:
    """Decoding state for one blanked span.

    ``tokens`` holds the sentence with BLANK at every not-yet-filled
    position; filled positions always form a prefix of the blank region.
    """

    tokens: tuple[str, ...]
    blank_start: int
    blank_len: int
    filled: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.blank_len < 1:
            raise ValueError("blank_len must be >= 1")
        expected = set(
            range(self.blank_start, self.blank_start + len(self.filled))
        )
        if set(self.filled) != expected:
            raise ValueError("filled positions must prefix the blank region")

    @classmethod
    def for_span(cls, u: Utterance, span: SlotSpan) -> "MaskQuery":
        tokens = list(u.tokens)
        for i in range(span.start, span.end):
            tokens[i] = BLANK
        return cls(tuple(tokens), span.start, span.end - span.start)

    @property
    def complete(self) -> bool:
        return len(self.filled) == self.blank_len

    @property
    def next_blank(self) -> int:
        return self.blank_start + len(self.filled)

    def advance(self, token: str) -> "MaskQuery":
        pos = self.next_blank
        tokens = list(self.tokens)
        tokens[pos] = token
        return MaskQuery(
            tuple(tokens),
            self.blank_start,
            self.blank_len,
            {**self.filled, pos: token},
        )


def lm_fill_span(
    u: Utterance,
    span: SlotSpan,
    backend: FillMaskClient,
    p: float,
    rng: random.Random,
    *,
    top_k: int = 50,
    seed: int = 0,
) -> AugRecord:
    """Blank one span and decode replacement tokens left to right.

    Issues exactly one backend call per blanked position; each call sees
    the tokens sampled so far. Raises BackendError/BackendRejected when
    the service fails, leaving the caller to skip the record.
    """
    query = MaskQuery.for_span(u, span)
    while not query.complete:
        dist = backend.fill(query.tokens, query.next_blank, top_k)
        query = query.advance(nucleus_sample(dist, p, rng))
    value = tuple(
        query.filled[i] for i in range(span.start, span.end)
    )
    result = substitute_span(u, span, value)
    return AugRecord(
        result=result,
        method=METHOD_SLOT_SUB_LM,
        source_id=u.id,
        op_detail={
            "slot": span.label,
            "start": span.start,
            "end": span.end,
            "old": list(span.value),
            "new": list(value),
            "top_p": p,
        },
        seed=seed,
    )


def filter_accept(
    s: Utterance,
    s_prime: Utterance,
    scorer: PairScorerClient,
    threshold: float,
    *,
    fail_open: bool = False,
) -> bool:
    """True iff the scorer's accept probability reaches the threshold.

    The threshold is inclusive. When the scorer is unreachable the
    default is to reject (fail closed); ``fail_open`` accepts instead.
    """
    try:
        prob = scorer.score(s.tokens, s_prime.tokens)
    except BackendError as exc:
        log.warning("pair scorer failed (%s); %s %r",
                    exc, "accepting" if fail_open else "rejecting", s.id)
        return fail_open
    return prob >= threshold


def lm_variants(
    u: Utterance,
    backend: FillMaskClient,
    n: int,
    seed: int,
    *,
    p: float = 0.9,
    top_k: int = 50,
    scorer: PairScorerClient | None = None,
    threshold: float = 0.5,
    fail_open: bool = False,
    dedup: bool = True,
    discards: Counter | None = None,
) -> list[AugRecord]:
    """Apply LM substitution up to n times to one utterance.

    Per application: pick a span uniformly, decode a replacement, drop it
    if the value is unchanged or a duplicate, then apply the optional
    pair filter. Deterministic for a given seed and backend.
    """
    if n < 1:
        raise ValueError("n must be >= 1")

    def skip(reason):
        if discards is not None:
            discards[reason] += 1

    spans = extract_spans(u)
    if not spans:
        skip("no_spans")
        return []
    rng = random.Random(seed)
    out: list[AugRecord] = []
    seen = {(u.tokens, u.slot_tags)}
    for _ in range(n):
        span = spans[rng.randrange(len(spans))]
        try:
            rec = lm_fill_span(
                u, span, backend, p, rng, top_k=top_k, seed=seed
            )
        except BackendError as exc:
            log.warning("fill-mask backend failed on %r: %s", u.id, exc)
            skip("backend_error")
            continue
        if tuple(rec.op_detail["new"]) == span.value:
            skip("value_unchanged")
            continue
        key = (rec.result.tokens, rec.result.slot_tags)
        if dedup:
            if key in seen:
                skip("duplicate")
                continue
            seen.add(key)
        if scorer is not None and not filter_accept(
            u, rec.result, scorer, threshold, fail_open=fail_open
        ):
            skip("filtered_reject")
            continue
        out.append(rec)
    return out


@dataclass(frozen=True)
class PairExample:
    """A sentence pair with its accept/reject label for filter training."""

    sent_a: tuple[str, ...]
    sent_b: tuple[str, ...]
    label: str
    detail: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "sent_a", tuple(self.sent_a))
        object.__setattr__(self, "sent_b", tuple(self.sent_b))
        if self.sent_a == self.sent_b:
            raise ValueError("pair sentences must differ")
        if self.label not in (ACCEPT, REJECT):
            raise ValueError("label must be accept or reject")

    def to_json(self) -> dict:
        return {
            "sent_a": list(self.sent_a),
            "sent_b": list(self.sent_b),
            "label": self.label,
            "meta": dict(self.detail),
        }


def _negative_pool(idx: SlotIndex, label: str) -> list[tuple[str, Value]]:
    return [
        (other, value)
        for other in idx.labels()
        if other != label
        for value in idx.values(other)
    ]


def build_filter_pairs(
    corpus: Corpus,
    idx: SlotIndex,
    rng: random.Random,
    *,
    per_sentence: int = 1,
) -> list[PairExample]:
    """Construct balanced accept/reject pairs for filter training.

    Positives pair each sentence with a slot-substitution output;
    negatives replace a span with a value recorded under a different
    label. Both sides are trimmed to the same size (balance within one).
    Needs at least two distinct slot labels.
    """
    labels = idx.labels()
    if len(labels) < 2:
        raise InputError(
            "filter pairs need >= 2 distinct slot labels to build reject "
            "examples; corpus has %d" % len(labels)
        )
    positives: list[PairExample] = []
    negatives: list[PairExample] = []
    for u in corpus:
        spans = extract_spans(u)
        if not spans:
            continue
        for _ in range(per_sentence):
            rec = slot_sub_once(u, idx, rng)
            if rec is not None and rec.result.tokens != u.tokens:
                positives.append(
                    PairExample(
                        u.tokens,
                        rec.result.tokens,
                        ACCEPT,
                        {"source_id": u.id, "replacement": dict(rec.op_detail)},
                    )
                )
            span = spans[rng.randrange(len(spans))]
            # Values also recorded under the span's own label would make
            # mislabeled negatives; skip them.
            pool = [
                (lab, val)
                for lab, val in _negative_pool(idx, span.label)
                if val != span.value and (span.label, val) not in idx
            ]
            if not pool:
                continue
            wrong_label, wrong_value = pool[rng.randrange(len(pool))]
            altered = substitute_span(u, span, wrong_value)
            negatives.append(
                PairExample(
                    u.tokens,
                    altered.tokens,
                    REJECT,
                    {
                        "source_id": u.id,
                        "replacement": {
                            "slot": span.label,
                            "start": span.start,
                            "end": span.end,
                            "old": list(span.value),
                            "new": list(wrong_value),
                            "new_label": wrong_label,
                        },
                    },
                )
            )
    keep = min(len(positives), len(negatives))
    out: list[PairExample] = []
    for pos, neg in zip(positives[:keep], negatives[:keep]):
        out.append(pos)
        out.append(neg)
    return out

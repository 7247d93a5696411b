"""Corpus model and I/O for slot-filling / intent-classification data.

A corpus is a stream of JSONL records::

    {"id": "...", "tokens": [...], "slots": [...], "intent": "..."}

``slots`` is a per-token BIO tag sequence. Dependency parses arrive in a
CoNLL-U sidecar whose blocks carry ``# sent_id = <id>`` comments keyed
to the corpus ids. All types are immutable after construction and safe
to share across threads.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import IO, Iterator, Mapping, Sequence

from . import kernels
from .errors import ConfigError, CorpusFormatError, TreeFormatError

ROOT = -1  # head index of the root token in a DepTree

CORPUS_FIELDS = ("id", "tokens", "slots", "intent")


def bio_violation(tags: Sequence[str]) -> str | None:
    """Human-readable description of the first BIO violation, or None."""
    pos, code = kernels.first_violation(tags)
    if pos < 0:
        return None
    if code == kernels.MALFORMED:
        return "malformed tag %r at position %d" % (tags[pos], pos)
    return "tag %r at position %d does not continue a span" % (tags[pos], pos)


@dataclass(frozen=True)
class Utterance:
    """One sentence: tokens, per-token BIO slot tags, and an intent label."""

    id: str
    tokens: tuple[str, ...]
    slot_tags: tuple[str, ...]
    intent: str

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        object.__setattr__(self, "slot_tags", tuple(self.slot_tags))
        if not self.tokens:
            raise CorpusFormatError("utterance has no tokens")
        if len(self.slot_tags) != len(self.tokens):
            raise CorpusFormatError(
                "%d tokens but %d slot tags"
                % (len(self.tokens), len(self.slot_tags))
            )
        problem = bio_violation(self.slot_tags)
        if problem is not None:
            raise CorpusFormatError(problem)

    def __len__(self) -> int:
        return len(self.tokens)

    def spans(self) -> tuple["SlotSpan", ...]:
        return extract_spans(self)

    def key(self) -> tuple:
        """Identity of the content, ignoring the id (used for dedup)."""
        return (self.tokens, self.slot_tags, self.intent)


@dataclass(frozen=True)
class SlotSpan:
    """A maximal run of tokens carrying one slot label.

    ``end`` is exclusive; ``value`` is ``tokens[start:end]`` of the
    utterance the span was extracted from.
    """

    label: str
    start: int
    end: int
    value: tuple[str, ...]


def extract_spans(u: Utterance) -> tuple[SlotSpan, ...]:
    """All slot spans of ``u``, left to right, non-overlapping."""
    return tuple(
        SlotSpan(label, start, end, u.tokens[start:end])
        for label, start, end in kernels.span_triples(u.slot_tags)
    )


def render_tags(spans: Sequence[SlotSpan], length: int) -> tuple[str, ...]:
    """Inverse of extract_spans: rebuild a tag sequence from spans."""
    tags = ["O"] * length
    for sp in spans:
        tags[sp.start] = "B-" + sp.label
        for i in range(sp.start + 1, sp.end):
            tags[i] = "I-" + sp.label
    return tuple(tags)


def span_tags(label: str, length: int) -> tuple[str, ...]:
    """The tag run for a single span of ``length`` tokens."""
    return ("B-" + label,) + ("I-" + label,) * (length - 1)


def repair_bio(tags: Sequence[str]) -> tuple[str, ...]:
    """Re-render B-/I- prefixes so the sequence is BIO-valid.

    Slot types are never altered; each maximal run of one type becomes
    B- followed by I-... Idempotent.
    """
    return tuple(kernels.repair_prefixes(tags))


@dataclass(frozen=True)
class DepTree:
    """Dependency parse aligned to an utterance.

    ``heads[i]`` is the 0-based parent of token i, or ``ROOT`` for the
    single root token. ``rels[i]`` is the dependency relation of the
    arc into token i.
    """

    utterance_id: str
    heads: tuple[int, ...]
    rels: tuple[str, ...]
    _children: tuple[tuple[int, ...], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        object.__setattr__(self, "heads", tuple(self.heads))
        object.__setattr__(self, "rels", tuple(self.rels))
        n = len(self.heads)
        if n == 0:
            raise TreeFormatError("empty tree")
        if len(self.rels) != n:
            raise TreeFormatError(
                "%d heads but %d relations" % (n, len(self.rels))
            )
        roots = [i for i, h in enumerate(self.heads) if h == ROOT]
        if len(roots) != 1:
            raise TreeFormatError(
                "expected exactly one root, found %d" % len(roots)
            )
        for i, h in enumerate(self.heads):
            if h != ROOT and not 0 <= h < n:
                raise TreeFormatError(
                    "head %d of token %d out of range" % (h, i)
                )
        kids = [[] for _ in range(n)]
        for i, h in enumerate(self.heads):
            if h != ROOT:
                kids[h].append(i)
        object.__setattr__(self, "_children", tuple(tuple(k) for k in kids))
        # Reachability from the root proves the heads form a tree: every
        # non-root has exactly one parent, so a missing node means a cycle.
        seen = 0
        stack = [roots[0]]
        while stack:
            seen += 1
            stack.extend(self._children[stack.pop()])
        if seen != n:
            raise TreeFormatError("heads contain a cycle or detached node")

    def __len__(self) -> int:
        return len(self.heads)

    @property
    def root(self) -> int:
        return self.heads.index(ROOT)

    def children(self, i: int) -> tuple[int, ...]:
        return self._children[i]

    def subtree(self, i: int) -> tuple[int, ...]:
        """Token indices of i's full subtree (i included), ascending."""
        out = []
        stack = [i]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(self._children[node])
        return tuple(sorted(out))


@dataclass(frozen=True)
class Corpus:
    """An ordered collection of utterances plus optional parse sidecars."""

    utterances: tuple[Utterance, ...]
    trees: Mapping[str, DepTree] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "utterances", tuple(self.utterances))
        by_id = {}
        for u in self.utterances:
            if u.id in by_id:
                raise CorpusFormatError("duplicate utterance id %r" % u.id)
            by_id[u.id] = u
        for uid, tree in self.trees.items():
            u = by_id.get(uid)
            if u is None:
                raise TreeFormatError("tree for unknown utterance id %r" % uid)
            if len(tree) != len(u):
                raise TreeFormatError(
                    "tree for %r has %d tokens, utterance has %d"
                    % (uid, len(tree), len(u))
                )

    def __len__(self) -> int:
        return len(self.utterances)

    def __iter__(self) -> Iterator[Utterance]:
        return iter(self.utterances)

    def get(self, uid: str) -> Utterance | None:
        for u in self.utterances:
            if u.id == uid:
                return u
        return None

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(u.id for u in self.utterances)


def _text_stream(stream: IO) -> IO[str]:
    if isinstance(stream, io.TextIOBase):
        return stream
    data = stream.read()
    if isinstance(data, bytes):
        return io.StringIO(data.decode("utf-8"))
    return io.StringIO(data)


def _string_list(value, what: str) -> list[str]:
    if not isinstance(value, list) or not all(
        isinstance(x, str) for x in value
    ):
        raise CorpusFormatError("%s must be a list of strings" % what)
    return value


def parse_corpus(stream: IO, fmt: str = "jsonl") -> Corpus:
    """Read a corpus from a byte or text stream.

    Records missing an ``id`` get the zero-padded 1-based line number.
    Raises CorpusFormatError with the offending line number on malformed
    JSON, token/tag length mismatch, or BIO violations.
    """
    if fmt != "jsonl":
        raise ConfigError("unsupported corpus format %r" % fmt)
    utterances = []
    for lineno, line in enumerate(_text_stream(stream), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusFormatError(
                "line %d: malformed JSON (%s)" % (lineno, exc)
            ) from None
        if not isinstance(record, dict):
            raise CorpusFormatError(
                "line %d: expected a JSON object" % lineno
            )
        try:
            tokens = _string_list(record.get("tokens"), "tokens")
            slots = _string_list(record.get("slots"), "slots")
            intent = record.get("intent")
            if not isinstance(intent, str):
                raise CorpusFormatError("intent must be a string")
            uid = record.get("id", "%06d" % lineno)
            if not isinstance(uid, str):
                raise CorpusFormatError("id must be a string")
            utterances.append(Utterance(uid, tuple(tokens), tuple(slots), intent))
        except CorpusFormatError as exc:
            raise CorpusFormatError(
                "line %d (id %s): %s"
                % (lineno, record.get("id", "%06d" % lineno), exc)
            ) from None
    return Corpus(tuple(utterances))


def write_corpus(corpus: Corpus, sink: IO) -> None:
    """Write JSONL with a stable field order; byte output is deterministic."""
    binary = not isinstance(sink, io.TextIOBase)
    for u in corpus:
        record = {
            "id": u.id,
            "tokens": list(u.tokens),
            "slots": list(u.slot_tags),
            "intent": u.intent,
        }
        line = json.dumps(record, ensure_ascii=False) + "\n"
        sink.write(line.encode("utf-8") if binary else line)


def corpus_to_bytes(corpus: Corpus) -> bytes:
    buf = io.BytesIO()
    write_corpus(corpus, buf)
    return buf.getvalue()


def parse_trees(stream: IO, corpus: Corpus | None = None) -> dict[str, DepTree]:
    """Read CoNLL-U blocks into DepTrees keyed by sent_id.

    Blocks are blank-line separated; each needs a ``# sent_id = <id>``
    comment. Multiword-token ranges and empty nodes are skipped. When a
    corpus is given, ids must exist in it and the FORM column must match
    its tokens exactly.
    """
    trees: dict[str, DepTree] = {}
    sent_id = None
    forms: list[str] = []
    heads: list[int] = []
    rels: list[str] = []
    block_start = None

    def finish(lineno):
        nonlocal sent_id, forms, heads, rels, block_start
        if not forms and sent_id is None:
            return
        if sent_id is None:
            raise TreeFormatError(
                "block starting at line %d has no '# sent_id =' comment"
                % (block_start or lineno)
            )
        if sent_id in trees:
            raise TreeFormatError("duplicate sent_id %r" % sent_id)
        if not forms:
            raise TreeFormatError("block for %r has no token lines" % sent_id)
        try:
            tree = DepTree(sent_id, tuple(heads), tuple(rels))
        except TreeFormatError as exc:
            raise TreeFormatError("sent_id %s: %s" % (sent_id, exc)) from None
        if corpus is not None:
            u = corpus.get(sent_id)
            if u is None:
                raise TreeFormatError(
                    "sent_id %r not found in the corpus" % sent_id
                )
            if tuple(forms) != u.tokens:
                raise TreeFormatError(
                    "sent_id %s: FORM column does not match corpus tokens"
                    % sent_id
                )
        trees[sent_id] = tree
        sent_id = None
        forms, heads, rels = [], [], []
        block_start = None

    lineno = 0
    for lineno, line in enumerate(_text_stream(stream), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            finish(lineno)
            continue
        if block_start is None:
            block_start = lineno
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sent_id"):
                _, _, value = body.partition("=")
                sent_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise TreeFormatError(
                "line %d: expected 10 tab-separated columns, got %d"
                % (lineno, len(cols))
            )
        tok_id = cols[0]
        if "-" in tok_id or "." in tok_id:
            continue  # multiword-token range or empty node
        try:
            index = int(tok_id)
            head = int(cols[6])
        except ValueError:
            raise TreeFormatError(
                "line %d: non-numeric ID or HEAD column" % lineno
            ) from None
        if index != len(forms) + 1:
            raise TreeFormatError(
                "line %d: token ids must be consecutive from 1" % lineno
            )
        forms.append(cols[1])
        heads.append(ROOT if head == 0 else head - 1)
        rels.append(cols[7])
    finish(lineno + 1)
    return trees


def parse_three_file(
    seq_in: IO, seq_out: IO, label: IO
) -> Corpus:
    """Convert the three-file layout (tokens / tags / intent per line)."""
    tok_lines = _text_stream(seq_in).read().splitlines()
    tag_lines = _text_stream(seq_out).read().splitlines()
    intent_lines = _text_stream(label).read().splitlines()
    if not len(tok_lines) == len(tag_lines) == len(intent_lines):
        raise CorpusFormatError(
            "line counts differ: %d tokens, %d tags, %d labels"
            % (len(tok_lines), len(tag_lines), len(intent_lines))
        )
    utterances = []
    for lineno, (toks, tags, intent) in enumerate(
        zip(tok_lines, tag_lines, intent_lines), start=1
    ):
        try:
            utterances.append(
                Utterance(
                    "%06d" % lineno,
                    tuple(toks.split()),
                    tuple(tags.split()),
                    intent.strip(),
                )
            )
        except CorpusFormatError as exc:
            raise CorpusFormatError("line %d: %s" % (lineno, exc)) from None
    return Corpus(tuple(utterances))

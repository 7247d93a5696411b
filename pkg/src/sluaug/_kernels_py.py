"""Pure-Python tag-scanning kernels.

Reference implementations of the per-token hot loops. The compiled
module ``sluaug._speedups`` is a drop-in replacement with identical
contracts; ``sluaug.kernels`` picks whichever is available.

Tag grammar: ``"O"``, ``"B-<type>"`` or ``"I-<type>"`` with a nonempty,
case-sensitive ``<type>``.
"""

MALFORMED = 1
ORPHAN_I = 2


def first_violation(tags):
    """Locate the first BIO violation in a tag sequence.

    Returns ``(-1, 0)`` when the sequence is valid, otherwise
    ``(index, code)`` where code is MALFORMED (not O/B-/I- with a
    nonempty type) or ORPHAN_I (an I- tag that does not continue a
    same-type span).
    """
    prev = None  # slot type open at the previous position
    for i, tag in enumerate(tags):
        if tag == "O":
            prev = None
            continue
        if len(tag) < 3 or tag[1] != "-":
            return i, MALFORMED
        head = tag[0]
        if head == "B":
            prev = tag[2:]
        elif head == "I":
            if prev is None or tag[2:] != prev:
                return i, ORPHAN_I
        else:
            return i, MALFORMED
    return -1, 0


def span_triples(tags):
    """(label, start, end) for every maximal B/I run of a valid sequence.

    ``end`` is exclusive. The input must already satisfy
    ``first_violation(tags) == (-1, 0)``.
    """
    spans = []
    start = -1
    label = None
    for i, tag in enumerate(tags):
        if tag == "O":
            if start >= 0:
                spans.append((label, start, i))
                start = -1
        elif tag[0] == "B":
            if start >= 0:
                spans.append((label, start, i))
            start = i
            label = tag[2:]
        # an I- tag extends the open span
    if start >= 0:
        spans.append((label, start, len(tags)))
    return spans


def repair_prefixes(tags):
    """Re-render B-/I- prefixes from the slot types alone.

    Every maximal run of one slot type becomes B- followed by I-...;
    "O" and the types themselves are never touched. Prefixes may be
    stale on input (e.g. after tokens were reordered), but each tag must
    still be "O" or carry a type.
    """
    out = [None] * len(tags)
    prev = None
    for i, tag in enumerate(tags):
        if tag == "O":
            out[i] = tag
            prev = None
            continue
        if len(tag) < 3 or tag[1] != "-" or tag[0] not in "BI":
            raise ValueError("not a BIO tag: %r" % (tag,))
        t = tag[2:]
        if t != prev:
            out[i] = tag if tag[0] == "B" else "B-" + t
        else:
            out[i] = tag if tag[0] == "I" else "I-" + t
        prev = t
    return out

# cython: language_level=3
"""Compiled tag-scanning kernels.

Drop-in replacement for ``sluaug._kernels_py``; see that module for the
contracts. Keep the two implementations in lockstep --
tests/test_kernels.py cross-checks them.
"""

MALFORMED = 1
ORPHAN_I = 2


def first_violation(tags):
    """Locate the first BIO violation; (-1, 0) when the sequence is valid."""
    cdef Py_ssize_t i, n = len(tags)
    cdef str tag
    cdef str prev = None
    cdef Py_UCS4 head
    for i in range(n):
        tag = tags[i]
        if tag == "O":
            prev = None
            continue
        if len(tag) < 3 or tag[1] != u"-":
            return i, MALFORMED
        head = tag[0]
        if head == u"B":
            prev = tag[2:]
        elif head == u"I":
            if prev is None or tag[2:] != prev:
                return i, ORPHAN_I
        else:
            return i, MALFORMED
    return -1, 0


def span_triples(tags):
    """(label, start, end) for every maximal B/I run of a valid sequence."""
    cdef Py_ssize_t i, n = len(tags), start = -1
    cdef str tag
    cdef str label = None
    cdef list spans = []
    for i in range(n):
        tag = tags[i]
        if tag == "O":
            if start >= 0:
                spans.append((label, start, i))
                start = -1
        elif tag[0] == u"B":
            if start >= 0:
                spans.append((label, start, i))
            start = i
            label = tag[2:]
    if start >= 0:
        spans.append((label, start, n))
    return spans


def repair_prefixes(tags):
    """Re-render B-/I- prefixes from the slot types alone."""
    cdef Py_ssize_t i, n = len(tags)
    cdef str tag, t
    cdef str prev = None
    cdef Py_UCS4 head
    cdef list out = [None] * n
    for i in range(n):
        tag = tags[i]
        if tag == "O":
            out[i] = tag
            prev = None
            continue
        if len(tag) < 3 or tag[1] != u"-":
            raise ValueError("not a BIO tag: %r" % (tag,))
        head = tag[0]
        if head != u"B" and head != u"I":
            raise ValueError("not a BIO tag: %r" % (tag,))
        t = tag[2:]
        if t != prev:
            out[i] = tag if head == u"B" else "B-" + t
        else:
            out[i] = tag if head == u"I" else "I-" + t
        prev = t
    return out

"""Compare the compiled tag kernels against the pure-Python fallback.

Run:  python3 benchmarks/bench_kernels.py [--tags N] [--repeat K]

Generates one big batch of random BIO-ish tag sequences (some valid,
some broken) and times validation, span extraction, and repair on both
implementations. Results are wall-clock medians over K repeats.
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from sluaug import _kernels_py

try:
    from sluaug import _speedups
except ImportError:
    _speedups = None

LABELS = ["city", "airline", "date", "time", "meal"]


def make_sequences(n_tags: int, rng: random.Random) -> list[list[str]]:
    seqs = []
    budget = n_tags
    while budget > 0:
        length = rng.randint(3, 30)
        budget -= length
        tags = []
        prev_label = None
        for _ in range(length):
            r = rng.random()
            if r < 0.55:
                tags.append("O")
                prev_label = None
            elif r < 0.8 or prev_label is None:
                prev_label = rng.choice(LABELS)
                tags.append("B-" + prev_label)
            else:
                # sometimes continue, sometimes break the chain on purpose
                label = prev_label if rng.random() < 0.8 else rng.choice(LABELS)
                tags.append("I-" + label)
                prev_label = label
        seqs.append(tags)
    return seqs


def bench(fn, seqs, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        for tags in seqs:
            fn(tags)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def spans_safe(module):
    # span_triples requires valid input; route through repair first so
    # both implementations do identical work on the same data.
    def run(tags):
        module.span_triples(module.repair_prefixes(tags))

    return run


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--tags", type=int, default=2_000_000,
                    help="total tag count across sequences")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=99)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    seqs = make_sequences(args.tags, rng)
    total = sum(len(s) for s in seqs)
    print("sequences: %d  tags: %d  repeats: %d" % (len(seqs), total, args.repeat))

    rows = [
        ("first_violation", lambda m: m.first_violation),
        ("repair_prefixes", lambda m: m.repair_prefixes),
        ("repair+spans", spans_safe),
    ]
    for name, pick in rows:
        py = bench(pick(_kernels_py), seqs, args.repeat)
        line = "%-16s python %8.1f ktags/s" % (name, total / py / 1e3)
        if _speedups is not None:
            cy = bench(pick(_speedups), seqs, args.repeat)
            line += "   c %8.1f ktags/s   speedup %.1fx" % (
                total / cy / 1e3, py / cy,
            )
        else:
            line += "   (compiled kernels not built)"
        print(line)


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the three hot loops (automaton scan, feature hashing, SGD epochs) on
synthetic workloads sized like a desk-scale corpus run and prints a timing
table. Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import random
import time

import numpy as np

from suppmine._kernels import pure
from suppmine.automaton import PatternAutomaton
from suppmine.classifier.features import HASH_SEED, N_BUCKETS, build_csr

try:
    from suppmine._kernels import _native
except ImportError:
    _native = None


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_scan(n_patterns, n_chars):
    rng = random.Random(1)
    words = list(
        {
            "".join(rng.choice("abcdefghijklmnop") for _ in range(rng.randint(4, 12)))
            for _ in range(n_patterns)
        }
    )
    auto = PatternAutomaton(sorted(words))
    text = " ".join(rng.choice(words + ["zzz", "qqq", "the", "of"]) for _ in range(n_chars // 6))
    args = (
        auto._trans_start, auto._trans_sym, auto._trans_next, auto._fail,
        auto._out_start, auto._out_pat, auto._ascii_map, auto._ext_map, text,
    )
    rows = {}
    rows["pure"] = _time(lambda: pure.ac_scan(*args))
    if _native:
        rows["native"] = _time(lambda: _native.ac_scan(*args))
        assert np.array_equal(pure.ac_scan(*args)[0], _native.ac_scan(*args)[0])
    return len(text), rows


def bench_hash(n_docs, tokens_per_doc):
    rng = random.Random(2)
    docs = [
        [
            ("tok%d" % rng.randint(0, 5000)).encode()
            for _ in range(tokens_per_doc)
        ]
        for _ in range(n_docs)
    ]
    rows = {"pure": _time(lambda: [pure.fnv1a_indices(d, HASH_SEED, N_BUCKETS) for d in docs])}
    if _native:
        rows["native"] = _time(
            lambda: [_native.fnv1a_indices(d, HASH_SEED, N_BUCKETS) for d in docs]
        )
    return n_docs * tokens_per_doc, rows


def bench_sgd(n_rows, epochs):
    rng = random.Random(3)
    texts = [
        "[Arg1] interacts with several compounds including [Arg2] at dose %d" % i
        for i in range(n_rows)
    ]
    indptr, indices, values = build_csr(texts)
    labels = np.asarray([float(rng.randint(0, 1)) for _ in range(n_rows)])
    order = np.arange(n_rows, dtype=np.int64)

    def run(impl):
        w = np.zeros(N_BUCKETS + 3)
        b = np.zeros(1)
        for _ in range(epochs):
            impl.sgd_epoch(indptr, indices, values, labels, order, w, b, 0.2)
        return w

    rows = {"pure": _time(lambda: run(pure), repeats=1)}
    if _native:
        rows["native"] = _time(lambda: run(_native), repeats=1)
        assert np.array_equal(run(pure), run(_native))
    return n_rows * epochs, rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    scale = 0.1 if args.quick else 1.0
    benches = [
        ("automaton scan", "chars", bench_scan(int(5000 * scale) or 50, int(2_000_000 * scale))),
        ("feature hashing", "tokens", bench_hash(int(20_000 * scale) or 100, 30)),
        ("sgd epochs", "row-updates", bench_sgd(int(20_000 * scale) or 100, 5)),
    ]

    print(f"{'kernel':<18} {'backend':<8} {'seconds':>9} {'throughput':>16}")
    for name, unit, (work, rows) in benches:
        for backend in ("pure", "native"):
            if backend not in rows:
                print(f"{name:<18} {backend:<8} {'n/a':>9}")
                continue
            secs = rows[backend]
            print(f"{name:<18} {backend:<8} {secs:>9.3f} {work / secs:>12.0f} {unit}/s")
        if "native" in rows:
            print(f"{'':<18} speedup  {rows['pure'] / rows['native']:>8.1f}x")


if __name__ == "__main__":
    main()

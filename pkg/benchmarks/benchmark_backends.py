#!/usr/bin/env python3
"""Time the numba kernels against the pure-numpy fallback.

Trains the same synthetic corpus on both backends, checks that the
resulting vectors and losses agree, then times the cosine-scan kernel
on a large vocabulary.  Run from the repository root:

    python3 benchmarks/benchmark_backends.py
    python3 benchmarks/benchmark_backends.py --dim 64 --epochs 10
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from triplescore import backend
from triplescore.embedding import EmbeddingConfig, train_cbow
from triplescore.embedding import kernels_numpy


def synthetic_corpus(n_sentences: int, vocab_size: int, seed: int) -> list:
    """Zipf-flavored sentences: low word ids occur far more often."""
    r = random.Random(seed)
    words = [f"w{i:04d}" for i in range(vocab_size)]
    weights = [1.0 / (i + 1) ** 0.8 for i in range(vocab_size)]
    sentences = []
    for _ in range(n_sentences):
        length = r.randint(6, 14)
        sentences.append(r.choices(words, weights=weights, k=length))
    return sentences


def time_training(sentences, config, backend_name: str) -> tuple:
    # one tiny run first so jit compilation never lands in the timing
    train_cbow(sentences[:16], config, workers=1, backend_name=backend_name)
    start = time.perf_counter()
    model = train_cbow(sentences, config, workers=1, backend_name=backend_name)
    elapsed = time.perf_counter() - start
    return model, elapsed


def time_scan(scan, units, query, repeats: int) -> float:
    scan(units, query)  # warm
    start = time.perf_counter()
    for _ in range(repeats):
        scan(units, query)
    return (time.perf_counter() - start) / repeats


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sentences", type=int, default=2000)
    parser.add_argument("--vocab", type=int, default=300)
    parser.add_argument("--dim", type=int, default=32)
    parser.add_argument("--epochs", type=int, default=5)
    parser.add_argument("--scan-rows", type=int, default=200_000)
    parser.add_argument("--scan-repeats", type=int, default=20)
    parser.add_argument("--seed", type=int, default=13)
    args = parser.parse_args()

    if not backend.HAS_NUMBA:
        print("numba is not installed; only the numpy fallback can run")

    sentences = synthetic_corpus(args.sentences, args.vocab, args.seed)
    tokens = sum(len(s) for s in sentences)
    config = EmbeddingConfig(
        dim=args.dim,
        negatives=5,
        subsample=1e-3,
        window=5,
        epochs=args.epochs,
        min_count=1,
        initial_lr=0.025,
        seed=args.seed,
    )
    print(
        f"corpus: {args.sentences} sentences, {tokens} tokens, "
        f"vocab {args.vocab}, dim {args.dim}, {args.epochs} epochs"
    )

    names = ["numpy"] + (["numba"] if backend.HAS_NUMBA else [])
    results = {}
    for name in names:
        model, elapsed = time_training(sentences, config, name)
        results[name] = (model, elapsed)
        rate = tokens * args.epochs / elapsed
        print(
            f"train [{name:>5}]: {elapsed:8.3f} s   "
            f"{rate / 1000.0:10.1f}k tokens/s   "
            f"final loss {model.epoch_losses[-1]:.6f}"
        )

    if len(results) == 2:
        numpy_model, numpy_time = results["numpy"]
        numba_model, numba_time = results["numba"]
        vectors_agree = np.allclose(
            numpy_model.input_vectors,
            numba_model.input_vectors,
            rtol=1e-3,
            atol=1e-4,
        )
        losses_agree = np.allclose(
            numpy_model.epoch_losses, numba_model.epoch_losses, rtol=1e-6
        )
        print(
            f"agreement: vectors {'ok' if vectors_agree else 'DIVERGED'}, "
            f"losses {'ok' if losses_agree else 'DIVERGED'}, "
            f"speedup x{numpy_time / numba_time:.2f}"
        )
        if not (vectors_agree and losses_agree):
            return 1

    rng = np.random.default_rng(args.seed)
    units = rng.standard_normal((args.scan_rows, args.dim))
    units /= np.sqrt((units * units).sum(axis=1))[:, None]
    query = rng.standard_normal(args.dim)
    query /= np.sqrt(query @ query)

    numpy_scan = time_scan(
        kernels_numpy.cosine_scan, units, query, args.scan_repeats
    )
    print(f"scan  [numpy]: {numpy_scan * 1000:8.3f} ms per pass "
          f"({args.scan_rows} rows)")
    if backend.HAS_NUMBA:
        from triplescore.embedding import kernels_numba

        numba_scan = time_scan(
            kernels_numba.cosine_scan, units, query, args.scan_repeats
        )
        close = np.allclose(
            kernels_numpy.cosine_scan(units, query),
            kernels_numba.cosine_scan(units, query),
            atol=1e-12,
        )
        print(
            f"scan  [numba]: {numba_scan * 1000:8.3f} ms per pass   "
            f"agreement {'ok' if close else 'DIVERGED'}, "
            f"speedup x{numpy_scan / numba_scan:.2f}"
        )
        if not close:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

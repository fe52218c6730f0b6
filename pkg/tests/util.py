"""Hand-built models and corpora used across the test modules."""

from __future__ import annotations

import math
import random

import numpy as np

from triplescore.embedding import EmbeddingModel, Vocab


def planted_model(words, vectors, counts=None, total_tokens=None) -> EmbeddingModel:
    """Model wrapping explicit float32 vectors, one row per word."""
    vectors = np.asarray(vectors, dtype=np.float32)
    if counts is None:
        counts = [1] * len(words)
    if total_tokens is None:
        total_tokens = int(sum(counts))
    return EmbeddingModel(
        vocab=Vocab(list(words), counts, total_tokens),
        input_vectors=vectors,
    )


def circle_model(words, degrees) -> EmbeddingModel:
    """2-D unit vectors at the given angles; cosine(i, j) = cos(angle gap)."""
    vectors = [
        (math.cos(math.radians(d)), math.sin(math.radians(d))) for d in degrees
    ]
    return planted_model(words, vectors)


def random_model(n_words: int, dim: int, seed: int) -> EmbeddingModel:
    rng = np.random.default_rng(seed)
    words = [f"tok{i:04d}" for i in range(n_words)]
    vectors = rng.standard_normal((n_words, dim)).astype(np.float32)
    return planted_model(words, vectors)


def two_cluster_corpus(n_sentences: int = 400, seed: int = 5) -> tuple:
    """Sentences drawn from two disjoint topic vocabularies.

    Returns (sentences, cluster_a_words, cluster_b_words).  Words inside a
    sentence always come from one cluster, so co-occurrence should pull
    same-cluster vectors together.
    """
    cluster_a = [f"red{i}" for i in range(8)]
    cluster_b = [f"blue{i}" for i in range(8)]
    r = random.Random(seed)
    sentences = []
    for _ in range(n_sentences):
        words = cluster_a if r.random() < 0.5 else cluster_b
        sentences.append([r.choice(words) for _ in range(8)])
    return sentences, cluster_a, cluster_b


def mean_pairwise_cosine(model: EmbeddingModel, words_a, words_b) -> float:
    """Mean cosine over all cross pairs (or distinct pairs when a is b)."""
    units = model.unit_vectors()
    same = list(words_a) == list(words_b)
    total = 0.0
    count = 0
    for i, wa in enumerate(words_a):
        for j, wb in enumerate(words_b):
            if same and j <= i:
                continue
            ua = units[model.vocab.lookup(wa)]
            ub = units[model.vocab.lookup(wb)]
            total += float(ua @ ub)
            count += 1
    return total / count

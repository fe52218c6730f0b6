"""CBOW negative-sampling training over tokenized sentences.

The model predicts a center word from the mean of its context vectors.
Per surviving center word, the update touches the center's output row,
`negatives` sampled noise rows, and every context input row.  Frequent
words are randomly thinned with keep probability sqrt(subsample / frequency).

All random decisions come from counter-based streams (rng.py): re-running
with the same seed and workers=1 reproduces vectors bit for bit.  With
workers > 1 sentence shards race on the shared matrices, so results are
only statistically reproducible.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from .. import backend, rng
from ..errors import ConfigurationError, NumericalError
from .model import EmbeddingConfig, EmbeddingModel, Vocab

# each (epoch, shard) pair owns a disjoint counter block of this width
_SHARD_COUNTER_BITS = 40


def sigmoid(x):
    """Numerically stable logistic function, elementwise."""
    arr = np.asarray(x, dtype=np.float64)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    e = np.exp(arr[~pos])
    out[~pos] = e / (1.0 + e)
    if np.isscalar(x) or getattr(x, "ndim", 0) == 0:
        return float(out)
    return out


def _softplus(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def ns_loss(h, rows, labels) -> float:
    """Negative-sampling loss of one center update, in float64.

    `rows` holds the output vectors of the true center (label 1) and the
    sampled noise words (label 0); `h` is the context mean.
    """
    h = np.asarray(h, dtype=np.float64)
    rows = np.asarray(rows, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    dots = rows @ h
    per = np.where(labels == 1.0, _softplus(-dots), _softplus(dots))
    return float(per.sum())


def ns_gradients(h, rows, labels):
    """Gradients of ns_loss w.r.t. the context mean and each output row."""
    h = np.asarray(h, dtype=np.float64)
    rows = np.asarray(rows, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    dots = rows @ h
    err = sigmoid(dots) - labels  # d loss / d dot
    grad_h = err @ rows
    grad_rows = err[:, None] * h[None, :]
    return grad_h, grad_rows


def keep_probability(word: str, vocab: Vocab, subsample: float) -> float:
    """Subsampling survival probability min(1, sqrt(subsample / f(word))).

    Raises KeyError for words outside the vocabulary.
    """
    if subsample <= 0.0:
        raise ValueError("subsample must be > 0")
    frequency = vocab.frequency(word)
    if frequency <= 0.0:
        return 1.0
    return min(1.0, float(np.sqrt(subsample / frequency)))


def noise_distribution(counts) -> np.ndarray:
    """Unigram distribution raised to the 3/4 power and renormalized."""
    counts = np.asarray(counts, dtype=np.float64)
    if counts.ndim != 1 or counts.size == 0:
        raise ValueError("counts must be a non-empty 1-D array")
    if (counts <= 0).any():
        raise ValueError("counts must be positive")
    weights = counts**0.75
    return weights / weights.sum()


def build_vocab(sentences: Iterable[Sequence[str]], min_count: int = 5) -> Vocab:
    """Count words, prune below min_count, order by (-count, word).

    total_tokens keeps the pre-pruning count so subsampling frequencies
    do not inflate when rare words are dropped.
    """
    counter: Counter = Counter()
    total = 0
    for sentence in sentences:
        counter.update(sentence)
        total += len(sentence)
    kept = sorted(
        ((w, c) for w, c in counter.items() if c >= min_count),
        key=lambda wc: (-wc[1], wc[0]),
    )
    if not kept:
        raise ConfigurationError(
            "empty vocabulary: no word reaches min_count "
            f"{min_count} (corpus has {total} tokens)"
        )
    return Vocab([w for w, _ in kept], [c for _, c in kept], total)


def encode_corpus(sentences: Sequence[Sequence[str]], vocab: Vocab):
    """Flatten sentences to vocabulary indices, dropping unknown words.

    Returns (tokens int32, offsets int64); sentence s spans
    tokens[offsets[s]:offsets[s+1]].  Sentences that lose all words stay
    as empty spans so indices still line up with the input.
    """
    index = vocab.index
    flat: list[int] = []
    offsets = np.empty(len(sentences) + 1, dtype=np.int64)
    offsets[0] = 0
    for s, sentence in enumerate(sentences):
        flat.extend(index[w] for w in sentence if w in index)
        offsets[s + 1] = len(flat)
    return np.asarray(flat, dtype=np.int32), offsets


def _shard_bounds(offsets: np.ndarray, workers: int) -> list:
    """Split sentences into `workers` contiguous spans with ~equal tokens."""
    n_sentences = len(offsets) - 1
    total = int(offsets[-1])
    bounds = [0]
    for k in range(1, workers):
        target = total * k // workers
        cut = int(np.searchsorted(offsets[1:], target, side="left")) + 1
        bounds.append(max(bounds[-1], min(cut, n_sentences)))
    bounds.append(n_sentences)
    return bounds


def initial_vectors(vocab_size: int, dim: int, seed: int) -> np.ndarray:
    """Input matrix init: uniform in [-0.5/dim, 0.5/dim), seeded stream."""
    state = rng.stream_state(seed, rng.STREAM_INIT)
    flat = rng.uniforms(state, 0, vocab_size * dim)
    return ((flat - 0.5) / dim).astype(np.float32).reshape(vocab_size, dim)


def train_cbow(
    sentences: Sequence[Sequence[str]],
    config: EmbeddingConfig | None = None,
    workers: int = 1,
    backend_name: str | None = None,
) -> EmbeddingModel:
    """Train a CBOW model; returns it with per-epoch mean losses attached."""
    if config is None:
        config = EmbeddingConfig()
    if workers < 1:
        raise ConfigurationError("workers must be >= 1")
    chosen = backend.resolve(backend_name)
    if chosen == "numba":
        from . import kernels_numba as kernels
    else:
        from . import kernels_numpy as kernels

    vocab = build_vocab(sentences, config.min_count)
    if len(vocab) < 2:
        raise ConfigurationError(
            f"vocabulary has {len(vocab)} words with count >= "
            f"{config.min_count}; need at least 2 to sample negatives"
        )
    tokens, offsets = encode_corpus(sentences, vocab)
    total_encoded = int(offsets[-1])
    if total_encoded == 0:
        raise ConfigurationError("no trainable tokens after vocabulary pruning")

    keep_prob = np.array(
        [keep_probability(w, vocab, config.subsample) for w in vocab.words],
        dtype=np.float64,
    )
    noise_cum = np.cumsum(noise_distribution(vocab.counts))
    noise_cum[-1] = 1.0  # guard the float edge so draws never fall past the end

    inp = initial_vectors(len(vocab), config.dim, config.seed)
    out = np.zeros((len(vocab), config.dim), dtype=np.float32)

    total_scheduled = config.epochs * total_encoded
    min_lr = config.initial_lr * 1e-4
    train_state = rng.stream_state(config.seed, rng.STREAM_TRAIN)
    bounds = _shard_bounds(offsets, workers)
    shard_token_starts = [int(offsets[b]) for b in bounds[:-1]]

    def run_shard(epoch: int, shard: int):
        counter_base = (epoch * workers + shard) << _SHARD_COUNTER_BITS
        processed = epoch * total_encoded + shard_token_starts[shard]
        if chosen == "numba":
            state_arg = np.uint64(train_state)
            counter_arg = np.uint64(counter_base)
        else:
            state_arg = train_state
            counter_arg = counter_base
        return kernels.train_epoch_shard(
            inp,
            out,
            tokens,
            offsets,
            bounds[shard],
            bounds[shard + 1],
            keep_prob,
            noise_cum,
            config.window,
            config.negatives,
            config.initial_lr,
            min_lr,
            total_scheduled,
            processed,
            state_arg,
            counter_arg,
        )

    epoch_losses: list[float] = []
    for epoch in range(config.epochs):
        if workers == 1:
            results = [run_shard(epoch, 0)]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [
                    pool.submit(run_shard, epoch, sh) for sh in range(workers)
                ]
                results = [f.result() for f in futures]
        loss_sum = 0.0
        loss_count = 0
        for shard_loss, shard_count, bad_pos in results:
            if bad_pos >= 0:
                raise NumericalError(
                    f"non-finite loss in epoch {epoch + 1} at token "
                    f"position {int(bad_pos)}; lower initial_lr"
                )
            loss_sum += float(shard_loss)
            loss_count += int(shard_count)
        epoch_losses.append(loss_sum / loss_count if loss_count else 0.0)

    return EmbeddingModel(
        vocab=vocab,
        input_vectors=inp,
        output_vectors=out,
        config=config,
        epoch_losses=epoch_losses,
    )

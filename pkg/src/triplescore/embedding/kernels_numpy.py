"""Pure-numpy training kernels: the fallback when numba is unavailable.

Decision streams (subsampling, negative sampling) are pure functions of
(stream state, counter), so this backend and the numba one make identical
choices; only floating-point rounding can differ.

Counter layout per in-vocab token position within a shard:
  slot 0                  subsampling draw (consumed for every position)
  slots 1 .. negatives*CAP  negative sampling, CAP attempts per negative

Positions index the layout, not draws actually consumed, so dropped
centers never shift later counters.
"""

from __future__ import annotations

import math

import numpy as np

from .. import rng

# attempts allowed to redraw a negative that collided with the center word
ATTEMPT_CAP = 100


def _sigmoid(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _softplus(x: float) -> float:
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


def train_epoch_shard(
    inp: np.ndarray,
    out: np.ndarray,
    tokens: np.ndarray,
    offsets: np.ndarray,
    sent_lo: int,
    sent_hi: int,
    keep_prob: np.ndarray,
    noise_cum: np.ndarray,
    window: int,
    negatives: int,
    initial_lr: float,
    min_lr: float,
    total_scheduled: int,
    processed_start: int,
    stream_state: int,
    counter_start: int,
):
    """One pass over sentences [sent_lo, sent_hi), updating vectors in place.

    Returns (loss_sum, loss_count, bad_position); bad_position is -1 on
    success, else the global token position where the loss went non-finite.
    """
    vocab_size = keep_prob.shape[0]
    pos_stride = 1 + negatives * ATTEMPT_CAP
    loss_sum = 0.0
    loss_count = 0
    q_base = 0  # in-shard position index of the current sentence start
    for s in range(sent_lo, sent_hi):
        start = int(offsets[s])
        end = int(offsets[s + 1])
        slen = end - start

        survivors_j = []
        survivors_w = []
        for j in range(slen):
            w = int(tokens[start + j])
            u = rng.uniform(stream_state, counter_start + (q_base + j) * pos_stride)
            if u < keep_prob[w]:
                survivors_j.append(j)
                survivors_w.append(w)
        n = len(survivors_j)

        for i in range(n):
            lo = max(0, i - window)
            hi = min(n, i + window + 1)
            nctx = hi - lo - 1
            if nctx == 0:
                continue
            j = survivors_j[i]
            center = survivors_w[i]
            ctx = [survivors_w[t] for t in range(lo, hi) if t != i]

            pos = processed_start + q_base + j
            alpha = initial_lr * (1.0 - pos / total_scheduled)
            if alpha < min_lr:
                alpha = min_lr

            base = counter_start + (q_base + j) * pos_stride + 1
            targets = [center]
            for k in range(negatives):
                cbase = base + k * ATTEMPT_CAP
                cand = center
                for a in range(ATTEMPT_CAP):
                    u = rng.uniform(stream_state, cbase + a)
                    cand = int(np.searchsorted(noise_cum, u, side="right"))
                    if cand >= vocab_size:
                        cand = vocab_size - 1
                    if cand != center:
                        break
                targets.append(cand)

            ctx_idx = np.asarray(ctx, dtype=np.int64)
            fn = np.float32(nctx)
            h = inp[ctx_idx].sum(axis=0) / fn
            grad_h = np.zeros_like(h)
            for t_i, t in enumerate(targets):
                label = 1.0 if t_i == 0 else 0.0
                row = out[t]
                dot = float(row @ h)
                loss_sum += _softplus(-dot) if label == 1.0 else _softplus(dot)
                g = np.float32((label - _sigmoid(dot)) * alpha)
                grad_h += g * row  # old row: read before the write below
                out[t] += g * h
            loss_count += len(targets)
            if not math.isfinite(loss_sum):
                return loss_sum, loss_count, pos
            update = grad_h / fn  # d(mean)/d(context vector) = 1/nctx
            for c in ctx:
                inp[c] += update

        q_base += slen
    return loss_sum, loss_count, -1


def cosine_scan(units: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Cosines of every row of a unit matrix against a unit query."""
    return units @ query

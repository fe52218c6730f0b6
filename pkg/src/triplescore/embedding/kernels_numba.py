"""Numba-compiled training kernels.

Mirrors kernels_numpy.py draw for draw: the splitmix64 generator is inlined
here with np.uint64-typed constants (bare int literals would promote the
uint64 math to float64), so both backends see the same decision stream.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ..backend import NJIT_OPTIONS

# must equal kernels_numpy.ATTEMPT_CAP: counter layout depends on it
ATTEMPT_CAP = 100

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1E4357B7)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_U53 = 1.0 / 9007199254740992.0


@njit(**NJIT_OPTIONS)
def _uniform(state, counter):
    x = state + (counter + _ONE) * _GOLDEN
    x = (x ^ (x >> _S30)) * _MIX1
    x = (x ^ (x >> _S27)) * _MIX2
    x = x ^ (x >> _S31)
    return np.float64(x >> _S11) * _U53


@njit(**NJIT_OPTIONS)
def _pick(noise_cum, u):
    # first index with noise_cum[idx] > u, i.e. searchsorted side='right'
    lo = 0
    hi = noise_cum.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        if noise_cum[mid] <= u:
            lo = mid + 1
        else:
            hi = mid
    if lo >= noise_cum.shape[0]:
        lo = noise_cum.shape[0] - 1
    return lo


@njit(**NJIT_OPTIONS)
def _sigmoid(x):
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


@njit(**NJIT_OPTIONS)
def _softplus(x):
    return max(x, 0.0) + math.log1p(math.exp(-abs(x)))


@njit(**NJIT_OPTIONS)
def train_epoch_shard(
    inp,
    out,
    tokens,
    offsets,
    sent_lo,
    sent_hi,
    keep_prob,
    noise_cum,
    window,
    negatives,
    initial_lr,
    min_lr,
    total_scheduled,
    processed_start,
    stream_state,
    counter_start,
):
    dim = inp.shape[1]
    pos_stride = np.uint64(1 + negatives * ATTEMPT_CAP)
    loss_sum = 0.0
    loss_count = 0
    h = np.zeros(dim, dtype=np.float32)
    grad_h = np.zeros(dim, dtype=np.float32)
    targets = np.empty(negatives + 1, dtype=np.int64)
    q_base = 0
    for s in range(sent_lo, sent_hi):
        start = offsets[s]
        end = offsets[s + 1]
        slen = end - start

        surv_j = np.empty(slen, dtype=np.int64)
        surv_w = np.empty(slen, dtype=np.int64)
        n = 0
        for j in range(slen):
            w = tokens[start + j]
            c0 = counter_start + np.uint64(q_base + j) * pos_stride
            if _uniform(stream_state, c0) < keep_prob[w]:
                surv_j[n] = j
                surv_w[n] = w
                n += 1

        for i in range(n):
            lo = i - window
            if lo < 0:
                lo = 0
            hi = i + window + 1
            if hi > n:
                hi = n
            nctx = hi - lo - 1
            if nctx == 0:
                continue
            j = surv_j[i]
            center = surv_w[i]

            pos = processed_start + q_base + j
            alpha = initial_lr * (
                1.0 - np.float64(pos) / np.float64(total_scheduled)
            )
            if alpha < min_lr:
                alpha = min_lr

            base = counter_start + np.uint64(q_base + j) * pos_stride + _ONE
            targets[0] = center
            for k in range(negatives):
                cbase = base + np.uint64(k * ATTEMPT_CAP)
                cand = center
                for a in range(ATTEMPT_CAP):
                    u = _uniform(stream_state, cbase + np.uint64(a))
                    cand = _pick(noise_cum, u)
                    if cand != center:
                        break
                targets[k + 1] = cand

            fn = np.float32(nctx)
            for d in range(dim):
                h[d] = np.float32(0.0)
            for t in range(lo, hi):
                if t == i:
                    continue
                cw = surv_w[t]
                for d in range(dim):
                    h[d] += inp[cw, d]
            for d in range(dim):
                h[d] = h[d] / fn
                grad_h[d] = np.float32(0.0)

            for t_i in range(negatives + 1):
                t = targets[t_i]
                label = 1.0 if t_i == 0 else 0.0
                dot32 = np.float32(0.0)
                for d in range(dim):
                    dot32 += out[t, d] * h[d]
                dot = np.float64(dot32)
                if t_i == 0:
                    loss_sum += _softplus(-dot)
                else:
                    loss_sum += _softplus(dot)
                g = np.float32((label - _sigmoid(dot)) * alpha)
                for d in range(dim):
                    old = out[t, d]
                    out[t, d] = old + g * h[d]
                    grad_h[d] += g * old
            loss_count += negatives + 1
            if not math.isfinite(loss_sum):
                return loss_sum, loss_count, pos

            for d in range(dim):
                grad_h[d] = grad_h[d] / fn
            for t in range(lo, hi):
                if t == i:
                    continue
                cw = surv_w[t]
                for d in range(dim):
                    inp[cw, d] += grad_h[d]

        q_base += slen
    return loss_sum, loss_count, np.int64(-1)


@njit(**NJIT_OPTIONS)
def cosine_scan(units, query):
    v = units.shape[0]
    d = units.shape[1]
    scores = np.empty(v, dtype=np.float64)
    for i in range(v):
        acc = 0.0
        for k in range(d):
            acc += units[i, k] * query[k]
        scores[i] = acc
    return scores

"""Shared fixtures: one-time kernel warm-up and the planted-model factory."""

from __future__ import annotations

import pytest

from triplescore import backend
from triplescore.embedding import EmbeddingConfig, train_cbow


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jit kernels once so timed tests measure math, not the jit.

    With a cold on-disk cache the first numba call costs ~30s; runtime
    budgets are meaningful only after that one-time compile.
    """
    if backend.HAS_NUMBA:
        sentences = [["alpha", "beta", "gamma", "delta"]] * 4
        cfg = EmbeddingConfig(
            dim=4, negatives=2, subsample=1.0, window=2, epochs=1, min_count=1
        )
        model = train_cbow(sentences, cfg, workers=1, backend_name="numba")
        model.most_similar(["alpha"], topn=1)


@pytest.fixture()
def make_model():
    """Factory for models with hand-set float32 vectors."""
    from util import planted_model

    return planted_model

"""Word embeddings: CBOW negative-sampling training plus similarity queries."""

from .model import (
    EmbeddingConfig,
    EmbeddingModel,
    SimilarityHit,
    Vocab,
    analogy,
    cosine,
    load_model,
    most_similar,
    save_model,
)
from .train import (
    build_vocab,
    encode_corpus,
    initial_vectors,
    keep_probability,
    noise_distribution,
    ns_gradients,
    ns_loss,
    sigmoid,
    train_cbow,
)

__all__ = [
    "EmbeddingConfig",
    "EmbeddingModel",
    "SimilarityHit",
    "Vocab",
    "analogy",
    "cosine",
    "load_model",
    "most_similar",
    "save_model",
    "build_vocab",
    "encode_corpus",
    "initial_vectors",
    "keep_probability",
    "noise_distribution",
    "ns_gradients",
    "ns_loss",
    "sigmoid",
    "train_cbow",
]

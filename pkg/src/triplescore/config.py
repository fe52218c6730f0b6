"""Declarative pipeline configuration: `key = value` lines, one file.

Dotted keys address the nested blocks (embedding.dim, propagation.topn);
everything else is a top-level path or scalar.  Relative paths resolve
against the config file's own directory, so a fixture directory is
self-contained.  Defaults reproduce the reference hyperparameters, so an
empty config is a valid full-scale setup.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Iterable

from .embedding import EmbeddingConfig
from .errors import ConfigurationError
from .profession import PropagationConfig

_PATH_KEYS = (
    "corpus",
    "tokens",
    "persons",
    "profession_kb",
    "nationality_kb",
    "profession_train",
    "nationality_train",
    "professions",
    "nationalities",
    "mapping",
    "mapping_overrides",
    "documents",
    "model",
    "profession_state",
    "nationality_state",
    "output_dir",
    "stopwords",
)

_TOP_SCALARS = {
    "split_fraction": float,
    "apply_truncation": bool,
    "backend": str,
    "anchor_country": str,
    "anchor_demonym": str,
}

_EMBEDDING_TYPES = {
    "dim": int,
    "negatives": int,
    "subsample": float,
    "window": int,
    "epochs": int,
    "min_count": int,
    "initial_lr": float,
    "seed": int,
}

_PROPAGATION_TYPES = {
    "topn": int,
    "threshold": float,
    "max_iterations": int,
    "default_score": int,
}

_BOOL_WORDS = {
    "true": True,
    "yes": True,
    "1": True,
    "false": False,
    "no": False,
    "0": False,
}


@dataclass
class PipelineConfig:
    corpus: str | None = None
    tokens: str | None = None
    persons: str | None = None
    profession_kb: str | None = None
    nationality_kb: str | None = None
    profession_train: str | None = None
    nationality_train: str | None = None
    professions: str | None = None
    nationalities: str | None = None
    mapping: str | None = None
    mapping_overrides: str | None = None
    documents: str | None = None
    model: str | None = None
    profession_state: str | None = None
    nationality_state: str | None = None
    output_dir: str = "."
    stopwords: str | None = None
    anchor_country: str = "united_states_of_america"
    anchor_demonym: str = "american"
    embedding: EmbeddingConfig = field(default_factory=EmbeddingConfig)
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    split_fraction: float = 0.7
    apply_truncation: bool = False
    backend: str | None = None  # None/auto -> module default selection

    def __post_init__(self):
        if not 0.0 < self.split_fraction < 1.0:
            raise ConfigurationError("split_fraction must be in (0, 1)")
        if self.backend not in (None, "auto", "numba", "numpy"):
            raise ConfigurationError(
                f"backend must be auto, numba, or numpy, got {self.backend!r}"
            )

    def backend_name(self) -> str | None:
        """Explicit backend for the compute modules; None defers to them."""
        if self.backend in (None, "auto"):
            return None
        return self.backend


def _coerce(key: str, raw: str, kind, lineno: int):
    try:
        if kind is bool:
            word = raw.strip().lower()
            if word not in _BOOL_WORDS:
                raise ValueError(f"not a boolean: {raw!r}")
            return _BOOL_WORDS[word]
        return kind(raw)
    except ValueError as exc:
        raise ConfigurationError(f"line {lineno}: bad value for {key}: {exc}")


def parse_config_lines(
    lines: Iterable[str], base_dir: str = "."
) -> PipelineConfig:
    top: dict = {}
    embedding_kwargs: dict = {}
    propagation_kwargs: dict = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigurationError(
                f"line {lineno}: expected `key = value`, got {text!r}"
            )
        key, _, value = text.partition("=")
        key = key.strip()
        value = value.strip()
        if key.startswith("embedding."):
            name = key[len("embedding.") :]
            if name not in _EMBEDDING_TYPES:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
            embedding_kwargs[name] = _coerce(
                key, value, _EMBEDDING_TYPES[name], lineno
            )
        elif key.startswith("propagation."):
            name = key[len("propagation.") :]
            if name not in _PROPAGATION_TYPES:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
            propagation_kwargs[name] = _coerce(
                key, value, _PROPAGATION_TYPES[name], lineno
            )
        elif key in _PATH_KEYS:
            path = value
            if path and not os.path.isabs(path):
                path = os.path.normpath(os.path.join(base_dir, path))
            top[key] = path
        elif key in _TOP_SCALARS:
            top[key] = _coerce(key, value, _TOP_SCALARS[key], lineno)
        else:
            raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
    try:
        embedding = EmbeddingConfig(**embedding_kwargs)
        propagation = PropagationConfig(**propagation_kwargs)
    except ValueError as exc:
        raise ConfigurationError(str(exc))
    return PipelineConfig(
        embedding=embedding, propagation=propagation, **top
    )


def load_config(path) -> PipelineConfig:
    """Parse a config file; relative paths resolve against its directory."""
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}")
    try:
        return parse_config_lines(lines, base_dir=os.path.dirname(path) or ".")
    except ConfigurationError as exc:
        raise ConfigurationError(f"{path}: {exc}")


def with_seed(config: PipelineConfig, seed: int | None) -> PipelineConfig:
    """Copy of the config with the embedding seed overridden (flag support)."""
    if seed is None:
        return config
    return replace(config, embedding=replace(config.embedding, seed=seed))

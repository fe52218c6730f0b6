"""Embedding model container, similarity queries, and text-format I/O.

Vectors are float32 in memory; the text format stores 9 significant digits,
which round-trips float32 exactly.  Query math (cosine, ranking) runs in
float64 for stable orderings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .. import backend
from ..errors import DataFormatError

VECTOR_FORMAT = "%.9g"  # shortest fixed precision that round-trips float32


@dataclass(frozen=True)
class EmbeddingConfig:
    """Training hyperparameters; defaults follow the reference setup."""

    dim: int = 300
    negatives: int = 15
    subsample: float = 1e-4
    window: int = 5
    epochs: int = 50
    min_count: int = 5
    initial_lr: float = 0.025
    seed: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.negatives < 1:
            raise ValueError("negatives must be >= 1")
        if not 0.0 < self.subsample <= 1.0:
            raise ValueError("subsample must be in (0, 1]")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.min_count < 1:
            raise ValueError("min_count must be >= 1")
        if self.initial_lr <= 0.0:
            raise ValueError("initial_lr must be > 0")


class Vocab:
    """Dense word index with occurrence counts.

    Frequencies are relative to the pre-pruning token total, so subsampling
    probabilities do not shift when rare words are dropped.
    """

    def __init__(self, words: Sequence[str], counts: Sequence[int], total_tokens: int):
        if len(words) != len(counts):
            raise ValueError("words and counts must have equal length")
        self.words = list(words)
        self.counts = np.asarray(counts, dtype=np.int64)
        self.total_tokens = int(total_tokens)
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ValueError("duplicate words in vocabulary")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def lookup(self, word: str) -> int:
        try:
            return self.index[word]
        except KeyError:
            raise KeyError(f"word not in vocabulary: {word!r}") from None

    def frequency(self, word: str) -> float:
        return float(self.counts[self.lookup(word)]) / self.total_tokens


class SimilarityHit(NamedTuple):
    word: str
    score: float


@dataclass
class EmbeddingModel:
    vocab: Vocab
    input_vectors: np.ndarray  # V x dim float32, the word representations
    output_vectors: np.ndarray | None = None  # V x dim float32 context weights
    config: EmbeddingConfig | None = None
    epoch_losses: list = field(default_factory=list)
    _units: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.input_vectors.shape[1]

    def vector(self, word: str) -> np.ndarray:
        return self.input_vectors[self.vocab.lookup(word)]

    def unit_vectors(self) -> np.ndarray:
        """Row-normalized float64 copy of the input vectors (cached)."""
        if self._units is None:
            vecs = self.input_vectors.astype(np.float64)
            norms = np.sqrt((vecs * vecs).sum(axis=1))
            norms[norms == 0.0] = 1.0  # degenerate rows score 0, never rank first
            self._units = vecs / norms[:, None]
        return self._units

    def most_similar(self, words, topn: int = 10):
        return most_similar(words, topn, self)

    def analogy(self, a: str, b: str, c: str):
        return analogy(a, b, c, self)

    def similarity(self, a: str, b: str) -> float:
        return cosine(self.vector(a), self.vector(b))


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of two non-zero vectors, computed in float64."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.sqrt(a @ a))
    nb = float(np.sqrt(b @ b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine undefined for zero-norm vector")
    return float(a @ b) / (na * nb)


def _scan_scores(model: EmbeddingModel, direction: np.ndarray) -> np.ndarray:
    """Cosine of every vocabulary vector against a query direction."""
    norm = float(np.sqrt(direction @ direction))
    if norm == 0.0:
        raise ValueError("cosine undefined for zero-norm query")
    q = direction / norm
    units = model.unit_vectors()
    if backend.ACTIVE == "numba":
        from . import kernels_numba

        return kernels_numba.cosine_scan(units, q)
    from . import kernels_numpy

    return kernels_numpy.cosine_scan(units, q)


def _ranked(scores: np.ndarray, exclude: set, topn: int, model: EmbeddingModel):
    scores = scores.copy()
    for idx in exclude:
        scores[idx] = -np.inf
    # stable sort on negated scores: ties break by ascending vocab index
    order = np.argsort(-scores, kind="stable")
    limit = min(topn, len(model.vocab) - len(exclude))
    hits = []
    for idx in order[:limit]:
        hits.append(SimilarityHit(model.vocab.words[int(idx)], float(scores[idx])))
    return hits


def most_similar(words, topn: int, model: EmbeddingModel):
    """Top-N vocabulary words by cosine to the mean of the query vectors.

    Query words are excluded from the results; ties break by vocabulary
    index.  Raises KeyError naming any out-of-vocabulary query word.
    """
    if isinstance(words, str):
        words = [words]
    if not words:
        raise ValueError("most_similar requires at least one query word")
    if topn < 1:
        raise ValueError("topn must be >= 1")
    indices = [model.vocab.lookup(w) for w in words]
    mean = model.input_vectors[indices].astype(np.float64).mean(axis=0)
    scores = _scan_scores(model, mean)
    return _ranked(scores, set(indices), topn, model)


def analogy(a: str, b: str, c: str, model: EmbeddingModel) -> SimilarityHit:
    """The word (excluding inputs) nearest to vec(a) - vec(b) + vec(c)."""
    ia, ib, ic = (model.vocab.lookup(w) for w in (a, b, c))
    vecs = model.input_vectors
    target = (
        vecs[ia].astype(np.float64)
        - vecs[ib].astype(np.float64)
        + vecs[ic].astype(np.float64)
    )
    scores = _scan_scores(model, target)
    hits = _ranked(scores, {ia, ib, ic}, 1, model)
    if not hits:
        raise ValueError("vocabulary too small for analogy query")
    return hits[0]


def _format_vector(vec: np.ndarray) -> str:
    return " ".join(VECTOR_FORMAT % float(x) for x in vec)


def save_model(model: EmbeddingModel, path) -> None:
    """Write vectors in the text format, plus a .meta sidecar.

    The vectors file is plain ``V dim`` header + one ``word v1 .. vdim``
    line per word, loadable by anything that speaks that format.  The
    sidecar carries what the plain format cannot: the training config,
    vocabulary counts, and output vectors, so a reload reproduces the
    model exactly.  External vector files simply have no sidecar.
    """
    path = str(path)
    vecs = model.input_vectors
    v, dim = vecs.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{v} {dim}\n")
        for i, word in enumerate(model.vocab.words):
            fh.write(f"{word} {_format_vector(vecs[i])}\n")
    with open(path + ".meta", "w", encoding="utf-8") as fh:
        fh.write("format = triplescore-meta-1\n")
        if model.config is not None:
            cfg = model.config
            fh.write(f"dim = {cfg.dim}\n")
            fh.write(f"negatives = {cfg.negatives}\n")
            fh.write(f"subsample = {cfg.subsample!r}\n")
            fh.write(f"window = {cfg.window}\n")
            fh.write(f"epochs = {cfg.epochs}\n")
            fh.write(f"min_count = {cfg.min_count}\n")
            fh.write(f"initial_lr = {cfg.initial_lr!r}\n")
            fh.write(f"seed = {cfg.seed}\n")
        fh.write(f"total_tokens = {model.vocab.total_tokens}\n")
        fh.write("[counts]\n")
        for word, count in zip(model.vocab.words, model.vocab.counts):
            fh.write(f"{word} {int(count)}\n")
        if model.output_vectors is not None:
            fh.write("[output_vectors]\n")
            for i, word in enumerate(model.vocab.words):
                fh.write(f"{word} {_format_vector(model.output_vectors[i])}\n")


def _parse_vector_line(line: str, dim: int, lineno: int, path: str):
    fields = line.rstrip("\n").split(" ")
    if len(fields) != dim + 1:
        raise DataFormatError(
            f"{path}:{lineno}: expected word + {dim} values, got {len(fields)} fields"
        )
    try:
        values = [float(x) for x in fields[1:]]
    except ValueError:
        raise DataFormatError(f"{path}:{lineno}: non-numeric vector value") from None
    return fields[0], values


def load_model(path) -> EmbeddingModel:
    """Load a text-format vector file, restoring the sidecar when present."""
    path = str(path)
    words: list[str] = []
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise DataFormatError(f"{path}:1: header must be 'V dim'")
        try:
            v, dim = int(parts[0]), int(parts[1])
        except ValueError:
            raise DataFormatError(f"{path}:1: header must be 'V dim'") from None
        if v < 1 or dim < 1:
            raise DataFormatError(f"{path}:1: header values must be positive")
        for lineno, line in enumerate(fh, start=2):
            if line.strip() == "":
                continue
            word, values = _parse_vector_line(line, dim, lineno, path)
            words.append(word)
            rows.append(values)
    if len(words) != v:
        raise DataFormatError(
            f"{path}: header declares {v} words, file has {len(words)}"
        )
    if len(set(words)) != len(words):
        raise DataFormatError(f"{path}: duplicate words in vector file")
    input_vectors = np.asarray(rows, dtype=np.float32)

    counts = [1] * v
    total = v
    config = None
    output_vectors = None
    meta_path = path + ".meta"
    try:
        meta_lines = open(meta_path, encoding="utf-8").read().splitlines()
    except FileNotFoundError:
        meta_lines = None
    if meta_lines is not None:
        config, counts, total, output_vectors = _parse_meta(
            meta_lines, words, dim, meta_path
        )
    vocab = Vocab(words, counts, total)
    return EmbeddingModel(
        vocab=vocab,
        input_vectors=input_vectors,
        output_vectors=output_vectors,
        config=config,
    )


def _parse_meta(lines, words, dim, path):
    keys = {}
    count_map = {}
    out_rows = {}
    section = None
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        if line == "[counts]":
            section = "counts"
            continue
        if line == "[output_vectors]":
            section = "output"
            continue
        if section is None:
            if "=" not in line:
                raise DataFormatError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            keys[key.strip()] = value.strip()
        elif section == "counts":
            word, _, count = line.partition(" ")
            try:
                count_map[word] = int(count)
            except ValueError:
                raise DataFormatError(f"{path}:{lineno}: bad count") from None
        else:
            word, values = _parse_vector_line(line, dim, lineno, path)
            out_rows[word] = values

    config = None
    if "dim" in keys:
        try:
            config = EmbeddingConfig(
                dim=int(keys["dim"]),
                negatives=int(keys["negatives"]),
                subsample=float(keys["subsample"]),
                window=int(keys["window"]),
                epochs=int(keys["epochs"]),
                min_count=int(keys["min_count"]),
                initial_lr=float(keys["initial_lr"]),
                seed=int(keys["seed"]),
            )
        except (KeyError, ValueError) as exc:
            raise DataFormatError(f"{path}: bad config block: {exc}") from None
    total = int(keys.get("total_tokens", len(words)))
    counts = [count_map.get(w, 1) for w in words]
    output_vectors = None
    if out_rows:
        missing = [w for w in words if w not in out_rows]
        if missing:
            raise DataFormatError(
                f"{path}: output_vectors missing word {missing[0]!r}"
            )
        output_vectors = np.asarray([out_rows[w] for w in words], dtype=np.float32)
    return config, counts, total, output_vectors

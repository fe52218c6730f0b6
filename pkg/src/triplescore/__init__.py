"""Relevance scoring for person-profession and person-nationality triples.

Pipeline: tokenize an entity-annotated corpus, train CBOW negative-sampling
embeddings, propagate known scores through embedding neighbors to a
fixpoint (professions) or count country mentions in per-person documents
(nationalities), then evaluate with accuracy-within-2, average score
difference, and a per-subject transposition rate.
"""

from . import backend
from .config import PipelineConfig, load_config
from .corpus import (
    AnnotatedSentence,
    AnnotationError,
    CorpusStats,
    PreprocessConfig,
    filter_and_tokenize,
    inject_nationalities,
    join_multiword,
    parse_annotated_sentence,
    preprocess_corpus,
    tokenize_text,
)
from .embedding import (
    EmbeddingConfig,
    EmbeddingModel,
    SimilarityHit,
    Vocab,
    analogy,
    cosine,
    load_model,
    most_similar,
    save_model,
    train_cbow,
)
from .errors import (
    ConfigurationError,
    DataFormatError,
    NumericalError,
    UndefinedMetricError,
)
from .metrics import (
    ScoredPair,
    accuracy,
    average_score_difference,
    evaluation_report,
    kendall_tau,
    truncate_2_5,
)
from .nationality import (
    DirectoryDocumentProvider,
    LearnedNationalities,
    NationalityMapping,
    build_mapping,
    count_occurrences,
    learn_nationalities,
    nationality_scores,
    predict_nationality,
)
from .profession import (
    EvidenceState,
    KnowledgeState,
    LearnResult,
    PropagationConfig,
    ScoredEvidence,
    learn,
    normalize_score,
    predict_profession,
    score_propagation,
)

__version__ = "0.1.0"

__all__ = [
    "AnnotatedSentence",
    "AnnotationError",
    "ConfigurationError",
    "CorpusStats",
    "DataFormatError",
    "DirectoryDocumentProvider",
    "EmbeddingConfig",
    "EmbeddingModel",
    "EvidenceState",
    "KnowledgeState",
    "LearnResult",
    "LearnedNationalities",
    "NationalityMapping",
    "NumericalError",
    "PipelineConfig",
    "PreprocessConfig",
    "PropagationConfig",
    "ScoredEvidence",
    "ScoredPair",
    "SimilarityHit",
    "UndefinedMetricError",
    "Vocab",
    "accuracy",
    "analogy",
    "average_score_difference",
    "backend",
    "build_mapping",
    "cosine",
    "count_occurrences",
    "evaluation_report",
    "filter_and_tokenize",
    "inject_nationalities",
    "join_multiword",
    "kendall_tau",
    "learn",
    "learn_nationalities",
    "load_config",
    "load_model",
    "most_similar",
    "nationality_scores",
    "normalize_score",
    "parse_annotated_sentence",
    "predict_nationality",
    "predict_profession",
    "preprocess_corpus",
    "save_model",
    "score_propagation",
    "tokenize_text",
    "train_cbow",
    "truncate_2_5",
]

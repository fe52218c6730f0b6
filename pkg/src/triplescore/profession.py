"""Person-profession relevance scoring by neighbor score propagation.

Known scores seed a knowledge state; each round copies every known
person's scores, weighted by cosine similarity, onto their top embedding
neighbors above a similarity threshold.  Accumulated evidence per
(person, profession) collapses to the similarity-weighted mean of the
contributed scores, rounded to the nearest integer.  Rounds repeat until
no new person is discovered.  Prediction falls back through neighbor
evidence and profession-similarity counting when the state has no entry.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .embedding import EmbeddingModel
from .errors import ConfigurationError, DataFormatError

log = logging.getLogger(__name__)

GROUND_TRUTH = "ground_truth"
PROPAGATED = "propagated"


def round_half_away(value: float) -> int:
    """Round to the nearest integer with halves away from zero (6.5 -> 7)."""
    if value >= 0:
        return int(math.floor(value + 0.5))
    return -int(math.floor(-value + 0.5))


class ScoredEvidence(NamedTuple):
    """One propagated observation: a score weighted by neighbor similarity."""

    rel_score: float
    sim_score: float


@dataclass(frozen=True)
class PropagationConfig:
    topn: int = 10
    threshold: float = 0.4
    max_iterations: int = 50
    default_score: int = 2  # covers truths 0-4 under the +/-2 accuracy window

    def __post_init__(self):
        if self.topn < 1:
            raise ValueError("topn must be >= 1")
        if not 0.0 <= self.threshold < 1.0:
            raise ValueError("threshold must be in [0, 1)")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not 0 <= self.default_score <= 7:
            raise ValueError("default_score must be in [0, 7]")


@dataclass
class KnowledgeState:
    """person -> (profession -> integer score), with per-person provenance."""

    entries: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def get(self, person: str, profession: str):
        scores = self.entries.get(person)
        if scores is None:
            return None
        return scores.get(profession)

    def person_count(self) -> int:
        return len(self.entries)


@dataclass
class EvidenceState:
    """person -> (profession -> accumulated ScoredEvidence list)."""

    entries: dict = field(default_factory=dict)

    def add(self, person: str, profession: str, evidence: ScoredEvidence) -> None:
        self.entries.setdefault(person, {}).setdefault(profession, []).append(
            evidence
        )


class NormalizationDetail(NamedTuple):
    total_weight: float
    unrounded: float
    score: int


def normalize_score_detail(evidence: Sequence[ScoredEvidence]) -> NormalizationDetail:
    """Weighted-mean collapse of evidence, exposing the intermediate values."""
    if not evidence:
        raise ValueError("normalize_score requires non-empty evidence")
    total = 0.0
    weighted = 0.0
    for item in evidence:
        if item.sim_score <= 0.0:
            raise ValueError("evidence similarity weights must be positive")
        total += item.sim_score
        weighted += item.rel_score * item.sim_score
    unrounded = weighted / total
    score = min(7, max(0, round_half_away(unrounded)))
    return NormalizationDetail(total, unrounded, score)


def normalize_score(evidence: Sequence[ScoredEvidence]) -> int:
    """Similarity-weighted mean of evidence scores, rounded half away from 0."""
    return normalize_score_detail(evidence).score


def score_propagation(
    overall: KnowledgeState, model: EmbeddingModel, config: PropagationConfig
) -> KnowledgeState:
    """One propagation round: spread every person's scores to their neighbors.

    Each source person's full profession list lands as evidence on each of
    their topn nearest vocabulary neighbors with similarity >= threshold
    (the source itself is never its own neighbor).  Evidence is then
    normalized per (person, profession).  Source persons missing from the
    vocabulary are skipped and counted in a warning.
    """
    evidence = EvidenceState()
    skipped = 0
    for person, scores in overall.entries.items():
        if person not in model.vocab:
            skipped += 1
            continue
        for hit in model.most_similar([person], config.topn):
            if hit.score < config.threshold or hit.score <= 0.0:
                continue
            for profession, rel in scores.items():
                evidence.add(
                    hit.word, profession, ScoredEvidence(rel, hit.score)
                )
    new_state = KnowledgeState()
    for person, by_profession in evidence.entries.items():
        new_state.entries[person] = {
            profession: normalize_score(items)
            for profession, items in by_profession.items()
        }
        new_state.provenance[person] = PROPAGATED
    if skipped:
        log.warning(
            "score propagation skipped %d source persons missing from the "
            "embedding vocabulary",
            skipped,
        )
    return new_state


def seed_split_index(n_triples: int, fraction: float = 0.7) -> int:
    """Boundary index of the leading seed share: ceil(fraction * n).

    The epsilon guards against float artifacts like 0.7 * 10 = 7.0000000001
    turning a 7 into an 8.
    """
    if not 0.0 < fraction < 1.0:
        raise ConfigurationError("split fraction must be in (0, 1)")
    return max(1, math.ceil(fraction * n_triples - 1e-9))


class LearnResult(NamedTuple):
    state: KnowledgeState
    iterations: int
    person_counts: list  # distinct persons after each round's merge


def learn(
    train: Iterable,
    model: EmbeddingModel,
    config: PropagationConfig | None = None,
    split_fraction: float = 0.7,
) -> LearnResult:
    """Propagate seeded scores to a fixpoint of the discovered-person count.

    The state is seeded with the leading split_fraction share of the train
    triples (file order), tagged ground truth.  Each round merges only
    brand-new persons from the propagated state, so seeded entries are
    never modified and the person count grows monotonically; the loop
    stops when a round discovers nobody new or max_iterations is reached.
    """
    if config is None:
        config = PropagationConfig()
    triples = list(train)
    if not triples:
        raise ConfigurationError("profession training set is empty")
    cut = seed_split_index(len(triples), split_fraction)
    state = KnowledgeState()
    for person, profession, score in triples[:cut]:
        score = int(score)
        if not 0 <= score <= 7:
            raise DataFormatError(
                f"train score {score} outside [0, 7] for "
                f"({person}, {profession})"
            )
        state.entries.setdefault(person, {})[profession] = score
        state.provenance[person] = GROUND_TRUTH

    iterations = 0
    person_counts: list = []
    while iterations < config.max_iterations:
        n_before = state.person_count()
        new_state = score_propagation(state, model, config)
        iterations += 1
        for person, scores in new_state.entries.items():
            if person in state.entries:
                continue  # existing entries win; rounds only add new persons
            state.entries[person] = scores
            state.provenance[person] = PROPAGATED
        person_counts.append(state.person_count())
        if state.person_count() <= n_before:
            break
    return LearnResult(state, iterations, person_counts)


def _top_similar_professions(
    profession: str,
    candidates: Sequence[str],
    model: EmbeddingModel,
    limit: int = 5,
):
    """The `limit` candidate professions nearest to the target profession."""
    ranked = []
    for candidate in candidates:
        if candidate == profession or candidate not in model.vocab:
            continue
        try:
            sim = model.similarity(profession, candidate)
        except ValueError:  # zero-norm vector: unrankable
            continue
        ranked.append((-sim, model.vocab.lookup(candidate), candidate))
    ranked.sort()
    return [candidate for _, _, candidate in ranked[:limit]]


def predict_profession(
    person: str,
    profession: str,
    state: KnowledgeState,
    model: EmbeddingModel,
    config: PropagationConfig | None = None,
    professions: Sequence[str] | None = None,
) -> int:
    """Score a (person, profession) pair through the fallback chain.

    1. A stored state entry is returned as is.
    2. Otherwise stored scores for this profession among the person's topn
       neighbors are normalized as evidence.
    3. Otherwise the 5 professions most similar to the target are counted
       against the person at the similarity threshold; the count (0-5) is
       the score.  Candidates come from `professions` when given, else from
       the distinct professions in the state.
    4. Person unknown to both state and vocabulary: the default score.
    """
    if config is None:
        config = PropagationConfig()
    stored = state.get(person, profession)
    if stored is not None:
        return stored

    if person in model.vocab:
        evidence = []
        for hit in model.most_similar([person], config.topn):
            if hit.score <= 0.0:
                continue
            neighbor_score = state.get(hit.word, profession)
            if neighbor_score is not None:
                evidence.append(ScoredEvidence(neighbor_score, hit.score))
        if evidence:
            return normalize_score(evidence)

        if professions is None:
            seen = set()
            candidates = []
            for scores in state.entries.values():
                for p in scores:
                    if p not in seen:
                        seen.add(p)
                        candidates.append(p)
        else:
            candidates = list(professions)
        if profession in model.vocab:
            top = _top_similar_professions(profession, candidates, model)
            if top:
                count = 0
                for candidate in top:
                    try:
                        if model.similarity(person, candidate) >= config.threshold:
                            count += 1
                    except ValueError:
                        continue
                return count
        log.warning(
            "no usable profession candidates for (%s, %s); using default",
            person,
            profession,
        )
        return config.default_score

    log.debug(
        "person %r absent from state and vocabulary; using default", person
    )
    return config.default_score


def save_state(state: KnowledgeState, path) -> None:
    """Write `person TAB profession TAB score TAB provenance` rows, sorted."""
    rows = []
    for person, scores in state.entries.items():
        origin = state.provenance.get(person, PROPAGATED)
        for profession, score in scores.items():
            rows.append((person, profession, score, origin))
    rows.sort()
    with open(path, "w", encoding="utf-8") as fh:
        for person, profession, score, origin in rows:
            fh.write(f"{person}\t{profession}\t{score}\t{origin}\n")


def load_state(path) -> KnowledgeState:
    """Read a state file written by save_state."""
    state = KnowledgeState()
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 4:
                raise DataFormatError(
                    f"{path}:{lineno}: expected 4 tab-separated fields, "
                    f"got {len(fields)}"
                )
            person, profession, score_text, origin = fields
            try:
                score = int(score_text)
            except ValueError:
                raise DataFormatError(
                    f"{path}:{lineno}: non-integer score {score_text!r}"
                ) from None
            if not 0 <= score <= 7:
                raise DataFormatError(
                    f"{path}:{lineno}: score {score} outside [0, 7]"
                )
            if origin not in (GROUND_TRUTH, PROPAGATED):
                raise DataFormatError(
                    f"{path}:{lineno}: unknown provenance {origin!r}"
                )
            state.entries.setdefault(person, {})[profession] = score
            state.provenance[person] = origin
    return state

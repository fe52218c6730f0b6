"""Evaluation measures for scored triples: ACC, ASD, TAU, and truncation.

ACC is the fraction of predictions within +/-2 of truth.  ASD is the mean
absolute score difference.  TAU is a per-subject transposition rate over
pairs of triples whose truths are strictly ordered (prediction ties count
half), averaged across subjects; like ASD, larger is worse.  truncate_2_5
clamps a prediction into [2, 5], which can never break the +/-2 window
around any truth in [0, 7].
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .errors import UndefinedMetricError


class ScoredPair(NamedTuple):
    subject: str
    object: str
    predicted: float
    truth: float


def _require_pairs(pairs: Sequence[ScoredPair], metric: str) -> None:
    if not pairs:
        raise UndefinedMetricError(f"{metric} is undefined on an empty pair set")


def accuracy(pairs: Sequence[ScoredPair]) -> float:
    """Fraction of pairs with |predicted - truth| <= 2 (boundary counts)."""
    _require_pairs(pairs, "accuracy")
    hits = sum(1 for p in pairs if abs(p.predicted - p.truth) <= 2)
    return hits / len(pairs)


def average_score_difference(pairs: Sequence[ScoredPair]) -> float:
    """Mean of |predicted - truth|."""
    _require_pairs(pairs, "average score difference")
    return sum(abs(p.predicted - p.truth) for p in pairs) / len(pairs)


def kendall_tau(pairs: Sequence[ScoredPair]) -> float:
    """Mean per-subject transposition rate; truth ties are not scored.

    Within a subject, every unordered pair of triples with strictly
    ordered truths contributes 1 when the predictions order them the
    opposite way, 0.5 when the predictions tie, and 0 otherwise.  Subjects
    without any strictly ordered truth pair are skipped; if that skips
    everyone the metric is undefined.
    """
    _require_pairs(pairs, "kendall tau")
    by_subject: dict = {}
    for pair in pairs:
        by_subject.setdefault(pair.subject, []).append(pair)
    taus = []
    for items in by_subject.values():
        considered = 0
        contribution = 0.0
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                a, b = items[i], items[j]
                if a.truth == b.truth:
                    continue
                considered += 1
                lo, hi = (a, b) if a.truth < b.truth else (b, a)
                if lo.predicted > hi.predicted:
                    contribution += 1.0
                elif lo.predicted == hi.predicted:
                    contribution += 0.5
        if considered:
            taus.append(contribution / considered)
    if not taus:
        raise UndefinedMetricError(
            "kendall tau is undefined: no subject has two triples with "
            "distinct truth scores"
        )
    return sum(taus) / len(taus)


def truncate_2_5(score):
    """Clamp a score in [0, 7] into [2, 5]."""
    if not 0 <= score <= 7:
        raise ValueError(f"score {score!r} outside [0, 7]")
    return min(5, max(2, score))


def metrics_line(variant: str, pairs: Sequence[ScoredPair]) -> str:
    """One machine-readable report line of all three metrics."""
    acc = accuracy(pairs)
    asd = average_score_difference(pairs)
    tau = kendall_tau(pairs)
    subjects = len({p.subject for p in pairs})
    return (
        f"variant={variant} ACC={acc:.4f} ASD={asd:.4f} TAU={tau:.4f} "
        f"n_triples={len(pairs)} n_subjects={subjects}"
    )


def evaluation_report(pairs: Sequence[ScoredPair]) -> str:
    """Raw and 2-5-truncated metrics side by side, one line each."""
    truncated = [
        ScoredPair(p.subject, p.object, truncate_2_5(p.predicted), p.truth)
        for p in pairs
    ]
    return "\n".join(
        [metrics_line("raw", pairs), metrics_line("truncated", truncated)]
    )

"""ACC, ASD, TAU, and score truncation."""

from __future__ import annotations

import random

import pytest

from triplescore.errors import UndefinedMetricError
from triplescore.metrics import (
    ScoredPair,
    accuracy,
    average_score_difference,
    evaluation_report,
    kendall_tau,
    metrics_line,
    truncate_2_5,
)


def _pairs(rows):
    """(predicted, truth) tuples -> ScoredPair list under one subject."""
    return [
        ScoredPair("s", f"o{i}", pred, truth)
        for i, (pred, truth) in enumerate(rows)
    ]


# ------------------------------------------------------------------ accuracy


def test_accuracy_boundary_difference_counts_as_hit():
    assert accuracy(_pairs([(4, 6)])) == 1.0
    assert accuracy(_pairs([(4, 7)])) == 0.0


def test_accuracy_mixed_fraction():
    assert accuracy(_pairs([(0, 7), (3, 3), (5, 3), (0, 3)])) == 0.5


def test_accuracy_exhaustive_grid():
    # enumerate every (predicted, truth) cell in {0..7} x {0..7}
    cells = [(p, t) for p in range(8) for t in range(8)]
    hits = sum(1 for p, t in cells if abs(p - t) <= 2)
    assert hits == 34
    assert accuracy(_pairs(cells)) == pytest.approx(34 / 64)


def test_accuracy_empty_is_undefined():
    with pytest.raises(UndefinedMetricError):
        accuracy([])


# ----------------------------------------------------------------------- asd


def test_asd_examples():
    assert average_score_difference(_pairs([(7, 7)])) == 0.0
    assert average_score_difference(_pairs([(0, 7), (7, 0)])) == 7.0
    assert average_score_difference(_pairs([(1, 3), (6, 2)])) == 3.0


def test_asd_empty_is_undefined():
    with pytest.raises(UndefinedMetricError):
        average_score_difference([])


# ----------------------------------------------------------------------- tau


def test_tau_identical_rankings_score_zero():
    assert kendall_tau(_pairs([(1, 1), (3, 3), (5, 5)])) == 0.0


def test_tau_single_transposition_scores_one():
    assert kendall_tau(_pairs([(5, 1), (1, 5)])) == 1.0


def test_tau_prediction_tie_counts_half():
    # truths 1 < 3 < 5; predictions tie the first two: one half-penalty
    # over three considered pairs
    got = kendall_tau(_pairs([(2, 1), (2, 3), (6, 5)]))
    assert got == pytest.approx(0.5 / 3, abs=1e-12)
    assert got == pytest.approx(0.1667, abs=5e-5)


def test_tau_truth_ties_are_not_considered():
    # only the (truth 1, truth 5) pair is scored; it is concordant
    assert kendall_tau(_pairs([(4, 1), (2, 1), (6, 5)])) == 0.0


def test_tau_averages_per_subject_not_per_pair():
    pairs = [
        # subject a: one considered pair, transposed -> 1.0
        ScoredPair("a", "o1", 5, 1),
        ScoredPair("a", "o2", 1, 5),
        # subject b: three considered pairs, all concordant -> 0.0
        ScoredPair("b", "o1", 1, 1),
        ScoredPair("b", "o2", 2, 3),
        ScoredPair("b", "o3", 3, 5),
    ]
    assert kendall_tau(pairs) == 0.5


def test_tau_skips_subjects_without_ordered_truths():
    pairs = [
        ScoredPair("a", "o1", 5, 1),
        ScoredPair("a", "o2", 1, 5),
        ScoredPair("flat", "o1", 0, 4),
        ScoredPair("flat", "o2", 7, 4),
        ScoredPair("lone", "o1", 3, 3),
    ]
    assert kendall_tau(pairs) == 1.0


def test_tau_undefined_when_every_subject_is_flat():
    pairs = [
        ScoredPair("a", "o1", 0, 4),
        ScoredPair("a", "o2", 7, 4),
        ScoredPair("b", "o1", 3, 3),
    ]
    with pytest.raises(UndefinedMetricError):
        kendall_tau(pairs)
    with pytest.raises(UndefinedMetricError):
        kendall_tau([])


def test_tau_invariant_under_increasing_prediction_transform():
    r = random.Random(17)
    for _ in range(20):
        rows = [(r.randint(0, 7), r.randint(0, 7)) for _ in range(8)]
        if len({t for _, t in rows}) < 2:
            continue
        base = kendall_tau(_pairs(rows))
        squeezed = kendall_tau(_pairs([(2 * p + 1, t) for p, t in rows]))
        assert squeezed == pytest.approx(base, abs=1e-12)


def test_metrics_invariant_under_pair_permutation():
    r = random.Random(18)
    rows = [(r.randint(0, 7), r.randint(0, 7)) for _ in range(12)]
    pairs = _pairs(rows)
    shuffled = pairs[:]
    r.shuffle(shuffled)
    assert accuracy(shuffled) == accuracy(pairs)
    assert average_score_difference(shuffled) == average_score_difference(pairs)
    assert kendall_tau(shuffled) == pytest.approx(kendall_tau(pairs), abs=1e-12)


# ---------------------------------------------------------------- truncation


def test_truncate_examples():
    assert truncate_2_5(0) == 2
    assert truncate_2_5(2) == 2
    assert truncate_2_5(3) == 3
    assert truncate_2_5(5) == 5
    assert truncate_2_5(7) == 5


@pytest.mark.parametrize("bad", [-1, 8, 7.5, -0.1])
def test_truncate_rejects_out_of_range(bad):
    with pytest.raises(ValueError):
        truncate_2_5(bad)


def test_truncation_never_breaks_an_accuracy_hit():
    # over the whole 8x8 grid: clamping into [2, 5] keeps every |diff| <= 2
    # cell a hit, so truncated accuracy can only improve
    for p in range(8):
        for t in range(8):
            if abs(p - t) <= 2:
                assert abs(truncate_2_5(p) - t) <= 2
    cells = _pairs([(p, t) for p in range(8) for t in range(8)])
    truncated = _pairs(
        [(truncate_2_5(p.predicted), p.truth) for p in cells]
    )
    assert accuracy(truncated) >= accuracy(cells)


def test_truncation_can_only_shrink_error_when_truth_is_central():
    for t in range(2, 6):
        for p in range(8):
            assert abs(truncate_2_5(p) - t) <= abs(p - t)


# ----------------------------------------------------------------- reporting


def test_metrics_line_format():
    pairs = [
        ScoredPair("a", "o1", 1, 1),
        ScoredPair("a", "o2", 6, 2),
        ScoredPair("b", "o1", 0, 3),
        ScoredPair("b", "o2", 4, 6),
    ]
    line = metrics_line("raw", pairs)
    assert line == (
        "variant=raw ACC=0.5000 ASD=2.2500 TAU=0.0000 "
        "n_triples=4 n_subjects=2"
    )


def test_evaluation_report_has_raw_and_truncated_lines():
    pairs = [
        ScoredPair("a", "o1", 7, 1),
        ScoredPair("a", "o2", 0, 5),
    ]
    report = evaluation_report(pairs)
    raw_line, truncated_line = report.splitlines()
    assert raw_line.startswith("variant=raw ")
    assert truncated_line.startswith("variant=truncated ")
    assert "ACC=0.0000" in raw_line
    # truncation pulls 7 -> 5 and 0 -> 2: |5-1|=4 misses, |2-5|=3 misses,
    # but both transpositions survive
    assert "ACC=0.0000" in truncated_line
    assert "TAU=1.0000" in raw_line
    assert "TAU=1.0000" in truncated_line
    assert "ASD=5.5000" in raw_line
    assert "ASD=3.5000" in truncated_line
"""Command-line pipeline: file readers, exit codes, and small stage runs."""

from __future__ import annotations

import pytest

from triplescore.cli import (
    main,
    read_kb_file,
    read_raw_terms,
    read_train_file,
    read_value_list,
)
from triplescore.embedding import EmbeddingConfig, save_model, train_cbow
from triplescore.errors import DataFormatError
from triplescore.nationality import LearnedNationalities, save_learned


# ------------------------------------------------------------------- readers


def test_read_value_list_normalizes_and_skips_blanks(tmp_path):
    path = tmp_path / "values.txt"
    path.write_text("Ada Lovelace\n\n  New York City  \nsinger\n")
    assert read_value_list(path) == ["ada_lovelace", "new_york_city", "singer"]


def test_read_raw_terms_lowercases_without_joining(tmp_path):
    path = tmp_path / "terms.txt"
    path.write_text("United States\nCanada\n\n")
    assert read_raw_terms(path) == ["united states", "canada"]


def test_read_kb_file_normalizes_both_columns(tmp_path):
    path = tmp_path / "kb.tsv"
    path.write_text("Ada Lovelace\tComputer Scientist\nbob\tsinger\n")
    assert read_kb_file(path) == [
        ("ada_lovelace", "computer_scientist"),
        ("bob", "singer"),
    ]


def test_read_kb_file_rejects_wrong_field_count(tmp_path):
    path = tmp_path / "kb.tsv"
    path.write_text("ada\tsinger\n\nada\tsinger\textra\n")
    with pytest.raises(DataFormatError) as err:
        read_kb_file(path)
    assert f"{path}:3:" in str(err.value)


def test_read_train_file_valid_rows(tmp_path):
    path = tmp_path / "train.tsv"
    path.write_text("Ada Lovelace\tsinger\t7\n\nbob\tpolitician\t0\n")
    assert read_train_file(path) == [
        ("ada_lovelace", "singer", 7),
        ("bob", "politician", 0),
    ]


@pytest.mark.parametrize(
    "row, fragment",
    [
        ("ada\tsinger\t8", "outside [0, 7]"),
        ("ada\tsinger\t-1", "outside [0, 7]"),
        ("ada\tsinger\tseven", "non-integer score"),
        ("ada\tsinger", "got 2 fields"),
    ],
)
def test_read_train_file_rejects_bad_rows(tmp_path, row, fragment):
    path = tmp_path / "train.tsv"
    path.write_text(row + "\n")
    with pytest.raises(DataFormatError) as err:
        read_train_file(path)
    assert fragment in str(err.value)
    assert f"{path}:1:" in str(err.value)


# ---------------------------------------------------------------- exit codes


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert main(["evaluate", "--help"]) == 0
    capsys.readouterr()


def test_usage_problems_exit_one(capsys):
    assert main([]) == 1
    assert main(["frobnicate"]) == 1
    capsys.readouterr()


def test_missing_config_file_exits_one(tmp_path, capsys):
    code = main(["preprocess", "--config", str(tmp_path / "nope.cfg")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_missing_artifact_names_its_producer(tmp_path, capsys):
    cfg = tmp_path / "pipeline.cfg"
    cfg.write_text(f"output_dir = {tmp_path}\n")
    assert main(["train-embeddings", "--config", str(cfg)]) == 1
    err = capsys.readouterr().err
    assert "token corpus not found" in err
    assert "preprocess" in err

    assert main(["predict-nationality", "--config", str(cfg)]) == 1
    err = capsys.readouterr().err
    assert "model file not found" in err
    assert "train-embeddings" in err


def test_bad_worker_count_exits_one(tmp_path, capsys):
    cfg = tmp_path / "pipeline.cfg"
    (tmp_path / "corpus.tokens").write_text("alpha beta\nbeta alpha\n")
    cfg.write_text(f"output_dir = {tmp_path}\nembedding.min_count = 1\n")
    assert main(["train-embeddings", "--config", str(cfg), "--workers", "0"]) == 1
    assert "--workers" in capsys.readouterr().err


def _write_eval_files(tmp_path, pred_rows, gold_rows):
    pred = tmp_path / "pred.tsv"
    gold = tmp_path / "gold.tsv"
    pred.write_text("".join(f"{r}\n" for r in pred_rows))
    gold.write_text("".join(f"{r}\n" for r in gold_rows))
    return str(pred), str(gold)


def test_evaluate_bad_score_exits_two(tmp_path, capsys):
    pred, gold = _write_eval_files(
        tmp_path, ["ada\tsinger\t9"], ["ada\tsinger\t7"]
    )
    assert main(["evaluate", pred, gold, "--output", str(tmp_path)]) == 2
    assert "outside [0, 7]" in capsys.readouterr().err


def test_evaluate_missing_prediction_exits_two(tmp_path, capsys):
    pred, gold = _write_eval_files(
        tmp_path,
        ["ada\tsinger\t7"],
        ["ada\tsinger\t7", "bob\tsinger\t2"],
    )
    assert main(["evaluate", pred, gold, "--output", str(tmp_path)]) == 2
    assert "no prediction for (bob, singer)" in capsys.readouterr().err


def test_evaluate_undefined_ranking_exits_two(tmp_path, capsys):
    # one triple per subject: no within-subject ordered pair anywhere
    pred, gold = _write_eval_files(
        tmp_path, ["ada\tsinger\t7"], ["ada\tsinger\t7"]
    )
    assert main(["evaluate", pred, gold, "--output", str(tmp_path)]) == 2
    assert "undefined" in capsys.readouterr().err


# ----------------------------------------------------------------- stage runs


def test_preprocess_writes_tokens_and_stats(tmp_path, capsys):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text(
        "A [Ada_Lovelace|Ada] sang in [Canada|Canada].\n"
        "broken [unclosed span\n"
        "the\n"
    )
    stopwords = tmp_path / "stopwords.txt"
    stopwords.write_text("a\nin\nthe\n")
    out = tmp_path / "out"
    cfg = tmp_path / "pipeline.cfg"
    cfg.write_text(
        f"corpus = {corpus}\nstopwords = {stopwords}\noutput_dir = {out}\n"
    )
    assert main(["preprocess", "--config", str(cfg)]) == 0
    tokens = (out / "corpus.tokens").read_text()
    assert tokens == "ada_lovelace sang canada\n"
    stdout = capsys.readouterr().out
    assert "lines_read=3" in stdout
    assert "sentences=1" in stdout
    assert "dropped=1" in stdout
    assert "malformed=1" in stdout
    assert "mentions=2" in stdout


def _nationality_fixture(tmp_path):
    """Config dir where predict-nationality can answer from the learned table."""
    out = tmp_path / "out"
    out.mkdir()
    sentences = [["anna", "canada", "trip"], ["boris", "france", "trip"]] * 3
    model = train_cbow(
        sentences,
        EmbeddingConfig(
            dim=4, negatives=2, subsample=1.0, window=2, epochs=1, min_count=1,
            initial_lr=0.05, seed=7,
        ),
        workers=1,
    )
    save_model(model, out / "model.txt")
    learned = LearnedNationalities(
        scores={"anna": {"canada": 7, "france": 1}}, absent=["boris"], failures=0
    )
    save_learned(learned, out / "nationality_state.tsv")
    (tmp_path / "nationalities.txt").write_text("canada\nfrance\n")
    (tmp_path / "queries.tsv").write_text("anna\tcanada\nanna\tfrance\n")
    cfg = tmp_path / "pipeline.cfg"
    cfg.write_text(
        "nationalities = nationalities.txt\n"
        "nationality_kb = queries.tsv\n"
        "output_dir = out\n"
    )
    return cfg, out


def test_predict_nationality_answers_from_learned_table(tmp_path, capsys):
    cfg, out = _nationality_fixture(tmp_path)
    assert main(["predict-nationality", "--config", str(cfg)]) == 0
    rows = (out / "nationality_predictions.tsv").read_text()
    assert rows == "anna\tcanada\t7\nanna\tfrance\t1\n"
    capsys.readouterr()


def test_predict_nationality_truncate_clamps_scores(tmp_path, capsys):
    cfg, out = _nationality_fixture(tmp_path)
    assert main(["predict-nationality", "--config", str(cfg), "--truncate"]) == 0
    rows = (out / "nationality_predictions.tsv").read_text()
    assert rows == "anna\tcanada\t5\nanna\tfrance\t2\n"
    capsys.readouterr()


def test_predict_nationality_holdout_writes_gold_tail(tmp_path, capsys):
    cfg, out = _nationality_fixture(tmp_path)
    train = tmp_path / "nationality_train.tsv"
    train.write_text(
        "anna\tcanada\t7\n"
        "anna\tfrance\t1\n"
        "boris\tfrance\t6\n"
        "boris\tcanada\t0\n"
    )
    with open(cfg, "a", encoding="utf-8") as fh:
        fh.write("nationality_train = nationality_train.tsv\n")
    assert main(["predict-nationality", "--config", str(cfg), "--holdout"]) == 0
    # split 0.7 of 4 rows keeps 3 for learning; the tail is the last row
    gold = (out / "nationality_holdout_gold.tsv").read_text()
    assert gold == "boris\tcanada\t0\n"
    predictions = (out / "nationality_predictions.tsv").read_text()
    assert predictions.count("\n") == 1
    assert predictions.startswith("boris\tcanada\t")
    capsys.readouterr()


def test_evaluate_writes_report_file(tmp_path, capsys):
    pred, gold = _write_eval_files(
        tmp_path,
        ["ada\tsinger\t7", "ada\tpolitician\t0"],
        ["ada\tsinger\t7", "ada\tpolitician\t0"],
    )
    assert main(["evaluate", pred, gold, "--output", str(tmp_path)]) == 0
    report = (tmp_path / "evaluate_report.txt").read_text()
    # truncation pulls 7 -> 5 and 0 -> 2; both stay inside the +/-2 window
    assert report == (
        "variant=raw ACC=1.0000 ASD=0.0000 TAU=0.0000 "
        "n_triples=2 n_subjects=1\n"
        "variant=truncated ACC=1.0000 ASD=2.0000 TAU=0.0000 "
        "n_triples=2 n_subjects=1\n"
    )
    stdout = capsys.readouterr().out
    assert "variant=raw" in stdout
    assert "variant=truncated" in stdout
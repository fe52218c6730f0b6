"""Pipeline orchestration: one subcommand per stage, plain-text artifacts.

    preprocess          annotated corpus -> token corpus + stats
    train-embeddings    token corpus -> model file
    build-mapping       model + country list -> country/demonym mapping
    learn-profession    model + train triples -> propagated state file
    predict-profession  state + query pairs -> prediction TSV
    learn-nationality   documents + mapping -> learned score file
    predict-nationality learned scores + model + queries -> prediction TSV
    evaluate            predictions vs gold -> metrics report

Exit codes: 0 success, 1 usage/configuration, 2 data/format, 3 numerical.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import corpus as corpus_mod
from . import metrics as metrics_mod
from . import nationality as nat_mod
from . import profession as prof_mod
from .config import PipelineConfig, load_config, with_seed
from .embedding import load_model, save_model, train_cbow
from .errors import (
    ConfigurationError,
    DataFormatError,
    NumericalError,
    UndefinedMetricError,
)

TOKENS_NAME = "corpus.tokens"
MODEL_NAME = "model.txt"
MAPPING_NAME = "mapping.tsv"
PROFESSION_STATE_NAME = "profession_state.tsv"
NATIONALITY_STATE_NAME = "nationality_state.tsv"
REPORT_NAME = "evaluate_report.txt"


# ---------------------------------------------------------------- file readers


def read_value_list(path) -> list:
    """One value per line, normalized to joined lowercase tokens."""
    path = str(path)
    values = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            token = corpus_mod.join_multiword(line.strip())
            if token:
                values.append(token)
    return values


def read_raw_terms(path) -> list:
    """One value per line, lowercased but unjoined (for multi-word joining)."""
    path = str(path)
    terms = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            term = line.strip().lower()
            if term:
                terms.append(term)
    return terms


def read_kb_file(path) -> list:
    """`person<TAB>value` rows, normalized, order preserved."""
    path = str(path)
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise DataFormatError(
                    f"{path}:{lineno}: expected `person<TAB>value`, "
                    f"got {len(fields)} fields"
                )
            rows.append(
                (
                    corpus_mod.join_multiword(fields[0]),
                    corpus_mod.join_multiword(fields[1]),
                )
            )
    return rows


def read_train_file(path) -> list:
    """`person<TAB>value<TAB>score` rows with scores in [0, 7], normalized."""
    path = str(path)
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise DataFormatError(
                    f"{path}:{lineno}: expected `person<TAB>value<TAB>score`, "
                    f"got {len(fields)} fields"
                )
            try:
                score = int(fields[2])
            except ValueError:
                raise DataFormatError(
                    f"{path}:{lineno}: non-integer score {fields[2]!r}"
                ) from None
            if not 0 <= score <= 7:
                raise DataFormatError(
                    f"{path}:{lineno}: score {score} outside [0, 7]"
                )
            rows.append(
                (
                    corpus_mod.join_multiword(fields[0]),
                    corpus_mod.join_multiword(fields[1]),
                    score,
                )
            )
    return rows


# ------------------------------------------------------------------- plumbing


def _output_dir(cfg: PipelineConfig, args) -> str:
    directory = args.output or cfg.output_dir
    os.makedirs(directory, exist_ok=True)
    return directory


def _artifact(explicit, outdir: str, default_name: str) -> str:
    return explicit if explicit else os.path.join(outdir, default_name)


def _require(path, what: str, producer: str | None = None) -> str:
    if path is None:
        raise ConfigurationError(
            f"no {what} configured"
            + (f"; set it in the config file or run `{producer}`" if producer else "")
        )
    if not os.path.exists(path):
        hint = f"; produce it with the `{producer}` subcommand" if producer else ""
        raise ConfigurationError(f"{what} not found: {path}{hint}")
    return str(path)


def _stopwords(cfg: PipelineConfig) -> frozenset:
    if cfg.stopwords:
        return corpus_mod.load_stopwords(_require(cfg.stopwords, "stopword file"))
    return corpus_mod.default_stopwords()


def _multiword_terms(cfg: PipelineConfig) -> tuple:
    terms = []
    for path in (cfg.professions, cfg.nationalities):
        if path:
            terms.extend(read_raw_terms(_require(path, "value list")))
    return tuple(terms)


def _workers(args) -> int:
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigurationError("--workers must be >= 1")
        return args.workers
    return os.cpu_count() or 1


def _load_model(cfg: PipelineConfig, outdir: str):
    path = _artifact(cfg.model, outdir, MODEL_NAME)
    return load_model(_require(path, "model file", "train-embeddings"))


def _holdout_tail(train_path: str, split_fraction: float) -> list:
    triples = read_train_file(train_path)
    cut = prof_mod.seed_split_index(len(triples), split_fraction)
    tail = triples[cut:]
    if not tail:
        raise ConfigurationError(
            f"holdout split of {train_path} is empty "
            f"({len(triples)} rows, fraction {split_fraction})"
        )
    return tail


def _write_rows(path: str, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write("\t".join(str(x) for x in row) + "\n")


# ---------------------------------------------------------------- subcommands


def cmd_preprocess(cfg: PipelineConfig, args) -> int:
    outdir = _output_dir(cfg, args)
    corpus_path = _require(cfg.corpus, "annotated corpus file")
    mapping = {}
    if cfg.mapping and os.path.exists(cfg.mapping):
        mapping = nat_mod.load_mapping(cfg.mapping).pairs
    pre = corpus_mod.PreprocessConfig(
        stopwords=_stopwords(cfg),
        nationality_mapping=mapping,
        multiword_terms=_multiword_terms(cfg),
    )
    tokens_path = _artifact(cfg.tokens, outdir, TOKENS_NAME)
    with open(corpus_path, encoding="utf-8") as fh:
        sentences, stats = corpus_mod.preprocess_corpus(fh, pre)
        with open(tokens_path, "w", encoding="utf-8") as out:
            for tokens in sentences:
                out.write(" ".join(tokens) + "\n")
    print(
        f"tokens={tokens_path} lines_read={stats.lines_read} "
        f"sentences={stats.sentences} dropped={stats.dropped} "
        f"malformed={stats.malformed} mentions={stats.mentions}"
    )
    return 0


def cmd_train_embeddings(cfg: PipelineConfig, args) -> int:
    outdir = _output_dir(cfg, args)
    tokens_path = _require(
        _artifact(cfg.tokens, outdir, TOKENS_NAME),
        "token corpus",
        "preprocess",
    )
    with open(tokens_path, encoding="utf-8") as fh:
        sentences = [line.split() for line in fh if line.strip()]
    cfg = with_seed(cfg, args.seed)
    model = train_cbow(
        sentences,
        cfg.embedding,
        workers=_workers(args),
        backend_name=cfg.backend_name(),
    )
    model_path = _artifact(cfg.model, outdir, MODEL_NAME)
    save_model(model, model_path)
    print(
        f"model={model_path} vocab={len(model.vocab)} dim={model.dim} "
        f"epochs={len(model.epoch_losses)} "
        f"final_loss={model.epoch_losses[-1]:.6f}"
    )
    return 0


def cmd_build_mapping(cfg: PipelineConfig, args) -> int:
    outdir = _output_dir(cfg, args)
    model = _load_model(cfg, outdir)
    countries = read_raw_terms(
        _require(cfg.nationalities, "nationality list file")
    )
    overrides = None
    if cfg.mapping_overrides:
        overrides = nat_mod.load_mapping(
            _require(cfg.mapping_overrides, "mapping override file")
        ).pairs
    mapping = nat_mod.build_mapping(
        countries,
        model,
        (cfg.anchor_country, cfg.anchor_demonym),
        overrides=overrides,
    )
    mapping_path = _artifact(cfg.mapping, outdir, MAPPING_NAME)
    nat_mod.save_mapping(mapping, mapping_path)
    print(
        f"mapping={mapping_path} mapped={len(mapping.pairs)} "
        f"unmapped={len(mapping.unmapped)}"
    )
    return 0


def cmd_learn_profession(cfg: PipelineConfig, args) -> int:
    outdir = _output_dir(cfg, args)
    model = _load_model(cfg, outdir)
    triples = read_train_file(
        _require(cfg.profession_train, "profession train file")
    )
    result = prof_mod.learn(
        triples, model, cfg.propagation, cfg.split_fraction
    )
    state_path = _artifact(cfg.profession_state, outdir, PROFESSION_STATE_NAME)
    prof_mod.save_state(result.state, state_path)
    entries = sum(len(s) for s in result.state.entries.values())
    print(
        f"state={state_path} iterations={result.iterations} "
        f"persons={result.state.person_count()} entries={entries}"
    )
    return 0


def cmd_predict_profession(cfg: PipelineConfig, args) -> int:
    outdir = _output_dir(cfg, args)
    model = _load_model(cfg, outdir)
    state_path = _artifact(cfg.profession_state, outdir, PROFESSION_STATE_NAME)
    state = prof_mod.load_state(
        _require(state_path, "profession state file", "learn-profession")
    )
    if args.holdout:
        tail = _holdout_tail(
            _require(cfg.profession_train, "profession train file"),
            cfg.split_fraction,
        )
        queries = [(person, value) for person, value, _ in tail]
        gold_path = os.path.join(outdir, "profession_holdout_gold.tsv")
        _write_rows(gold_path, tail)
        print(f"gold={gold_path} n={len(tail)}")
    else:
        queries = read_kb_file(
            _require(cfg.profession_kb, "profession query file")
        )
    professions = (
        read_value_list(_require(cfg.professions, "profession list file"))
        if cfg.professions
        else None
    )
    truncate = cfg.apply_truncation or args.truncate
    rows = []
    for person, value in queries:
        score = prof_mod.predict_profession(
            person, value, state, model, cfg.propagation, professions
        )
        if truncate:
            score = metrics_mod.truncate_2_5(score)
        rows.append((person, value, score))
    out_path = os.path.join(outdir, "profession_predictions.tsv")
    _write_rows(out_path, rows)
    print(f"predictions={out_path} n={len(rows)} truncated={truncate}")
    return 0


def cmd_learn_nationality(cfg: PipelineConfig, args) -> int:
    outdir = _output_dir(cfg, args)
    persons = read_value_list(_require(cfg.persons, "persons file"))
    provider = nat_mod.DirectoryDocumentProvider(
        _require(cfg.documents, "document directory")
    )
    raw_countries = read_raw_terms(
        _require(cfg.nationalities, "nationality list file")
    )
    mapping_path = _artifact(cfg.mapping, outdir, MAPPING_NAME)
    mapping = nat_mod.load_mapping(
        _require(mapping_path, "nationality mapping file", "build-mapping")
    )
    pre = corpus_mod.PreprocessConfig(
        stopwords=_stopwords(cfg),
        multiword_terms=tuple(raw_countries),
    )
    learned = nat_mod.learn_nationalities(
        persons, provider, raw_countries, mapping, pre
    )
    state_path = _artifact(
        cfg.nationality_state, outdir, NATIONALITY_STATE_NAME
    )
    nat_mod.save_learned(learned, state_path)
    print(
        f"state={state_path} scored={len(learned.scores)} "
        f"absent={len(learned.absent)} failures={learned.failures}"
    )
    return 0


def cmd_predict_nationality(cfg: PipelineConfig, args) -> int:
    outdir = _output_dir(cfg, args)
    model = _load_model(cfg, outdir)
    state_path = _artifact(
        cfg.nationality_state, outdir, NATIONALITY_STATE_NAME
    )
    learned = nat_mod.load_learned(
        _require(state_path, "learned nationality file", "learn-nationality")
    )
    all_nationalities = read_value_list(
        _require(cfg.nationalities, "nationality list file")
    )
    if args.holdout:
        tail = _holdout_tail(
            _require(cfg.nationality_train, "nationality train file"),
            cfg.split_fraction,
        )
        queries = [(person, value) for person, value, _ in tail]
        gold_path = os.path.join(outdir, "nationality_holdout_gold.tsv")
        _write_rows(gold_path, tail)
        print(f"gold={gold_path} n={len(tail)}")
    else:
        queries = read_kb_file(
            _require(cfg.nationality_kb, "nationality query file")
        )
    truncate = cfg.apply_truncation or args.truncate
    rows = []
    for person, value in queries:
        score = nat_mod.predict_nationality(
            person, value, learned.scores, model, all_nationalities
        )
        if truncate:
            score = metrics_mod.truncate_2_5(score)
        rows.append((person, value, score))
    out_path = os.path.join(outdir, "nationality_predictions.tsv")
    _write_rows(out_path, rows)
    print(f"predictions={out_path} n={len(rows)} truncated={truncate}")
    return 0


def cmd_evaluate(cfg: PipelineConfig, args) -> int:
    outdir = _output_dir(cfg, args)
    predictions = read_train_file(_require(args.predictions, "prediction file"))
    gold = read_train_file(_require(args.gold, "gold file"))
    predicted = {}
    for person, value, score in predictions:
        predicted[(person, value)] = score
    pairs = []
    for person, value, truth in gold:
        key = (person, value)
        if key not in predicted:
            raise DataFormatError(
                f"{args.predictions}: no prediction for ({person}, {value})"
            )
        pairs.append(
            metrics_mod.ScoredPair(person, value, predicted[key], truth)
        )
    report = metrics_mod.evaluation_report(pairs)
    report_path = os.path.join(outdir, REPORT_NAME)
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(report + "\n")
    print(report)
    return 0


# ----------------------------------------------------------------- entrypoint


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="pipeline config file")
    common.add_argument(
        "--workers",
        type=int,
        metavar="N",
        help="parallel workers (default: processor count; 1 = deterministic)",
    )
    common.add_argument(
        "--seed", type=int, metavar="N", help="override the embedding seed"
    )
    common.add_argument(
        "--truncate",
        action="store_true",
        help="clamp predicted scores into [2, 5]",
    )
    common.add_argument(
        "--output", metavar="DIR", help="output directory (default from config)"
    )

    parser = argparse.ArgumentParser(
        prog="triplescore",
        description="Score person-profession and person-nationality triples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser(
        "preprocess", parents=[common], help="tokenize the annotated corpus"
    ).set_defaults(func=cmd_preprocess)
    sub.add_parser(
        "train-embeddings", parents=[common], help="train the CBOW model"
    ).set_defaults(func=cmd_train_embeddings)
    sub.add_parser(
        "build-mapping",
        parents=[common],
        help="derive the country-demonym mapping by analogy",
    ).set_defaults(func=cmd_build_mapping)
    sub.add_parser(
        "learn-profession",
        parents=[common],
        help="propagate profession scores to a fixpoint",
    ).set_defaults(func=cmd_learn_profession)

    pp = sub.add_parser(
        "predict-profession",
        parents=[common],
        help="score person-profession queries",
    )
    pp.add_argument(
        "--holdout",
        action="store_true",
        help="query the held-out train split and write its gold file",
    )
    pp.set_defaults(func=cmd_predict_profession)

    sub.add_parser(
        "learn-nationality",
        parents=[common],
        help="count nationality mentions in per-person documents",
    ).set_defaults(func=cmd_learn_nationality)

    pn = sub.add_parser(
        "predict-nationality",
        parents=[common],
        help="score person-nationality queries",
    )
    pn.add_argument(
        "--holdout",
        action="store_true",
        help="query the held-out train split and write its gold file",
    )
    pn.set_defaults(func=cmd_predict_nationality)

    ev = sub.add_parser(
        "evaluate",
        parents=[common],
        help="compare a prediction TSV against a gold TSV",
    )
    ev.add_argument("predictions", help="prediction TSV (person, value, score)")
    ev.add_argument("gold", help="gold TSV (person, value, score)")
    ev.set_defaults(func=cmd_evaluate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; the contract reserves 2 for
        # data errors, so usage maps to 1 (and --help stays 0).
        return 0 if exc.code in (0, None) else 1
    try:
        cfg = load_config(args.config) if args.config else PipelineConfig()
        return args.func(cfg, args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataFormatError, UndefinedMetricError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: missing file: {exc.filename}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()

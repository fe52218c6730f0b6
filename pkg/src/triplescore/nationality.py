"""Person-nationality scoring from per-person documents plus a fallback.

The primary path counts how often each country (and its demonym) appears
in a person's document, scales the counts so the most frequent nationality
gets 7, and rounds.  Persons without a document fall back to embedding
similarity against the nationality tokens, normalized by the best
non-negative similarity.  The country -> demonym mapping itself comes from
vector analogies anchored on one known pair, with a static override file
taking precedence.
"""

from __future__ import annotations

import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Sequence

from .corpus import PreprocessConfig, join_multiword, tokenize_text
from .embedding import EmbeddingModel, cosine
from .errors import ConfigurationError, DataFormatError
from .profession import round_half_away

log = logging.getLogger(__name__)


@dataclass
class NationalityMapping:
    """country token -> demonym token, plus countries left unmapped."""

    pairs: dict = field(default_factory=dict)
    unmapped: list = field(default_factory=list)

    def __post_init__(self):
        self.pairs = {
            join_multiword(c): join_multiword(d) for c, d in self.pairs.items()
        }
        for country, demonym in self.pairs.items():
            if not demonym:
                raise ValueError(f"empty demonym for country {country!r}")


def build_mapping(
    countries: Sequence[str],
    model: EmbeddingModel,
    anchor: tuple,
    overrides: Mapping | None = None,
) -> NationalityMapping:
    """Map each country to its demonym by vector analogy from one anchor.

    For country c the demonym is the word nearest to
    vec(anchor_demonym) - vec(anchor_country) + vec(c), inputs excluded.
    Override entries win without consulting the model, and the anchor pair
    itself is taken as given (its analogy query degenerates to the anchor
    demonym, which is excluded as an input).  Out-of-vocabulary countries
    are recorded as unmapped, not fatal.
    """
    anchor_country = join_multiword(anchor[0])
    anchor_demonym = join_multiword(anchor[1])
    override_map = {
        join_multiword(c): join_multiword(d)
        for c, d in (overrides or {}).items()
    }
    for token in (anchor_country, anchor_demonym):
        if token not in model.vocab:
            raise ConfigurationError(
                f"anchor token {token!r} missing from the vector vocabulary"
            )
    pairs: dict = {}
    unmapped: list = []
    for raw in countries:
        country = join_multiword(raw)
        if country in pairs:
            continue
        if country in override_map:
            pairs[country] = override_map[country]
        elif country == anchor_country:
            pairs[country] = anchor_demonym
        elif country not in model.vocab:
            unmapped.append(country)
        else:
            hit = model.analogy(anchor_demonym, anchor_country, country)
            pairs[country] = hit.word
    if unmapped:
        log.warning(
            "%d countries missing from the vocabulary were left unmapped",
            len(unmapped),
        )
    return NationalityMapping(pairs, unmapped)


def count_occurrences(
    document: str,
    countries: Sequence[str],
    mapping: NationalityMapping,
    config: PreprocessConfig,
) -> dict:
    """Token counts per nationality over a preprocessed document.

    The document is tokenized with digits stripped; the count for a
    nationality pools its country token and its mapped demonym token.
    """
    counts = Counter(tokenize_text(document, config, strip_digits=True))
    table = {}
    for raw in countries:
        country = join_multiword(raw)
        total = counts.get(country, 0)
        demonym = mapping.pairs.get(country)
        if demonym and demonym != country:
            total += counts.get(demonym, 0)
        table[country] = total
    return table


def nationality_scores(table: Mapping) -> dict:
    """Scale counts so the per-person maximum scores 7, rounding halves up.

    All-zero tables stay all zero.
    """
    maximum = max(table.values(), default=0)
    if maximum <= 0:
        return {country: 0 for country in table}
    return {
        country: round_half_away(7.0 * count / maximum)
        for country, count in table.items()
    }


class DirectoryDocumentProvider:
    """Documents as one UTF-8 text file per person, filename = person token."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def lookup(self, person: str):
        """Document text for a person, or None when no file exists."""
        if not person or os.sep in person or person in (".", ".."):
            return None
        try:
            return (self.directory / person).read_text(encoding="utf-8")
        except FileNotFoundError:
            return None


class LearnedNationalities(NamedTuple):
    scores: dict  # person -> (country -> score 0-7)
    absent: list  # persons with no document
    failures: int  # lookups that failed with an I/O error (subset of absent)


def learn_nationalities(
    persons: Iterable[str],
    provider,
    countries: Sequence[str],
    mapping: NationalityMapping,
    config: PreprocessConfig,
) -> LearnedNationalities:
    """Count-and-score every person with a document; list the rest as absent.

    A provider I/O failure for one person demotes that person to absent and
    is tallied, never fatal.
    """
    scores: dict = {}
    absent: list = []
    failures = 0
    for person in persons:
        try:
            document = provider.lookup(person)
        except OSError as exc:
            log.warning("document lookup failed for %r: %s", person, exc)
            failures += 1
            absent.append(person)
            continue
        if document is None:
            absent.append(person)
            continue
        scores[person] = nationality_scores(
            count_occurrences(document, countries, mapping, config)
        )
    return LearnedNationalities(scores, absent, failures)


def predict_nationality(
    person: str,
    nationality: str,
    learned: Mapping,
    model: EmbeddingModel,
    all_nationalities: Sequence[str],
) -> int:
    """Stored score when the person was learned, else similarity fallback.

    The fallback cosines the person against every nationality token,
    discards negative similarities, and scales by the maximum remaining
    one so the best nationality scores 7.  Out-of-vocabulary nationalities
    count as similarity 0; an out-of-vocabulary person (or all-negative
    similarities) scores 0.
    """
    table = learned.get(person)
    if table is not None:
        return table.get(nationality, 0)

    if person not in model.vocab:
        log.warning(
            "person %r has no learned nationalities and no vector; scoring 0",
            person,
        )
        return 0

    person_vec = model.vector(person)

    def similarity(token: str) -> float:
        if token not in model.vocab:
            return 0.0
        try:
            return cosine(person_vec, model.vector(token))
        except ValueError:
            return 0.0

    kept = [s for s in map(similarity, all_nationalities) if s >= 0.0]
    if not kept:
        log.warning(
            "all nationality similarities negative for %r; scoring 0", person
        )
        return 0
    s_max = max(kept)
    s_query = similarity(nationality)
    if s_query < 0.0 or s_max <= 0.0:
        return 0
    return min(7, max(0, round_half_away(7.0 * s_query / s_max)))


def save_mapping(mapping: NationalityMapping, path) -> None:
    """Write `country TAB demonym` rows, sorted by country."""
    with open(path, "w", encoding="utf-8") as fh:
        for country in sorted(mapping.pairs):
            fh.write(f"{country}\t{mapping.pairs[country]}\n")


def load_mapping(path) -> NationalityMapping:
    path = str(path)
    pairs: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise DataFormatError(
                    f"{path}:{lineno}: expected `country<TAB>demonym`"
                )
            pairs[fields[0]] = fields[1]
    return NationalityMapping(pairs)


def save_learned(learned: LearnedNationalities, path) -> None:
    """Write `person TAB country TAB score` rows (zeros included), sorted.

    Zero rows are kept so that a person whose document mentions no country
    still reads back as learned (all-zero) rather than falling through to
    the similarity fallback.  Absent persons go to the `.absent` sidecar.
    """
    path = str(path)
    rows = []
    for person, table in learned.scores.items():
        for country, score in table.items():
            rows.append((person, country, score))
    rows.sort()
    with open(path, "w", encoding="utf-8") as fh:
        for person, country, score in rows:
            fh.write(f"{person}\t{country}\t{score}\n")
    with open(path + ".absent", "w", encoding="utf-8") as fh:
        for person in sorted(learned.absent):
            fh.write(f"{person}\n")


def load_learned(path) -> LearnedNationalities:
    """Read a learned-nationality file and its `.absent` sidecar."""
    path = str(path)
    scores: dict = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise DataFormatError(
                    f"{path}:{lineno}: expected `person<TAB>country<TAB>score`"
                )
            person, country, score_text = fields
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
            scores.setdefault(person, {})[country] = score
    absent: list = []
    try:
        with open(path + ".absent", encoding="utf-8") as fh:
            absent = [line.strip() for line in fh if line.strip()]
    except FileNotFoundError:
        pass
    return LearnedNationalities(scores, absent, 0)

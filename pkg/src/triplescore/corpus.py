"""Annotated-corpus parsing and token preprocessing.

The training corpus is UTF-8 text, one sentence per line, where entity
mentions appear as ``[Canonical_Name|surface form]`` spans.  Parsing
replaces each span with its canonical single-word term; tokenization then
lowercases, splits punctuation, joins configured multi-word terms with
underscores, removes stopwords, and appends demonyms after country names
so that nationality context lands inside the training window.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

# Underscore is entity glue and never punctuation.  Hyphens and slashes
# separate words ("Canadian-American" must count as both nationalities);
# everything else is stripped in place ("O'Brien" -> "obrien") so that
# entity tokens stay atomic and file-normalized names match corpus tokens.
SEPARATOR_CHARS = "-‐‑‒–—/"
STRIP_CHARS = "".join(
    c for c in string.punctuation if c not in SEPARATOR_CHARS and c != "_"
)
DIGIT_CHARS = string.digits


class AnnotationError(ValueError):
    """Malformed mention span; carries the byte offset of the problem."""

    def __init__(self, message: str, line: str, char_offset: int):
        self.byte_offset = len(line[:char_offset].encode("utf-8"))
        super().__init__(f"{message} at byte {self.byte_offset}")


class Mention(NamedTuple):
    canonical: str
    surface: str
    start: int  # char offset of the canonical term in the replaced text


@dataclass
class AnnotatedSentence:
    raw_text: str
    text: str  # raw_text with every span replaced by its canonical term
    mentions: list[Mention]


@dataclass
class CorpusStats:
    lines_read: int = 0
    sentences: int = 0
    dropped: int = 0
    malformed: int = 0
    mentions: int = 0


def parse_annotated_sentence(line: str) -> AnnotatedSentence:
    """Replace ``[Canonical|surface]`` spans and collect mentions in order.

    The grammar is strict: brackets and pipes are reserved for spans, so a
    stray, nested, or unclosed delimiter raises AnnotationError with the
    byte offset of the offending character.  Callers may skip such lines.
    """
    parts: list[str] = []
    mentions: list[Mention] = []
    out_len = 0
    i, n = 0, len(line)
    while i < n:
        ch = line[i]
        if ch == "[":
            close = line.find("]", i + 1)
            if close < 0:
                raise AnnotationError("unclosed '['", line, i)
            body = line[i + 1 : close]
            if "[" in body:
                raise AnnotationError("nested '['", line, i + 1 + body.index("["))
            pipe = body.find("|")
            if pipe < 0:
                raise AnnotationError("span without '|'", line, i)
            canonical, surface = body[:pipe], body[pipe + 1 :]
            if "|" in surface:
                raise AnnotationError(
                    "second '|' in span", line, i + 2 + pipe + surface.index("|")
                )
            if not canonical or not surface:
                raise AnnotationError("empty side in span", line, i)
            if any(c.isspace() for c in canonical):
                raise AnnotationError("whitespace in canonical name", line, i)
            mentions.append(Mention(canonical, surface, out_len))
            parts.append(canonical)
            out_len += len(canonical)
            i = close + 1
        elif ch in "]|":
            raise AnnotationError(f"stray {ch!r} outside span", line, i)
        else:
            parts.append(ch)
            out_len += 1
            i += 1
    return AnnotatedSentence(raw_text=line, text="".join(parts), mentions=mentions)


def render_annotated(sentence: AnnotatedSentence) -> str:
    """Rebuild the original line from the replaced text and its mentions."""
    parts = []
    pos = 0
    for m in sentence.mentions:
        parts.append(sentence.text[pos : m.start])
        parts.append(f"[{m.canonical}|{m.surface}]")
        pos = m.start + len(m.canonical)
    parts.append(sentence.text[pos:])
    return "".join(parts)


def join_multiword(term: str) -> str:
    """Lowercase a term and join internal whitespace runs with '_'."""
    return "_".join(term.lower().split())


@dataclass
class PreprocessConfig:
    """Tokenization settings shared by corpus and document preprocessing."""

    stopwords: frozenset = frozenset()
    punctuation: str = STRIP_CHARS
    separators: str = SEPARATOR_CHARS
    nationality_mapping: dict = field(default_factory=dict)
    multiword_terms: tuple = ()
    _term_index: dict = field(init=False, repr=False, default_factory=dict)
    _char_table: dict = field(init=False, repr=False, default_factory=dict)

    def __post_init__(self):
        self.stopwords = frozenset(w.lower() for w in self.stopwords)
        terms = []
        for term in self.multiword_terms:
            words = tuple(term.lower().split())
            if len(words) >= 2:
                terms.append(words)
        self.multiword_terms = tuple(terms)
        for words in terms:
            joined = "_".join(words)
            if joined in self.stopwords:
                raise ValueError(f"multi-word term {joined!r} collides with a stopword")
            self._term_index.setdefault(words[0], []).append(words)
        for cands in self._term_index.values():
            cands.sort(key=len, reverse=True)  # greedy longest match
        table = {ord(c): " " for c in self.separators}
        table.update((ord(c), None) for c in self.punctuation)
        self._char_table = table
        self.nationality_mapping = {
            join_multiword(c): join_multiword(d)
            for c, d in self.nationality_mapping.items()
        }


def _join_terms(tokens: list[str], index: dict) -> list[str]:
    if not index:
        return tokens
    out = []
    i, n = 0, len(tokens)
    while i < n:
        matched = None
        for words in index.get(tokens[i], ()):
            if i + len(words) <= n and tuple(tokens[i : i + len(words)]) == words:
                matched = words
                break
        if matched:
            out.append("_".join(matched))
            i += len(matched)
        else:
            out.append(tokens[i])
            i += 1
    return out


def tokenize_text(
    text: str, config: PreprocessConfig, strip_digits: bool = False
) -> list[str]:
    """Lowercase, split punctuation, join multi-word terms, drop stopwords.

    Multi-word terms are joined before stopword removal: country and
    profession names may contain stopwords ("united states OF america")
    that must survive until joining.
    """
    table = config._char_table
    if strip_digits:
        table = dict(table)
        table.update((ord(c), None) for c in DIGIT_CHARS)
    tokens = text.lower().translate(table).split()
    tokens = _join_terms(tokens, config._term_index)
    return [
        t for t in tokens if t not in config.stopwords and t.strip("_") != ""
    ]


def filter_and_tokenize(
    sentence: AnnotatedSentence, config: PreprocessConfig
) -> list[str] | None:
    """Token list for one parsed sentence, or None when < 2 tokens survive."""
    tokens = tokenize_text(sentence.text, config)
    if len(tokens) < 2:
        return None
    return tokens


def inject_nationalities(tokens: list[str], mapping: dict) -> list[str]:
    """Insert the demonym immediately after each mapped country token."""
    if not mapping:
        return list(tokens)
    out = []
    for tok in tokens:
        out.append(tok)
        demonym = mapping.get(tok)
        if demonym is not None:
            out.append(demonym)
    return out


def preprocess_corpus(
    lines: Iterable[str], config: PreprocessConfig
) -> tuple[Iterator[list[str]], CorpusStats]:
    """Stream token sentences from raw corpus lines.

    Returns the sentence iterator plus a stats object that fills in as the
    stream is consumed; memory use is constant in corpus size.  Malformed
    lines are counted and skipped.  Sentences are dropped when the raw text
    has fewer than two words or when fewer than two tokens survive
    filtering.
    """
    stats = CorpusStats()

    def generate():
        for line in lines:
            line = line.rstrip("\r\n")
            stats.lines_read += 1
            try:
                sentence = parse_annotated_sentence(line)
            except AnnotationError:
                stats.malformed += 1
                continue
            stats.mentions += len(sentence.mentions)
            if len(sentence.text.split()) < 2:
                stats.dropped += 1
                continue
            tokens = filter_and_tokenize(sentence, config)
            if tokens is None:
                stats.dropped += 1
                continue
            stats.sentences += 1
            yield inject_nationalities(tokens, config.nationality_mapping)

    return generate(), stats


def parse_stopword_lines(lines: Iterable[str]) -> frozenset:
    """One token per line; blanks and # comments skipped."""
    words = set()
    for line in lines:
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def load_stopwords(path) -> frozenset:
    """Read a stopword file, one token per line."""
    with open(path, encoding="utf-8") as fh:
        return parse_stopword_lines(fh)


def default_stopwords() -> frozenset:
    """The packaged English stopword list."""
    from importlib import resources

    text = (
        resources.files("triplescore")
        .joinpath("data")
        .joinpath("stopwords.txt")
        .read_text(encoding="utf-8")
    )
    return parse_stopword_lines(text.splitlines())

"""Citation query formation and retrieval of reference spans.

Four query strategies are supported: the full citation text, the
highest-idf keywords, noun-phrase chunks, and noun phrases expanded with a
flat synonym dictionary. Retrieval scores every contiguous sentence window
of the reference article against the query vector and returns the top
non-overlapping spans.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .corpus import Article, Citation
from .errors import EmptyQuery
from .textproc import (
    IdfTable,
    PivotParams,
    SparseVector,
    cosine,
    tokenize,
    vectorize,
)

__all__ = [
    "QueryStrategy",
    "ReferenceSpan",
    "CitationContext",
    "strip_citation_markers",
    "extract_noun_phrases",
    "build_citation_query",
    "retrieve_reference_spans",
    "load_synonyms",
]

DEFAULT_TOP_K = 10
DEFAULT_WINDOW = 3
DEFAULT_SPANS_PER_CITATION = 2

# parenthesized author-year groups: "(Serrano et al., 1997)", "(see Smith, 2001; Doe, 2002)"
_AUTHOR_YEAR_RE = re.compile(r"\((?=[^()]*\b[12][0-9]{3}[a-z]?\b)[^()]*\)")
# bracketed or parenthesized numeric groups: "[12,13]", "[3-5]", "(7)"
_BRACKET_NUM_RE = re.compile(r"\[\s*\d+(?:\s*[,;–-]\s*\d+)*\s*\]")
_PAREN_NUM_RE = re.compile(r"\(\s*\d+(?:\s*[,;–-]\s*\d+)*\s*\)")
# superscript-style references
_SUPERSCRIPT_RE = re.compile(r"[⁰¹²³⁴-⁹]+")

_WORD_OR_PUNCT_RE = re.compile(r"[A-Za-z0-9]+(?:[-'][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")
_NUMERIC_RE = re.compile(r"^[0-9.,%]+$")


@dataclass(frozen=True)
class QueryStrategy:
    """Citation vector formation strategy.

    kind is one of full_text, keyword_idf, noun_phrase, concept_expanded.
    """

    kind: str
    top_k: int = DEFAULT_TOP_K
    synonyms: dict[str, tuple[str, ...]] | None = None

    KINDS = ("full_text", "keyword_idf", "noun_phrase", "concept_expanded")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown strategy '{self.kind}'")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")


@dataclass(frozen=True)
class ReferenceSpan:
    """Contiguous run of reference-article sentences scored against one citation."""

    sentence_indices: tuple[int, ...]
    score: float
    source_citation_id: str

    @property
    def start(self) -> int:
        return self.sentence_indices[0]

    @property
    def end(self) -> int:
        return self.sentence_indices[-1]


@dataclass(frozen=True)
class CitationContext:
    citation_id: str
    spans: tuple[ReferenceSpan, ...]


def strip_citation_markers(text: str) -> str:
    """Remove author-year parentheticals, bracketed/parenthesized numeric
    references, and superscript reference digits. Surrounding text is
    untouched (whitespace around markers is preserved as-is)."""
    text = _AUTHOR_YEAR_RE.sub("", text)
    text = _BRACKET_NUM_RE.sub("", text)
    text = _PAREN_NUM_RE.sub("", text)
    text = _SUPERSCRIPT_RE.sub("", text)
    return text


def extract_noun_phrases(
    text: str,
    stopwords: frozenset[str],
    verbs: frozenset[str],
) -> list[str]:
    """Chunk maximal runs of content words into candidate noun phrases.

    A run breaks at punctuation, stopwords, verb-lexicon entries, verbs by
    the -ize/-ate/-ify suffix heuristic, and purely numeric tokens. No POS
    tagger is involved; phrases come back lowercased.
    """
    phrases: list[str] = []
    current: list[str] = []

    def flush():
        if current:
            phrases.append(" ".join(current))
            current.clear()

    for raw in _WORD_OR_PUNCT_RE.findall(text):
        tok = raw.lower()
        if not raw[0].isalnum():
            flush()
            continue
        is_verb = tok in verbs or any(
            tok.endswith(suf) or tok.endswith(suf + "s") or tok.endswith(suf + "d")
            for suf in ("ize", "ate", "ify")
        )
        if tok in stopwords or is_verb or _NUMERIC_RE.match(tok):
            flush()
        else:
            current.append(tok)
    flush()
    return phrases


def load_synonyms(path) -> dict[str, tuple[str, ...]]:
    """Read a flat synonym dictionary: ``term<TAB>syn1|syn2|...`` per line."""
    table: dict[str, tuple[str, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            term, _, syns = line.partition("\t")
            table[term.strip().lower()] = tuple(
                s.strip().lower() for s in syns.split("|") if s.strip()
            )
    return table


def build_citation_query(
    citation: Citation,
    strategy: QueryStrategy,
    idf: IdfTable,
    pivot: PivotParams,
    stopwords: frozenset[str] = frozenset(),
    verbs: frozenset[str] = frozenset(),
) -> SparseVector:
    """Turn a citation into a query vector under the chosen strategy."""
    stripped = strip_citation_markers(citation.text)

    if strategy.kind in ("full_text", "keyword_idf"):
        tokens = tokenize(stripped, stopwords=stopwords, drop_numeric=True)
        if strategy.kind == "keyword_idf":
            ranked = sorted(set(tokens), key=lambda t: (-idf.idf(t), t))
            keep = set(ranked[: strategy.top_k])
            tokens = [t for t in tokens if t in keep]
    else:
        phrases = extract_noun_phrases(stripped, stopwords=stopwords, verbs=verbs)
        tokens = [t for p in phrases for t in p.split()]
        if strategy.kind == "concept_expanded":
            synonyms = strategy.synonyms or {}
            expansions: list[str] = []
            seen_tokens = set(tokens)
            for phrase in phrases + sorted(seen_tokens):
                for syn in synonyms.get(phrase, ()):
                    expansions.extend(syn.split())
            tokens = tokens + expansions

    if not tokens:
        raise EmptyQuery(f"no query terms survive filtering for citation {citation.id}")
    return vectorize(tokens, idf, pivot)


def retrieve_reference_spans(
    query: SparseVector,
    reference: Article,
    idf: IdfTable,
    pivot: PivotParams,
    k: int = DEFAULT_SPANS_PER_CITATION,
    window: int = DEFAULT_WINDOW,
    citation_id: str = "",
) -> CitationContext:
    """Rank all contiguous sentence windows of length 1..window by cosine
    similarity to the query and keep the top-k non-overlapping spans.

    Ties break by earlier start index, then shorter span. Deterministic.
    """
    if not query:
        raise EmptyQuery("query vector is empty")
    sentences = reference.sentences
    if not sentences:
        raise ValueError("reference article has no sentences; split it first")
    if k < 1 or window < 1:
        raise ValueError("k and window must be >= 1")

    candidates = []
    for start in range(len(sentences)):
        tokens: list[str] = []
        for length in range(1, window + 1):
            end = start + length - 1
            if end >= len(sentences):
                break
            tokens = tokens + list(sentences[end].tokens)
            score = cosine(query, vectorize(tokens, idf, pivot))
            candidates.append((score, start, length))

    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))

    chosen: list[ReferenceSpan] = []
    covered: set[int] = set()
    for score, start, length in candidates:
        indices = tuple(range(start, start + length))
        if covered.intersection(indices):
            continue
        chosen.append(
            ReferenceSpan(
                sentence_indices=indices, score=score, source_citation_id=citation_id
            )
        )
        covered.update(indices)
        if len(chosen) >= k:
            break
    return CitationContext(citation_id=citation_id, spans=tuple(chosen))

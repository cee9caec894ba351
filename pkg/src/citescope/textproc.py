"""Lexical substrate: sentence splitting, tokenization, idf, pivoted tf-idf vectors.

Every downstream module (context retrieval, grouping, ranking, baselines,
evaluation) builds on the primitives here. All operations are pure and the
returned objects are safe to share across workers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from importlib import resources

__all__ = [
    "Sentence",
    "IdfTable",
    "SparseVector",
    "PivotParams",
    "split_sentences",
    "tokenize",
    "compute_idf",
    "vectorize",
    "cosine",
    "load_lexicon",
    "default_stopwords",
    "default_abbreviations",
    "default_verbs",
]

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_NUMERIC_RE = re.compile(r"^[0-9.,%]+$")
_TERMINATORS = ".!?"


@dataclass(frozen=True)
class Sentence:
    """One sentence of an article, with character offsets into the raw text."""

    article_id: str
    index: int
    text: str
    char_start: int
    char_end: int
    tokens: tuple[str, ...] = ()


@dataclass(frozen=True)
class PivotParams:
    """Pivoted length normalization: slope in [0,1] around the average length."""

    slope: float = 0.2
    avg_doc_len: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.slope <= 1.0:
            raise ValueError(f"slope must be in [0,1], got {self.slope}")
        if self.avg_doc_len <= 0:
            raise ValueError(f"avg_doc_len must be positive, got {self.avg_doc_len}")


class IdfTable:
    """Document frequencies with smoothed idf: ln((N+1)/(df+1)) + 1.

    Immutable after construction; unseen terms get the maximal idf
    (df = 0), so weights stay finite and strictly positive.
    """

    def __init__(self, doc_count: int, df: dict[str, int]):
        self.doc_count = doc_count
        self._df = dict(df)

    def df(self, term: str) -> int:
        return self._df.get(term, 0)

    def idf(self, term: str) -> float:
        return math.log((self.doc_count + 1) / (self.df(term) + 1)) + 1.0

    def terms(self):
        return self._df.keys()

    def __len__(self):
        return len(self._df)


class SparseVector:
    """Term -> weight map with a cached L2 norm. Zero weights are never stored."""

    __slots__ = ("weights", "norm")

    def __init__(self, weights: dict[str, float]):
        self.weights = {t: w for t, w in weights.items() if w != 0.0}
        self.norm = math.sqrt(sum(w * w for w in self.weights.values()))

    def __bool__(self):
        return bool(self.weights)

    def __len__(self):
        return len(self.weights)

    def dot(self, other: "SparseVector") -> float:
        a, b = self.weights, other.weights
        if len(b) < len(a):
            a, b = b, a
        return sum(w * b[t] for t, w in a.items() if t in b)

    @staticmethod
    def centroid(vectors: list["SparseVector"]) -> "SparseVector":
        """Arithmetic mean of the given vectors."""
        acc: dict[str, float] = {}
        for v in vectors:
            for t, w in v.weights.items():
                acc[t] = acc.get(t, 0.0) + w
        n = len(vectors)
        return SparseVector({t: w / n for t, w in acc.items()} if n else {})


def cosine(a: SparseVector, b: SparseVector) -> float:
    """Cosine similarity in [0, 1]; 0 whenever either vector is zero."""
    if a.norm == 0.0 or b.norm == 0.0:
        return 0.0
    value = a.dot(b) / (a.norm * b.norm)
    # guard against rounding just above 1
    return min(1.0, max(0.0, value))


def load_lexicon(path) -> frozenset[str]:
    """Read a lexicon file: one entry per line, '#' comments, UTF-8."""
    entries = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                entries.add(line)
    return frozenset(entries)


def _bundled(name: str) -> frozenset[str]:
    ref = resources.files("citescope.data").joinpath(name)
    entries = set()
    for line in ref.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.add(line)
    return frozenset(entries)


def default_stopwords() -> frozenset[str]:
    return _bundled("stopwords.txt")


def default_abbreviations() -> frozenset[str]:
    return _bundled("abbreviations.txt")


def default_verbs() -> frozenset[str]:
    return _bundled("verbs.txt")


def split_sentences(
    text: str,
    abbrev_lexicon: frozenset[str] | set[str] = frozenset(),
    article_id: str = "",
) -> list[Sentence]:
    """Rule-based sentence boundary detection.

    A terminator (. ! ?) ends a sentence unless it sits inside parentheses
    or brackets, is immediately followed by a lowercase continuation, or
    completes an abbreviation from the lexicon. Offsets always satisfy
    ``sentence.text == text[char_start:char_end]`` and jointly cover every
    non-whitespace character.
    """
    if not text.strip():
        return []

    # abbreviation suffixes that must not be split after, keyed without
    # trailing period for comparison against the text ending at the period
    abbrevs = {a[:-1] if a.endswith(".") else a for a in abbrev_lexicon}

    boundaries = []
    depth = 0
    n = len(text)
    for i, ch in enumerate(text):
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth = max(0, depth - 1)
        if ch not in _TERMINATORS or depth > 0:
            continue
        # run of terminators: only the last one may close the sentence
        if i + 1 < n and text[i + 1] in _TERMINATORS:
            continue
        # find the next non-space character
        j = i + 1
        while j < n and text[j] in " \t":
            j += 1
        at_end = j >= n or text[j] == "\n"
        if not at_end:
            if j == i + 1:  # no whitespace after terminator: not a boundary
                continue
            if text[j].islower():
                continue
        if ch == ".":
            # word ending at this period, e.g. "Fig" for "Fig."
            k = i
            while k > 0 and not text[k - 1].isspace() and text[k - 1] not in "([{":
                k -= 1
            word = text[k:i]
            if word in abbrevs or (word and len(word) == 1 and word.isupper()):
                continue
            # multi-word abbreviations such as "et al."
            tail = text[max(0, k - 8):i]
            if any(a.endswith(word) and tail.endswith(a) for a in abbrevs if " " in a):
                continue
        boundaries.append(i + 1)

    if not boundaries or boundaries[-1] < n:
        boundaries.append(n)

    sentences = []
    start = 0
    for end in boundaries:
        raw = text[start:end]
        lstrip = len(raw) - len(raw.lstrip())
        rstrip = len(raw) - len(raw.rstrip())
        s, e = start + lstrip, end - rstrip
        if e > s:
            sentences.append(
                Sentence(
                    article_id=article_id,
                    index=len(sentences),
                    text=text[s:e],
                    char_start=s,
                    char_end=e,
                )
            )
        start = end
    return sentences


def tokenize(
    text: str,
    stopwords: frozenset[str] | set[str] = frozenset(),
    drop_numeric: bool = False,
) -> list[str]:
    """Lowercase alphanumeric terms, optionally minus stopwords and numbers."""
    tokens = _TOKEN_RE.findall(text.lower())
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    if drop_numeric:
        tokens = [t for t in tokens if not _NUMERIC_RE.match(t)]
    return tokens


def compute_idf(documents: list[list[str]]) -> IdfTable:
    """Document frequencies over token lists; df counts distinct documents."""
    df: dict[str, int] = {}
    for doc in documents:
        for term in set(doc):
            df[term] = df.get(term, 0) + 1
    return IdfTable(doc_count=len(documents), df=df)


def vectorize(tokens: list[str], idf: IdfTable, pivot: PivotParams) -> SparseVector:
    """Sublinear-tf, idf-weighted, pivoted-length-normalized sparse vector.

    weight(t) = (1 + ln(1 + ln(tf))) * idf(t) / ((1-s) + s * len/avg_doc_len)
    """
    if not tokens:
        return SparseVector({})
    tf: dict[str, int] = {}
    for t in tokens:
        tf[t] = tf.get(t, 0) + 1
    denom = (1.0 - pivot.slope) + pivot.slope * (len(tokens) / pivot.avg_doc_len)
    weights = {
        t: (1.0 + math.log(1.0 + math.log(c))) * idf.idf(t) / denom
        for t, c in tf.items()
    }
    return SparseVector(weights)


def word_count(text: str) -> int:
    """Whitespace-token count, the convention used for all word budgets."""
    return len(text.split())

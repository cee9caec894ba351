"""Topic corpus loading, validation, serialization, and dataset statistics.

Corpus layout on disk: a manifest ``{"topics": ["t1.json", ...]}`` next to
one JSON file per topic. Topic files are UTF-8; all character offsets are
Unicode scalar-value indices into the raw article text.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import CorpusIoError, MalformedCorpus
from .textproc import Sentence, word_count

__all__ = [
    "Facet",
    "Article",
    "Citation",
    "GoldSummary",
    "Topic",
    "CorpusStats",
    "load_corpus",
    "save_corpus",
    "corpus_stats",
    "bundled_corpus_path",
]

GOLD_WORD_LIMIT = 250
GOLD_WORD_SLACK = 0.10


class Facet(str, Enum):
    """The six discourse facets, in the fixed tie-break / selection order."""

    HYPOTHESIS = "hypothesis"
    METHOD = "method"
    RESULTS = "results"
    IMPLICATION = "implication"
    DISCUSSION = "discussion"
    DATA_SET_USED = "data_set_used"


@dataclass(frozen=True)
class Article:
    id: str
    title: str
    text: str
    sentences: tuple[Sentence, ...] = ()

    def with_sentences(self, sentences) -> "Article":
        return replace(self, sentences=tuple(sentences))


@dataclass(frozen=True)
class Citation:
    id: str
    citing_article_id: str
    text: str
    char_start: int
    char_end: int
    marker: str = ""
    facet: Facet | None = None


@dataclass(frozen=True)
class GoldSummary:
    annotator_id: str
    text: str

    @property
    def word_count(self) -> int:
        return word_count(self.text)


@dataclass(frozen=True)
class Topic:
    id: str
    reference_article: Article
    citing_articles: tuple[Article, ...]
    citations: tuple[Citation, ...]
    gold_summaries: tuple[GoldSummary, ...]

    def citing_article(self, article_id: str) -> Article:
        for art in self.citing_articles:
            if art.id == article_id:
                return art
        raise KeyError(article_id)


@dataclass(frozen=True)
class CorpusStats:
    n_topics: int
    gold_per_topic: tuple[float, float]
    citing_per_topic: tuple[float, float]
    citations_per_citing: tuple[float, float]
    summary_len_words: tuple[float, float]
    article_len_words: tuple[float, float]
    facet_counts: dict[Facet, int]

    def to_dict(self) -> dict:
        def pair(p):
            return {"mean": p[0], "std": p[1]}

        return {
            "n_topics": self.n_topics,
            "gold_per_topic": pair(self.gold_per_topic),
            "citing_per_topic": pair(self.citing_per_topic),
            "citations_per_citing": pair(self.citations_per_citing),
            "summary_len_words": pair(self.summary_len_words),
            "article_len_words": pair(self.article_len_words),
            "facet_counts": {f.value: c for f, c in self.facet_counts.items()},
        }


def bundled_corpus_path() -> str:
    """Path of the synthetic 3-topic corpus shipped with the package."""
    from importlib import resources

    return str(resources.files("citescope.data").joinpath("corpus").joinpath("manifest.json"))


# ---------------------------------------------------------------------------
# loading / validation


def _require(obj, key, typ, pointer):
    if not isinstance(obj, dict) or key not in obj:
        raise MalformedCorpus(f"missing key '{key}'", pointer)
    value = obj[key]
    if typ is not None and not isinstance(value, typ):
        raise MalformedCorpus(
            f"key '{key}' must be {typ.__name__}, got {type(value).__name__}",
            f"{pointer}/{key}",
        )
    return value


def _parse_article(obj, pointer) -> Article:
    return Article(
        id=_require(obj, "id", str, pointer),
        title=_require(obj, "title", str, pointer),
        text=_require(obj, "text", str, pointer),
    )


def _parse_topic(obj, pointer) -> Topic:
    topic_id = _require(obj, "id", str, pointer)
    reference = _parse_article(
        _require(obj, "reference_article", dict, pointer), f"{pointer}/reference_article"
    )
    citing = tuple(
        _parse_article(a, f"{pointer}/citing_articles/{i}")
        for i, a in enumerate(_require(obj, "citing_articles", list, pointer))
    )
    citing_by_id = {a.id: a for a in citing}

    citations = []
    raw_citations = _require(obj, "citations", list, pointer)
    if not raw_citations:
        raise MalformedCorpus("topic must have at least 1 citation", f"{pointer}/citations")
    for i, c in enumerate(raw_citations):
        cp = f"{pointer}/citations/{i}"
        facet_raw = c.get("facet") if isinstance(c, dict) else None
        facet = None
        if facet_raw is not None:
            try:
                facet = Facet(facet_raw)
            except ValueError:
                raise MalformedCorpus(f"unknown facet '{facet_raw}'", f"{cp}/facet")
        cit = Citation(
            id=_require(c, "id", str, cp),
            citing_article_id=_require(c, "citing_article_id", str, cp),
            text=_require(c, "text", str, cp),
            char_start=_require(c, "char_start", int, cp),
            char_end=_require(c, "char_end", int, cp),
            marker=_require(c, "marker", str, cp),
            facet=facet,
        )
        if cit.citing_article_id not in citing_by_id:
            raise MalformedCorpus(
                f"citing_article_id '{cit.citing_article_id}' not in citing_articles",
                f"{cp}/citing_article_id",
            )
        art = citing_by_id[cit.citing_article_id]
        if not (0 <= cit.char_start <= cit.char_end <= len(art.text)):
            raise MalformedCorpus(
                f"offsets [{cit.char_start}, {cit.char_end}) outside article text "
                f"of length {len(art.text)}",
                f"{cp}/char_start",
            )
        if art.text[cit.char_start:cit.char_end] != cit.text:
            raise MalformedCorpus(
                "citation text does not match the article slice at its offsets", cp
            )
        if cit.marker and cit.marker not in cit.text:
            raise MalformedCorpus("marker is not a substring of citation text", f"{cp}/marker")
        citations.append(cit)

    golds = []
    for i, g in enumerate(_require(obj, "gold_summaries", list, pointer)):
        gp = f"{pointer}/gold_summaries/{i}"
        gold = GoldSummary(
            annotator_id=_require(g, "annotator_id", str, gp),
            text=_require(g, "text", str, gp),
        )
        if gold.word_count > GOLD_WORD_LIMIT * (1 + GOLD_WORD_SLACK):
            raise MalformedCorpus(
                f"gold summary has {gold.word_count} words, above the "
                f"{GOLD_WORD_LIMIT}-word limit (+{GOLD_WORD_SLACK:.0%} slack)",
                f"{gp}/text",
            )
        golds.append(gold)

    return Topic(
        id=topic_id,
        reference_article=reference,
        citing_articles=citing,
        citations=tuple(citations),
        gold_summaries=tuple(golds),
    )


def load_corpus(path: str) -> list[Topic]:
    """Load a corpus manifest and all topic files, validating every invariant.

    ``path`` may point at the manifest file or at the directory holding it.
    """
    if os.path.isdir(path):
        path = os.path.join(path, "manifest.json")
    try:
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except OSError as exc:
        raise CorpusIoError(f"cannot read manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedCorpus(f"manifest is not valid JSON: {exc}", "/")

    files = _require(manifest, "topics", list, "/")
    base = os.path.dirname(os.path.abspath(path))
    topics = []
    for i, name in enumerate(files):
        topic_path = os.path.join(base, name)
        try:
            with open(topic_path, encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise CorpusIoError(f"cannot read topic file {topic_path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise MalformedCorpus(f"not valid JSON: {exc}", f"/topics/{i}")
        topics.append(_parse_topic(obj, f"/topics/{i}"))
    return topics


def topic_to_dict(topic: Topic) -> dict:
    def article(a: Article) -> dict:
        return {"id": a.id, "title": a.title, "text": a.text}

    return {
        "id": topic.id,
        "reference_article": article(topic.reference_article),
        "citing_articles": [article(a) for a in topic.citing_articles],
        "citations": [
            {
                "id": c.id,
                "citing_article_id": c.citing_article_id,
                "text": c.text,
                "char_start": c.char_start,
                "char_end": c.char_end,
                "marker": c.marker,
                "facet": c.facet.value if c.facet else None,
            }
            for c in topic.citations
        ],
        "gold_summaries": [
            {"annotator_id": g.annotator_id, "text": g.text} for g in topic.gold_summaries
        ],
    }


def save_corpus(topics: list[Topic], directory: str) -> str:
    """Write manifest + topic files; returns the manifest path."""
    os.makedirs(directory, exist_ok=True)
    names = []
    try:
        for topic in topics:
            name = f"{topic.id}.json"
            names.append(name)
            with open(os.path.join(directory, name), "w", encoding="utf-8") as fh:
                json.dump(topic_to_dict(topic), fh, ensure_ascii=False, indent=2)
        manifest_path = os.path.join(directory, "manifest.json")
        with open(manifest_path, "w", encoding="utf-8") as fh:
            json.dump({"topics": names}, fh, indent=2)
    except OSError as exc:
        raise CorpusIoError(f"cannot write corpus to {directory}: {exc}") from exc
    return manifest_path


# ---------------------------------------------------------------------------
# statistics


def _mean_std(values: list[float]) -> tuple[float, float]:
    if not values:
        return (0.0, 0.0)
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    return (mean, math.sqrt(var))


def corpus_stats(topics: list[Topic]) -> CorpusStats:
    """Population mean/std statistics over a topic collection."""
    facet_counts: dict[Facet, int] = {}
    for t in topics:
        for c in t.citations:
            if c.facet is not None:
                facet_counts[c.facet] = facet_counts.get(c.facet, 0) + 1

    citations_per_citing = [
        sum(1 for c in t.citations if c.citing_article_id == a.id)
        for t in topics
        for a in t.citing_articles
    ]
    articles = [t.reference_article for t in topics] + [
        a for t in topics for a in t.citing_articles
    ]
    return CorpusStats(
        n_topics=len(topics),
        gold_per_topic=_mean_std([len(t.gold_summaries) for t in topics]),
        citing_per_topic=_mean_std([len(t.citing_articles) for t in topics]),
        citations_per_citing=_mean_std(citations_per_citing),
        summary_len_words=_mean_std(
            [g.word_count for t in topics for g in t.gold_summaries]
        ),
        article_len_words=_mean_std([word_count(a.text) for a in articles]),
        facet_counts=facet_counts,
    )

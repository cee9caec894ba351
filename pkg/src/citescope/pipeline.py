"""End-to-end wiring: corpus topic -> citation contexts -> groups -> ranked
candidates -> summary, plus the baseline runners and facet-model training
helpers shared by the CLI."""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

import numpy as np

from . import baselines
from .context import (
    DEFAULT_SPANS_PER_CITATION,
    DEFAULT_WINDOW,
    QueryStrategy,
    build_citation_query,
    retrieve_reference_spans,
)
from .corpus import Facet, Topic
from .errors import DegenerateData, EmptyGraph, EmptyQuery
from .grouping import (
    DEFAULT_MIN_EDGE,
    FacetClassifier,
    LabeledSpan,
    classify_facet,
    group_spans,
    train_facet_classifier,
)
from .ranking import DEFAULT_DAMPING, centrality_from_matrix
from .selection import (
    Candidate,
    SelectionParams,
    Summary,
    select_iterative,
    select_novelty,
)
from .textproc import (
    IdfTable,
    PivotParams,
    Sentence,
    compute_idf,
    cosine,
    default_abbreviations,
    default_stopwords,
    default_verbs,
    split_sentences,
    tokenize,
    vectorize,
)

__all__ = ["RunConfig", "TopicIndex", "prepare_topic", "summarize_topic",
           "build_facet_training_data", "train_from_topics", "PIPELINE_METHODS",
           "BASELINE_METHODS", "ALL_METHODS"]

PIPELINE_METHODS = (
    "context-comm-it",
    "context-comm-div",
    "context-disc-it",
    "context-disc-div",
)
BASELINE_METHODS = ("lsa", "lexrank", "mmr", "citation")
ALL_METHODS = PIPELINE_METHODS + BASELINE_METHODS


@dataclass(frozen=True)
class RunConfig:
    """All knobs of a batch run. Defaults follow the shipped configuration
    (lambda=0.7, damping=0.1, top 3 per group, 250-word budget)."""

    method: str = "context-comm-it"
    budget_words: int = 250
    strategy: str = "full_text"
    top_k: int = 10
    lam: float = 0.7
    mmr_lam: float = 0.5
    top_m: int = 3
    window: int = DEFAULT_WINDOW
    spans_per_citation: int = DEFAULT_SPANS_PER_CITATION
    min_edge: float = DEFAULT_MIN_EDGE
    damping: float = DEFAULT_DAMPING
    seed: int = 42
    synonyms_path: str | None = None

    def query_strategy(self) -> QueryStrategy:
        synonyms = None
        if self.strategy == "concept_expanded":
            from .context import load_synonyms

            if self.synonyms_path:
                synonyms = load_synonyms(self.synonyms_path)
            else:
                from importlib import resources

                ref = resources.files("citescope.data").joinpath("synonyms.tsv")
                with resources.as_file(ref) as path:
                    synonyms = load_synonyms(path)
        return QueryStrategy(kind=self.strategy, top_k=self.top_k, synonyms=synonyms)


@dataclass(frozen=True)
class TopicIndex:
    """A topic with sentences split/tokenized and the topic-wide idf table."""

    topic: Topic
    idf: IdfTable
    pivot: PivotParams
    stopwords: frozenset[str]
    verbs: frozenset[str]

    @property
    def reference_sentences(self) -> tuple[Sentence, ...]:
        return self.topic.reference_article.sentences


def prepare_topic(
    topic: Topic,
    stopwords: frozenset[str] | None = None,
    abbreviations: frozenset[str] | None = None,
    verbs: frozenset[str] | None = None,
) -> TopicIndex:
    """Split and tokenize all articles; idf is computed over every sentence
    of the topic (reference plus citing articles)."""
    stopwords = default_stopwords() if stopwords is None else stopwords
    abbreviations = default_abbreviations() if abbreviations is None else abbreviations
    verbs = default_verbs() if verbs is None else verbs

    def index_article(article):
        sentences = split_sentences(article.text, abbreviations, article_id=article.id)
        sentences = [
            replace(s, tokens=tuple(tokenize(s.text, stopwords=stopwords)))
            for s in sentences
        ]
        return article.with_sentences(sentences)

    reference = index_article(topic.reference_article)
    citing = tuple(index_article(a) for a in topic.citing_articles)
    prepared = replace(topic, reference_article=reference, citing_articles=citing)

    docs = [list(s.tokens) for a in (reference, *citing) for s in a.sentences]
    idf = compute_idf(docs)
    lengths = [len(d) for d in docs if d]
    avg_len = sum(lengths) / len(lengths) if lengths else 1.0
    pivot = PivotParams(avg_doc_len=max(avg_len, 1e-9))
    return TopicIndex(
        topic=prepared, idf=idf, pivot=pivot, stopwords=stopwords, verbs=verbs
    )


def retrieve_contexts(index: TopicIndex, config: RunConfig):
    """Reference spans for every citation of the topic; citations whose query
    comes out empty are skipped."""
    strategy = config.query_strategy()
    contexts = []
    for citation in index.topic.citations:
        try:
            query = build_citation_query(
                citation,
                strategy,
                index.idf,
                index.pivot,
                stopwords=index.stopwords,
                verbs=index.verbs,
            )
        except EmptyQuery:
            continue
        contexts.append(
            retrieve_reference_spans(
                query,
                index.topic.reference_article,
                index.idf,
                index.pivot,
                k=config.spans_per_citation,
                window=config.window,
                citation_id=citation.id,
            )
        )
    return contexts


def _span_sentence_indices(contexts) -> list[int]:
    """Deduplicated, position-ordered reference sentence indices covered by
    the retrieved spans."""
    seen: set[int] = set()
    for ctx in contexts:
        for span in ctx.spans:
            seen.update(span.sentence_indices)
    return sorted(seen)


def _rank_group(members: list[int], index: TopicIndex, damping: float):
    """Candidates for one group, ranked by centrality of the group subgraph."""
    sentences = index.reference_sentences
    vectors = [
        vectorize(list(sentences[i].tokens), index.idf, index.pivot) for i in members
    ]
    k = len(members)
    if k == 1:
        scores = [1.0]
    else:
        sim = np.zeros((k, k))
        for a in range(k):
            for b in range(a + 1, k):
                sim[a, b] = sim[b, a] = cosine(vectors[a], vectors[b])
        p, _, _ = centrality_from_matrix(sim, damping=damping)
        scores = [float(x) for x in p]
    order = sorted(range(k), key=lambda i: (-scores[i], members[i]))
    return [(members[i], scores[i], vectors[i]) for i in order]


def summarize_topic(
    topic: Topic,
    config: RunConfig,
    classifier: FacetClassifier | None = None,
    index: TopicIndex | None = None,
) -> Summary:
    """Run one summarization method on one topic."""
    if index is None:
        index = prepare_topic(topic)
    method = config.method

    if method in BASELINE_METHODS:
        return _run_baseline(index, config)
    if method not in PIPELINE_METHODS:
        raise ValueError(f"unknown method '{method}'")

    contexts = retrieve_contexts(index, config)
    members = _span_sentence_indices(contexts)
    sentences = index.reference_sentences
    span_tokens = [list(sentences[i].tokens) for i in members]

    mode = "community" if "comm" in method else "discourse"
    if mode == "discourse" and classifier is None:
        raise ValueError("discourse methods require a trained facet classifier")
    try:
        raw_groups = group_spans(
            span_tokens,
            mode,
            idf=index.idf,
            pivot=index.pivot,
            min_edge=config.min_edge,
            classifier=classifier,
            seed=config.seed,
        )
    except EmptyGraph:
        # similarity graph too sparse for communities: one group per span
        raw_groups = {i: [i] for i in range(len(span_tokens))}

    groups: dict = {}
    for gid, local_ids in raw_groups.items():
        ranked = _rank_group([members[i] for i in local_ids], index, config.damping)
        groups[gid] = [
            Candidate(
                source_id=str(sent_idx),
                text=sentences[sent_idx].text,
                vector=vec,
                centrality=score,
                group_id=gid,
                rank=rank,
                order=sent_idx,
            )
            for rank, (sent_idx, score, vec) in enumerate(ranked)
        ]

    params = SelectionParams(
        budget_words=config.budget_words, lam=config.lam, top_m=config.top_m
    )
    if method.endswith("-it"):
        return select_iterative(groups, params, method=method)
    return select_novelty(groups, params, method=method)


def _run_baseline(index: TopicIndex, config: RunConfig) -> Summary:
    sentences = index.reference_sentences
    texts = [s.text for s in sentences]
    tokens = [list(s.tokens) for s in sentences]
    if config.method == "lsa":
        return baselines.lsa_summarize(
            texts, tokens, index.idf, index.pivot, config.budget_words
        )
    if config.method == "lexrank":
        return baselines.lexrank_summarize(
            texts, tokens, index.idf, index.pivot, config.budget_words,
            damping=config.damping,
        )
    if config.method == "mmr":
        return baselines.mmr_summarize(
            texts, tokens, index.idf, index.pivot, config.budget_words,
            lam=config.mmr_lam,
        )
    return baselines.citation_summarize(
        list(index.topic.citations),
        index.idf,
        index.pivot,
        config.budget_words,
        stopwords=index.stopwords,
    )


# ---------------------------------------------------------------------------
# facet model training over a corpus


def build_facet_training_data(
    topics: list[Topic],
    include_spans: bool = False,
    config: RunConfig | None = None,
) -> tuple[list[LabeledSpan], IdfTable]:
    """Labeled spans from the facet-annotated citations of a corpus, plus the
    idf table over the same token lists.

    With include_spans=True the retrieved reference spans of each annotated
    citation are added under the citation's facet label.
    """
    stopwords = default_stopwords()
    config = config or RunConfig()
    data: list[LabeledSpan] = []
    for topic in topics:
        index = prepare_topic(topic) if include_spans else None
        strategy = config.query_strategy() if include_spans else None
        for citation in topic.citations:
            if citation.facet is None:
                continue
            tokens = tokenize(citation.text, stopwords=stopwords, drop_numeric=True)
            if tokens:
                data.append(LabeledSpan(tokens=tuple(tokens), facet=citation.facet))
            if not include_spans:
                continue
            try:
                query = build_citation_query(
                    citation, strategy, index.idf, index.pivot,
                    stopwords=index.stopwords, verbs=index.verbs,
                )
            except EmptyQuery:
                continue
            ctx = retrieve_reference_spans(
                query, index.topic.reference_article, index.idf, index.pivot,
                k=config.spans_per_citation, window=config.window,
                citation_id=citation.id,
            )
            for span in ctx.spans:
                span_toks = [
                    t
                    for i in span.sentence_indices
                    for t in index.reference_sentences[i].tokens
                ]
                if span_toks:
                    data.append(
                        LabeledSpan(tokens=tuple(span_toks), facet=citation.facet)
                    )
    idf = compute_idf([list(d.tokens) for d in data])
    return data, idf


def train_from_topics(
    topics: list[Topic],
    seed: int = 42,
    include_spans: bool = False,
    holdout: float = 0.2,
) -> tuple[FacetClassifier, float]:
    """Train the facet model on a corpus with a fixed seeded holdout split;
    returns (classifier trained on the training split only, holdout accuracy).
    """
    data, idf = build_facet_training_data(topics, include_spans=include_spans)
    if len({d.facet for d in data}) < 2:
        raise DegenerateData("corpus has annotations for fewer than 2 facets")
    rng = random.Random(seed)
    order = list(range(len(data)))
    rng.shuffle(order)
    n_hold = max(1, int(len(data) * holdout)) if len(data) > 1 else 0
    hold_ids = set(order[:n_hold])
    train = [data[i] for i in order if i not in hold_ids]
    held = [data[i] for i in sorted(hold_ids)]

    verbs = default_verbs()
    classifier = train_facet_classifier(train, idf, seed=seed, verbs=verbs)
    if held:
        correct = sum(
            1 for d in held if classify_facet(classifier, d.tokens) == d.facet
        )
        accuracy = correct / len(held)
    else:
        accuracy = float("nan")
    return classifier, accuracy

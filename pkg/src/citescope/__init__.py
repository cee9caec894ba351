"""citescope: citation-context extractive summarization for scientific articles.

Subpackages follow the pipeline: corpus ingestion, lexical processing,
citation-context retrieval, grouping (communities / discourse facets),
centrality ranking, summary selection, comparison baselines, and a
self-contained ROUGE evaluator.
"""

from .corpus import (
    Article,
    Citation,
    CorpusStats,
    Facet,
    GoldSummary,
    Topic,
    bundled_corpus_path,
    corpus_stats,
    load_corpus,
    save_corpus,
)
from .errors import (
    CiteScopeError,
    CorpusIoError,
    DegenerateData,
    EmptyGraph,
    EmptyGroups,
    EmptyInput,
    EmptyQuery,
    MalformedCorpus,
    NoConvergence,
)
from .pipeline import RunConfig, prepare_topic, summarize_topic, train_from_topics
from .rouge import RougeScore, evaluate_summary, rouge_l, rouge_n
from .selection import Summary

__version__ = "0.1.0"

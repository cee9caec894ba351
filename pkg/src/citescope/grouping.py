"""Grouping of retrieved reference spans.

Two routes: unsupervised modularity-maximizing community detection on the
sentence-similarity graph (hierarchical local-move algorithm), and a
supervised one-vs-rest linear SVM over the six discourse facets with
unigram + verb features.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

from .corpus import Facet
from .errors import DegenerateData, EmptyGraph
from .textproc import IdfTable, PivotParams, SparseVector, cosine, vectorize

__all__ = [
    "WeightedGraph",
    "Partition",
    "LabeledSpan",
    "FacetClassifier",
    "build_span_graph",
    "modularity",
    "louvain_communities",
    "train_facet_classifier",
    "classify_facet",
    "group_spans",
]

DEFAULT_MIN_EDGE = 0.1
DEFAULT_SVM_EPOCHS = 50
DEFAULT_SVM_REG = 1e-4

FACET_ORDER = (
    Facet.HYPOTHESIS,
    Facet.METHOD,
    Facet.RESULTS,
    Facet.IMPLICATION,
    Facet.DISCUSSION,
    Facet.DATA_SET_USED,
)


class WeightedGraph:
    """Undirected weighted graph over sentence ids.

    ``m`` counts each undirected edge once; total degree equals 2m, matching
    the usual modularity normalization.
    """

    def __init__(self, nodes: list, edges: dict[tuple, float] | None = None):
        self.nodes = list(nodes)
        self.adj: dict = {v: {} for v in self.nodes}
        self.m = 0.0
        if edges:
            for (u, v), w in edges.items():
                self.add_edge(u, v, w)

    def add_edge(self, u, v, weight: float):
        if u == v:
            raise ValueError("self-loops are not supported")
        if weight < 0:
            raise ValueError("edge weights must be non-negative")
        if v in self.adj[u]:
            self.m -= self.adj[u][v]
        self.adj[u][v] = weight
        self.adj[v][u] = weight
        self.m += weight

    def weight(self, u, v) -> float:
        return self.adj[u].get(v, 0.0)

    def degree(self, v) -> float:
        return sum(self.adj[v].values())

    def neighbors(self, v):
        return self.adj[v].items()

    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.adj.values()) // 2


@dataclass(frozen=True)
class Partition:
    """Node -> dense community id assignment."""

    assignment: dict

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def communities(self) -> dict[int, list]:
        out: dict[int, list] = {}
        for node, cid in self.assignment.items():
            out.setdefault(cid, []).append(node)
        return out

    @staticmethod
    def singletons(nodes) -> "Partition":
        return Partition({v: i for i, v in enumerate(nodes)})

    @staticmethod
    def renumbered(assignment: dict, order) -> "Partition":
        """Densify community ids to 0..k-1 in first-appearance order."""
        remap: dict = {}
        dense = {}
        for node in order:
            cid = assignment[node]
            if cid not in remap:
                remap[cid] = len(remap)
            dense[node] = remap[cid]
        return Partition(dense)


@dataclass(frozen=True)
class LabeledSpan:
    tokens: tuple[str, ...]
    facet: Facet


def build_span_graph(
    texts_tokens: list[list[str]],
    idf: IdfTable,
    pivot: PivotParams,
    min_edge: float = DEFAULT_MIN_EDGE,
    node_ids: list | None = None,
) -> WeightedGraph:
    """Similarity graph over sentence token lists: edge iff cosine >= min_edge
    (zero-similarity pairs never get an edge)."""
    ids = list(node_ids) if node_ids is not None else list(range(len(texts_tokens)))
    vectors = [vectorize(list(toks), idf, pivot) for toks in texts_tokens]
    graph = WeightedGraph(ids)
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            sim = cosine(vectors[i], vectors[j])
            if sim > 0.0 and sim >= min_edge:
                graph.add_edge(ids[i], ids[j], sim)
    return graph


def modularity(graph: WeightedGraph, partition: Partition) -> float:
    """Q = (1/2m) * sum_vw [A_vw - k_v k_w / 2m] delta(c_v, c_w),
    the sum running over ordered node pairs including v = w."""
    if graph.m <= 0:
        raise EmptyGraph("modularity requires at least one positive-weight edge")
    two_m = 2.0 * graph.m
    internal: dict[int, float] = {}
    degree_sum: dict[int, float] = {}
    for v in graph.nodes:
        cid = partition.assignment[v]
        degree_sum[cid] = degree_sum.get(cid, 0.0) + graph.degree(v)
        for w, weight in graph.neighbors(v):
            if partition.assignment[w] == cid:
                internal[cid] = internal.get(cid, 0.0) + weight
    q = 0.0
    for cid, dsum in degree_sum.items():
        q += internal.get(cid, 0.0) / two_m - (dsum / two_m) ** 2
    return q


def louvain_communities(graph: WeightedGraph, seed: int = 42) -> Partition:
    """Hierarchical greedy modularity maximization.

    Starts from singletons, repeatedly applies local single-node moves and
    aggregates communities until no move improves Q. Deterministic: nodes are
    swept in ascending id order regardless of seed.
    """
    if graph.m <= 0:
        raise EmptyGraph("community detection requires at least one edge")
    del seed  # sweep order is fixed; kept for interface stability

    # flat assignment on the original nodes
    flat = {v: i for i, v in enumerate(sorted(graph.nodes))}

    level = _LevelGraph.from_graph(graph)
    while True:
        assignment = {v: cid for v, cid in level.singleton_assignment().items()}
        moved = level.local_moves(assignment)
        if not moved:
            break
        # project onto the flat assignment
        for v in flat:
            flat[v] = assignment[level.top_of(v)]
        level = level.aggregate(assignment)

    return Partition.renumbered(flat, sorted(graph.nodes))


class _LevelGraph:
    """Aggregated graph used inside louvain_communities, tracking self-weights
    of collapsed communities (they contribute to degree but not to moves)."""

    def __init__(self, nodes, adj, self_w, m, membership):
        self.nodes = nodes            # sorted super-node ids
        self.adj = adj                # super adjacency (no self loops)
        self.self_w = self_w          # super-node internal weight
        self.m = m
        self.membership = membership  # original node -> super node

    @staticmethod
    def from_graph(graph: WeightedGraph) -> "_LevelGraph":
        nodes = sorted(graph.nodes)
        adj = {v: dict(graph.adj[v]) for v in nodes}
        return _LevelGraph(
            nodes, adj, {v: 0.0 for v in nodes}, graph.m, {v: v for v in graph.nodes}
        )

    def top_of(self, original_node):
        return self.membership[original_node]

    def degree(self, v) -> float:
        return sum(self.adj[v].values()) + 2.0 * self.self_w[v]

    def singleton_assignment(self) -> dict:
        return {v: i for i, v in enumerate(self.nodes)}

    def local_moves(self, assignment: dict) -> bool:
        two_m = 2.0 * self.m
        degree = {v: self.degree(v) for v in self.nodes}
        comm_degree: dict[int, float] = {}
        for v in self.nodes:
            comm_degree[assignment[v]] = comm_degree.get(assignment[v], 0.0) + degree[v]

        moved_any = False
        improving = True
        while improving:
            improving = False
            for v in self.nodes:
                cid = assignment[v]
                links: dict[int, float] = {}
                for w, weight in self.adj[v].items():
                    links[assignment[w]] = links.get(assignment[w], 0.0) + weight
                comm_degree[cid] -= degree[v]
                base = links.get(cid, 0.0) - comm_degree[cid] * degree[v] / two_m
                best_cid, best_gain = cid, 0.0
                for target in sorted(links):
                    if target == cid:
                        continue
                    gain = (
                        links[target]
                        - comm_degree.get(target, 0.0) * degree[v] / two_m
                    ) - base
                    if gain > best_gain + 1e-12:
                        best_cid, best_gain = target, gain
                comm_degree[best_cid] = comm_degree.get(best_cid, 0.0) + degree[v]
                if best_cid != cid:
                    assignment[v] = best_cid
                    improving = True
                    moved_any = True
        return moved_any

    def aggregate(self, assignment: dict) -> "_LevelGraph":
        cids = sorted(set(assignment.values()))
        adj: dict[int, dict[int, float]] = {c: {} for c in cids}
        self_w = {c: 0.0 for c in cids}
        for v in self.nodes:
            cv = assignment[v]
            self_w[cv] += self.self_w[v]
            for w, weight in self.adj[v].items():
                cw = assignment[w]
                if cv == cw:
                    self_w[cv] += weight / 2.0
                elif cv < cw:
                    adj[cv][cw] = adj[cv].get(cw, 0.0) + weight
                    adj[cw][cv] = adj[cv][cw]
        membership = {orig: assignment[top] for orig, top in self.membership.items()}
        return _LevelGraph(cids, adj, self_w, self.m, membership)


# ---------------------------------------------------------------------------
# discourse facet classifier


def _span_features(
    tokens, idf: IdfTable, verbs: frozenset[str]
) -> SparseVector:
    """Unigram tf-idf features plus duplicated 'verb:' namespace features,
    L2-normalized so duplicated input text leaves the vector unchanged."""
    counts: dict[str, float] = {}
    for t in tokens:
        counts[t] = counts.get(t, 0.0) + 1.0
        if t in verbs:
            key = f"verb:{t}"
            counts[key] = counts.get(key, 0.0) + 1.0
    weights = {}
    for feat, tf in counts.items():
        term = feat[5:] if feat.startswith("verb:") else feat
        weights[feat] = tf * idf.idf(term)
    norm = math.sqrt(sum(w * w for w in weights.values()))
    if norm > 0:
        weights = {f: w / norm for f, w in weights.items()}
    return SparseVector(weights)


class FacetClassifier:
    """One-vs-rest linear scorers, one squared-hinge SVM per facet.

    Carries the training idf table and verb lexicon so prediction-time
    feature extraction is identical to training.
    """

    def __init__(
        self,
        weights: dict[Facet, dict[str, float]],
        bias: dict[Facet, float],
        idf: IdfTable,
        verbs: frozenset[str] = frozenset(),
    ):
        self.weights = weights
        self.bias = bias
        self.idf = idf
        self.verbs = verbs

    def decision(self, features: SparseVector) -> dict[Facet, float]:
        out = {}
        for facet in FACET_ORDER:
            if facet not in self.weights:
                continue
            w = self.weights[facet]
            out[facet] = (
                sum(v * w.get(f, 0.0) for f, v in features.weights.items())
                + self.bias[facet]
            )
        return out

    def to_json(self) -> str:
        payload = {
            "facets": {
                facet.value: {"weights": self.weights[facet], "bias": self.bias[facet]}
                for facet in self.weights
            },
            "idf": {"doc_count": self.idf.doc_count, "df": {t: self.idf.df(t) for t in self.idf.terms()}},
            "verbs": sorted(self.verbs),
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    @staticmethod
    def from_json(text: str) -> "FacetClassifier":
        payload = json.loads(text)
        weights = {}
        bias = {}
        for name, entry in payload["facets"].items():
            facet = Facet(name)
            weights[facet] = dict(entry["weights"])
            bias[facet] = float(entry["bias"])
        idf = IdfTable(payload["idf"]["doc_count"], payload["idf"]["df"])
        return FacetClassifier(weights, bias, idf, frozenset(payload.get("verbs", ())))


def train_facet_classifier(
    data: list[LabeledSpan],
    idf: IdfTable,
    epochs: int = DEFAULT_SVM_EPOCHS,
    reg: float = DEFAULT_SVM_REG,
    seed: int = 42,
    verbs: frozenset[str] = frozenset(),
) -> FacetClassifier:
    """Stochastic subgradient descent on the squared hinge loss, one binary
    problem per facet present in the data. Deterministic under seed."""
    present = sorted({span.facet for span in data}, key=FACET_ORDER.index)
    if len(present) < 2:
        raise DegenerateData("facet training needs at least 2 distinct facets")

    examples = [(_span_features(span.tokens, idf, verbs), span.facet) for span in data]
    rng = random.Random(seed)
    weights: dict[Facet, dict[str, float]] = {}
    bias: dict[Facet, float] = {}

    for facet in present:
        w: dict[str, float] = {}
        b = 0.0
        order = list(range(len(examples)))
        t = 0
        for _ in range(epochs):
            rng.shuffle(order)
            for i in order:
                t += 1
                x, label = examples[i]
                y = 1.0 if label == facet else -1.0
                eta = 1.0 / (reg * (t + 1.0 / reg))
                margin = y * (
                    sum(v * w.get(f, 0.0) for f, v in x.weights.items()) + b
                )
                # L2 shrinkage on the weights (bias unregularized)
                decay = 1.0 - eta * reg
                for f in w:
                    w[f] *= decay
                if margin < 1.0:
                    coef = eta * 2.0 * (1.0 - margin) * y
                    for f, v in x.weights.items():
                        w[f] = w.get(f, 0.0) + coef * v
                    b += coef
        weights[facet] = {f: v for f, v in w.items() if v != 0.0}
        bias[facet] = b

    return FacetClassifier(weights, bias, idf, verbs)


def classify_facet(classifier: FacetClassifier, tokens) -> Facet:
    """Argmax of the per-facet decision values; ties break by facet order."""
    features = _span_features(tokens, classifier.idf, classifier.verbs)
    scores = classifier.decision(features)
    best = None
    best_score = -math.inf
    for facet in FACET_ORDER:
        if facet in scores and scores[facet] > best_score + 1e-12:
            best, best_score = facet, scores[facet]
    return best


def group_spans(
    span_tokens: list[list[str]],
    mode: str,
    idf: IdfTable | None = None,
    pivot: PivotParams | None = None,
    min_edge: float = DEFAULT_MIN_EDGE,
    classifier: FacetClassifier | None = None,
    seed: int = 42,
) -> dict:
    """Partition spans into groups.

    mode='community': louvain over the span similarity graph, keys are dense
    community ids. mode='discourse': classifier labels, keys are Facets.
    Every span index lands in exactly one group.
    """
    if mode == "community":
        if idf is None or pivot is None:
            raise ValueError("community mode requires idf and pivot")
        graph = build_span_graph(span_tokens, idf, pivot, min_edge=min_edge)
        partition = louvain_communities(graph, seed=seed)
        groups: dict = {}
        for i in range(len(span_tokens)):
            groups.setdefault(partition.assignment[i], []).append(i)
        return groups
    if mode == "discourse":
        if classifier is None:
            raise ValueError("discourse mode requires a trained classifier")
        groups = {}
        for i, tokens in enumerate(span_tokens):
            facet = classify_facet(classifier, tokens)
            groups.setdefault(facet, []).append(i)
        return groups
    raise ValueError(f"unknown grouping mode '{mode}'")

"""Final summary assembly from ranked groups.

Two strategies: iterative round-robin over groups, and greedy
novelty-maximizing selection interpolating relevance against redundancy
(score(S) = lambda * Sim1(S, pool) - (1 - lambda) * Sim2(S, summary)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Facet
from .errors import EmptyGroups
from .textproc import SparseVector, cosine, word_count

__all__ = [
    "Candidate",
    "Summary",
    "SelectionParams",
    "select_iterative",
    "select_novelty",
    "truncate_to_budget",
    "ITERATIVE_FACET_ORDER",
]

# data_set_used is deliberately absent from the iterative facet order
ITERATIVE_FACET_ORDER = (
    Facet.HYPOTHESIS,
    Facet.METHOD,
    Facet.RESULTS,
    Facet.IMPLICATION,
    Facet.DISCUSSION,
)


@dataclass(frozen=True)
class Candidate:
    """A sentence eligible for selection, with its group-local rank."""

    source_id: str
    text: str
    vector: SparseVector
    centrality: float
    group_id: object
    rank: int          # 0-based rank inside its group, by descending centrality
    order: int         # stable source order for tie-breaking

    @property
    def n_words(self) -> int:
        return word_count(self.text)


@dataclass(frozen=True)
class SelectionParams:
    budget_words: int = 250
    lam: float = 0.7
    top_m: int = 3
    facet_order: tuple = ITERATIVE_FACET_ORDER

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must be in [0,1], got {self.lam}")
        if self.budget_words < 0 or self.top_m < 1:
            raise ValueError("budget_words must be >= 0 and top_m >= 1")


@dataclass(frozen=True)
class Summary:
    sentences: tuple[tuple[str, str], ...]  # (source id, text)
    word_count: int
    method: str
    provenance: tuple[dict, ...] = ()

    @property
    def text(self) -> str:
        return "\n".join(text for _, text in self.sentences)


def _group_order(groups: dict, facet_order) -> list:
    """Discourse groups follow the fixed facet order (data_set_used omitted);
    community groups go by descending size, ties by group id."""
    if groups and all(isinstance(k, Facet) for k in groups):
        return [f for f in facet_order if f in groups]
    return sorted(groups, key=lambda g: (-len(groups[g]), g))


def _finish(picked: list[Candidate], method: str) -> Summary:
    return Summary(
        sentences=tuple((c.source_id, c.text) for c in picked),
        word_count=sum(c.n_words for c in picked),
        method=method,
        provenance=tuple(
            {
                "source_id": c.source_id,
                "group": c.group_id.value if isinstance(c.group_id, Facet) else c.group_id,
                "rank": c.rank,
                "score": c.centrality,
            }
            for c in picked
        ),
    )


def select_iterative(
    groups: dict[object, list[Candidate]],
    params: SelectionParams,
    method: str = "iterative",
) -> Summary:
    """Round r takes each group's rank-r candidate in group order.

    A candidate that would overflow the budget is skipped while the rest of
    the round is still tried (skip-fit); after such a round selection stops.
    """
    if not groups or all(not members for members in groups.values()):
        raise EmptyGroups("iterative selection needs at least one non-empty group")
    order = _group_order(groups, params.facet_order)

    picked: list[Candidate] = []
    used: set[str] = set()
    words = 0
    rank = 0
    while True:
        any_candidate = False
        overflow = False
        for gid in order:
            members = groups[gid]
            if rank >= len(members):
                continue
            any_candidate = True
            cand = members[rank]
            if cand.source_id in used:
                continue
            if words + cand.n_words > params.budget_words:
                overflow = True
                continue
            picked.append(cand)
            used.add(cand.source_id)
            words += cand.n_words
        if not any_candidate or overflow:
            break
        rank += 1
    return _finish(picked, method)


def select_novelty(
    groups: dict[object, list[Candidate]],
    params: SelectionParams,
    method: str = "novelty",
) -> Summary:
    """Greedy MMR-style selection over the pooled top-m candidates per group.

    Sim1(S) is the mean cosine of S to every pool sentence; Sim2(S) the max
    cosine to the sentences already selected (0 for the first pick). Ties
    break by higher centrality, then source order.
    """
    if not groups or all(not members for members in groups.values()):
        raise EmptyGroups("novelty selection needs at least one non-empty group")

    pool: list[Candidate] = []
    seen: set[str] = set()
    order = _group_order(groups, params.facet_order)
    # groups outside the iterative order (e.g. data_set_used) still feed the pool
    order += [g for g in sorted(groups, key=repr) if g not in order]
    for gid in order:
        for cand in groups[gid][: params.top_m]:
            if cand.source_id not in seen:
                pool.append(cand)
                seen.add(cand.source_id)

    relevance = {
        c.source_id: sum(cosine(c.vector, o.vector) for o in pool) / len(pool)
        for c in pool
    }

    picked: list[Candidate] = []
    words = 0
    remaining = list(pool)
    while remaining:
        fitting = [c for c in remaining if words + c.n_words <= params.budget_words]
        if not fitting:
            break
        best = max(
            fitting,
            key=lambda c: (
                params.lam * relevance[c.source_id]
                - (1.0 - params.lam)
                * max((cosine(c.vector, p.vector) for p in picked), default=0.0),
                c.centrality,
                -c.order,
            ),
        )
        picked.append(best)
        words += best.n_words
        remaining.remove(best)
    return _finish(picked, method)


def truncate_to_budget(
    sentences: list[tuple[str, str]], budget: int, method: str = "truncate"
) -> Summary:
    """Keep whole sentences in order while they fit the word budget."""
    picked: list[tuple[str, str]] = []
    words = 0
    for source_id, text in sentences:
        n = word_count(text)
        if words + n > budget:
            continue
        picked.append((source_id, text))
        words += n
    return Summary(sentences=tuple(picked), word_count=words, method=method)

import random

import pytest

from citescope.corpus import Facet
from citescope.errors import EmptyGroups
from citescope.selection import (
    Candidate,
    SelectionParams,
    select_iterative,
    select_novelty,
    truncate_to_budget,
)
from citescope.textproc import SparseVector


def cand(source_id, n_words, group_id, rank, order=0, centrality=0.5, terms=None):
    text = " ".join(f"w{i}" for i in range(n_words))
    vec = SparseVector(terms if terms else {f"tok-{source_id}": 1.0})
    return Candidate(
        source_id=source_id, text=text, vector=vec, centrality=centrality,
        group_id=group_id, rank=rank, order=order,
    )


def make_groups(sizes, words_per=10):
    """Community-style groups g0..gk with the given member counts."""
    order = 0
    groups = {}
    for gi, size in enumerate(sizes):
        members = []
        for r in range(size):
            members.append(
                cand(f"g{gi}s{r}", words_per, gi, r, order=order,
                     centrality=1.0 - 0.1 * r)
            )
            order += 1
        groups[gi] = members
    return groups


class TestIterative:
    def test_round_robin_order(self):
        groups = make_groups([2, 2], words_per=10)
        summary = select_iterative(groups, SelectionParams(budget_words=40))
        assert [s for s, _ in summary.sentences] == ["g0s0", "g1s0", "g0s1", "g1s1"]
        assert summary.word_count == 40

    def test_budget_stops_after_overflow_round(self):
        groups = make_groups([3, 3], words_per=10)
        summary = select_iterative(groups, SelectionParams(budget_words=30))
        # round 0 fills g0s0 g1s0; round 1 fits g0s1 then overflows on g1s1 -> stop
        assert [s for s, _ in summary.sentences] == ["g0s0", "g1s0", "g0s1"]
        assert summary.word_count == 30

    def test_larger_group_goes_first(self):
        groups = make_groups([1, 3], words_per=5)
        summary = select_iterative(groups, SelectionParams(budget_words=100))
        assert summary.sentences[0][0] == "g1s0"
        assert summary.sentences[1][0] == "g0s0"

    def test_facet_order_and_dataset_excluded(self):
        groups = {
            Facet.DISCUSSION: [cand("d", 5, Facet.DISCUSSION, 0, order=0)],
            Facet.METHOD: [cand("m", 5, Facet.METHOD, 0, order=1)],
            Facet.HYPOTHESIS: [cand("h", 5, Facet.HYPOTHESIS, 0, order=2)],
            Facet.DATA_SET_USED: [cand("x", 5, Facet.DATA_SET_USED, 0, order=3)],
        }
        summary = select_iterative(groups, SelectionParams(budget_words=100))
        assert [s for s, _ in summary.sentences] == ["h", "m", "d"]

    def test_budget_smaller_than_everything(self):
        groups = make_groups([2], words_per=50)
        summary = select_iterative(groups, SelectionParams(budget_words=10))
        assert summary.sentences == ()
        assert summary.word_count == 0

    def test_duplicate_source_id_taken_once(self):
        shared = cand("dup", 10, 0, 0)
        groups = {
            0: [shared, cand("a", 10, 0, 1, order=1)],
            1: [cand("dup", 10, 1, 0, order=2), cand("b", 10, 1, 1, order=3)],
        }
        summary = select_iterative(groups, SelectionParams(budget_words=100))
        ids = [s for s, _ in summary.sentences]
        assert ids.count("dup") == 1

    def test_empty_raises(self):
        with pytest.raises(EmptyGroups):
            select_iterative({}, SelectionParams())
        with pytest.raises(EmptyGroups):
            select_iterative({0: []}, SelectionParams())

    def test_never_exceeds_budget_randomized(self):
        rng = random.Random(99)
        for _ in range(200):
            sizes = [rng.randint(1, 5) for _ in range(rng.randint(1, 5))]
            words = rng.randint(3, 40)
            budget = rng.randint(0, 120)
            summary = select_iterative(
                make_groups(sizes, words_per=words),
                SelectionParams(budget_words=budget),
            )
            assert summary.word_count <= budget

    def test_deterministic(self):
        groups = make_groups([3, 2, 4])
        a = select_iterative(groups, SelectionParams(budget_words=60))
        b = select_iterative(groups, SelectionParams(budget_words=60))
        assert a == b


class TestNovelty:
    def test_lambda_one_is_pure_relevance(self):
        # three sentences: two near-duplicates plus an outlier; with lam=1 the
        # duplicates (highest mean similarity to the pool) come first
        groups = {
            0: [
                cand("a", 5, 0, 0, order=0, terms={"x": 1.0, "y": 0.2}),
                cand("b", 5, 0, 1, order=1, terms={"x": 1.0, "y": 0.21}),
            ],
            1: [cand("c", 5, 1, 0, order=2, terms={"z": 1.0})],
        }
        summary = select_novelty(groups, SelectionParams(budget_words=100, lam=1.0))
        assert [s for s, _ in summary.sentences][:2] == ["a", "b"]

    def test_low_lambda_rejects_redundancy_ordering(self):
        groups = {
            0: [
                cand("a", 5, 0, 0, order=0, terms={"x": 1.0}),
                cand("b", 5, 0, 1, order=1, terms={"x": 1.0}),
            ],
            1: [cand("c", 5, 1, 0, order=2, terms={"z": 1.0, "x": 0.4})],
        }
        summary = select_novelty(groups, SelectionParams(budget_words=100, lam=0.3))
        ids = [s for s, _ in summary.sentences]
        # after the first x-sentence, the dissimilar one wins over its duplicate
        assert ids[0] in {"a", "b"}
        assert ids[1] == "c"

    def test_pool_limited_to_top_m(self):
        groups = make_groups([5], words_per=5)
        summary = select_novelty(groups, SelectionParams(budget_words=1000, top_m=2))
        assert len(summary.sentences) == 2
        assert {s for s, _ in summary.sentences} == {"g0s0", "g0s1"}

    def test_dataset_group_feeds_pool(self):
        groups = {
            Facet.METHOD: [cand("m", 5, Facet.METHOD, 0, order=0)],
            Facet.DATA_SET_USED: [cand("d", 5, Facet.DATA_SET_USED, 0, order=1)],
        }
        summary = select_novelty(groups, SelectionParams(budget_words=100))
        assert {s for s, _ in summary.sentences} == {"m", "d"}

    def test_tie_breaks_by_centrality(self):
        groups = {
            0: [cand("hi", 5, 0, 0, order=1, centrality=0.9, terms={"x": 1.0})],
            1: [cand("lo", 5, 1, 0, order=0, centrality=0.1, terms={"y": 1.0})],
        }
        summary = select_novelty(groups, SelectionParams(budget_words=100, lam=1.0))
        assert summary.sentences[0][0] == "hi"

    def test_budget_respected_randomized(self):
        rng = random.Random(13)
        for _ in range(200):
            sizes = [rng.randint(1, 4) for _ in range(rng.randint(1, 4))]
            words = rng.randint(3, 40)
            budget = rng.randint(0, 120)
            summary = select_novelty(
                make_groups(sizes, words_per=words),
                SelectionParams(budget_words=budget, lam=rng.choice([0.3, 0.7, 1.0])),
            )
            assert summary.word_count <= budget

    def test_skips_nonfitting_continues(self):
        groups = {
            0: [cand("big", 50, 0, 0, order=0, centrality=1.0)],
            1: [cand("small", 5, 1, 0, order=1, centrality=0.2)],
        }
        summary = select_novelty(groups, SelectionParams(budget_words=10))
        assert [s for s, _ in summary.sentences] == ["small"]

    def test_empty_raises(self):
        with pytest.raises(EmptyGroups):
            select_novelty({}, SelectionParams())

    def test_deterministic(self):
        groups = make_groups([3, 3], words_per=7)
        a = select_novelty(groups, SelectionParams(budget_words=40, lam=0.7))
        b = select_novelty(groups, SelectionParams(budget_words=40, lam=0.7))
        assert a == b


class TestTruncate:
    def test_keeps_fitting_prefix(self):
        sents = [("a", "one two three"), ("b", "four five"), ("c", "six")]
        summary = truncate_to_budget(sents, 4)
        assert [s for s, _ in summary.sentences] == ["a", "c"]
        assert summary.word_count == 4

    def test_zero_budget(self):
        assert truncate_to_budget([("a", "word")], 0).sentences == ()

    def test_exact_fit(self):
        summary = truncate_to_budget([("a", "one two")], 2)
        assert summary.word_count == 2

    def test_params_validation(self):
        with pytest.raises(ValueError):
            SelectionParams(lam=1.5)
        with pytest.raises(ValueError):
            SelectionParams(budget_words=-1)
        with pytest.raises(ValueError):
            SelectionParams(top_m=0)

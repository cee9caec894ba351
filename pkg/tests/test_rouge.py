import pytest
from hypothesis import given, settings, strategies as st

from citescope.rouge import (
    RougeScore,
    evaluate_summary,
    lcs_union,
    rouge_l,
    rouge_n,
    score_tokens,
)

words = st.lists(st.sampled_from("abcdefg"), min_size=0, max_size=12)


class TestRougeN:
    def test_the_cat_sat(self):
        score = rouge_n(["the", "cat"], [["the", "cat", "sat"]], 1)
        assert score.recall == pytest.approx(2 / 3)
        assert score.precision == pytest.approx(1.0)
        assert score.f1 == pytest.approx(0.8)

    def test_identity(self):
        toks = ["a", "b", "c", "d"]
        for n in (1, 2):
            s = rouge_n(toks, [toks], n)
            assert (s.recall, s.precision, s.f1) == (1.0, 1.0, 1.0)

    def test_disjoint(self):
        s = rouge_n(["x", "y"], [["a", "b"]], 2)
        assert (s.recall, s.precision, s.f1) == (0.0, 0.0, 0.0)

    def test_empty_candidate(self):
        s = rouge_n([], [["a", "b"]], 1)
        assert (s.recall, s.precision, s.f1) == (0.0, 0.0, 0.0)

    def test_empty_golds(self):
        s = rouge_n(["a"], [], 1)
        assert (s.recall, s.precision) == (0.0, 0.0)

    def test_clipping(self):
        # candidate repeats 'a' 5 times, gold has it twice: clipped to 2
        s = rouge_n(["a"] * 5, [["a", "a", "b"]], 1)
        assert s.recall == pytest.approx(2 / 3)
        assert s.precision == pytest.approx(2 / 5)

    def test_multi_gold_micro_average(self):
        # gold totals pool: matches (2 + 1) over gold unigrams (2 + 2)
        s = rouge_n(["a", "b"], [["a", "b"], ["a", "c"]], 1)
        assert s.recall == pytest.approx(3 / 4)
        # precision denominator: n_golds * candidate grams = 2 * 2
        assert s.precision == pytest.approx(3 / 4)

    def test_bigram_known_value(self):
        s = rouge_n(["a", "b", "c"], [["a", "b", "d", "b", "c"]], 2)
        assert s.recall == pytest.approx(2 / 4)
        assert s.precision == pytest.approx(2 / 2)

    def test_invalid_n(self):
        with pytest.raises(ValueError):
            rouge_n(["a"], [["a"]], 0)

    @given(words, words)
    @settings(max_examples=50)
    def test_bounded_and_f1_order(self, cand, gold):
        s = rouge_n(cand, [gold], 1)
        assert 0.0 <= s.recall <= 1.0
        assert 0.0 <= s.precision <= 1.0
        assert s.f1 <= max(s.recall, s.precision) + 1e-12
        assert s.f1 >= 0.0

    @given(words, words, words)
    @settings(max_examples=50)
    def test_recall_monotone_in_candidate(self, cand, extra, gold):
        base = rouge_n(cand, [gold], 1)
        grown = rouge_n(cand + extra, [gold], 1)
        assert grown.recall >= base.recall - 1e-12


class TestLcsUnion:
    def test_union_beats_single_lcs(self):
        gold = ["w1", "w2", "w3", "w4", "w5"]
        cands = [["w1", "w2", "w6", "w7", "w8"], ["w1", "w3", "w8", "w9", "w5"]]
        # single best LCS is 3 (w1 w3 w5); union covers w1 w2 w3 w5 = 4
        assert lcs_union(gold, cands) == 4

    def test_duplicate_position_counted_once(self):
        gold = ["a", "b"]
        assert lcs_union(gold, [["a", "b"], ["a", "b"]]) == 2

    def test_empty(self):
        assert lcs_union([], [["a"]]) == 0
        assert lcs_union(["a"], []) == 0


class TestRougeL:
    def test_identity(self):
        cand = [["a", "b"], ["c", "d"]]
        s = rouge_l(cand, [cand])
        assert (s.recall, s.precision, s.f1) == (1.0, 1.0, 1.0)

    def test_disjoint(self):
        s = rouge_l([["x", "y"]], [[["a", "b"]]])
        assert (s.recall, s.precision, s.f1) == (0.0, 0.0, 0.0)

    def test_known_value(self):
        cand = [["the", "cat"]]
        gold = [[["the", "cat", "sat"]]]
        s = rouge_l(cand, gold)
        assert s.recall == pytest.approx(2 / 3)
        assert s.precision == pytest.approx(1.0)

    def test_macro_average_over_golds(self):
        cand = [["a", "b"]]
        golds = [[["a", "b"]], [["c", "d"]]]
        s = rouge_l(cand, golds)
        assert s.recall == pytest.approx(0.5)
        assert s.precision == pytest.approx(0.5)
        # f1 from the averaged recall/precision, not averaged f1s
        assert s.f1 == pytest.approx(0.5)

    def test_no_golds(self):
        s = rouge_l([["a"]], [])
        assert (s.recall, s.precision, s.f1) == (0.0, 0.0, 0.0)

    def test_scores_clamped(self):
        s = RougeScore.from_rp(1.7, -0.2, "rouge1")
        assert s.recall == 1.0
        assert s.precision == 0.0


class TestEvaluateSummary:
    def test_returns_all_metrics(self):
        out = evaluate_summary(["The cat sat."], ["The cat sat on the mat."])
        assert set(out) == {"rouge1", "rouge2", "rougeL"}
        assert out["rouge1"].recall == pytest.approx(3 / 6)
        assert out["rouge1"].precision == pytest.approx(1.0)

    def test_gold_truncation(self):
        gold = "alpha beta gamma delta epsilon"
        full = evaluate_summary(["alpha beta gamma delta epsilon"], [gold])
        cut = evaluate_summary(
            ["alpha beta gamma delta epsilon"], [gold], truncate_gold_to=2
        )
        assert full["rouge1"].recall == pytest.approx(1.0)
        assert cut["rouge1"].recall == pytest.approx(1.0)
        assert cut["rouge1"].precision == pytest.approx(2 / 5)

    def test_case_and_punct_normalized(self):
        out = evaluate_summary(["THE Cat, sat!"], ["the cat sat"])
        assert out["rouge1"].f1 == pytest.approx(1.0)

    def test_stopwords_retained(self):
        assert score_tokens("the of and cat") == ["the", "of", "and", "cat"]

    def test_multi_sentence_candidate_rouge_l(self):
        out = evaluate_summary(
            ["w1 w2 w6 w7 w8.", "w1 w3 w8 w9 w5."],
            ["w1 w2 w3 w4 w5."],
        )
        assert out["rougeL"].recall == pytest.approx(4 / 5)

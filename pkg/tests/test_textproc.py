import math

import pytest
from hypothesis import given, strategies as st

from citescope.textproc import (
    IdfTable,
    PivotParams,
    SparseVector,
    compute_idf,
    cosine,
    default_abbreviations,
    default_stopwords,
    split_sentences,
    tokenize,
    vectorize,
)


class TestSplitSentences:
    def test_abbreviation_not_split(self):
        text = "We measured p53. Fig. 2 shows arrest."
        sents = split_sentences(text, {"Fig."})
        assert [s.text for s in sents] == ["We measured p53.", "Fig. 2 shows arrest."]

    def test_empty_text(self):
        assert split_sentences("") == []
        assert split_sentences("   \n ") == []

    def test_no_terminator_single_sentence(self):
        sents = split_sentences("One sentence only")
        assert len(sents) == 1
        assert sents[0].text == "One sentence only"
        assert (sents[0].char_start, sents[0].char_end) == (0, len("One sentence only"))

    def test_offsets_reconstruct_text(self):
        text = "First things first. Second, e.g. a test. Third one!  And a fourth?"
        sents = split_sentences(text, default_abbreviations())
        for s in sents:
            assert text[s.char_start:s.char_end] == s.text
        # offsets ascending and non-overlapping
        for a, b in zip(sents, sents[1:]):
            assert a.char_end <= b.char_start
        # all non-whitespace characters covered
        covered = set()
        for s in sents:
            covered.update(range(s.char_start, s.char_end))
        for i, ch in enumerate(text):
            if not ch.isspace():
                assert i in covered

    def test_no_split_inside_parentheses(self):
        text = "Arrest occurred (see Fig. 2; cf. prior work.) in all cases. Next point."
        sents = split_sentences(text, default_abbreviations())
        assert len(sents) == 2
        assert sents[0].text.endswith("all cases.")

    def test_no_split_before_lowercase_continuation(self):
        sents = split_sentences("The spp. were cultured. then examined later.")
        assert len(sents) == 1

    def test_indices_dense_ascending(self):
        sents = split_sentences("A one. B two. C three.")
        assert [s.index for s in sents] == [0, 1, 2]


class TestTokenize:
    def test_figure_citation_text(self):
        stop = default_stopwords()
        assert tokenize("The pRb and p53 pathways", stop) == ["prb", "p53", "pathways"]

    def test_punctuation_only(self):
        assert tokenize("...") == []

    def test_all_stopwords(self):
        assert tokenize("A a THE the", {"a", "the"}) == []

    def test_numeric_filter(self):
        assert tokenize("12 13,4 50% cells", drop_numeric=True) == ["cells"]
        assert tokenize("12 cells") == ["12", "cells"]


class TestIdf:
    def test_term_in_every_doc(self):
        table = compute_idf([["x"], ["x"], ["x"], ["x"]])
        assert table.idf("x") == pytest.approx(math.log(5 / 5) + 1) == 1.0

    def test_term_in_one_of_nine(self):
        docs = [["rare"]] + [["common"]] * 8
        table = compute_idf(docs)
        assert table.idf("rare") == pytest.approx(math.log(10 / 2) + 1, abs=1e-12)
        assert table.idf("rare") == pytest.approx(2.609, abs=1e-3)

    def test_empty(self):
        table = compute_idf([])
        assert table.doc_count == 0
        assert len(table) == 0

    def test_df_counts_distinct_docs(self):
        table = compute_idf([["x", "x", "y"], ["x"]])
        assert table.df("x") == 2
        assert table.df("y") == 1

    def test_idf_strictly_positive(self):
        table = compute_idf([["x"], ["x"]])
        assert table.idf("x") > 0


class TestVectorize:
    def test_fixed_point_weights_equal_idf(self):
        # tf=1 terms, doc length equal to the average: weight(t) == idf(t)
        idf = compute_idf([["a", "b"], ["a", "c"]])
        pivot = PivotParams(slope=0.37, avg_doc_len=2)
        v = vectorize(["a", "b"], idf, pivot)
        assert v.weights["a"] == pytest.approx(idf.idf("a"))
        assert v.weights["b"] == pytest.approx(idf.idf("b"))

    def test_pivot_denominator(self):
        idf = IdfTable(1, {})
        pivot = PivotParams(slope=0.2, avg_doc_len=20)
        tokens = [f"t{i}" for i in range(10)]
        v = vectorize(tokens, idf, pivot)
        unpivoted = vectorize(tokens, idf, PivotParams(slope=0.0, avg_doc_len=20))
        for t in tokens:
            assert v.weights[t] == pytest.approx(unpivoted.weights[t] / 0.9)

    def test_empty_tokens(self):
        v = vectorize([], IdfTable(0, {}), PivotParams())
        assert len(v) == 0
        assert v.norm == 0.0

    def test_monotone_in_tf(self):
        idf = IdfTable(1, {})
        pivot = PivotParams(slope=0.0, avg_doc_len=1)
        w1 = vectorize(["t"], idf, pivot).weights["t"]
        w3 = vectorize(["t"] * 3, idf, pivot).weights["t"]
        w9 = vectorize(["t"] * 9, idf, pivot).weights["t"]
        assert w1 <= w3 <= w9


class TestCosine:
    def test_self_similarity(self):
        v = SparseVector({"x": 0.3, "y": 1.2})
        assert cosine(v, v) == pytest.approx(1.0)

    def test_disjoint_terms(self):
        assert cosine(SparseVector({"x": 1}), SparseVector({"y": 1})) == 0.0

    def test_known_value(self):
        a = SparseVector({"x": 1, "y": 1})
        b = SparseVector({"x": 1})
        assert cosine(a, b) == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_zero_vector(self):
        assert cosine(SparseVector({}), SparseVector({"x": 1})) == 0.0

    @given(
        st.dictionaries(st.sampled_from("abcdef"), st.floats(0.01, 10), max_size=5),
        st.dictionaries(st.sampled_from("abcdef"), st.floats(0.01, 10), max_size=5),
        st.floats(0.01, 100),
    )
    def test_symmetric_and_scale_invariant(self, wa, wb, alpha):
        a, b = SparseVector(wa), SparseVector(wb)
        assert cosine(a, b) == pytest.approx(cosine(b, a))
        scaled = SparseVector({t: alpha * w for t, w in wa.items()})
        assert cosine(scaled, b) == pytest.approx(cosine(a, b), abs=1e-9)

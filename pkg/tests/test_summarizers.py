import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from laysumm.corpus import SummaryType
from laysumm.evaluation import rouge_n
from laysumm.summarizers import (
    ExtractiveSummary,
    SentenceGraph,
    article_sentences,
    boundary_position_score,
    cosine_matrix,
    hiporank,
    hiporank_scores,
    lead3,
    leadk,
    lexrank,
    oracle,
    pagerank,
    textrank,
    top_k,
)
from laysumm.textproc import split_sentences


def doc(*sentences):
    return split_sentences(" ".join(sentences))


def ten_word(i):
    return f"Sentence {'abcdef'[i]} " + " ".join(["word"] * 7) + " end."


def test_lead3():
    five = doc(*(f"Line {i}." for i in range(5)))
    assert lead3(five).sentence_indices == (0, 1, 2)
    assert lead3(five[:2]).sentence_indices == (0, 1)
    assert lead3([]) == ExtractiveSummary((), "")
    assert lead3(five).text == "Line 0. Line 1. Line 2."


def test_leadk():
    d = doc(*(ten_word(i) for i in range(6)))
    assert all(len(s.words) == 10 for s in d)
    assert leadk(d, 25).sentence_indices == (0, 1, 2)
    assert leadk(d, 1).sentence_indices == (0,)
    assert leadk(d, 1000).sentence_indices == tuple(range(6))
    assert leadk(d, 30) == lead3(d)
    with pytest.raises(ValueError):
        leadk(d, 0)


def test_oracle_picks_exact_match_first():
    d = doc("Mice were fed.", "Cells divided.", "Weather was mild.", "Nothing happened.", "Insulin lowers glucose levels.")
    summary, trace = oracle(d, "Insulin lowers glucose levels.", return_trace=True)
    assert summary.sentence_indices[0] == 4
    assert summary.sentence_indices == (4,)
    assert trace[-1] == pytest.approx(1.0)


def test_oracle_document_is_reference():
    ref = "Insulin lowers glucose. Cells take up sugar. The liver stores it."
    summary = oracle(split_sentences(ref), ref)
    r1, r2 = rouge_n(summary.text, ref, 1).f1, rouge_n(summary.text, ref, 2).f1
    assert (r1 + r2) / 2 == pytest.approx(1.0)


def test_oracle_needs_reference():
    with pytest.raises(ValueError):
        oracle(doc("A b c."), "  ")


words = st.sampled_from(["cell", "mouse", "gene", "protein", "brain", "sugar", "the", "a"])
docs = st.lists(st.lists(words, min_size=1, max_size=6), min_size=1, max_size=7)


@settings(max_examples=60)
@given(docs, st.lists(words, min_size=1, max_size=10))
def test_oracle_trace_strictly_increasing(sents, ref):
    d = doc(*(" ".join(s).capitalize() + "." for s in sents))
    summary, trace = oracle(d, " ".join(ref), return_trace=True)
    assert all(b > a for a, b in zip(trace, trace[1:]))
    assert len(trace) == len(summary.sentence_indices) + 1


def test_pagerank_identical_pair_beats_isolate():
    d = doc("Insulin lowers blood sugar.", "Insulin lowers blood sugar.", "Weather was mild today.")
    for ranker in (textrank, lexrank):
        _, rank = ranker(d, summary_sentences=1, return_rank=True)
        assert rank.scores[0] > rank.scores[2] and rank.scores[1] > rank.scores[2]
        assert rank.scores[0] == pytest.approx(rank.scores[1])


def test_disjoint_sentences_uniform():
    d = doc("Alpha beta.", "Gamma delta.", "Epsilon zeta.", "Eta theta.")
    for ranker in (textrank, lexrank):
        summary, rank = ranker(d, summary_sentences=2, return_rank=True)
        assert np.allclose(rank.scores, 0.25)
        assert summary.sentence_indices == (0, 1)


def test_single_sentence():
    d = doc("Only one sentence here.")
    assert textrank(d).sentence_indices == (0,)
    assert lexrank(d).sentence_indices == (0,)
    assert hiporank([d]).sentence_indices == (0,)


def test_cosine_self():
    sim = cosine_matrix([["a", "b"], ["c"], ["a", "b"]])
    assert sim[0, 0] == pytest.approx(1.0)
    assert sim[0, 1] == 0.0
    assert sim[0, 2] == pytest.approx(1.0)


@settings(max_examples=60)
@given(docs)
def test_stationary_vector_properties(sents):
    d = doc(*(" ".join(s).capitalize() + "." for s in sents))
    for ranker in (textrank, lexrank):
        _, rank = ranker(d, return_rank=True)
        assert abs(rank.scores.sum() - 1.0) <= 1e-9
        assert rank.residual < 1e-6
        assert np.all(rank.scores > 0)


def test_pagerank_validation():
    with pytest.raises(ValueError):
        SentenceGraph(np.array([[1.0]]))
    with pytest.raises(ValueError):
        SentenceGraph(np.array([[0.0, -1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        pagerank(SentenceGraph(np.zeros((2, 2))), damping=1.0)
    assert pagerank(SentenceGraph(np.zeros((0, 0)))).scores.size == 0


def test_top_k_ties():
    assert top_k([1, 3, 3, 0], 2) == [1, 2]
    assert top_k([5, 5, 5], 2) == [0, 1]
    assert top_k([2, 1, 3], 2) == [0, 2]


def test_boundary_position():
    n = 7
    scores = [boundary_position_score(i, n, 1.0) for i in range(n)]
    assert scores[0] == scores[-1] == 2.0
    assert scores[3] == min(scores)
    assert all(boundary_position_score(i, n, 0.0) == 1.0 for i in range(n))


def test_hiporank_uniform_similarity_follows_position():
    section = doc(*["Insulin lowers blood sugar."] * 6)
    scores = hiporank_scores([section])
    assert scores[0] == scores[5] == max(scores)
    assert scores[2] == scores[3] == min(scores)
    assert hiporank([section], summary_sentences=2).sentence_indices == (0, 5)


def test_hiporank_lambda_zero_is_within_section():
    s1 = doc("Insulin lowers sugar.", "Insulin helps cells.", "Rain fell today.")
    s2 = doc("Sugar feeds cells.", "Insulin is a hormone.")
    scores = hiporank_scores([s1, s2], lambda_section=0.0)
    # recompute from the within-section similarities alone
    sim = cosine_matrix([[t.normalized for t in s.words] for s in s1 + s2])
    expected = []
    for lo, sec in ((0, s1), (3, s2)):
        n = len(sec)
        for local in range(n):
            i = lo + local
            within = (sim[i, lo : lo + n].sum() - sim[i, i]) / (n - 1)
            expected.append(boundary_position_score(local, n, 1.0) * within)
    assert np.allclose(scores, expected)


def test_hiporank_on_article(article):
    out = hiporank(article, summary_sentences=2, summary_type=SummaryType.PLOS_LAY)
    sents = article_sentences(article, SummaryType.PLOS_LAY)
    assert len(out.sentence_indices) == 2
    assert out.text == " ".join(sents[i].text for i in out.sentence_indices)


def test_extractive_summary_bounds():
    d = doc("One.", "Two.")
    with pytest.raises(IndexError):
        ExtractiveSummary.from_indices(d, [5])
    assert ExtractiveSummary.from_indices(d, [1, 0, 1]).sentence_indices == (0, 1)


@settings(max_examples=30)
@given(docs)
def test_summarizers_deterministic(sents):
    d = doc(*(" ".join(s).capitalize() + "." for s in sents))
    assert textrank(d) == textrank(d)
    assert lexrank(d) == lexrank(d)
    assert hiporank([d]) == hiporank([d])

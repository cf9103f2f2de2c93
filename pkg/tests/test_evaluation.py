import math

import pytest
from hypothesis import given, strategies as st

from laysumm.corpus import SummaryType, Venue
from laysumm.evaluation import (
    RougeScore,
    SystemOutput,
    evaluate_systems,
    lcs_length,
    rouge_l,
    rouge_n,
    rouge_tokens,
    score_document,
)
from tests.conftest import make_article
from tests.oracles import brute_lcs


def test_rouge_n_hand_case():
    s = rouge_n("the cat sat", "the cat", 1)
    assert (s.precision, s.recall) == pytest.approx((2 / 3, 1.0))
    assert s.f1 == pytest.approx(0.8)


def test_rouge_identical_and_disjoint():
    for n in (1, 2):
        assert rouge_n("cells divide fast", "cells divide fast", n).f1 == 1.0
        assert rouge_n("cells divide", "mice run", n).f1 == 0.0
    assert rouge_n("", "", 1) == RougeScore(0.0, 0.0, 0.0)


def test_rouge_l_hand_case():
    s = rouge_l("a b c d", "a c")
    assert lcs_length("a b c d".split(), "a c".split()) == 2
    assert (s.precision, s.recall, s.f1) == pytest.approx((0.5, 1.0, 2 / 3))
    assert rouge_l("", "a c").f1 == 0.0
    assert rouge_l("same words here", "same words here").f1 == 1.0


def test_stemming():
    assert rouge_tokens("Cells were running") == ["cell", "were", "run"]
    assert rouge_tokens("Cells were running", stem=False) == ["cells", "were", "running"]
    assert rouge_n("running cells", "run cell", 1).f1 == 1.0
    assert rouge_n("running cells", "run cell", 1, stem=False).f1 == 0.0


toks = st.lists(st.sampled_from("abcde"), max_size=8)


@given(toks, toks)
def test_lcs_matches_brute_force(a, b):
    assert lcs_length(a, b) == brute_lcs(a, b)


@given(st.lists(st.integers(0, 3), max_size=70), st.lists(st.integers(0, 3), max_size=70))
def test_lcs_long_inputs_symmetric(a, b):
    # crosses the 64-bit word boundary of the bit-parallel routine
    n = lcs_length(a, b)
    assert n == lcs_length(b, a)
    assert n <= min(len(a), len(b))


def dp_lcs(a, b):
    t = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            t[i + 1][j + 1] = t[i][j] + 1 if x == y else max(t[i][j + 1], t[i + 1][j])
    return t[-1][-1]


@given(st.lists(st.integers(0, 5), max_size=150), st.lists(st.integers(0, 5), max_size=150))
def test_lcs_matches_table_dp(a, b):
    assert lcs_length(a, b) == dp_lcs(a, b)


words = st.lists(st.sampled_from(["cell", "mouse", "gene", "the", "protein"]), max_size=10)


@given(words, words)
def test_rouge_bounds(c, r):
    cand, ref = " ".join(c), " ".join(r)
    for s in (rouge_n(cand, ref, 1), rouge_n(cand, ref, 2), rouge_l(cand, ref)):
        assert 0 <= s.precision <= 1 and 0 <= s.recall <= 1 and 0 <= s.f1 <= 1
        assert s.f1 <= max(s.precision, s.recall) + 1e-12


@given(words, words)
def test_rouge1_recall_monotone(c, r):
    if not r:
        return
    cand, ref = " ".join(c), " ".join(r)
    more = cand + " " + r[0]
    assert rouge_n(more, ref, 1).recall >= rouge_n(cand, ref, 1).recall


def corpus():
    return [
        make_article("p1", lay="Cells talk to each other. Proteins help."),
        make_article("e1", venue=Venue.ELIFE, lay="The brain uses sugar. It needs a lot."),
    ]


def test_self_evaluation():
    arts = corpus()
    outs = [SystemOutput("ref", a.id, t, a.reference(t)) for a in arts for t in a.summary_types]
    report = evaluate_systems(outs, arts)
    assert [(r.system, r.summary_type) for r in report.rows] == [
        ("ref", SummaryType.ABSTRACT),
        ("ref", SummaryType.PLOS_LAY),
        ("ref", SummaryType.ELIFE_LAY),
    ]
    for r in report.rows:
        assert r.r1.f1 == r.r2.f1 == r.rl.f1 == 1.0


def test_single_document_row():
    arts = corpus()
    report = evaluate_systems([{"system": "x", "article_id": "p1", "summary_type": "abstract", "text": "Hi there."}], arts)
    assert len(report.rows) == 1 and report.rows[0].n == 1


def test_report_means_and_order():
    arts = corpus()
    texts = {"p1": "Cells talk.", "e1": "The brain needs sugar badly."}
    outs = [SystemOutput(s, a.id, SummaryType.ABSTRACT, texts[a.id]) for s in ("zeta", "alpha") for a in arts]
    report = evaluate_systems(outs, arts)
    assert [r.system for r in report.rows] == ["alpha", "zeta"]
    docs = [score_document((texts[a.id], a.abstract)) for a in arts]
    row = report.row("alpha", SummaryType.ABSTRACT)
    assert row.n == 2
    assert row.r1.f1 == pytest.approx(sum(d.r1.f1 for d in docs) / 2)
    assert row.rl.recall == pytest.approx(sum(d.rl.recall for d in docs) / 2)
    assert row.fkgl == pytest.approx(sum(d.fkgl for d in docs) / 2)
    assert row.cli == pytest.approx(sum(d.cli for d in docs) / 2)


def test_empty_output_skipped_in_readability():
    arts = corpus()
    outs = [SystemOutput("s", "p1", SummaryType.ABSTRACT, ""), SystemOutput("s", "e1", SummaryType.ABSTRACT, "Cells talk.")]
    row = evaluate_systems(outs, arts).rows[0]
    assert row.fkgl == pytest.approx(score_document(("Cells talk.", "x")).fkgl)
    only_empty = evaluate_systems(outs[:1], arts).rows[0]
    assert math.isnan(only_empty.fkgl)
    assert "nan" in evaluate_systems(outs[:1], arts).to_tsv()


def test_missing_reference():
    with pytest.raises(KeyError, match="nope"):
        evaluate_systems([SystemOutput("s", "nope", SummaryType.ABSTRACT, "x")], corpus())
    with pytest.raises(KeyError, match="ELIFE_LAY"):
        evaluate_systems([SystemOutput("s", "p1", SummaryType.ELIFE_LAY, "x")], corpus())


def test_tsv_layout():
    arts = corpus()
    tsv = evaluate_systems([SystemOutput("s", "p1", SummaryType.ABSTRACT, arts[0].abstract)], arts).to_tsv()
    header, row = tsv.splitlines()
    assert header.split("\t") == ["system", "summary_type", "n", "R-1", "R-2", "R-L", "FKGL", "DCRS", "CLI"]
    assert row.split("\t")[:6] == ["s", "ABSTRACT", "1", "100.00", "100.00", "100.00"]


def test_parallel_matches_serial(bundled):
    outs = [SystemOutput("s", a.id, SummaryType.ABSTRACT, a.lay_summary) for a in bundled[:20]]
    assert evaluate_systems(outs, bundled, jobs=2) == evaluate_systems(outs, bundled, jobs=1)

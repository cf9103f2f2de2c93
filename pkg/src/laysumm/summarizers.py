"""Extractive baselines: Lead-3, Lead-K, greedy ROUGE oracle, TextRank,
LexRank and HipoRank."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corpus import Article, SummaryType, input_sections
from .evaluation import ngrams, rouge_n_counts, rouge_tokens
from .textproc import Sentence, split_sentences


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class ExtractiveSummary:
    sentence_indices: tuple[int, ...]
    text: str

    @classmethod
    def from_indices(cls, sentences: Sequence[Sentence], indices) -> "ExtractiveSummary":
        idx = tuple(sorted(set(int(i) for i in indices)))
        if idx and (idx[0] < 0 or idx[-1] >= len(sentences)):
            raise IndexError(f"sentence index out of range for a {len(sentences)}-sentence document")
        return cls(idx, " ".join(sentences[i].text for i in idx))


@dataclass(frozen=True)
class SentenceGraph:
    weights: np.ndarray
    directed: bool = False

    def __post_init__(self):
        w = self.weights
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValueError("weight matrix must be square")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        if np.any(np.diag(w) != 0):
            raise ValueError("self-loops are not allowed")

    @property
    def n(self) -> int:
        return self.weights.shape[0]


def document_sentences(sections: Sequence[tuple[str, str]]) -> list[list[Sentence]]:
    """Segment each section separately so no sentence crosses a section break."""
    return [split_sentences(text) for _, text in sections]


def article_sentences(article: Article, summary_type: SummaryType | str) -> list[Sentence]:
    return [s for sec in document_sentences(input_sections(article, summary_type)) for s in sec]


# ---------------------------------------------------------------- heuristics

def lead3(doc_sentences: Sequence[Sentence]) -> ExtractiveSummary:
    return ExtractiveSummary.from_indices(doc_sentences, range(min(3, len(doc_sentences))))


def leadk(doc_sentences: Sequence[Sentence], target_words: float) -> ExtractiveSummary:
    """Shortest prefix of the document with at least `target_words` words."""
    if target_words <= 0:
        raise ValueError("target_words must be positive")
    total = 0
    k = len(doc_sentences)
    for i, s in enumerate(doc_sentences):
        total += len(s.words)
        if total >= target_words:
            k = i + 1
            break
    return ExtractiveSummary.from_indices(doc_sentences, range(k))


def oracle_objective(cand1: Counter, cand2: Counter, ref1: Counter, ref2: Counter) -> float:
    return 0.5 * (rouge_n_counts(cand1, ref1).f1 + rouge_n_counts(cand2, ref2).f1)


def oracle(
    doc_sentences: Sequence[Sentence],
    reference: str,
    max_sentences: int | None = None,
    stem: bool = True,
    return_trace: bool = False,
):
    """Greedy extractive oracle maximising mean ROUGE-1/ROUGE-2 F1.

    Bigrams of the candidate are taken over the concatenated selection in
    document order, matching how the final summary is scored.
    """
    if not reference.strip():
        raise ValueError("oracle needs a non-empty reference")
    ref_tokens = rouge_tokens(reference, stem)
    ref1, ref2 = ngrams(ref_tokens, 1), ngrams(ref_tokens, 2)
    sent_tokens = [rouge_tokens(s.text, stem) for s in doc_sentences]
    uni = [ngrams(t, 1) for t in sent_tokens]
    bi = [ngrams(t, 2) for t in sent_tokens]
    selected: list[int] = []
    sel1: Counter = Counter()
    sel2: Counter = Counter()
    best = 0.0
    trace = [best]
    limit = len(doc_sentences) if max_sentences is None else min(max_sentences, len(doc_sentences))
    while len(selected) < limit:
        choice, choice_score = None, best
        for i in range(len(doc_sentences)):
            if i in selected or not sent_tokens[i]:
                continue
            order = sorted(selected + [i])
            # bigrams spanning adjacent selected sentences
            junction = Counter(
                (sent_tokens[a][-1], sent_tokens[b][0]) for a, b in zip(order, order[1:])
            )
            score = oracle_objective(sel1 + uni[i], sel2 + bi[i] + junction, ref1, ref2)
            if score > choice_score:
                choice, choice_score = i, score
        if choice is None:
            break
        selected.append(choice)
        sel1 += uni[choice]
        sel2 += bi[choice]
        best = choice_score
        trace.append(best)
    summary = ExtractiveSummary.from_indices(doc_sentences, selected)
    return (summary, trace) if return_trace else summary


# ---------------------------------------------------------------- graph ranking

@dataclass(frozen=True)
class RankResult:
    scores: np.ndarray
    residual: float
    iterations: int


def pagerank(graph: SentenceGraph, damping: float = 0.85, eps: float = 1e-6, max_iter: int = 10_000) -> RankResult:
    """Power iteration on the row-normalised graph with uniform teleport.
    Rows without outgoing weight (isolated sentences) jump uniformly."""
    if not 0 <= damping < 1:
        raise ValueError("damping must be in [0, 1)")
    n = graph.n
    if n == 0:
        return RankResult(np.zeros(0), 0.0, 0)
    w = graph.weights.astype(float)
    out = w.sum(axis=1)
    dangling = out == 0
    trans = np.divide(w, out[:, None], out=np.zeros_like(w), where=~dangling[:, None])
    p = np.full(n, 1.0 / n)
    for it in range(1, max_iter + 1):
        nxt = (1 - damping) / n + damping * (p @ trans + p[dangling].sum() / n)
        residual = float(np.abs(nxt - p).sum())
        p = nxt
        if residual < eps:
            break
    else:
        raise ConvergenceError(f"power iteration did not reach L1 change < {eps} in {max_iter} steps")
    return RankResult(p / p.sum(), residual, it)


def top_k(scores: Sequence[float], k: int) -> list[int]:
    """Indices of the k highest scores, ties to the lower index, in document order."""
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return sorted(order[: max(k, 0)])


def _word_sets(doc_sentences: Sequence[Sentence]) -> list[list[str]]:
    return [[t.normalized for t in s.words] for s in doc_sentences]


def textrank_graph(doc_sentences: Sequence[Sentence]) -> SentenceGraph:
    words = _word_sets(doc_sentences)
    sets = [set(w) for w in words]
    n = len(doc_sentences)
    w = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            overlap = len(sets[i] & sets[j])
            if overlap:
                w[i, j] = w[j, i] = overlap / (math.log1p(len(words[i])) + math.log1p(len(words[j])))
    return SentenceGraph(w, directed=False)


def _rank_summary(doc_sentences, graph, damping, eps, summary_sentences, return_rank):
    rank = pagerank(graph, damping, eps)
    summary = ExtractiveSummary.from_indices(doc_sentences, top_k(rank.scores, summary_sentences))
    return (summary, rank) if return_rank else summary


def textrank(
    doc_sentences: Sequence[Sentence],
    damping: float = 0.85,
    eps: float = 1e-6,
    summary_sentences: int = 3,
    return_rank: bool = False,
):
    return _rank_summary(doc_sentences, textrank_graph(doc_sentences), damping, eps, summary_sentences, return_rank)


def tfidf_matrix(token_lists: Sequence[Sequence[str]]) -> np.ndarray:
    """L2-normalised TF-IDF rows, IDF smoothed over the given sentences:
    idf(w) = ln((1 + N) / (1 + df(w))) + 1."""
    vocab = sorted({t for toks in token_lists for t in toks})
    index = {t: i for i, t in enumerate(vocab)}
    n = len(token_lists)
    tf = np.zeros((n, len(vocab)))
    for r, toks in enumerate(token_lists):
        for t, c in Counter(toks).items():
            tf[r, index[t]] = c
    df = (tf > 0).sum(axis=0)
    idf = np.log((1 + n) / (1 + df)) + 1
    x = tf * idf
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    return np.divide(x, norms, out=np.zeros_like(x), where=norms > 0)


def cosine_matrix(token_lists: Sequence[Sequence[str]]) -> np.ndarray:
    x = tfidf_matrix(token_lists)
    return np.clip(x @ x.T, 0.0, 1.0)


def lexrank_graph(doc_sentences: Sequence[Sentence], threshold: float = 0.1) -> SentenceGraph:
    sim = cosine_matrix(_word_sets(doc_sentences))
    sim[sim < threshold] = 0.0
    np.fill_diagonal(sim, 0.0)
    return SentenceGraph(sim, directed=False)


def lexrank(
    doc_sentences: Sequence[Sentence],
    threshold: float = 0.1,
    damping: float = 0.85,
    eps: float = 1e-6,
    summary_sentences: int = 3,
    return_rank: bool = False,
):
    return _rank_summary(doc_sentences, lexrank_graph(doc_sentences, threshold), damping, eps, summary_sentences, return_rank)


# ---------------------------------------------------------------- HipoRank

def boundary_position_score(i: int, n: int, boundary_bias: float) -> float:
    """1 + bias at either end of a section, decaying linearly toward the middle."""
    half = math.ceil(n / 2)
    return 1 + boundary_bias * (1 - min(i, n - 1 - i) / half)


def hiporank_scores(
    sections: Sequence[Sequence[Sentence]],
    lambda_section: float = 1.0,
    boundary_bias: float = 1.0,
) -> np.ndarray:
    """Directed hierarchical centrality for every sentence, in document order.

    Incoming edges to sentence i come from the other sentences of its section
    and from every other section (as a mean TF-IDF vector); each is scaled by
    i's boundary position score. The within-section sum is averaged over the
    section's other sentences, the cross-section sum over the other sections.
    """
    sections = [list(sec) for sec in sections if sec]
    flat = [s for sec in sections for s in sec]
    if not flat:
        return np.zeros(0)
    x = tfidf_matrix(_word_sets(flat))
    sent_sim = np.clip(x @ x.T, 0.0, 1.0)
    bounds = np.cumsum([0] + [len(sec) for sec in sections])
    sec_vecs = np.stack([x[bounds[k] : bounds[k + 1]].mean(axis=0) for k in range(len(sections))])
    sec_norms = np.linalg.norm(sec_vecs, axis=1, keepdims=True)
    sec_vecs = np.divide(sec_vecs, sec_norms, out=np.zeros_like(sec_vecs), where=sec_norms > 0)
    sent_sec_sim = np.clip(x @ sec_vecs.T, 0.0, 1.0)

    scores = np.zeros(len(flat))
    n_sections = len(sections)
    for k in range(n_sections):
        lo, hi = bounds[k], bounds[k + 1]
        n = hi - lo
        for local, i in enumerate(range(lo, hi)):
            pos = boundary_position_score(local, n, boundary_bias)
            within = (sent_sim[i, lo:hi].sum() - sent_sim[i, i]) / (n - 1) if n > 1 else 0.0
            if n_sections > 1:
                cross = (sent_sec_sim[i].sum() - sent_sec_sim[i, k]) / (n_sections - 1)
            else:
                cross = 0.0
            scores[i] = pos * (within + lambda_section * cross)
    return scores


def hiporank(
    article: Article | Sequence[Sequence[Sentence]],
    lambda_section: float = 1.0,
    boundary_bias: float = 1.0,
    summary_sentences: int = 3,
    summary_type: SummaryType | str = SummaryType.ABSTRACT,
) -> ExtractiveSummary:
    """HipoRank over an article (sections chosen by `summary_type`) or over
    pre-segmented sections."""
    if isinstance(article, Article):
        sections = document_sentences(input_sections(article, summary_type))
    else:
        sections = [list(sec) for sec in article]
    flat = [s for sec in sections for s in sec]
    scores = hiporank_scores(sections, lambda_section, boundary_bias)
    return ExtractiveSummary.from_indices(flat, top_k(list(scores), summary_sentences))

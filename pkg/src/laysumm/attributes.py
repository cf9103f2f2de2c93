"""The four control attributes (length, readability, background, content word
entropy) and the auxiliary readability indices used for evaluation."""

from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Protocol

from .textproc import Sentence, Token, count_syllables, split_sentences, tokenize

logger = logging.getLogger(__name__)

BG_POSITION_FRACTION_TENTHS = 3  # first 30% of sentence positions count as background


class AttributeComputationError(ValueError):
    """Raised when an attribute is undefined for the given text."""


def _read_lines(name: str) -> list[str]:
    text = resources.files("laysumm").joinpath("data").joinpath(name).read_text(encoding="utf-8")
    return [ln.strip().lower() for ln in text.splitlines() if ln.strip()]


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    return frozenset(_read_lines("stopwords.txt"))


@lru_cache(maxsize=None)
def default_cue_phrases() -> tuple[str, ...]:
    return tuple(_read_lines("cue_phrases.txt"))


@lru_cache(maxsize=None)
def dale_chall_words() -> frozenset[str]:
    return frozenset(_read_lines("dale_chall.txt"))


def load_word_list(path: str | Path) -> frozenset[str]:
    with open(path, encoding="utf-8") as f:
        return frozenset(ln.strip().lower() for ln in f if ln.strip())


@dataclass(frozen=True)
class AttributeVector:
    length_chars: int
    fkgl: float
    bg_pct: float
    cwe: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.length_chars, self.fkgl, self.bg_pct, self.cwe)


# ---------------------------------------------------------------- counting

@dataclass(frozen=True)
class TextCounts:
    sentences: int
    words: int
    syllables: int
    letters: int


def text_counts(text: str) -> TextCounts:
    sentences = split_sentences(text)
    words = [t for s in sentences for t in s.tokens if t.is_word]
    return TextCounts(
        sentences=len(sentences),
        words=len(words),
        syllables=sum(count_syllables(w) for w in words),
        letters=sum(1 for w in words for ch in w.surface if ch.isalpha()),
    )


def _require(counts: TextCounts, what: str, need_sentences: bool = True) -> None:
    if counts.words == 0:
        raise AttributeComputationError(f"{what}: text has no words")
    if need_sentences and counts.sentences == 0:
        raise AttributeComputationError(f"{what}: text has no sentences")


# ---------------------------------------------------------------- readability

def length_chars(summary: str) -> int:
    return len(summary)


def fkgl(text: str) -> float:
    """Flesch-Kincaid grade level."""
    c = text_counts(text)
    _require(c, "fkgl")
    return 0.39 * (c.words / c.sentences) + 11.8 * (c.syllables / c.words) - 15.59


def is_familiar(word: str, familiar: frozenset[str]) -> bool:
    """Dale-Chall familiarity after stripping one of s/es/ed/ing."""
    if word in familiar:
        return True
    for suffix in ("s", "es", "ed", "ing"):
        if word.endswith(suffix) and word[: -len(suffix)] in familiar:
            return True
    return False


def dcrs(text: str, familiar: frozenset[str] | None = None) -> float:
    """Dale-Chall readability score."""
    familiar = dale_chall_words() if familiar is None else familiar
    sentences = split_sentences(text)
    words = [t.normalized for s in sentences for t in s.tokens if t.is_word]
    if not words or not sentences:
        raise AttributeComputationError("dcrs: text needs at least one word and one sentence")
    difficult = sum(1 for w in words if not is_familiar(w, familiar))
    pct_difficult = 100.0 * difficult / len(words)
    score = 0.1579 * pct_difficult + 0.0496 * (len(words) / len(sentences))
    if pct_difficult > 5:
        score += 3.6365
    return score


def cli_index(text: str) -> float:
    """Coleman-Liau index from letters and sentences per 100 words."""
    c = text_counts(text)
    _require(c, "cli_index", need_sentences=False)
    letters_per_100 = 100.0 * c.letters / c.words
    sentences_per_100 = 100.0 * c.sentences / c.words
    return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8


# ---------------------------------------------------------------- entropy backend

class ProbabilityModel(Protocol):
    def prob(self, word: str) -> float: ...


@dataclass(frozen=True)
class UnigramModel:
    counts: Mapping[str, int]
    total: int
    vocab_size: int
    smoothing_k: float = 1.0

    def prob(self, word: str) -> float:
        return (self.counts.get(word, 0) + self.smoothing_k) / (
            self.total + self.smoothing_k * self.vocab_size
        )

    def to_json(self) -> dict:
        return {
            "counts": dict(sorted(self.counts.items())),
            "total": self.total,
            "vocab_size": self.vocab_size,
            "smoothing_k": self.smoothing_k,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "UnigramModel":
        return cls(dict(obj["counts"]), int(obj["total"]), int(obj["vocab_size"]), float(obj["smoothing_k"]))


def unigram_from_texts(texts: Iterable[str], smoothing_k: float = 1.0) -> UnigramModel:
    if smoothing_k <= 0:
        raise ValueError("smoothing_k must be positive")
    counts: Counter[str] = Counter()
    for text in texts:
        counts.update(t.normalized for t in tokenize(text) if t.is_word)
    total = sum(counts.values())
    if total == 0:
        raise AttributeComputationError("cannot train a unigram model on an empty corpus")
    return UnigramModel(dict(counts), total, len(counts) + 1, smoothing_k)


def article_texts(article) -> list[str]:
    """Body text plus both reference summaries of one article."""
    return [article.title, article.abstract, *(t for _, t in article.sections), article.lay_summary]


def train_unigram(articles, smoothing_k: float = 1.0) -> UnigramModel:
    articles = list(articles)
    if not articles:
        raise AttributeComputationError("cannot train a unigram model on an empty corpus")
    return unigram_from_texts((t for a in articles for t in article_texts(a)), smoothing_k)


def token_entropy(token: Token | str, model: ProbabilityModel) -> float:
    """Information content -ln P(token), in nats."""
    word = token.normalized if isinstance(token, Token) else token.lower()
    p = model.prob(word)
    if not 0 < p <= 1:
        raise ValueError(f"probability of {word!r} out of range: {p}")
    return 0.0 if p == 1 else -math.log(p)


# ---------------------------------------------------------------- context

class BgBackend(str, Enum):
    HEURISTIC = "HEURISTIC"
    PRECOMPUTED = "PRECOMPUTED"


# (article_id, summary_type) -> per-sentence labels
BgLabels = Mapping[tuple[str, str], tuple[bool, ...]]
# (article_id, summary_type) -> {sentence_index: token indices}
ContentSpans = Mapping[tuple[str, str], Mapping[int, tuple[int, ...]]]


@dataclass(frozen=True)
class AttributeContext:
    unigram: ProbabilityModel
    bg_backend: BgBackend = BgBackend.HEURISTIC
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    cue_phrases: tuple[str, ...] = field(default_factory=default_cue_phrases)
    bg_labels: BgLabels | None = None
    content_spans: ContentSpans | None = None

    def __post_init__(self):
        if not self.stopwords:
            raise ValueError("stopword list must be non-empty")
        if self.bg_backend is BgBackend.PRECOMPUTED and self.bg_labels is None:
            raise ValueError("PRECOMPUTED background backend needs a label table")


def _key(article_id: str, summary_type) -> tuple[str, str]:
    return (str(article_id), getattr(summary_type, "value", str(summary_type)))


def load_bg_labels(path: str | Path) -> dict[tuple[str, str], tuple[bool, ...]]:
    out = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            obj = json.loads(line)
            labels = obj["labels"]
            if not all(isinstance(x, bool) for x in labels):
                raise ValueError(f"{path}:{lineno}: labels must be booleans")
            out[_key(obj["article_id"], obj["summary_type"].upper())] = tuple(labels)
    return out


def load_content_spans(path: str | Path) -> dict[tuple[str, str], dict[int, tuple[int, ...]]]:
    out: dict[tuple[str, str], dict[int, tuple[int, ...]]] = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            obj = json.loads(line)
            key = _key(obj["article_id"], obj["summary_type"].upper())
            out.setdefault(key, {})[int(obj["sentence_index"])] = tuple(int(i) for i in obj["token_indices"])
    return out


# ---------------------------------------------------------------- background

def _has_cue(sentence: Sentence, cues: tuple[str, ...]) -> bool:
    padded = " " + " ".join(t.normalized for t in sentence.tokens) + " "
    return any(f" {cue} " in padded for cue in cues)


def background_labels(sentences: list[Sentence], ctx: AttributeContext, key=None) -> list[bool]:
    if ctx.bg_backend is BgBackend.PRECOMPUTED:
        if key is None:
            raise KeyError("PRECOMPUTED background labels need an (article_id, summary_type) key")
        k = _key(*key)
        labels = ctx.bg_labels.get(k)
        if labels is None:
            raise KeyError(f"no background labels for {k}")
        if len(labels) < len(sentences):
            raise KeyError(f"no background label for {k + (len(labels),)}")
        return list(labels[: len(sentences)])
    n_positional = BG_POSITION_FRACTION_TENTHS * len(sentences) // 10
    return [i < n_positional or _has_cue(s, ctx.cue_phrases) for i, s in enumerate(sentences)]


def bg_percentage(summary: str, ctx: AttributeContext, key=None) -> float:
    """Percentage of sentences labelled as background."""
    sentences = split_sentences(summary)
    if not sentences:
        raise AttributeComputationError("bg_percentage: summary has no sentences")
    labels = background_labels(sentences, ctx, key)
    return 100.0 * sum(labels) / len(sentences)


# ---------------------------------------------------------------- content words

def content_words(sentence: Sentence, ctx: AttributeContext, key=None, sentence_index: int | None = None) -> list[Token]:
    if ctx.content_spans is not None and key is not None:
        k = _key(*key)
        by_sentence = ctx.content_spans.get(k)
        if by_sentence is None:
            raise KeyError(f"no content-word annotations for {k}")
        idx = by_sentence.get(sentence_index, ())
        return [sentence.tokens[i] for i in idx if sentence.tokens[i].is_word]
    return [
        t
        for t in sentence.tokens
        if t.is_word and len(t.normalized) >= 3 and t.normalized not in ctx.stopwords
    ]


def cwe(summary: str, ctx: AttributeContext, key=None) -> float:
    """Mean information content of the summary's content words."""
    entropies = [
        token_entropy(t, ctx.unigram)
        for i, s in enumerate(split_sentences(summary))
        for t in content_words(s, ctx, key, i)
    ]
    if not entropies:
        raise AttributeComputationError("cwe: summary has no content words")
    return math.fsum(entropies) / len(entropies)


def attribute_vector(summary: str, ctx: AttributeContext, key=None) -> AttributeVector:
    return AttributeVector(
        length_chars=length_chars(summary),
        fkgl=fkgl(summary),
        bg_pct=bg_percentage(summary, ctx, key),
        cwe=cwe(summary, ctx, key),
    )


def reference_attributes(summary: str, ctx: AttributeContext, key=None) -> AttributeVector:
    """attribute_vector for batch pipelines: a summary without content words
    gets cwe = 0 (with a warning) instead of aborting the run."""
    try:
        value = cwe(summary, ctx, key)
    except AttributeComputationError:
        logger.warning("no content words in %s; using cwe = 0", key if key is not None else "summary")
        value = 0.0
    return AttributeVector(
        length_chars=length_chars(summary),
        fkgl=fkgl(summary),
        bg_pct=bg_percentage(summary, ctx, key),
        cwe=value,
    )

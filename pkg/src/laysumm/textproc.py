"""Rule-based sentence segmentation, tokenization and syllable counting.

Everything here is a pure function of its input so results are bit-stable
across runs and machines. No external NLP toolkit is involved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

# Lowercased abbreviations (without their final period) that never end a sentence.
ABBREVIATIONS = frozenset(
    {
        "fig", "figs", "eq", "eqs", "ref", "refs", "tab", "sect", "sec", "ch",
        "al", "e.g", "i.e", "etc", "vs", "cf", "ca", "approx", "resp",
        "dr", "mr", "mrs", "ms", "prof", "st", "jr", "sr", "no", "nos",
        "vol", "pp", "inc", "ltd", "co", "dept", "univ", "suppl", "min",
    }
)

_BOUNDARY = re.compile(r"[.!?]+[\"')\]]*(?=\s+[\"'(\[]?[A-Z0-9])")
_VOWEL_GROUP = re.compile(r"[aeiouy]+")
_VOWELS = frozenset("aeiouy")


@dataclass(frozen=True)
class Token:
    surface: str

    @property
    def normalized(self) -> str:
        return self.surface.lower()

    @property
    def is_word(self) -> bool:
        return any(ch.isalpha() for ch in self.surface)


@dataclass(frozen=True)
class Sentence:
    text: str
    tokens: tuple[Token, ...]
    char_span: tuple[int, int]

    @property
    def words(self) -> list[Token]:
        return [t for t in self.tokens if t.is_word]


def _split_piece(piece: str) -> list[str]:
    start, end = 0, len(piece)
    while start < end and not piece[start].isalnum():
        start += 1
    while end > start and not piece[end - 1].isalnum():
        end -= 1
    out = list(piece[:start])
    if start < end:
        out.append(piece[start:end])
    out.extend(piece[end:])
    return out


def tokenize(text: str) -> list[Token]:
    """Split on whitespace, then peel leading/trailing punctuation off as
    single-character tokens. Internal punctuation ("state-of-the-art",
    "don't", "e.g") stays inside the token."""
    return [Token(s) for piece in text.split() for s in _split_piece(piece)]


def word_count(text: str) -> int:
    return sum(1 for t in tokenize(text) if t.is_word)


def _is_abbreviation(text: str, dot_pos: int) -> bool:
    """True when the '.' at dot_pos terminates a known abbreviation or an initial."""
    start = dot_pos
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start:dot_pos].lstrip("\"'([")
    if not word:
        return False
    if len(word) == 1 and word.isalpha() and word.isupper():
        return True  # personal initial, "J. Smith"
    return word.lower() in ABBREVIATIONS


def _make_sentence(text: str, start: int, end: int) -> Sentence | None:
    while start < end and text[start].isspace():
        start += 1
    while end > start and text[end - 1].isspace():
        end -= 1
    if start == end:
        return None
    chunk = text[start:end]
    return Sentence(chunk, tuple(tokenize(chunk)), (start, end))


def split_sentences(text: str) -> list[Sentence]:
    """Segment text at '.', '!' or '?' followed by whitespace and an
    uppercase letter or digit, unless the period closes an abbreviation."""
    sentences = []
    start = 0
    for m in _BOUNDARY.finditer(text):
        punct = text[m.start():m.end()].rstrip("\"')]")
        if punct == "." and _is_abbreviation(text, m.start()):
            continue
        sent = _make_sentence(text, start, m.end())
        if sent is not None:
            sentences.append(sent)
        start = m.end()
    sent = _make_sentence(text, start, len(text))
    if sent is not None:
        sentences.append(sent)
    return sentences


@lru_cache(maxsize=65536)
def _syllables(word: str) -> int:
    count = len(_VOWEL_GROUP.findall(word))
    if (
        word.endswith("e")
        and len(word) > 1
        and word[-2] not in _VOWELS
        and not (word.endswith("le") and len(word) > 2 and word[-3] not in _VOWELS)
    ):
        count -= 1
    return max(count, 1)


def count_syllables(word: Token | str) -> int:
    """Vowel-group syllable estimate with silent-e correction, minimum 1."""
    if isinstance(word, str):
        word = Token(word)
    if not word.is_word:
        raise ValueError(f"not a word token: {word.surface!r}")
    return _syllables(word.normalized)

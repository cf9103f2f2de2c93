"""Corpus records, JSONL I/O, PLOS/eLife merging and training-pair emission."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .attributes import AttributeComputationError, AttributeContext, reference_attributes
from .controls import BinningScheme, ControlTokenSeq, control_tokens

logger = logging.getLogger(__name__)


class Venue(str, Enum):
    PLOS = "PLOS"
    ELIFE = "ELIFE"


class Split(str, Enum):
    TRAIN = "TRAIN"
    VAL = "VAL"
    TEST = "TEST"


class SummaryType(str, Enum):
    """The three reference summary types. Declaration order is the canonical
    order for reports and for classifier tie-breaks."""

    ABSTRACT = "ABSTRACT"
    PLOS_LAY = "PLOS_LAY"
    ELIFE_LAY = "ELIFE_LAY"


SUMMARY_TYPES = tuple(SummaryType)

_VENUE_ALIASES = {"plos": Venue.PLOS, "elife": Venue.ELIFE}
_SPLIT_ALIASES = {
    "train": Split.TRAIN,
    "val": Split.VAL,
    "valid": Split.VAL,
    "validation": Split.VAL,
    "test": Split.TEST,
}


class CorpusError(ValueError):
    """Base class for corpus loading/validation failures."""


class CorpusParseError(CorpusError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: malformed JSON: {msg}")
        self.line = line


class CorpusValidationError(CorpusError):
    def __init__(self, line: int | None, field: str, msg: str):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}field {field!r}: {msg}")
        self.line = line
        self.field = field


class DuplicateIdError(CorpusError):
    def __init__(self, article_id: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}duplicate article id {article_id!r}")
        self.article_id = article_id
        self.line = line


@dataclass(frozen=True)
class Article:
    id: str
    title: str
    sections: tuple[tuple[str, str], ...]
    abstract: str
    lay_summary: str
    venue: Venue
    split: Split

    @property
    def lay_type(self) -> SummaryType:
        return SummaryType.PLOS_LAY if self.venue is Venue.PLOS else SummaryType.ELIFE_LAY

    @property
    def summary_types(self) -> tuple[SummaryType, SummaryType]:
        return (SummaryType.ABSTRACT, self.lay_type)

    def reference(self, summary_type: SummaryType | str) -> str:
        summary_type = SummaryType(summary_type)
        if summary_type is SummaryType.ABSTRACT:
            return self.abstract
        if summary_type is not self.lay_type:
            raise KeyError(f"{self.id}: no {summary_type.value} reference for a {self.venue.value} article")
        return self.lay_summary

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "sections": [{"heading": h, "text": t} for h, t in self.sections],
            "abstract": self.abstract,
            "lay_summary": self.lay_summary,
            "venue": self.venue.value,
            "split": self.split.value,
        }


def input_sections(article: Article, summary_type: SummaryType | str) -> list[tuple[str, str]]:
    """Sections a system reads when producing `summary_type`.

    The abstract is prepended as a pseudo-section for lay targets only; for
    the abstract target it would leak the reference into the input.
    """
    sections = list(article.sections)
    if SummaryType(summary_type) is not SummaryType.ABSTRACT:
        sections.insert(0, ("Abstract", article.abstract))
    return sections


def source_text(article: Article, summary_type: SummaryType | str) -> str:
    parts = [article.title] if article.title.strip() else []
    parts.extend(text for _, text in input_sections(article, summary_type))
    return "\n\n".join(parts)


def _require_str(obj: dict, field: str, line: int | None, non_empty: bool = False) -> str:
    value = obj.get(field)
    if not isinstance(value, str):
        raise CorpusValidationError(line, field, "missing or not a string")
    if non_empty and not value.strip():
        raise CorpusValidationError(line, field, "must be non-empty")
    return value


def _parse_sections(raw, line: int | None) -> tuple[tuple[str, str], ...]:
    if not isinstance(raw, list) or not raw:
        raise CorpusValidationError(line, "sections", "must be a non-empty list")
    out = []
    for i, sec in enumerate(raw):
        if isinstance(sec, dict):
            heading, text = sec.get("heading", ""), sec.get("text")
        elif isinstance(sec, (list, tuple)) and len(sec) == 2:
            heading, text = sec
        else:
            raise CorpusValidationError(line, "sections", f"entry {i} is not a {{heading, text}} object")
        if not isinstance(heading, str) or not isinstance(text, str):
            raise CorpusValidationError(line, "sections", f"entry {i} has non-string heading/text")
        out.append((heading, text))
    return tuple(out)


def article_from_json(obj, line: int | None = None) -> Article:
    if not isinstance(obj, dict):
        raise CorpusValidationError(line, "<record>", "expected a JSON object")
    venue_raw = _require_str(obj, "venue", line)
    split_raw = _require_str(obj, "split", line)
    try:
        venue = _VENUE_ALIASES[venue_raw.lower()]
    except KeyError:
        raise CorpusValidationError(line, "venue", f"unknown venue {venue_raw!r}") from None
    try:
        split = _SPLIT_ALIASES[split_raw.lower()]
    except KeyError:
        raise CorpusValidationError(line, "split", f"unknown split {split_raw!r}") from None
    return Article(
        id=_require_str(obj, "id", line, non_empty=True),
        title=_require_str(obj, "title", line),
        sections=_parse_sections(obj.get("sections"), line),
        abstract=_require_str(obj, "abstract", line, non_empty=True),
        lay_summary=_require_str(obj, "lay_summary", line, non_empty=True),
        venue=venue,
        split=split,
    )


def load_corpus(path: str | Path) -> list[Article]:
    """Read and validate a JSONL corpus; blank lines are skipped."""
    articles: list[Article] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusParseError(lineno, e.msg) from e
            article = article_from_json(obj, lineno)
            if article.id in seen:
                raise DuplicateIdError(article.id, lineno)
            seen.add(article.id)
            articles.append(article)
    return articles


def write_corpus(articles: Iterable[Article], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for a in articles:
            f.write(json.dumps(a.to_json(), ensure_ascii=False) + "\n")


def merge_datasets(plos: Sequence[Article], elife: Sequence[Article]) -> list[Article]:
    """Combine both corpora, PLOS first, original order within each.

    Split labels are kept so callers can still pick out a validation pool;
    `train_pool` treats TRAIN and VAL as one pool by default.
    """
    return [*plos, *elife]


def train_pool(articles: Iterable[Article], include_val: bool = True) -> list[Article]:
    keep = {Split.TRAIN, Split.VAL} if include_val else {Split.TRAIN}
    return [a for a in articles if a.split in keep]


def eval_pool(articles: Iterable[Article], venue: Venue | None = None) -> list[Article]:
    return [a for a in articles if a.split is Split.TEST and (venue is None or a.venue is venue)]


def parse_summary_types(spec: str) -> list[SummaryType] | None:
    """Parse a --type flag value. Returns None for "lay" and "all", which
    depend on each article's venue; see `requested_types`."""
    key = spec.strip().lower()
    if key in ("lay", "all"):
        return None
    try:
        return [SummaryType(key.upper())]
    except ValueError:
        raise ValueError(f"unknown summary type {spec!r}") from None


def requested_types(article: Article, spec: str) -> list[SummaryType]:
    key = spec.strip().lower()
    if key == "all":
        return list(article.summary_types)
    if key == "lay":
        return [article.lay_type]
    wanted = SummaryType(key.upper())
    return [wanted] if wanted in article.summary_types else []


@dataclass(frozen=True)
class PreparedPair:
    article_id: str
    control_prefix: ControlTokenSeq
    source: str
    target: str
    summary_type: SummaryType

    def to_json(self) -> dict:
        return {
            "article_id": self.article_id,
            "summary_type": self.summary_type.value,
            "source": self.source,
            "target": self.target,
        }


def emit_training_pairs(
    articles: Iterable[Article], scheme: BinningScheme, attr_ctx: AttributeContext
) -> list[PreparedPair]:
    """Two pairs per article (abstract and lay target), each prefixed with
    the control tokens of its own reference summary."""
    pairs = []
    for article in articles:
        for stype in article.summary_types:
            target = article.reference(stype)
            try:
                vector = reference_attributes(target, attr_ctx, (article.id, stype))
            except (AttributeComputationError, KeyError) as e:
                raise AttributeComputationError(f"article {article.id} ({stype.value}): {e}") from e
            prefix = control_tokens(vector, scheme)
            pairs.append(
                PreparedPair(
                    article_id=article.id,
                    control_prefix=prefix,
                    source=prefix.rendered + source_text(article, stype),
                    target=target,
                    summary_type=stype,
                )
            )
    return pairs

"""ROUGE-1/2/L and per-system report assembly."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache, partial
from typing import Iterable, Mapping, Sequence

from nltk.stem.porter import PorterStemmer

from ._parallel import ordered_map
from .attributes import AttributeComputationError, cli_index, dcrs, fkgl
from .corpus import SUMMARY_TYPES, Article, SummaryType
from .textproc import tokenize

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ("R-1", "R-2", "R-L", "FKGL", "DCRS", "CLI")

_stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)


@lru_cache(maxsize=200_000)
def _stem(word: str) -> str:
    return _stemmer.stem(word)


def rouge_tokens(text: str, stem: bool = True) -> list[str]:
    words = [t.normalized for t in tokenize(text) if t.is_word]
    return [_stem(w) for w in words] if stem else words


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, overlap: float, n_candidate: int, n_reference: int) -> "RougeScore":
        p = overlap / n_candidate if n_candidate else 0.0
        r = overlap / n_reference if n_reference else 0.0
        f = 2 * p * r / (p + r) if p + r > 0 else 0.0
        return cls(p, r, f)

    def to_json(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


ZERO = RougeScore(0.0, 0.0, 0.0)


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def rouge_n_counts(candidate: Counter, reference: Counter) -> RougeScore:
    overlap = sum((candidate & reference).values())
    return RougeScore.from_counts(overlap, sum(candidate.values()), sum(reference.values()))


def rouge_n_tokens(candidate: Sequence[str], reference: Sequence[str], n: int) -> RougeScore:
    if n < 1:
        raise ValueError("n must be positive")
    return rouge_n_counts(ngrams(candidate, n), ngrams(reference, n))


def rouge_n(candidate: str, reference: str, n: int, stem: bool = True) -> RougeScore:
    return rouge_n_tokens(rouge_tokens(candidate, stem), rouge_tokens(reference, stem), n)


def lcs_length(a: Sequence, b: Sequence) -> int:
    """Length of the longest common subsequence (bit-parallel, Hyyrö 2004)."""
    if not a or not b:
        return 0
    masks: dict = {}
    for i, x in enumerate(a):
        masks[x] = masks.get(x, 0) | (1 << i)
    full = (1 << len(a)) - 1
    v = full
    for y in b:
        u = v & masks.get(y, 0)
        v = ((v + u) | (v - u)) & full
    return len(a) - bin(v).count("1")


def rouge_l_tokens(candidate: Sequence[str], reference: Sequence[str]) -> RougeScore:
    return RougeScore.from_counts(lcs_length(candidate, reference), len(candidate), len(reference))


def rouge_l(candidate: str, reference: str, stem: bool = True) -> RougeScore:
    return rouge_l_tokens(rouge_tokens(candidate, stem), rouge_tokens(reference, stem))


# ---------------------------------------------------------------- reports

@dataclass(frozen=True)
class SystemOutput:
    system: str
    article_id: str
    summary_type: SummaryType
    text: str

    @classmethod
    def from_json(cls, obj: Mapping) -> "SystemOutput":
        return cls(
            system=str(obj.get("system", obj.get("method"))),
            article_id=str(obj["article_id"]),
            summary_type=SummaryType(str(obj["summary_type"]).upper()),
            text=obj["text"],
        )


@dataclass(frozen=True)
class DocScores:
    r1: RougeScore
    r2: RougeScore
    rl: RougeScore
    fkgl: float
    dcrs: float
    cli: float


def _readability(fn, text: str) -> float:
    try:
        return fn(text)
    except AttributeComputationError:
        return math.nan


def score_document(pair: tuple[str, str], stem: bool = True) -> DocScores:
    candidate, reference = pair
    cand, ref = rouge_tokens(candidate, stem), rouge_tokens(reference, stem)
    return DocScores(
        r1=rouge_n_tokens(cand, ref, 1),
        r2=rouge_n_tokens(cand, ref, 2),
        rl=rouge_l_tokens(cand, ref),
        fkgl=_readability(fkgl, candidate),
        dcrs=_readability(dcrs, candidate),
        cli=_readability(cli_index, candidate),
    )


@dataclass(frozen=True)
class ReportRow:
    system: str
    summary_type: SummaryType
    n: int
    r1: RougeScore
    r2: RougeScore
    rl: RougeScore
    fkgl: float
    dcrs: float
    cli: float

    def values(self) -> tuple[float, ...]:
        """Report columns in fixed order; ROUGE as F1 x 100."""
        return (100 * self.r1.f1, 100 * self.r2.f1, 100 * self.rl.f1, self.fkgl, self.dcrs, self.cli)


def _mean_score(scores: list[RougeScore]) -> RougeScore:
    n = len(scores)
    return RougeScore(
        math.fsum(s.precision for s in scores) / n,
        math.fsum(s.recall for s in scores) / n,
        math.fsum(s.f1 for s in scores) / n,
    )


def _mean_defined(values: Iterable[float]) -> float:
    vals = [v for v in values if not math.isnan(v)]
    return math.fsum(vals) / len(vals) if vals else math.nan


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[ReportRow, ...]

    def row(self, system: str, summary_type: SummaryType | str) -> ReportRow:
        st = SummaryType(summary_type)
        for r in self.rows:
            if r.system == system and r.summary_type is st:
                return r
        raise KeyError((system, st.value))

    def to_tsv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, delimiter="\t", lineterminator="\n")
        w.writerow(("system", "summary_type", "n", *REPORT_COLUMNS))
        for r in self.rows:
            w.writerow((r.system, r.summary_type.value, r.n, *(_fmt(v) for v in r.values())))
        return buf.getvalue()

    def to_json(self) -> list[dict]:
        out = []
        for r in self.rows:
            d = {"system": r.system, "summary_type": r.summary_type.value, "n": r.n}
            d.update({col: (None if math.isnan(v) else v) for col, v in zip(REPORT_COLUMNS, r.values())})
            d["rouge"] = {"R-1": r.r1.to_json(), "R-2": r.r2.to_json(), "R-L": r.rl.to_json()}
            out.append(d)
        return out


def _fmt(v: float) -> str:
    return "nan" if math.isnan(v) else f"{v:.2f}"


def evaluate_systems(
    outputs: Iterable[SystemOutput | Mapping],
    references: Iterable[Article] | Mapping[str, Article],
    stem: bool = True,
    jobs: int = 1,
) -> EvalReport:
    """Score every output against its reference and average per
    (system, summary type). Rows are ordered by system name, then by the
    canonical summary-type order."""
    by_id = references if isinstance(references, Mapping) else {a.id: a for a in references}
    outs = [o if isinstance(o, SystemOutput) else SystemOutput.from_json(o) for o in outputs]
    pairs = []
    for o in outs:
        article = by_id.get(o.article_id)
        if article is None:
            raise KeyError(f"no reference for ({o.article_id}, {o.summary_type.value}): unknown article")
        try:
            pairs.append((o.text, article.reference(o.summary_type)))
        except KeyError:
            raise KeyError(f"no reference for ({o.article_id}, {o.summary_type.value})") from None
    scores = ordered_map(partial(score_document, stem=stem), pairs, jobs)

    groups: dict[tuple[str, SummaryType], list[DocScores]] = {}
    for o, s in zip(outs, scores):
        groups.setdefault((o.system, o.summary_type), []).append(s)

    order = {t: i for i, t in enumerate(SUMMARY_TYPES)}
    rows = []
    for (system, st), docs in sorted(groups.items(), key=lambda kv: (kv[0][0], order[kv[0][1]])):
        undefined = sum(1 for d in docs if math.isnan(d.fkgl))
        if undefined:
            logger.warning("%s/%s: %d empty outputs excluded from readability means", system, st.value, undefined)
        rows.append(
            ReportRow(
                system=system,
                summary_type=st,
                n=len(docs),
                r1=_mean_score([d.r1 for d in docs]),
                r2=_mean_score([d.r2 for d in docs]),
                rl=_mean_score([d.rl for d in docs]),
                fkgl=_mean_defined(d.fkgl for d in docs),
                dcrs=_mean_defined(d.dcrs for d in docs),
                cli=_mean_defined(d.cli for d in docs),
            )
        )
    return EvalReport(tuple(rows))


def report_to_json_text(report: EvalReport) -> str:
    return json.dumps(report.to_json(), indent=2) + "\n"

"""Converters from released PLOS/eLife lay-summarization files.

Two record shapes are understood:

* sentence-split releases: ``sections`` (list of sentence lists),
  ``headings``, ``abstract`` and ``summary`` (sentence lists);
* flat releases: ``article`` (sections separated by newlines, the first one
  being the abstract), ``section_headings`` and ``lay_summary``/``summary``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .corpus import Article, CorpusValidationError, article_from_json


def read_records(path: str | Path) -> list[dict]:
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("["):
        return json.loads(stripped)
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _join(value) -> str:
    if isinstance(value, list):
        return " ".join(_join(v) for v in value).strip()
    return (value or "").strip()


def _headings(rec: dict) -> list[str]:
    h = rec.get("headings", rec.get("section_headings", []))
    if isinstance(h, str):
        h = h.split("\n")
    return [str(x) for x in h]


def convert_record(rec: dict, venue: str, split: str) -> Article:
    headings = _headings(rec)
    lay = _join(rec.get("lay_summary", rec.get("summary")))
    if "sections" in rec:
        texts = [_join(s) for s in rec["sections"]]
        abstract = _join(rec.get("abstract"))
    else:
        texts = [t.strip() for t in str(rec.get("article", "")).split("\n")]
        abstract = _join(rec.get("abstract")) or (texts.pop(0) if texts else "")
        if headings and headings[0].strip().lower() == "abstract":
            headings = headings[1:]
    sections = [
        {"heading": headings[i] if i < len(headings) else "", "text": t}
        for i, t in enumerate(texts)
        if t
    ]
    obj = {
        "id": str(rec.get("id", "")),
        "title": _join(rec.get("title")),
        "sections": sections,
        "abstract": abstract,
        "lay_summary": lay,
        "venue": venue,
        "split": split,
    }
    return article_from_json(obj)


def convert_records(records, venue: str, split: str) -> list[Article]:
    out = []
    for i, rec in enumerate(records):
        if not rec.get("id"):
            rec = {**rec, "id": f"{venue}-{split}-{i:06d}"}
        try:
            out.append(convert_record(rec, venue, split))
        except CorpusValidationError as e:
            raise CorpusValidationError(i + 1, e.field, f"record {rec['id']}: {e}") from e
    return out

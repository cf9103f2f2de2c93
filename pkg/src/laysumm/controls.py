"""Fixed-width attribute binning, control-token rendering and test-time bin
policies."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .attributes import AttributeVector

N_BINS = 10
ATTRIBUTES = ("L", "R", "BG", "CWE")
TOKEN_PREFIX = {"L": "len", "R": "rdb", "BG": "bg", "CWE": "cwe"}
_FIELD = {"L": "length_chars", "R": "fkgl", "BG": "bg_pct", "CWE": "cwe"}
_PREFIX_RE = re.compile(r"^<len_(\d)> <rdb_(\d)> <bg_(\d)> <cwe_(\d)> ")


class DegenerateDataError(ValueError):
    """Attribute data cannot support the requested binning or policy."""

    def __init__(self, attribute: str | None, msg: str):
        super().__init__(msg)
        self.attribute = attribute


def attribute_value(vector: AttributeVector, attribute: str) -> float:
    return getattr(vector, _FIELD[attribute])


@dataclass(frozen=True)
class AttributeRange:
    min: float
    max: float
    n_bins: int = N_BINS

    @property
    def width(self) -> float:
        return (self.max - self.min) / self.n_bins


@dataclass(frozen=True)
class BinningScheme:
    ranges: Mapping[str, AttributeRange]

    def __post_init__(self):
        for a in ATTRIBUTES:
            r = self.ranges.get(a)
            if r is None:
                raise ValueError(f"binning scheme lacks attribute {a}")
            if not r.max > r.min:
                raise DegenerateDataError(a, f"attribute {a}: max must exceed min")
            if r.n_bins != N_BINS:
                raise ValueError(f"attribute {a}: n_bins must be {N_BINS}")

    def to_json(self) -> dict:
        return {a: {"min": self.ranges[a].min, "max": self.ranges[a].max, "n_bins": self.ranges[a].n_bins} for a in ATTRIBUTES}

    @classmethod
    def from_json(cls, obj: Mapping) -> "BinningScheme":
        return cls({a: AttributeRange(float(obj[a]["min"]), float(obj[a]["max"]), int(obj[a]["n_bins"])) for a in ATTRIBUTES})

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "BinningScheme":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def fit_bins(train_vectors: Sequence[AttributeVector]) -> BinningScheme:
    """Fit min/max per attribute over every reference summary in the train pool."""
    if len(train_vectors) < 2:
        raise DegenerateDataError(None, "need at least two attribute vectors to fit bins")
    ranges = {}
    for a in ATTRIBUTES:
        values = [attribute_value(v, a) for v in train_vectors]
        lo, hi = min(values), max(values)
        if not hi > lo:
            raise DegenerateDataError(a, f"attribute {a} is constant ({lo}) over the train pool")
        ranges[a] = AttributeRange(float(lo), float(hi))
    return BinningScheme(ranges)


def bin_of(value: float, attribute: str, scheme: BinningScheme) -> int:
    """Fixed-width bin index; the maximum falls in the top bin and values
    outside the fitted range are clamped."""
    if math.isnan(value):
        raise ValueError(f"attribute {attribute}: NaN has no bin")
    r = scheme.ranges[attribute]
    idx = math.floor(r.n_bins * (value - r.min) / (r.max - r.min))
    return min(max(idx, 0), r.n_bins - 1)


@dataclass(frozen=True)
class ControlTokenSeq:
    L: int
    R: int
    BG: int
    CWE: int

    def __post_init__(self):
        for a in ATTRIBUTES:
            b = getattr(self, a)
            if not (isinstance(b, int) and 0 <= b < N_BINS):
                raise ValueError(f"bin index for {a} out of range: {b!r}")

    @property
    def bins(self) -> dict[str, int]:
        return {a: getattr(self, a) for a in ATTRIBUTES}

    @property
    def rendered(self) -> str:
        return "".join(f"<{TOKEN_PREFIX[a]}_{getattr(self, a)}> " for a in ATTRIBUTES)

    def __str__(self) -> str:
        return self.rendered

    def to_json(self) -> dict:
        return {"bins": self.bins, "rendered": self.rendered}

    @classmethod
    def parse(cls, text: str) -> "ControlTokenSeq":
        """Recover the bin record from a rendered prefix at the head of text."""
        m = _PREFIX_RE.match(text)
        if m is None:
            raise ValueError("text does not start with a control-token prefix")
        return cls(*(int(g) for g in m.groups()))


def control_tokens(vector: AttributeVector, scheme: BinningScheme) -> ControlTokenSeq:
    return ControlTokenSeq(*(bin_of(attribute_value(vector, a), a, scheme) for a in ATTRIBUTES))


def bin_counts(vectors: Iterable[AttributeVector], scheme: BinningScheme) -> dict[str, list[int]]:
    counts = {a: [0] * N_BINS for a in ATTRIBUTES}
    for v in vectors:
        for a in ATTRIBUTES:
            counts[a][bin_of(attribute_value(v, a), a, scheme)] += 1
    return counts


def _modal(counts: list[int]) -> int:
    # max() keeps the first maximal element, i.e. the lowest bin on ties
    return max(range(len(counts)), key=lambda b: (counts[b], -b))


def _require_nonempty(by_type: Mapping) -> None:
    for t, vs in by_type.items():
        if not vs:
            raise DegenerateDataError(None, f"no training observations for summary type {getattr(t, 'value', t)}")


def mode_bins(train_vectors_by_type: Mapping, scheme: BinningScheme) -> dict:
    """Most frequent bin per attribute for each summary type."""
    _require_nonempty(train_vectors_by_type)
    out = {}
    for t, vectors in train_vectors_by_type.items():
        counts = bin_counts(vectors, scheme)
        out[t] = ControlTokenSeq(*(_modal(counts[a]) for a in ATTRIBUTES))
    return out


def mean_bins(train_vectors_by_type: Mapping, scheme: BinningScheme) -> dict:
    """Bin of the per-type mean attribute value."""
    _require_nonempty(train_vectors_by_type)
    out = {}
    for t, vectors in train_vectors_by_type.items():
        means = [math.fsum(attribute_value(v, a) for v in vectors) / len(vectors) for a in ATTRIBUTES]
        out[t] = ControlTokenSeq(*(bin_of(m, a, scheme) for m, a in zip(means, ATTRIBUTES)))
    return out


class Direction(str, Enum):
    LAY = "LAY"
    TECHNICAL = "TECHNICAL"


def extreme_bins(
    train_vectors_by_type: Mapping,
    scheme: BinningScheme,
    direction: Direction | str,
    summary_type,
    min_count: int = 100,
) -> ControlTokenSeq:
    """Lowest (LAY) or highest (TECHNICAL) bin with at least `min_count`
    training observations for R, BG and CWE. Length stays at the modal bin
    of `summary_type`."""
    direction = Direction(direction)
    _require_nonempty(train_vectors_by_type)
    pooled = [v for vs in train_vectors_by_type.values() for v in vs]
    counts = bin_counts(pooled, scheme)
    length_bin = mode_bins({summary_type: train_vectors_by_type[summary_type]}, scheme)[summary_type].L
    bins = {"L": length_bin}
    for a in ATTRIBUTES[1:]:
        eligible = [b for b, c in enumerate(counts[a]) if c >= min_count]
        if not eligible:
            raise DegenerateDataError(a, f"attribute {a}: no bin has at least {min_count} observations")
        bins[a] = eligible[0] if direction is Direction.LAY else eligible[-1]
    return ControlTokenSeq(**bins)


class BinPolicy(str, Enum):
    ORACLE = "ORACLE"
    MODE = "MODE"
    MEAN = "MEAN"
    LAY_EXTREME = "LAY_EXTREME"
    TECHNICAL_EXTREME = "TECHNICAL_EXTREME"


def preset_tokens(train_vectors_by_type: Mapping, scheme: BinningScheme, policy: BinPolicy | str, min_count: int = 100) -> dict:
    """Per-type control prefixes for a reference-free test-time policy."""
    policy = BinPolicy(policy)
    if policy is BinPolicy.MODE:
        return mode_bins(train_vectors_by_type, scheme)
    if policy is BinPolicy.MEAN:
        return mean_bins(train_vectors_by_type, scheme)
    if policy is BinPolicy.ORACLE:
        raise ValueError("ORACLE bins come from each reference summary, not from a preset")
    direction = Direction.LAY if policy is BinPolicy.LAY_EXTREME else Direction.TECHNICAL
    return {t: extreme_bins(train_vectors_by_type, scheme, direction, t, min_count) for t in train_vectors_by_type}

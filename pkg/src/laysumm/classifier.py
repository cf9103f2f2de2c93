"""Multinomial logistic regression over reference-summary attributes, used to
check how well the four attributes separate the three summary types."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import SUMMARY_TYPES, SummaryType

CLASSES = SUMMARY_TYPES
N_FEATURES = 4


@dataclass(frozen=True)
class Standardizer:
    means: np.ndarray
    stds: np.ndarray

    @classmethod
    def fit(cls, x: np.ndarray) -> "Standardizer":
        x = np.asarray(x, dtype=float)
        means, stds = x.mean(axis=0), x.std(axis=0)
        bad = np.flatnonzero(~(stds > 0))
        if bad.size:
            raise ValueError(f"feature(s) {bad.tolist()} have zero variance in the train pool")
        return cls(means, stds)

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=float) - self.means) / self.stds


def standardize(x_raw: np.ndarray, stats: Standardizer | None = None) -> tuple[np.ndarray, Standardizer]:
    """Z-score features; statistics come from `stats` when given (the train
    pool), otherwise from x_raw itself."""
    stats = Standardizer.fit(x_raw) if stats is None else stats
    return stats.transform(x_raw), stats


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def one_hot(y: np.ndarray, k: int = len(CLASSES)) -> np.ndarray:
    out = np.zeros((len(y), k))
    out[np.arange(len(y)), y] = 1.0
    return out


def loss_and_grad(w: np.ndarray, b: np.ndarray, x: np.ndarray, y: np.ndarray, l2: float):
    """Mean cross-entropy plus (l2/2)·||W||² and its gradient in (W, b)."""
    m = x.shape[0]
    probs = softmax(x @ w.T + b)
    yh = one_hot(y, w.shape[0])
    loss = -np.sum(yh * np.log(np.clip(probs, 1e-300, None))) / m + 0.5 * l2 * np.sum(w * w)
    diff = (probs - yh) / m
    return loss, diff.T @ x + l2 * w, diff.sum(axis=0)


@dataclass
class LogRegModel:
    weights: np.ndarray
    bias: np.ndarray
    feature_means: np.ndarray
    feature_stds: np.ndarray
    loss_history: list[float] | None = None

    def logits(self, x_raw: np.ndarray) -> np.ndarray:
        x = (np.atleast_2d(np.asarray(x_raw, dtype=float)) - self.feature_means) / self.feature_stds
        return x @ self.weights.T + self.bias

    def predict_proba(self, x_raw: np.ndarray) -> np.ndarray:
        return softmax(self.logits(x_raw))

    def predict_indices(self, x_raw: np.ndarray) -> np.ndarray:
        # argmax keeps the first maximum, i.e. class enum order on ties
        return np.argmax(self.logits(x_raw), axis=1)

    def to_json(self) -> dict:
        return {
            "classes": [c.value for c in CLASSES],
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "feature_means": self.feature_means.tolist(),
            "feature_stds": self.feature_stds.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LogRegModel":
        return cls(
            np.asarray(obj["weights"], dtype=float),
            np.asarray(obj["bias"], dtype=float),
            np.asarray(obj["feature_means"], dtype=float),
            np.asarray(obj["feature_stds"], dtype=float),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")


def encode_labels(labels: Sequence[SummaryType | str]) -> np.ndarray:
    index = {c: i for i, c in enumerate(CLASSES)}
    return np.array([index[SummaryType(lab)] for lab in labels], dtype=int)


def train_logreg(
    x_raw: np.ndarray,
    labels: Sequence[SummaryType | str],
    lr: float = 0.1,
    l2: float = 1e-4,
    epochs: int = 1000,
    tol: float = 1e-7,
) -> LogRegModel:
    """Full-batch gradient descent from zero weights on standardised features.

    Stops after `epochs` steps or once the largest gradient entry drops
    below `tol`. Deterministic: no random initialisation or shuffling.
    """
    y = encode_labels(labels)
    missing = [c.value for i, c in enumerate(CLASSES) if not np.any(y == i)]
    if missing:
        raise ValueError(f"training data has no rows for class(es) {missing}")
    x, stats = standardize(np.asarray(x_raw, dtype=float))
    k, d = len(CLASSES), x.shape[1]
    w, b = np.zeros((k, d)), np.zeros(k)
    history = []
    for _ in range(epochs):
        loss, gw, gb = loss_and_grad(w, b, x, y, l2)
        history.append(float(loss))
        if max(np.abs(gw).max(), np.abs(gb).max()) < tol:
            break
        w -= lr * gw
        b -= lr * gb
    history.append(float(loss_and_grad(w, b, x, y, l2)[0]))
    return LogRegModel(w, b, stats.means, stats.stds, history)


def predict(model: LogRegModel, x_raw: np.ndarray) -> SummaryType:
    return CLASSES[int(model.predict_indices(np.asarray(x_raw, dtype=float).reshape(1, -1))[0])]


def predict_many(model: LogRegModel, x_raw: np.ndarray) -> list[SummaryType]:
    return [CLASSES[int(i)] for i in model.predict_indices(x_raw)]


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


def prf1(predictions: Sequence, gold: Sequence, classes: Sequence | None = None) -> dict:
    """Per-class one-vs-rest precision/recall/F1; 0/0 is reported as 0.

    Classes default to the three summary types when every label is one,
    otherwise to the labels in order of first appearance.
    """
    if len(predictions) != len(gold):
        raise ValueError(f"length mismatch: {len(predictions)} predictions vs {len(gold)} gold labels")
    if not gold:
        raise ValueError("prf1 needs at least one example")
    if classes is None:
        labels = [*gold, *predictions]
        classes = CLASSES if all(lab in CLASSES for lab in labels) else list(dict.fromkeys(labels))
    out = {}
    for c in classes:
        tp = sum(1 for p, g in zip(predictions, gold) if p == c and g == c)
        fp = sum(1 for p, g in zip(predictions, gold) if p == c and g != c)
        fn = sum(1 for p, g in zip(predictions, gold) if p != c and g == c)
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        f = 2 * p * r / (p + r) if p + r else 0.0
        out[c] = ClassScores(p, r, f, tp + fn)
    return out


def micro_recall(scores: dict) -> float:
    support = sum(s.support for s in scores.values())
    return sum(s.recall * s.support for s in scores.values()) / support


def prf1_table(scores: dict) -> str:
    """Per-class precision/recall/F1 as TSV, two decimals."""
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(("summary_type", "precision", "recall", "f1", "support"))
    for c, s in scores.items():
        w.writerow((getattr(c, "value", c), f"{s.precision:.2f}", f"{s.recall:.2f}", f"{s.f1:.2f}", s.support))
    return buf.getvalue()

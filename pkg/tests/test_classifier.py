import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from laysumm.classifier import (
    CLASSES,
    LogRegModel,
    Standardizer,
    loss_and_grad,
    micro_recall,
    predict,
    predict_many,
    prf1,
    prf1_table,
    softmax,
    standardize,
    train_logreg,
)
from laysumm.corpus import SummaryType
from tests.oracles import numeric_grad, relative_error, separated_classes

A, P, E = CLASSES


def labels(y):
    return [CLASSES[i] for i in y]


def test_standardize_train_pool():
    rng = np.random.default_rng(0)
    x = rng.normal(3, 2, size=(50, 4))
    z, stats = standardize(x)
    assert np.allclose(z.mean(axis=0), 0, atol=1e-9)
    assert np.allclose(z.std(axis=0), 1, atol=1e-9)
    row = np.array([[1.0, 2.0, 3.0, 4.0]])
    assert np.allclose(standardize(row, stats)[0], (row - stats.means) / stats.stds)


def test_standardize_constant_feature():
    x = np.ones((5, 4))
    x[:, 0] = np.arange(5)
    with pytest.raises(ValueError, match="1"):
        Standardizer.fit(x)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(10, 4))
    y = rng.integers(0, 3, size=10)
    w, b = rng.normal(size=(3, 4)), rng.normal(size=3)
    _, gw, gb = loss_and_grad(w, b, x, y, 1e-2)
    nw, nb = numeric_grad(lambda: loss_and_grad(w, b, x, y, 1e-2)[0], [w, b])
    assert relative_error(gw, nw) < 1e-5
    assert relative_error(gb, nb) < 1e-5


def test_separable_two_features():
    x = np.array([[0, 0], [0, 1], [5, 0], [5, 1], [10, 0], [10, 1]], dtype=float)
    y = labels([0, 0, 1, 1, 2, 2])
    model = train_logreg(x, y, lr=0.5, epochs=2000)
    assert predict_many(model, x) == y


def test_zero_epochs_uniform():
    rng = np.random.default_rng(2)
    x, y = separated_classes(rng, 10)
    model = train_logreg(x, labels(y), epochs=0)
    assert np.allclose(model.predict_proba(x), 1 / 3)
    assert predict(model, x[0]) is A


def test_missing_class():
    with pytest.raises(ValueError, match="ELIFE_LAY"):
        train_logreg(np.random.default_rng(0).normal(size=(4, 4)), [A, P, A, P])


def test_predict_favoring_abstract():
    model = LogRegModel(np.zeros((3, 4)), np.array([5.0, 0.0, 0.0]), np.zeros(4), np.ones(4))
    assert predict(model, np.array([100.0, -3, 2, 1])) is A


def test_shift_and_scale_invariance():
    rng = np.random.default_rng(3)
    model = LogRegModel(rng.normal(size=(3, 4)), rng.normal(size=3), np.zeros(4), np.ones(4))
    x = rng.normal(size=(30, 4))
    base = model.predict_indices(x)
    shifted = LogRegModel(model.weights, model.bias + 7.0, model.feature_means, model.feature_stds)
    scaled = LogRegModel(model.weights * 3.5, model.bias * 3.5, model.feature_means, model.feature_stds)
    assert np.array_equal(shifted.predict_indices(x), base)
    assert np.array_equal(scaled.predict_indices(x), base)
    assert np.allclose(shifted.predict_proba(x), model.predict_proba(x))


def test_softmax_rows_sum_to_one():
    z = np.array([[1000.0, 0.0, -1000.0], [0.0, 0.0, 0.0]])
    assert np.allclose(softmax(z).sum(axis=1), 1.0)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_loss_non_increasing(seed):
    rng = np.random.default_rng(seed)
    x, y = separated_classes(rng, 20, gap=1.0)
    hist = train_logreg(x, labels(y), epochs=200).loss_history
    assert all(b <= a + 1e-12 for a, b in zip(hist, hist[1:]))


def test_deterministic():
    rng = np.random.default_rng(4)
    x, y = separated_classes(rng, 30, gap=1.0)
    m1, m2 = train_logreg(x, labels(y)), train_logreg(x, labels(y))
    assert m1.weights.tobytes() == m2.weights.tobytes()
    assert m1.bias.tobytes() == m2.bias.tobytes()


def test_model_json_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    x, y = separated_classes(rng, 10)
    m = train_logreg(x, labels(y), epochs=50)
    m.save(tmp_path / "m.json")
    back = LogRegModel.from_json(json.loads((tmp_path / "m.json").read_text()))
    assert np.array_equal(back.predict_proba(x), m.predict_proba(x))


def test_prf1_examples():
    perfect = prf1([A, P, E], [A, P, E])
    assert all(s.precision == s.recall == s.f1 == 1.0 for s in perfect.values())
    s = prf1(["A", "B", "B"], ["A", "A", "B"])["A"]
    assert (s.precision, s.recall) == (1.0, 0.5)
    assert s.f1 == pytest.approx(2 / 3)


def test_prf1_zero_division_and_errors():
    out = prf1([A, A], [A, A])
    assert out[P].precision == out[P].recall == out[P].f1 == 0.0 and out[P].support == 0
    with pytest.raises(ValueError):
        prf1([A], [A, P])
    with pytest.raises(ValueError):
        prf1([], [])


@given(st.lists(st.tuples(st.sampled_from(CLASSES), st.sampled_from(CLASSES)), min_size=1, max_size=40))
def test_micro_recall_is_accuracy(pairs):
    pred, gold = zip(*pairs)
    acc = sum(p == g for p, g in pairs) / len(pairs)
    assert micro_recall(prf1(list(pred), list(gold))) == pytest.approx(acc)


def test_table_layout():
    table = prf1_table(prf1([A, P, E], [A, P, E]))
    lines = table.splitlines()
    assert lines[0].split("\t") == ["summary_type", "precision", "recall", "f1", "support"]
    assert [ln.split("\t")[0] for ln in lines[1:]] == [t.value for t in SummaryType]

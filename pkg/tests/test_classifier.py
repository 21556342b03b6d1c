"""Tests for the logistic regression and balanced AUC fitness."""

import numpy as np
import pytest

from evofss.core.errors import DataError
from evofss.data.ingest import Dataset
from evofss.search.classifier import (
    ConfusionMatrix,
    FitnessEvaluator,
    auc_score,
    evaluate_confusion,
    evaluate_fitness,
    predict_probability,
    train_logistic,
)


class TestAucScore:
    """Tests for sensitivity/specificity averaging."""

    def test_known_matrix(self):
        score = auc_score(ConfusionMatrix(tp=8, fn=2, tn=6, fp=4))
        assert score.sensitivity == 0.8
        assert score.specificity == 0.6
        assert score.auc == pytest.approx(0.7)

    def test_matches_brute_force_on_random_matrices(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            tp, fn, tn, fp = (int(v) for v in rng.integers(0, 50, size=4))
            tp, tn = tp + 1, tn + 1
            score = auc_score(ConfusionMatrix(tp, fn, tn, fp))
            assert score.auc == (tp / (tp + fn) + tn / (tn + fp)) / 2

    def test_no_positives(self):
        with pytest.raises(DataError, match="no positives"):
            auc_score(ConfusionMatrix(tp=0, fn=0, tn=3, fp=1))

    def test_no_negatives(self):
        with pytest.raises(DataError, match="no negatives"):
            auc_score(ConfusionMatrix(tp=3, fn=1, tn=0, fp=0))


class TestTrainLogistic:
    """Tests for gradient-ascent training."""

    def test_separable_data_is_classified(self, separable_dataset):
        model = train_logistic(separable_dataset)
        cm = evaluate_confusion(model, separable_dataset)
        assert auc_score(cm).auc == 1.0

    def test_constant_feature_gets_zero_weight(self):
        ds = Dataset(
            ("x", "const"),
            np.array([[0.0, 5.0], [1.0, 5.0], [2.0, 5.0], [3.0, 5.0]]),
            np.array([0, 0, 1, 1]),
        )
        model = train_logistic(ds)
        assert model.weights[1] == 0.0
        assert model.weights[0] > 0.0

    def test_duplicate_columns_get_identical_weights(self, planted_dataset):
        column = planted_dataset.matrix[:, :1]
        ds = Dataset(("a", "b"), np.hstack([column, column]), planted_dataset.labels)
        model = train_logistic(ds)
        assert model.weights[0] == model.weights[1]

    def test_training_is_deterministic(self, planted_dataset):
        a = train_logistic(planted_dataset)
        b = train_logistic(planted_dataset)
        np.testing.assert_array_equal(a.weights, b.weights)
        assert a.intercept == b.intercept

    def test_single_class_rejected(self):
        ds = Dataset(("x",), np.array([[0.0], [1.0]]), np.array([1, 1]))
        with pytest.raises(DataError, match="single-class"):
            train_logistic(ds)

    def test_zero_features_rejected(self):
        ds = Dataset((), np.empty((2, 0)), np.array([0, 1]))
        with pytest.raises(DataError, match="zero features"):
            train_logistic(ds)

    def test_predict_probability_in_unit_interval(self, separable_dataset):
        model = train_logistic(separable_dataset)
        low = predict_probability(model, [0.0, 1.0])
        high = predict_probability(model, [1.2, 0.0])
        assert 0.0 < low < 0.5 < high < 1.0

    def test_predict_probability_wrong_width(self, separable_dataset):
        model = train_logistic(separable_dataset)
        with pytest.raises(DataError):
            predict_probability(model, [1.0])


class TestEvaluateFitness:
    """Tests for the wrapper fitness."""

    def test_empty_mask_scores_zero(self, planted_dataset):
        score = evaluate_fitness(np.zeros(planted_dataset.nfeat), planted_dataset)
        assert score.auc == 0.0

    def test_informative_beats_noise(self, planted_split):
        train, test = planted_split.train, planted_split.test
        informative = np.array([1, 1, 1, 0, 0, 0, 0, 0])
        noise = np.array([0, 0, 0, 0, 0, 0, 1, 1])
        assert evaluate_fitness(informative, train, test).auc > evaluate_fitness(noise, train, test).auc

    def test_repeatable(self, planted_split):
        mask = np.array([1, 0, 1, 0, 1, 0, 1, 0])
        a = evaluate_fitness(mask, planted_split.train, planted_split.test)
        b = evaluate_fitness(mask, planted_split.train, planted_split.test)
        assert a == b

    def test_evaluator_matches_function(self, planted_split):
        mask = np.array([0, 1, 1, 0, 0, 0, 0, 1], dtype=bool)
        evaluator = FitnessEvaluator(planted_split.train, planted_split.test)
        assert evaluator(mask) == evaluate_fitness(mask, planted_split.train, planted_split.test)

    def test_score_bounds(self, planted_split):
        rng = np.random.default_rng(4)
        for _ in range(10):
            mask = rng.random(8) < 0.5
            mask[0] = True
            score = evaluate_fitness(mask, planted_split.train)
            assert 0.0 <= score.auc <= 1.0

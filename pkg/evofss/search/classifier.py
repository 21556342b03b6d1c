"""Deterministic logistic regression and the balanced AUC fitness."""

from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from ..core.errors import DataError
from ..data.ingest import Dataset, project_columns

STEP_SIZE = 0.1
MAX_EPOCHS = 100
TOLERANCE = 1e-6
CUTOFF = 0.5


@dataclass(frozen=True, eq=False)
class LogisticModel:
    """Logistic regression over z-scored features."""
    weights: np.ndarray
    intercept: float
    means: np.ndarray
    scales: np.ndarray
    constant: np.ndarray

    @property
    def nfeat(self) -> int:
        return self.weights.shape[0]

    def standardize(self, matrix: np.ndarray) -> np.ndarray:
        z = (np.asarray(matrix, dtype=np.float64) - self.means) / self.scales
        z[..., self.constant] = 0.0
        return z

    def decision_function(self, matrix: np.ndarray) -> np.ndarray:
        return self.standardize(matrix) @ self.weights + self.intercept

    def predict_proba(self, matrix: np.ndarray) -> np.ndarray:
        return _sigmoid(self.decision_function(matrix))


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    tn: int
    fp: int

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.tn + self.fp


@dataclass(frozen=True)
class FitnessScore:
    """Balanced AUC: the mean of sensitivity and specificity at a 0.5 cutoff."""
    auc: float
    sensitivity: float
    specificity: float

    @classmethod
    def empty(cls) -> "FitnessScore":
        """Score assigned to a subset that selects no features."""
        return cls(auc=0.0, sensitivity=0.0, specificity=0.0)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return np.exp(-np.logaddexp(0.0, -z))


def _mean_log_likelihood(z: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean(y * z - np.logaddexp(0.0, z)))


def train_logistic(
    train: Dataset, max_epochs: int = MAX_EPOCHS, tol: float = TOLERANCE
) -> LogisticModel:
    """
    Fit a logistic regression by full-batch gradient ascent.

    Features are z-scored on training statistics; constant features are
    zeroed and keep weight 0. Weights start at 0 and move by a fixed step of
    0.1 until ``max_epochs`` or a log-likelihood change below ``tol``.

    Raises:
        DataError: If there are no features or only one class
    """
    if train.nfeat == 0:
        raise DataError("cannot train on zero features")
    negatives, positives = train.class_counts()
    if negatives == 0 or positives == 0:
        raise DataError("single-class training labels")

    x = train.matrix
    y = train.labels.astype(np.float64)
    m = train.nrows

    means = x.mean(axis=0)
    std = x.std(axis=0)
    constant = std <= 1e-12 * np.maximum(1.0, np.abs(means))
    scales = np.where(constant, 1.0, std)

    model = LogisticModel(np.zeros(train.nfeat), 0.0, means, scales, constant)
    z = model.standardize(x)

    weights = np.zeros(train.nfeat)
    intercept = 0.0
    previous: Optional[float] = None
    for _ in range(max_epochs):
        residual = y - _sigmoid(z @ weights + intercept)
        weights = weights + STEP_SIZE * (z.T @ residual) / m
        intercept = intercept + STEP_SIZE * float(residual.mean())
        loss = _mean_log_likelihood(z @ weights + intercept, y)
        if previous is not None and abs(loss - previous) < tol:
            break
        previous = loss

    weights[constant] = 0.0
    return LogisticModel(weights, intercept, means, scales, constant)


def predict_probability(model: LogisticModel, row: Sequence[float]) -> float:
    """Probability of class 1 for one raw feature row."""
    values = np.asarray(row, dtype=np.float64)
    if values.shape != (model.nfeat,):
        raise DataError(f"row has {values.size} values, model expects {model.nfeat}")
    return float(model.predict_proba(values.reshape(1, -1))[0])


def evaluate_confusion(model: LogisticModel, eval_set: Dataset) -> ConfusionMatrix:
    """Tally predictions (class 1 iff probability >= 0.5) against labels."""
    if eval_set.nrows == 0:
        raise DataError("evaluation set is empty")
    if eval_set.nfeat != model.nfeat:
        raise DataError(f"evaluation width {eval_set.nfeat} does not match model width {model.nfeat}")

    predicted = model.predict_proba(eval_set.matrix) >= CUTOFF
    actual = eval_set.labels == 1
    return ConfusionMatrix(
        tp=int(np.sum(predicted & actual)),
        fn=int(np.sum(~predicted & actual)),
        tn=int(np.sum(~predicted & ~actual)),
        fp=int(np.sum(predicted & ~actual)),
    )


def auc_score(cm: ConfusionMatrix) -> FitnessScore:
    """Sensitivity, specificity and their mean."""
    if cm.tp + cm.fn == 0:
        raise DataError("no positives in evaluation set")
    if cm.tn + cm.fp == 0:
        raise DataError("no negatives in evaluation set")
    sensitivity = cm.tp / (cm.tp + cm.fn)
    specificity = cm.tn / (cm.tn + cm.fp)
    return FitnessScore(
        auc=(sensitivity + specificity) / 2,
        sensitivity=sensitivity,
        specificity=specificity,
    )


def evaluate_fitness(mask: Any, train: Dataset, eval_set: Optional[Dataset] = None) -> FitnessScore:
    """
    Train on the masked training columns and score on the masked eval columns.

    ``eval_set`` defaults to ``train``. An all-zero mask scores 0.0.
    """
    bits = np.asarray(getattr(mask, "bits", mask), dtype=bool)
    if not bits.any():
        return FitnessScore.empty()
    eval_set = train if eval_set is None else eval_set
    model = train_logistic(project_columns(train, bits))
    return auc_score(evaluate_confusion(model, project_columns(eval_set, bits)))


class FitnessEvaluator:
    """Picklable callable scoring masks against a fixed train/eval pair."""

    def __init__(self, train: Dataset, eval_set: Optional[Dataset] = None):
        self.train = train
        self.eval_set = eval_set

    def __call__(self, bits: np.ndarray) -> FitnessScore:
        return evaluate_fitness(bits, self.train, self.eval_set)

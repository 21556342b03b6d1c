"""Planted binary-classification datasets for demos and tests."""

import numpy as np

from .ingest import Dataset


def make_planted_dataset(
    nrows: int,
    nfeat: int,
    informative: int,
    seed: int = 0,
    noise: float = 1.0,
    shift: float = 1.0,
) -> Dataset:
    """
    Build a dataset where only the first ``informative`` features carry signal.

    Labels are balanced Bernoulli draws. An informative feature is Gaussian
    noise shifted by ``+shift`` for positives and ``-shift`` for negatives;
    the remaining features are pure noise. Features are named ``f0``, ``f1``, ...
    """
    if not 0 <= informative <= nfeat:
        raise ValueError("informative must be between 0 and nfeat")
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, 2, size=nrows)
    # Guarantee both classes on tiny draws.
    labels[0], labels[-1] = 0, 1
    matrix = rng.normal(0.0, noise, size=(nrows, nfeat))
    signs = np.where(labels == 1, 1.0, -1.0)
    matrix[:, :informative] += shift * signs[:, None]
    return Dataset(tuple(f"f{i}" for i in range(nfeat)), matrix, labels)

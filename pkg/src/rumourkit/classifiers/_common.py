"""Input validation and feature standardization shared by the trainers."""

from __future__ import annotations

import numpy as np


def check_training_inputs(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got shape {X.shape}")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise ValueError(f"y length {y.shape} does not match {X.shape[0]} rows")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite entries")
    labels = np.unique(y)
    if not np.all(np.isin(labels, (0, 1))):
        raise ValueError(f"labels must be 0/1, got {labels.tolist()}")
    if labels.size < 2:
        raise ValueError("training data must contain both classes")
    return X, y


def standardize_fit(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-column mean and scale; constant columns get scale 1 so they map to 0."""
    mean = X.mean(axis=0)
    std = X.std(axis=0, ddof=0)
    scale = np.where(std == 0.0, 1.0, std)
    return mean, scale


def standardize_apply(X: np.ndarray, mean: np.ndarray, scale: np.ndarray) -> np.ndarray:
    return (X - mean) / scale


def minibatch_indices(n: int, batch_size: int, rng: np.random.Generator):
    """Yield one epoch of index batches over a fresh permutation."""
    perm = rng.permutation(n)
    for start in range(0, n, batch_size):
        yield perm[start : start + batch_size]

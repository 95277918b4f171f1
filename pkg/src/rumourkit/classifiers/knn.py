"""k-nearest neighbours with fixed, testable tie rules."""

from __future__ import annotations

import numpy as np


def train_knn(X: np.ndarray, y: np.ndarray, k: int) -> dict:
    if k < 1:
        raise ValueError("k_neighbors must be >= 1")
    if k > X.shape[0]:
        raise ValueError(f"k_neighbors={k} exceeds {X.shape[0]} training points")
    return {"train_x": X.copy(), "train_y": y.copy(), "k": k}


def predict_knn(params: dict, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Majority vote over the k nearest by squared Euclidean distance.

    Distance ties keep the smaller training index (stable sort); vote ties go
    to class 1. The score is the class-1 vote fraction.
    """
    train_x = params["train_x"]
    train_y = params["train_y"]
    k = params["k"]
    labels = np.empty(X.shape[0], dtype=np.int64)
    scores = np.empty(X.shape[0], dtype=np.float64)
    for i, row in enumerate(X):
        diff = train_x - row
        d2 = np.einsum("ij,ij->i", diff, diff)
        order = np.argsort(d2, kind="stable")
        votes_for_1 = int(train_y[order[:k]].sum())
        labels[i] = 1 if 2 * votes_for_1 >= k else 0
        scores[i] = votes_for_1 / k
    return labels, scores

"""Gaussian naive Bayes on raw (unstandardized) inputs."""

from __future__ import annotations

import numpy as np

# Relative variance stabilizer, scaled by the largest per-feature variance of
# the training matrix so the smoothing is unit-free.
VAR_SMOOTHING = 1e-9


def train_gnb(X: np.ndarray, y: np.ndarray) -> dict:
    n = X.shape[0]
    epsilon = VAR_SMOOTHING * float(np.var(X, axis=0).max())
    if epsilon <= 0.0:
        epsilon = 1e-18  # every feature constant; keep densities finite
    means, variances, priors = [], [], []
    for cls in (0, 1):
        rows = X[y == cls]
        means.append(rows.mean(axis=0))
        variances.append(rows.var(axis=0, ddof=0) + epsilon)
        priors.append(rows.shape[0] / n)
    return {
        "means": np.stack(means),
        "variances": np.stack(variances),
        "log_priors": np.log(np.asarray(priors, dtype=np.float64)),
    }


def _joint_log_likelihood(params: dict, X: np.ndarray) -> np.ndarray:
    means = params["means"]
    variances = params["variances"]
    out = np.empty((X.shape[0], 2), dtype=np.float64)
    for cls in (0, 1):
        var = variances[cls]
        log_norm = -0.5 * np.sum(np.log(2.0 * np.pi * var))
        sq = ((X - means[cls]) ** 2 / var).sum(axis=1)
        out[:, cls] = params["log_priors"][cls] + log_norm - 0.5 * sq
    return out


def predict_gnb(params: dict, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Labels by larger joint log-likelihood (ties to class 1); scores are
    normalized class-1 posteriors."""
    jll = _joint_log_likelihood(params, X)
    shifted = jll - jll.max(axis=1, keepdims=True)
    likes = np.exp(shifted)
    scores = likes[:, 1] / likes.sum(axis=1)
    labels = (jll[:, 1] >= jll[:, 0]).astype(np.int64)
    return labels, scores

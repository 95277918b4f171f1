"""Logistic regression (Adam) and a linear SVM (decaying subgradient steps)."""

from __future__ import annotations

import numpy as np

from ._common import minibatch_indices
from ._optim import adam_init, adam_step


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def train_logreg(X: np.ndarray, y: np.ndarray, *, learning_rate: float, batch_size: int,
                 epochs: int, weight_decay: float, seed: int) -> dict:
    """Minibatch cross-entropy descent; weight decay applies to weights, not bias."""
    n, dim = X.shape
    w = np.zeros(dim, dtype=np.float64)
    b = np.zeros(1, dtype=np.float64)
    state = adam_init([w, b])
    rng = np.random.default_rng(seed)
    y = y.astype(np.float64)
    for _ in range(epochs):
        for idx in minibatch_indices(n, batch_size, rng):
            xb, yb = X[idx], y[idx]
            residual = _sigmoid(xb @ w + b[0]) - yb
            grad_w = xb.T @ residual / idx.size + weight_decay * w
            grad_b = np.asarray([residual.mean()])
            (w, b), state = adam_step([w, b], [grad_w, grad_b], state, learning_rate)
    return {"weights": w, "bias": float(b[0])}


def predict_logreg(params: dict, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    scores = _sigmoid(X @ params["weights"] + params["bias"])
    return (scores >= 0.5).astype(np.int64), scores


def train_svm(X: np.ndarray, y: np.ndarray, *, svm_lambda: float, batch_size: int,
              epochs: int, seed: int) -> dict:
    """Minimize svm_lambda*||w||^2 + mean hinge loss by stochastic subgradient.

    Step size 1/(2*svm_lambda*t) over a global step counter t; the bias picks
    up only the hinge subgradient (unregularized).
    """
    n, dim = X.shape
    w = np.zeros(dim, dtype=np.float64)
    b = 0.0
    signs = np.where(y == 1, 1.0, -1.0)
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(epochs):
        for idx in minibatch_indices(n, batch_size, rng):
            t += 1
            eta = 1.0 / (2.0 * svm_lambda * t)
            xb, sb = X[idx], signs[idx]
            margins = sb * (xb @ w + b)
            violating = margins < 1.0
            if np.any(violating):
                coeff = sb[violating] / idx.size
                hinge_w = -(coeff[:, None] * xb[violating]).sum(axis=0)
                hinge_b = -coeff.sum()
            else:
                hinge_w = np.zeros(dim)
                hinge_b = 0.0
            w = w - eta * (2.0 * svm_lambda * w + hinge_w)
            b = b - eta * hinge_b
    return {"weights": w, "bias": float(b)}


def predict_svm(params: dict, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    margins = X @ params["weights"] + params["bias"]
    return (margins >= 0.0).astype(np.int64), margins

"""Discrete AdaBoost over depth-1 threshold stumps, raw inputs."""

from __future__ import annotations

import numpy as np

ERR_CLAMP = 1e-10


def _best_stump(X: np.ndarray, signs: np.ndarray, weights: np.ndarray):
    """Exhaustive weighted-error search over (feature, threshold, polarity).

    Thresholds per feature: one below the minimum value plus the midpoint of
    every pair of distinct consecutive sorted values. Ties keep the earliest
    candidate in (feature, threshold, +1 before -1) order, which makes the
    search order part of the contract.
    """
    n, dim = X.shape
    pos_weight = np.where(signs > 0, weights, 0.0)
    neg_weight = np.where(signs < 0, weights, 0.0)
    best = (np.inf, 0, 0.0, 1)  # error, feature, threshold, polarity
    for j in range(dim):
        col = X[:, j]
        order = np.argsort(col, kind="stable")
        sorted_vals = col[order]
        # err_plus[k]: error of "predict +1 when x > thr" with k points on the <= side
        below_pos = np.concatenate([[0.0], np.cumsum(pos_weight[order])])
        below_neg = np.concatenate([[0.0], np.cumsum(neg_weight[order])])
        cut_positions = [0] + [k for k in range(1, n) if sorted_vals[k - 1] < sorted_vals[k]]
        for k in cut_positions:
            thr = sorted_vals[0] - 1.0 if k == 0 else 0.5 * (sorted_vals[k - 1] + sorted_vals[k])
            err_plus = below_pos[k] + (below_neg[n] - below_neg[k])
            for polarity, err in ((1, err_plus), (-1, 1.0 - err_plus)):
                if err < best[0]:
                    best = (err, j, thr, polarity)
    return best


def _stump_predict(X: np.ndarray, feature: int, threshold: float, polarity: int) -> np.ndarray:
    raw = np.where(X[:, feature] > threshold, 1.0, -1.0)
    return polarity * raw


def train_adaboost(X: np.ndarray, y: np.ndarray, *, boost_rounds: int) -> dict:
    n = X.shape[0]
    signs = np.where(y == 1, 1.0, -1.0)
    weights = np.full(n, 1.0 / n, dtype=np.float64)
    stumps: list[dict] = []
    round_errors: list[float] = []
    for _ in range(boost_rounds):
        err, feature, threshold, polarity = _best_stump(X, signs, weights)
        pred = _stump_predict(X, feature, threshold, polarity)
        round_errors.append(float(err))
        clamped = min(max(err, ERR_CLAMP), 1.0 - ERR_CLAMP)
        alpha = 0.5 * np.log((1.0 - clamped) / clamped)
        stumps.append(
            {"feature": int(feature), "threshold": float(threshold),
             "polarity": int(polarity), "alpha": float(alpha)}
        )
        if err <= 0.0:
            break  # perfect stump; further rounds cannot change the sign of F
        weights = weights * np.exp(-alpha * signs * pred)
        weights /= weights.sum()
    return {"stumps": stumps, "round_errors": round_errors}


def predict_adaboost(params: dict, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sign of the weighted stump vote; the score is the signed vote itself."""
    margin = np.zeros(X.shape[0], dtype=np.float64)
    for stump in params["stumps"]:
        margin += stump["alpha"] * _stump_predict(
            X, stump["feature"], stump["threshold"], stump["polarity"]
        )
    return (margin >= 0.0).astype(np.int64), margin

"""Six from-scratch binary classifiers behind one fit/predict interface.

Class 1 is the positive class throughout; scores are class-1 probabilities
(logreg, gnb, mlp), signed margins (svm, adaboost), or vote fractions (knn).
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ._common import check_training_inputs, standardize_apply, standardize_fit
from ._optim import AdamState, adam_init, adam_step
from . import boosting, gnb, knn, linear, mlp

ALGORITHMS = ("knn", "gnb", "logreg", "svm", "adaboost", "mlp")

# Distance- and gradient-based learners see z-scored columns; gnb and
# adaboost are scale-equivariant per feature and consume raw values.
STANDARDIZED_ALGORITHMS = frozenset({"knn", "logreg", "svm", "mlp"})

MODEL_FORMAT = "rumourkit-model.v1"

__all__ = [
    "ALGORITHMS", "STANDARDIZED_ALGORITHMS", "MODEL_FORMAT",
    "TrainConfig", "TrainedModel", "AdamState", "adam_init", "adam_step",
    "fit", "predict", "save_model", "load_model",
    "boosting", "gnb", "knn", "linear", "mlp",
]


@dataclass(frozen=True)
class TrainConfig:
    algorithm: str
    seed: int = 0
    learning_rate: float = 2e-4
    batch_size: int = 512
    epochs: int = 100
    weight_decay: float = 1e-5
    dropout_p: float = 0.5
    k_neighbors: int = 5
    boost_rounds: int = 100
    svm_lambda: float = 1e-4
    hidden_sizes: tuple[int, int] = (256, 64)

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be > 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.weight_decay < 0.0:
            raise ValueError("weight_decay must be >= 0")
        if not 0.0 <= self.dropout_p < 1.0:
            raise ValueError("dropout_p must lie in [0, 1)")
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")
        if self.boost_rounds < 1:
            raise ValueError("boost_rounds must be >= 1")
        if self.svm_lambda <= 0.0:
            raise ValueError("svm_lambda must be > 0")
        sizes = tuple(int(h) for h in self.hidden_sizes)
        if len(sizes) != 2 or min(sizes) < 1:
            raise ValueError("hidden_sizes must be a pair of positive integers")
        object.__setattr__(self, "hidden_sizes", sizes)


@dataclass
class TrainedModel:
    algorithm: str
    config: TrainConfig
    input_dim: int
    params: dict
    scaler_mean: np.ndarray | None = None
    scaler_scale: np.ndarray | None = None


def fit(X: np.ndarray, y: np.ndarray, config: TrainConfig) -> TrainedModel:
    """Train one classifier; deterministic for fixed inputs and config.seed."""
    X, y = check_training_inputs(X, y)
    input_dim = X.shape[1]
    mean = scale = None
    if config.algorithm in STANDARDIZED_ALGORITHMS:
        mean, scale = standardize_fit(X)
        X = standardize_apply(X, mean, scale)
    if config.algorithm == "knn":
        params = knn.train_knn(X, y, config.k_neighbors)
    elif config.algorithm == "gnb":
        params = gnb.train_gnb(X, y)
    elif config.algorithm == "logreg":
        params = linear.train_logreg(
            X, y, learning_rate=config.learning_rate, batch_size=config.batch_size,
            epochs=config.epochs, weight_decay=config.weight_decay, seed=config.seed)
    elif config.algorithm == "svm":
        params = linear.train_svm(
            X, y, svm_lambda=config.svm_lambda, batch_size=config.batch_size,
            epochs=config.epochs, seed=config.seed)
    elif config.algorithm == "adaboost":
        params = boosting.train_adaboost(X, y, boost_rounds=config.boost_rounds)
    else:
        params = mlp.train_mlp(
            X, y, hidden_sizes=config.hidden_sizes, learning_rate=config.learning_rate,
            batch_size=config.batch_size, epochs=config.epochs,
            dropout_p=config.dropout_p, weight_decay=config.weight_decay,
            seed=config.seed)
    return TrainedModel(config.algorithm, config, input_dim, params, mean, scale)


def predict(model: TrainedModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(labels, scores) per row; dropout is always off here."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.input_dim:
        raise ValueError(f"X must have shape (n, {model.input_dim}), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite entries")
    if model.scaler_mean is not None:
        X = standardize_apply(X, model.scaler_mean, model.scaler_scale)
    if model.algorithm == "knn":
        return knn.predict_knn(model.params, X)
    if model.algorithm == "gnb":
        return gnb.predict_gnb(model.params, X)
    if model.algorithm == "logreg":
        return linear.predict_logreg(model.params, X)
    if model.algorithm == "svm":
        return linear.predict_svm(model.params, X)
    if model.algorithm == "adaboost":
        return boosting.predict_adaboost(model.params, X)
    return mlp.predict_mlp(model.params, X)


def _round9(value: float) -> float:
    return float(format(float(value), ".9g"))


def _encode(obj):
    """Recursively convert to JSON-ready values, floats at 9 significant digits."""
    if isinstance(obj, np.ndarray):
        if obj.dtype.kind in "iub":
            return obj.tolist()
        return [_encode(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return _round9(obj)
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def save_model(model: TrainedModel, path: str | Path) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "algorithm": model.algorithm,
        "input_dim": model.input_dim,
        "config": _encode(asdict(model.config)),
        "standardization": None if model.scaler_mean is None else {
            "mean": _encode(model.scaler_mean),
            "scale": _encode(model.scaler_scale),
        },
        "params": _encode(model.params),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, ensure_ascii=False, separators=(",", ":"), sort_keys=True)
        fh.write("\n")


_FLOAT_ARRAY_KEYS = {
    "knn": ("train_x",),
    "gnb": ("means", "variances", "log_priors"),
    "logreg": ("weights",),
    "svm": ("weights",),
    "mlp": mlp.PARAM_NAMES,
    "adaboost": (),
}


def load_model(path: str | Path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: unknown model format {payload.get('format')!r}")
    algorithm = payload["algorithm"]
    cfg = dict(payload["config"])
    cfg["hidden_sizes"] = tuple(cfg["hidden_sizes"])
    config = TrainConfig(**cfg)
    params = payload["params"]
    for key in _FLOAT_ARRAY_KEYS[algorithm]:
        params[key] = np.asarray(params[key], dtype=np.float64)
    if algorithm == "knn":
        params["train_y"] = np.asarray(params["train_y"], dtype=np.int64)
        params["k"] = int(params["k"])
    if algorithm == "mlp":
        params["hidden_sizes"] = tuple(params["hidden_sizes"])
    std = payload.get("standardization")
    mean = scale = None
    if std is not None:
        mean = np.asarray(std["mean"], dtype=np.float64)
        scale = np.asarray(std["scale"], dtype=np.float64)
    return TrainedModel(algorithm, config, int(payload["input_dim"]), params, mean, scale)

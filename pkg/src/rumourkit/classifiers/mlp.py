"""Four-layer perceptron: input -> two ReLU hidden layers -> 2-way softmax.

Trained with Adam on minibatch cross-entropy. Inverted dropout rescales the
surviving hidden activations by 1/(1-p) at training time, so evaluation runs
the plain forward pass. Weight decay enters the weight gradients analytically
(biases exempt); the backward pass itself returns pure cross-entropy
gradients so it can be checked against finite differences.
"""

from __future__ import annotations

import numpy as np

from ._common import minibatch_indices
from ._optim import adam_init, adam_step

N_CLASSES = 2
PARAM_NAMES = ("w1", "b1", "w2", "b2", "w3", "b3")


def init_params(input_dim: int, hidden_sizes: tuple[int, int],
                rng: np.random.Generator) -> dict:
    h1, h2 = hidden_sizes
    return {
        "w1": rng.normal(0.0, np.sqrt(2.0 / input_dim), size=(input_dim, h1)),
        "b1": np.zeros(h1),
        "w2": rng.normal(0.0, np.sqrt(2.0 / h1), size=(h1, h2)),
        "b2": np.zeros(h2),
        "w3": rng.normal(0.0, np.sqrt(2.0 / h2), size=(h2, N_CLASSES)),
        "b3": np.zeros(N_CLASSES),
    }


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def mlp_forward(params: dict, X: np.ndarray, *, dropout_p: float = 0.0,
                training_mode: bool = False,
                rng: np.random.Generator | None = None) -> dict:
    """Run the network; returns a cache of activations, masks, and outputs.

    Dropout masks are drawn only when training_mode is true and dropout_p > 0;
    they are already divided by the keep probability (inverted form).
    """
    if training_mode and dropout_p > 0.0 and rng is None:
        raise ValueError("training-mode dropout needs a random generator")
    keep = 1.0 - dropout_p
    z1 = X @ params["w1"] + params["b1"]
    a1 = np.maximum(z1, 0.0)
    if training_mode and dropout_p > 0.0:
        mask1 = (rng.random(a1.shape) < keep) / keep
    else:
        mask1 = np.ones_like(a1)
    a1d = a1 * mask1
    z2 = a1d @ params["w2"] + params["b2"]
    a2 = np.maximum(z2, 0.0)
    if training_mode and dropout_p > 0.0:
        mask2 = (rng.random(a2.shape) < keep) / keep
    else:
        mask2 = np.ones_like(a2)
    a2d = a2 * mask2
    z3 = a2d @ params["w3"] + params["b3"]
    probs = softmax(z3)
    return {"x": X, "z1": z1, "a1d": a1d, "mask1": mask1,
            "z2": z2, "a2d": a2d, "mask2": mask2, "probs": probs}


def cross_entropy(probs: np.ndarray, y: np.ndarray) -> float:
    eps = 1e-300  # guards log(0); softmax outputs are strictly positive anyway
    return float(-np.mean(np.log(probs[np.arange(y.size), y] + eps)))


def mlp_backward(params: dict, cache: dict, y: np.ndarray) -> dict:
    """Gradients of mean cross-entropy w.r.t. every weight and bias."""
    n = y.size
    delta3 = cache["probs"].copy()
    delta3[np.arange(n), y] -= 1.0
    delta3 /= n
    grads = {
        "w3": cache["a2d"].T @ delta3,
        "b3": delta3.sum(axis=0),
    }
    da2d = delta3 @ params["w3"].T
    delta2 = da2d * cache["mask2"] * (cache["z2"] > 0.0)
    grads["w2"] = cache["a1d"].T @ delta2
    grads["b2"] = delta2.sum(axis=0)
    da1d = delta2 @ params["w2"].T
    delta1 = da1d * cache["mask1"] * (cache["z1"] > 0.0)
    grads["w1"] = cache["x"].T @ delta1
    grads["b1"] = delta1.sum(axis=0)
    return grads


def train_mlp(X: np.ndarray, y: np.ndarray, *, hidden_sizes: tuple[int, int],
              learning_rate: float, batch_size: int, epochs: int,
              dropout_p: float, weight_decay: float, seed: int) -> dict:
    n, input_dim = X.shape
    rng = np.random.default_rng(seed)
    params = init_params(input_dim, hidden_sizes, rng)
    state = adam_init([params[k] for k in PARAM_NAMES])
    for _ in range(epochs):
        for idx in minibatch_indices(n, batch_size, rng):
            cache = mlp_forward(params, X[idx], dropout_p=dropout_p,
                                training_mode=True, rng=rng)
            grads = mlp_backward(params, cache, y[idx])
            for key in ("w1", "w2", "w3"):
                grads[key] = grads[key] + weight_decay * params[key]
            updated, state = adam_step(
                [params[k] for k in PARAM_NAMES],
                [grads[k] for k in PARAM_NAMES],
                state, learning_rate,
            )
            params = dict(zip(PARAM_NAMES, updated))
    return {"hidden_sizes": tuple(hidden_sizes), **params}


def predict_mlp(params: dict, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    cache = mlp_forward(params, X)
    probs = cache["probs"]
    return probs.argmax(axis=1).astype(np.int64), probs[:, 1]

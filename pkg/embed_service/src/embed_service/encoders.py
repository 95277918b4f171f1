"""Embedding backends behind one small interface: ``.name``, ``.dim``, ``.encode``.

The default backend wraps a sentence-transformers checkpoint selected by
MODEL_NAME. The ``hashing://<dim>`` scheme swaps in an offline stand-in that
derives each vector from a digest of the text; it keeps the full wire
contract (deterministic, fixed-dim, finite, order-preserving) without any
model download, which makes it the backend of choice for tests and
air-gapped smoke runs.
"""

from __future__ import annotations

import hashlib
from typing import Sequence

import numpy as np

DEFAULT_MODEL = "sentence-transformers/bert-base-nli-mean-tokens"


class HashingEncoder:
    """Digest-seeded unit vectors; no model, no I/O, same text same vector."""

    def __init__(self, dim: int = 768):
        if dim < 1:
            raise ValueError(f"dim must be positive, got {dim}")
        self.dim = dim
        self.name = f"hashing://{dim}"

    def encode(self, texts: Sequence[str]) -> list[np.ndarray]:
        out = []
        for text in texts:
            digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
            rng = np.random.default_rng(int.from_bytes(digest, "big"))
            vec = rng.standard_normal(self.dim)
            vec /= max(float(np.linalg.norm(vec)), 1e-12)
            out.append(vec.astype(np.float32))
        return out


class SentenceTransformerEncoder:
    """A sentence-transformers checkpoint run in inference mode on CPU."""

    def __init__(self, name: str):
        from sentence_transformers import SentenceTransformer  # heavy import, deferred

        self.name = name
        self._model = SentenceTransformer(name, device="cpu")
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: Sequence[str]) -> list[np.ndarray]:
        arr = self._model.encode(list(texts), convert_to_numpy=True,
                                 show_progress_bar=False, batch_size=32)
        return [np.asarray(row, dtype=np.float32) for row in arr]


def load_encoder(model_name: str):
    """Build the backend named by MODEL_NAME; hashing:// never touches the hub."""
    if model_name.startswith("hashing://"):
        tail = model_name[len("hashing://"):]
        return HashingEncoder(int(tail) if tail else 768)
    return SentenceTransformerEncoder(model_name)

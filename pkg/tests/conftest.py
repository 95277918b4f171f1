import csv
from pathlib import Path

import numpy as np
import pytest

from rumourkit.dataset import LabeledDataset, load_jsonl
from rumourkit.embedding import EmbeddingStore
from rumourkit.features import Lexicons, default_lexicon_dir, load_lexicons

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def lexicons() -> Lexicons:
    return load_lexicons(default_lexicon_dir())


@pytest.fixture(scope="session")
def golden_dataset() -> LabeledDataset:
    return load_jsonl(FIXTURES / "golden_tweets.jsonl")


@pytest.fixture(scope="session")
def golden_expected() -> dict[str, list[int]]:
    """id -> hand-verified 39-slot vector from the committed fixture."""
    out = {}
    with open(FIXTURES / "golden_features.csv", encoding="utf-8") as fh:
        for rec in csv.DictReader(fh):
            out[rec["id"]] = [int(rec[f"f{i:02d}"]) for i in range(39)]
    return out


def blob_data(seed: int, n_per_class: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Two well-separated Gaussian clusters; linearly separable with margin."""
    rng = np.random.default_rng(seed)
    a = rng.normal((-2.0, -2.0), 0.5, size=(n_per_class, 2))
    b = rng.normal((2.0, 2.0), 0.5, size=(n_per_class, 2))
    X = np.vstack([a, b])
    y = np.concatenate([np.zeros(n_per_class, dtype=np.int64),
                        np.ones(n_per_class, dtype=np.int64)])
    return X, y


def make_store(ids, dim: int = 768, seed: int = 0,
               model_tag: str = "test-encoder") -> EmbeddingStore:
    """Deterministic synthetic store with one seeded vector per id."""
    rng = np.random.default_rng(seed)
    store = EmbeddingStore(dim=dim, model_tag=model_tag)
    for i in ids:
        store.add(i, rng.standard_normal(dim).astype(np.float32))
    return store


@pytest.fixture(scope="session")
def golden_store(golden_dataset) -> EmbeddingStore:
    return make_store(golden_dataset.ids())

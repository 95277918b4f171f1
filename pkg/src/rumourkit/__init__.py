"""Rumour vs non-rumour tweet classification toolkit.

Two competing representations of a tweet (39 hand-crafted context/content
features, 768-d sentence embeddings) are trained through six from-scratch
classifiers and evaluated with a fixed holdout + cross-validation protocol.
"""

__version__ = "0.1.0"

from .dataset import (
    ClassLabel,
    FoldPlan,
    LabeledDataset,
    SplitResult,
    Tweet,
    UserMeta,
    load_jsonl,
    load_pheme,
    make_folds,
    save_jsonl,
    stratified_split,
)

__all__ = [
    "ClassLabel",
    "FoldPlan",
    "LabeledDataset",
    "SplitResult",
    "Tweet",
    "UserMeta",
    "load_jsonl",
    "load_pheme",
    "make_folds",
    "save_jsonl",
    "stratified_split",
    "__version__",
]

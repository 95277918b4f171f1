"""Confusion-matrix metrics, holdout evaluation, k-fold CV, and comparisons.

Orientation is fixed: the positive class is non_rumour (class 1). tp counts
non-rumours predicted non-rumour, fn non-rumours predicted rumour, fp rumours
predicted non-rumour, tn rumours predicted rumour. The "macro" precision and
recall are arithmetic means of the two per-class values; the macro F1 is the
harmonic mean of macro precision and macro recall, which is how the reference
result tables this toolkit mirrors combine the two classes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .classifiers import TrainConfig, TrainedModel, fit, predict
from .dataset import ClassLabel, FoldPlan, LabeledDataset, SplitResult, subset
from .embedding import EmbeddingStore
from .features import SCHEMA_ID, Lexicons, default_lexicons, feature_matrix

REPRESENTATIONS = ("features39", "embedding")

POSITIVE_CLASS = 1  # non_rumour


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fn", "fp", "tn"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float
    non_rumour: ClassMetrics
    rumour: ClassMetrics
    macro: ClassMetrics
    degenerate: bool = False

    def as_row(self) -> tuple[float, ...]:
        """The ten metrics in report column order."""
        return (
            self.accuracy,
            self.macro.precision, self.macro.recall, self.macro.f1,
            self.non_rumour.precision, self.non_rumour.recall, self.non_rumour.f1,
            self.rumour.precision, self.rumour.recall, self.rumour.f1,
        )


METRIC_COLUMNS = (
    "accuracy",
    "macro_precision", "macro_recall", "macro_f1",
    "nonrumour_precision", "nonrumour_recall", "nonrumour_f1",
    "rumour_precision", "rumour_recall", "rumour_f1",
)


def class_array(dataset: LabeledDataset) -> np.ndarray:
    """Integer labels in dataset order: 1 = non_rumour, 0 = rumour."""
    return np.asarray(
        [1 if t.label is ClassLabel.NON_RUMOUR else 0 for t in dataset], dtype=np.int64
    )


def confusion(predictions: Sequence[int], truth: Sequence[int]) -> ConfusionMatrix:
    pred = np.asarray(predictions, dtype=np.int64)
    true = np.asarray(truth, dtype=np.int64)
    if pred.shape != true.shape or pred.ndim != 1 or pred.size == 0:
        raise ValueError(f"predictions {pred.shape} and truth {true.shape} must be equal-length, non-empty")
    return ConfusionMatrix(
        tp=int(np.sum((true == 1) & (pred == 1))),
        fn=int(np.sum((true == 1) & (pred == 0))),
        fp=int(np.sum((true == 0) & (pred == 1))),
        tn=int(np.sum((true == 0) & (pred == 0))),
    )


def _ratio(num: int | float, den: int | float) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy plus per-class and macro precision/recall/F1.

    Any 0/0 ratio yields 0.0 and sets the degenerate flag instead of raising,
    so constant predictors still produce a report.
    """
    if cm.total == 0:
        raise ValueError("confusion matrix is empty")
    degenerate = False

    def ratio(num, den):
        nonlocal degenerate
        value, bad = _ratio(num, den)
        degenerate = degenerate or bad
        return value

    accuracy = (cm.tp + cm.tn) / cm.total
    nr_p = ratio(cm.tp, cm.tp + cm.fp)
    nr_r = ratio(cm.tp, cm.tp + cm.fn)
    nr_f1 = ratio(2.0 * nr_p * nr_r, nr_p + nr_r)
    r_p = ratio(cm.tn, cm.tn + cm.fn)
    r_r = ratio(cm.tn, cm.tn + cm.fp)
    r_f1 = ratio(2.0 * r_p * r_r, r_p + r_r)
    macro_p = (nr_p + r_p) / 2.0
    macro_r = (nr_r + r_r) / 2.0
    macro_f1 = ratio(2.0 * macro_p * macro_r, macro_p + macro_r)
    return MetricsReport(
        accuracy=accuracy,
        non_rumour=ClassMetrics(nr_p, nr_r, nr_f1),
        rumour=ClassMetrics(r_p, r_r, r_f1),
        macro=ClassMetrics(macro_p, macro_r, macro_f1),
        degenerate=degenerate,
    )


def representation_matrix(
    dataset: LabeledDataset,
    representation: str,
    *,
    lexicons: Lexicons | None = None,
    store: EmbeddingStore | None = None,
) -> tuple[np.ndarray, str]:
    """(X, model_tag) for the requested representation, rows in dataset order."""
    if representation == "features39":
        lex = lexicons if lexicons is not None else default_lexicons()
        return feature_matrix(dataset, lex).astype(np.float64), SCHEMA_ID
    if representation == "embedding":
        if store is None:
            raise EvalError("embedding representation requires a store")
        rows = [store.get(t.id) for t in dataset]  # raises naming any missing id
        return np.stack(rows).astype(np.float64), store.model_tag
    raise ValueError(f"unknown representation {representation!r}")


@dataclass(frozen=True)
class HoldoutReport:
    representation: str
    algorithm: str
    seed: int
    model_tag: str
    config: TrainConfig
    cm: ConfusionMatrix
    metrics: MetricsReport
    model: TrainedModel


def run_holdout(
    dataset: LabeledDataset,
    representation: str,
    config: TrainConfig,
    split: SplitResult,
    *,
    lexicons: Lexicons | None = None,
    store: EmbeddingStore | None = None,
) -> HoldoutReport:
    """Fit on the train partition, score the test partition."""
    X, model_tag = representation_matrix(dataset, representation, lexicons=lexicons, store=store)
    y = class_array(dataset)
    ids = dataset.ids()
    train_rows = np.asarray([i for i, tid in enumerate(ids) if tid in split.train_ids])
    test_rows = np.asarray([i for i, tid in enumerate(ids) if tid in split.test_ids])
    if train_rows.size == 0 or test_rows.size == 0:
        raise EvalError("split leaves an empty partition")
    model = fit(X[train_rows], y[train_rows], config)
    labels, _ = predict(model, X[test_rows])
    cm = confusion(labels, y[test_rows])
    return HoldoutReport(
        representation=representation, algorithm=config.algorithm, seed=config.seed,
        model_tag=model_tag, config=config, cm=cm, metrics=metrics(cm), model=model,
    )


@dataclass(frozen=True)
class CVReport:
    representation: str
    algorithm: str
    seed: int
    model_tag: str
    config: TrainConfig
    per_fold: tuple[MetricsReport, ...]
    per_fold_cm: tuple[ConfusionMatrix, ...]
    mean: MetricsReport


def _mean_reports(reports: Sequence[MetricsReport]) -> MetricsReport:
    def avg(pick) -> float:
        return float(np.mean([pick(r) for r in reports]))

    def avg_class(pick) -> ClassMetrics:
        return ClassMetrics(
            precision=avg(lambda r: pick(r).precision),
            recall=avg(lambda r: pick(r).recall),
            f1=avg(lambda r: pick(r).f1),
        )

    return MetricsReport(
        accuracy=avg(lambda r: r.accuracy),
        non_rumour=avg_class(lambda r: r.non_rumour),
        rumour=avg_class(lambda r: r.rumour),
        macro=avg_class(lambda r: r.macro),
        degenerate=any(r.degenerate for r in reports),
    )


def run_cv(
    dataset: LabeledDataset,
    representation: str,
    config: TrainConfig,
    fold_plan: FoldPlan,
    *,
    lexicons: Lexicons | None = None,
    store: EmbeddingStore | None = None,
) -> CVReport:
    """Train on k-1 folds, score the held-out fold, for every fold.

    Fold i trains with seed config.seed + i so folds are independently seeded
    yet reproducible.
    """
    X, model_tag = representation_matrix(dataset, representation, lexicons=lexicons, store=store)
    y = class_array(dataset)
    row_of = {tid: i for i, tid in enumerate(dataset.ids())}
    fold_reports: list[MetricsReport] = []
    fold_cms: list[ConfusionMatrix] = []
    for fold_index in range(fold_plan.k):
        held = fold_plan.fold_ids(fold_index)
        test_rows = np.asarray(sorted(row_of[tid] for tid in held))
        train_rows = np.asarray([i for tid, i in row_of.items() if tid not in held])
        fold_config = replace(config, seed=config.seed + fold_index)
        try:
            model = fit(X[train_rows], y[train_rows], fold_config)
        except ValueError as exc:
            raise EvalError(f"fold {fold_index}: {exc}") from exc
        labels, _ = predict(model, X[test_rows])
        cm = confusion(labels, y[test_rows])
        fold_cms.append(cm)
        fold_reports.append(metrics(cm))
    return CVReport(
        representation=representation, algorithm=config.algorithm, seed=config.seed,
        model_tag=model_tag, config=config,
        per_fold=tuple(fold_reports), per_fold_cm=tuple(fold_cms),
        mean=_mean_reports(fold_reports),
    )


@dataclass(frozen=True)
class LabeledReport:
    """One named metrics row for the comparison table."""

    name: str
    representation: str
    metrics: MetricsReport


def compare_report(reports: Sequence[LabeledReport]) -> tuple[str, str]:
    """(csv_text, aligned_text) with per-metric improvement rows.

    For every name carrying both representations, an improvement row holds
    embedding minus features39, mirroring the reference layout.
    """
    if not reports:
        raise ValueError("compare_report needs at least one report")
    by_name: dict[str, dict[str, MetricsReport]] = {}
    order: list[str] = []
    for rep in reports:
        if rep.name not in by_name:
            by_name[rep.name] = {}
            order.append(rep.name)
        by_name[rep.name][rep.representation] = rep.metrics

    header = ("name", "representation") + METRIC_COLUMNS
    csv_lines = [",".join(header)]
    widths = [max(14, len(h)) for h in header]
    text_lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]

    def emit(name: str, rep_label: str, values: tuple[float, ...], decimals: int) -> None:
        csv_lines.append(",".join([name, rep_label] + [format(v, ".6f") for v in values]))
        cells = [name, rep_label] + [format(v, f".{decimals}f") for v in values]
        text_lines.append("  ".join(c.ljust(w) for c, w in zip(cells, widths)))

    for name in order:
        group = by_name[name]
        for rep_label in REPRESENTATIONS:
            if rep_label in group:
                emit(name, rep_label, group[rep_label].as_row(), 3)
        if all(r in group for r in REPRESENTATIONS):
            delta = tuple(
                e - f for e, f in zip(group["embedding"].as_row(), group["features39"].as_row())
            )
            emit(name, "improvement", delta, 3)
    return "\n".join(csv_lines) + "\n", "\n".join(text_lines) + "\n"

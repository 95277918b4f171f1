"""Report artifacts: delimited metrics tables, aligned text, and bar figures.

Artifacts are written to be byte-identical across reruns of the same config:
floats use fixed-precision formatting, rows keep a deterministic order, and
PNGs are rendered with the Agg backend with the software tag suppressed.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .eval import METRIC_COLUMNS, CVReport, HoldoutReport, MetricsReport

CSV_COLUMNS = ("run_id", "representation", "algorithm", "seed", "config_hash",
               "model_tag") + METRIC_COLUMNS


def config_hash(payload: dict) -> str:
    """Short stable digest of a config mapping, for artifact provenance."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class ReportRow:
    run_id: str
    representation: str
    algorithm: str
    seed: int
    config_hash: str
    model_tag: str
    metrics: MetricsReport

    def cells(self) -> list[str]:
        head = [self.run_id, self.representation, self.algorithm, str(self.seed),
                self.config_hash, self.model_tag]
        return head + [format(v, ".6f") for v in self.metrics.as_row()]


def rows_from_holdout(report: HoldoutReport, run_id: str, cfg_hash: str) -> list[ReportRow]:
    return [ReportRow(run_id, report.representation, report.algorithm, report.seed,
                      cfg_hash, report.model_tag, report.metrics)]


def rows_from_cv(report: CVReport, run_id: str, cfg_hash: str) -> list[ReportRow]:
    rows = [
        ReportRow(f"{run_id}@fold{i}", report.representation, report.algorithm,
                  report.seed + i, cfg_hash, report.model_tag, fold)
        for i, fold in enumerate(report.per_fold)
    ]
    rows.append(ReportRow(f"{run_id}@mean", report.representation, report.algorithm,
                          report.seed, cfg_hash, report.model_tag, report.mean))
    return rows


def write_report_csv(rows: Sequence[ReportRow], path: str | Path) -> None:
    lines = [",".join(CSV_COLUMNS)]
    lines += [",".join(row.cells()) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_report_txt(rows: Sequence[ReportRow], path: str | Path) -> None:
    table = [list(CSV_COLUMNS)] + [row.cells() for row in rows]
    widths = [max(len(r[c]) for r in table) for c in range(len(CSV_COLUMNS))]
    out = []
    for r in table:
        out.append("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip())
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def render_metrics_png(rows: Sequence[ReportRow], path: str | Path,
                       title: str = "rumour classification metrics") -> None:
    """Grouped bars of accuracy and macro F1, one group per report row."""
    if not rows:
        raise ValueError("no rows to plot")
    names = [row.run_id for row in rows]
    accuracy = [row.metrics.accuracy for row in rows]
    macro_f1 = [row.metrics.macro.f1 for row in rows]
    x = range(len(rows))
    width = 0.38
    fig, ax = plt.subplots(figsize=(max(6.0, 1.2 * len(rows)), 4.2))
    ax.bar([i - width / 2 for i in x], accuracy, width, label="accuracy", color="#4878d0")
    ax.bar([i + width / 2 for i in x], macro_f1, width, label="macro F1", color="#ee854a")
    ax.set_xticks(list(x))
    ax.set_xticklabels(names, rotation=30, ha="right", fontsize=8)
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("score")
    ax.set_title(title)
    ax.legend(loc="lower right")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def render_comparison_png(pairs: dict[str, tuple[float, float]], path: str | Path,
                          title: str = "embedding vs features39 accuracy") -> None:
    """Paired bars per algorithm: features39 vs embedding accuracy."""
    if not pairs:
        raise ValueError("no pairs to plot")
    names = sorted(pairs)
    f39 = [pairs[n][0] for n in names]
    emb = [pairs[n][1] for n in names]
    x = range(len(names))
    width = 0.38
    fig, ax = plt.subplots(figsize=(max(6.0, 1.4 * len(names)), 4.2))
    ax.bar([i - width / 2 for i in x], f39, width, label="features39", color="#6acc64")
    ax.bar([i + width / 2 for i in x], emb, width, label="embedding", color="#956cb4")
    ax.set_xticks(list(x))
    ax.set_xticklabels(names, fontsize=9)
    ax.set_ylim(0.0, 1.0)
    ax.set_ylabel("accuracy")
    ax.set_title(title)
    ax.legend(loc="lower right")
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)

import numpy as np
import pytest

from rumourkit.classifiers import TrainConfig
from rumourkit.dataset import make_folds, stratified_split
from rumourkit.eval import run_cv, run_holdout
from rumourkit.reporting import (
    CSV_COLUMNS,
    ReportRow,
    config_hash,
    render_comparison_png,
    render_metrics_png,
    rows_from_cv,
    rows_from_holdout,
    write_report_csv,
    write_report_txt,
)

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


@pytest.fixture(scope="module")
def holdout(golden_dataset, lexicons):
    split = stratified_split(golden_dataset, 0.7, seed=0)
    cfg = TrainConfig(algorithm="gnb", seed=0)
    return run_holdout(golden_dataset, "features39", cfg, split, lexicons=lexicons)


@pytest.fixture(scope="module")
def cv(golden_dataset, lexicons):
    plan = make_folds(golden_dataset.ids(), k=2, seed=0)
    cfg = TrainConfig(algorithm="knn", seed=0, k_neighbors=3)
    return run_cv(golden_dataset, "features39", cfg, plan, lexicons=lexicons)


class TestConfigHash:
    def test_stable_and_short(self):
        payload = {"b": 2, "a": 1}
        assert config_hash(payload) == config_hash({"a": 1, "b": 2})
        assert len(config_hash(payload)) == 12
        int(config_hash(payload), 16)  # hex digest prefix

    def test_sensitive_to_values(self):
        assert config_hash({"a": 1}) != config_hash({"a": 2})


class TestRows:
    def test_holdout_yields_one_row(self, holdout):
        rows = rows_from_holdout(holdout, "run1", "abc")
        assert len(rows) == 1
        assert rows[0].run_id == "run1"
        assert rows[0].algorithm == "gnb"
        cells = rows[0].cells()
        assert len(cells) == len(CSV_COLUMNS)
        float(cells[6])  # metric cells are fixed-precision decimals

    def test_cv_yields_fold_rows_then_mean(self, cv):
        rows = rows_from_cv(cv, "cvrun", "abc")
        assert [r.run_id for r in rows] == ["cvrun@fold0", "cvrun@fold1", "cvrun@mean"]
        assert [r.seed for r in rows] == [0, 1, 0]

    def test_column_layout(self):
        assert CSV_COLUMNS[:6] == ("run_id", "representation", "algorithm",
                                   "seed", "config_hash", "model_tag")
        assert len(CSV_COLUMNS) == 16


class TestDelimitedFiles:
    def test_csv_round_layout(self, holdout, tmp_path):
        rows = rows_from_holdout(holdout, "r", "h")
        path = tmp_path / "report.csv"
        write_report_csv(rows, path)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(CSV_COLUMNS)
        assert len(lines) == 2
        assert len(lines[1].split(",")) == 16

    def test_csv_rerun_byte_identical(self, holdout, tmp_path):
        rows = rows_from_holdout(holdout, "r", "h")
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_report_csv(rows, p1)
        write_report_csv(rows, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_txt_is_aligned(self, holdout, cv, tmp_path):
        rows = rows_from_holdout(holdout, "r", "h") + rows_from_cv(cv, "c", "h")
        path = tmp_path / "report.txt"
        write_report_txt(rows, path)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("run_id")
        starts = [line.index("features39") for line in lines[1:]]
        assert len(set(starts)) == 1  # representation column lines up


class TestFigures:
    def test_metrics_png_written(self, holdout, tmp_path):
        rows = rows_from_holdout(holdout, "r", "h")
        path = tmp_path / "metrics.png"
        render_metrics_png(rows, path)
        data = path.read_bytes()
        assert data[:8] == PNG_MAGIC
        assert len(data) > 1000

    def test_metrics_png_rerun_byte_identical(self, holdout, cv, tmp_path):
        rows = rows_from_holdout(holdout, "r", "h") + rows_from_cv(cv, "c", "h")
        p1, p2 = tmp_path / "a.png", tmp_path / "b.png"
        render_metrics_png(rows, p1)
        render_metrics_png(rows, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_comparison_png(self, tmp_path):
        path = tmp_path / "cmp.png"
        render_comparison_png({"mlp": (0.755, 0.845), "knn": (0.709, 0.839)}, path)
        assert path.read_bytes()[:8] == PNG_MAGIC

    def test_comparison_rerun_byte_identical(self, tmp_path):
        pairs = {"mlp": (0.755, 0.845)}
        p1, p2 = tmp_path / "a.png", tmp_path / "b.png"
        render_comparison_png(pairs, p1)
        render_comparison_png(pairs, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_empty_inputs_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            render_metrics_png([], tmp_path / "x.png")
        with pytest.raises(ValueError):
            render_comparison_png({}, tmp_path / "y.png")

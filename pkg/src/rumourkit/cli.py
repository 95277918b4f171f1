"""Command-line pipeline: ingest -> features/embed -> train-eval/cv -> compare.

Configuration comes from an INI file (``--config``) with flag overrides; every
artifact embeds the seed, a short config hash, and the schema or model tag, so
reruns with the same inputs are byte-identical. Logs go to stderr; machine
output goes to files (plus the one-line ingest summary on stdout).

Exit codes: 0 success, 2 usage/config error, 3 external-service error,
4 data error.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys
from pathlib import Path

from . import dataset as ds
from . import embedding as em
from .classifiers import ALGORITHMS, TrainConfig, save_model
from .eval import (
    REPRESENTATIONS, EvalError, LabeledReport, ClassMetrics, MetricsReport,
    compare_report, run_cv, run_holdout,
)
from .features import LexiconError, default_lexicon_dir, load_lexicons, write_feature_csv
from .reporting import (
    CSV_COLUMNS, config_hash, render_comparison_png, render_metrics_png,
    rows_from_cv, rows_from_holdout, write_report_csv, write_report_txt,
)

log = logging.getLogger("rumourkit.cli")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SERVICE = 3
EXIT_DATA = 4


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


# -- configuration ----------------------------------------------------------

DEFAULTS = {
    "data": {"jsonl": "", "root": "", "lexicon_dir": ""},
    "embedding": {"mode": "precomputed", "store": "", "endpoint": "",
                  "batch_size": "64", "timeout_ms": "30000", "max_retries": "3"},
    "split": {"train_fraction": "0.7", "cv_k": "5"},
    "run": {"seed": "0", "out": "out",
            "representations": "features39,embedding",
            "algorithms": ",".join(ALGORITHMS),
            "cv_algorithms": "knn,mlp", "cv_representation": "embedding"},
    "train": {"epochs": "100", "learning_rate": "0.0002", "batch_size": "512",
              "weight_decay": "0.00001", "dropout_p": "0.5", "k_neighbors": "5",
              "boost_rounds": "100", "svm_lambda": "0.0001", "hidden_sizes": "256,64"},
}


def load_settings(config_path: str | None) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    cfg.read_dict(DEFAULTS)
    if config_path:
        path = Path(config_path)
        if not path.is_file():
            raise UsageError(f"config file not found: {path}")
        try:
            cfg.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise UsageError(f"invalid config file {path}: {exc}") from exc
    return cfg


def settings_digest(cfg: configparser.ConfigParser, seed: int) -> str:
    payload = {section: dict(cfg[section]) for section in cfg.sections()}
    payload["run"]["seed"] = str(seed)
    return config_hash(payload)


def train_config_from(cfg: configparser.ConfigParser, algorithm: str, seed: int) -> TrainConfig:
    t = cfg["train"]
    hidden = tuple(int(h) for h in t.get("hidden_sizes").split(","))
    if len(hidden) != 2:
        raise UsageError("train.hidden_sizes must be two comma-separated integers")
    try:
        return TrainConfig(
            algorithm=algorithm, seed=seed,
            learning_rate=t.getfloat("learning_rate"),
            batch_size=t.getint("batch_size"), epochs=t.getint("epochs"),
            weight_decay=t.getfloat("weight_decay"), dropout_p=t.getfloat("dropout_p"),
            k_neighbors=t.getint("k_neighbors"), boost_rounds=t.getint("boost_rounds"),
            svm_lambda=t.getfloat("svm_lambda"), hidden_sizes=hidden,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def provider_config_from(cfg: configparser.ConfigParser, args: argparse.Namespace) -> em.ProviderConfig:
    e = cfg["embedding"]
    mode = getattr(args, "mode", None) or e.get("mode")
    store = getattr(args, "store", None) or e.get("store") or None
    endpoint = getattr(args, "endpoint", None) or e.get("endpoint") or None
    try:
        return em.ProviderConfig(
            mode=mode, store_path=store, endpoint=endpoint,
            batch_size=e.getint("batch_size"), timeout_ms=e.getint("timeout_ms"),
            max_retries=e.getint("max_retries"),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _resolve_lexicons(cfg: configparser.ConfigParser, flag_value: str | None):
    lex_dir = flag_value or cfg["data"].get("lexicon_dir") or None
    return load_lexicons(lex_dir) if lex_dir else load_lexicons(default_lexicon_dir())


def _load_jsonl(path_value: str) -> ds.LabeledDataset:
    if not path_value:
        raise UsageError("no input JSONL given (flag or data.jsonl in config)")
    path = Path(path_value)
    if not path.is_file():
        raise UsageError(f"input JSONL not found: {path}")
    return ds.load_jsonl(path)


# -- commands ----------------------------------------------------------------

def cmd_ingest(args, cfg) -> int:
    root_value = args.root or cfg["data"].get("root")
    if not root_value:
        raise UsageError("no corpus root given (positional or data.root in config)")
    root = Path(root_value)
    if not root.is_dir():
        raise UsageError(f"corpus root is not a directory: {root}")
    try:
        data = ds.load_pheme(root)
    except ds.CorpusStructureError as exc:
        if "no events" in str(exc):
            raise UsageError(str(exc)) from exc
        raise DataError(str(exc)) from exc
    out_file = Path(args.out_file) if args.out_file else Path(args.out) / "tweets.jsonl"
    out_file.parent.mkdir(parents=True, exist_ok=True)
    ds.save_jsonl(data, out_file)
    counts = data.class_counts()
    print(f"{counts[ds.ClassLabel.RUMOUR]} rumour / {counts[ds.ClassLabel.NON_RUMOUR]} non-rumour")
    log.info("wrote %d tweets to %s", len(data), out_file)
    return EXIT_OK


def cmd_features(args, cfg) -> int:
    data = _load_jsonl(args.jsonl or cfg["data"].get("jsonl"))
    lexicons = _resolve_lexicons(cfg, args.lexicon_dir)
    out_file = Path(args.out_file) if args.out_file else Path(args.out) / "features.csv"
    out_file.parent.mkdir(parents=True, exist_ok=True)
    write_feature_csv(data, lexicons, out_file)
    log.info("wrote feature rows for %d tweets to %s", len(data), out_file)
    return EXIT_OK


def cmd_embed(args, cfg) -> int:
    data = _load_jsonl(args.jsonl or cfg["data"].get("jsonl"))
    provider = provider_config_from(cfg, args)
    out_file = Path(args.out_file) if args.out_file else Path(args.out) / "embeddings.jsonl"
    out_file.parent.mkdir(parents=True, exist_ok=True)
    ids = list(data.ids())
    texts = [em.normalize_text(t.text) for t in data]

    if provider.mode == "precomputed":
        source = em.load_store(provider.store_path)
        vectors = em.embed_batch(texts, provider, ids=ids, cache=source)
        model_tag = source.model_tag
        dim = source.dim
    else:
        client = em.RemoteEmbeddingClient(provider)
        info = client.info()
        model_tag = str(info["model"])
        dim = int(info["dim"])
        vectors = []
        for start in range(0, len(texts), provider.batch_size):
            chunk = texts[start : start + provider.batch_size]
            vectors.extend(client.embed(chunk))
            log.info("embedded %d/%d", min(start + provider.batch_size, len(texts)), len(texts))

    store = em.EmbeddingStore(dim=dim, model_tag=model_tag)
    for tweet_id, vec in zip(ids, vectors):
        store.add(tweet_id, vec)
    tmp_path = out_file.with_suffix(out_file.suffix + ".partial")
    try:
        em.save_store(store, tmp_path)
        tmp_path.replace(out_file)
    except BaseException:
        tmp_path.unlink(missing_ok=True)
        raise
    log.info("wrote %d vectors (dim %d, model %s) to %s", len(store), dim, model_tag, out_file)
    return EXIT_OK


def _split_csv_flag(value: str, allowed: tuple[str, ...], what: str) -> list[str]:
    items = [v.strip() for v in value.split(",") if v.strip()]
    for item in items:
        if item not in allowed:
            raise UsageError(f"unknown {what} {item!r} (choose from {', '.join(allowed)})")
    if not items:
        raise UsageError(f"no {what} selected")
    return items


def cmd_train_eval(args, cfg) -> int:
    data = _load_jsonl(args.jsonl or cfg["data"].get("jsonl"))
    seed = args.seed if args.seed is not None else cfg["run"].getint("seed")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    representations = _split_csv_flag(
        args.representations or cfg["run"].get("representations"), REPRESENTATIONS, "representation")
    algorithms = _split_csv_flag(
        args.algorithms or cfg["run"].get("algorithms"), ALGORITHMS, "algorithm")
    lexicons = _resolve_lexicons(cfg, args.lexicon_dir) if "features39" in representations else None
    store = None
    if "embedding" in representations:
        store_path = args.store or cfg["embedding"].get("store")
        if not store_path:
            raise UsageError("embedding representation needs embedding.store (or --store)")
        store = em.load_store(store_path)
    fraction = cfg["split"].getfloat("train_fraction")
    split = ds.stratified_split(data, train_fraction=fraction, seed=seed)
    digest = settings_digest(cfg, seed)

    rows = []
    models_dir = out_dir / "models"
    models_dir.mkdir(exist_ok=True)
    accuracy_pairs: dict[str, list[float | None]] = {}
    for representation in representations:
        for algorithm in algorithms:
            config = train_config_from(cfg, algorithm, seed)
            report = run_holdout(data, representation, config, split,
                                 lexicons=lexicons, store=store)
            run_id = f"{algorithm}-{representation}"
            rows.extend(rows_from_holdout(report, run_id, digest))
            save_model(report.model, models_dir / f"{run_id}.json")
            pair = accuracy_pairs.setdefault(algorithm, [None, None])
            pair[0 if representation == "features39" else 1] = report.metrics.accuracy
            log.info("%s: accuracy %.4f", run_id, report.metrics.accuracy)

    write_report_csv(rows, out_dir / "report.csv")
    write_report_txt(rows, out_dir / "report.txt")
    render_metrics_png(rows, out_dir / "metrics.png")
    complete = {k: (v[0], v[1]) for k, v in accuracy_pairs.items()
                if v[0] is not None and v[1] is not None}
    if complete:
        render_comparison_png(complete, out_dir / "comparison.png")
    log.info("wrote %d report rows to %s", len(rows), out_dir / "report.csv")
    return EXIT_OK


def cmd_cv(args, cfg) -> int:
    data = _load_jsonl(args.jsonl or cfg["data"].get("jsonl"))
    seed = args.seed if args.seed is not None else cfg["run"].getint("seed")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    k = args.cv_k if args.cv_k is not None else cfg["split"].getint("cv_k")
    if k < 2:
        raise UsageError(f"cv needs k >= 2, got {k}")
    representation = args.representations or cfg["run"].get("cv_representation")
    if representation not in REPRESENTATIONS:
        raise UsageError(f"unknown representation {representation!r}")
    algorithms = _split_csv_flag(
        args.algorithms or cfg["run"].get("cv_algorithms"), ALGORITHMS, "algorithm")
    lexicons = _resolve_lexicons(cfg, args.lexicon_dir) if representation == "features39" else None
    store = None
    if representation == "embedding":
        store_path = args.store or cfg["embedding"].get("store")
        if not store_path:
            raise UsageError("embedding representation needs embedding.store (or --store)")
        store = em.load_store(store_path)

    # CV runs over the training partition; the holdout test set stays unseen.
    fraction = cfg["split"].getfloat("train_fraction")
    split = ds.stratified_split(data, train_fraction=fraction, seed=seed)
    train_set = ds.subset(data, [t.id for t in data if t.id in split.train_ids])
    try:
        plan = ds.make_folds(train_set.ids(), k=k, seed=seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    digest = settings_digest(cfg, seed)

    rows = []
    for algorithm in algorithms:
        config = train_config_from(cfg, algorithm, seed)
        report = run_cv(train_set, representation, config, plan,
                        lexicons=lexicons, store=store)
        run_id = f"{algorithm}-{representation}"
        rows.extend(rows_from_cv(report, run_id, digest))
        log.info("%s: mean accuracy %.4f over %d folds", run_id, report.mean.accuracy, k)

    write_report_csv(rows, out_dir / "cv_report.csv")
    write_report_txt(rows, out_dir / "cv_report.txt")
    render_metrics_png(rows, out_dir / "cv_metrics.png")
    log.info("wrote %d CV rows to %s", len(rows), out_dir / "cv_report.csv")
    return EXIT_OK


def _metrics_from_cells(cells: list[str]) -> MetricsReport:
    vals = [float(v) for v in cells]
    return MetricsReport(
        accuracy=vals[0],
        macro=ClassMetrics(vals[1], vals[2], vals[3]),
        non_rumour=ClassMetrics(vals[4], vals[5], vals[6]),
        rumour=ClassMetrics(vals[7], vals[8], vals[9]),
    )


def cmd_compare(args, cfg) -> int:
    reports: list[LabeledReport] = []
    for report_path in args.reports:
        path = Path(report_path)
        if not path.is_file():
            raise UsageError(f"report file not found: {path}")
        lines = path.read_text(encoding="utf-8").splitlines()
        if not lines or lines[0].split(",")[: len(CSV_COLUMNS)] != list(CSV_COLUMNS):
            raise DataError(f"{path}: not a recognized report file")
        for lineno, line in enumerate(lines[1:], start=2):
            cells = line.split(",")
            if len(cells) != len(CSV_COLUMNS):
                raise DataError(f"{path}:{lineno}: expected {len(CSV_COLUMNS)} columns")
            run_id, representation, algorithm = cells[0], cells[1], cells[2]
            if "@fold" in run_id:
                continue  # compare holdout/mean rows only
            reports.append(LabeledReport(algorithm, representation, _metrics_from_cells(cells[6:])))
    if not reports:
        raise DataError("no comparable rows found in the given reports")
    csv_text, txt_text = compare_report(reports)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "comparison.csv").write_text(csv_text, encoding="utf-8")
    (out_dir / "comparison.txt").write_text(txt_text, encoding="utf-8")
    log.info("wrote comparison over %d rows to %s", len(reports), out_dir / "comparison.csv")
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # return exit code 2 without argparse's exit path
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rumourkit", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", help="INI config file")
    parser.add_argument("--seed", type=int, default=None, help="override run.seed")
    parser.add_argument("--out", default="out", help="output directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="read a PHEME-style corpus tree into canonical JSONL")
    p.add_argument("root", nargs="?", default=None)
    p.add_argument("--out-file", default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("features", help="extract the 39 hand-crafted features to CSV")
    p.add_argument("jsonl", nargs="?", default=None)
    p.add_argument("--lexicon-dir", default=None)
    p.add_argument("--out-file", default=None)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("embed", help="resolve sentence vectors into a store file")
    p.add_argument("jsonl", nargs="?", default=None)
    p.add_argument("--mode", choices=("precomputed", "remote"), default=None)
    p.add_argument("--store", default=None, help="source store for precomputed mode")
    p.add_argument("--endpoint", default=None, help="remote service base URL")
    p.add_argument("--out-file", default=None)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("train-eval", help="holdout-evaluate algorithms x representations")
    p.add_argument("jsonl", nargs="?", default=None)
    p.add_argument("--representations", default=None)
    p.add_argument("--algorithms", default=None)
    p.add_argument("--store", default=None)
    p.add_argument("--lexicon-dir", default=None)
    p.set_defaults(func=cmd_train_eval)

    p = sub.add_parser("cv", help="k-fold cross-validation over the training partition")
    p.add_argument("jsonl", nargs="?", default=None)
    p.add_argument("--cv-k", type=int, default=None)
    p.add_argument("--representations", default=None,
                   help="single representation for CV")
    p.add_argument("--algorithms", default=None)
    p.add_argument("--store", default=None)
    p.add_argument("--lexicon-dir", default=None)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("compare", help="merge report files into a comparison table")
    p.add_argument("reports", nargs="+")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = load_settings(args.config)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LexiconError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (em.TransportError, em.ProtocolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SERVICE
    except (ds.DatasetError, em.StoreFormatError, em.StoreLookupError, DataError, EvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())

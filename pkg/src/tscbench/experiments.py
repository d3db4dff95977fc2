"""Benchmark harness: run classifiers over datasets and resample folds.

Results accumulate in a CSV with one row per (classifier, dataset, fold).
A run is resumable: rows already present with a numeric test accuracy are
skipped, failed rows are retried.  After a run the file is rewritten in
canonical task order so the output is byte-identical however many worker
processes produced it.
"""

from __future__ import annotations

import csv
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .data import LabeledDataset, ResampleSpec, load_ucr, stratified_resample
from .errors import DatasetFormatError, ParameterError, TscError
from .registry import CLASSIFIERS, create
from .stats import ResultsTable

CSV_FIELDS = ("classifier", "dataset", "fold", "test_acc", "train_acc", "params", "train_ms")


@dataclass
class ExperimentConfig:
    data_dir: str
    output: str
    classifiers: tuple
    datasets: tuple
    folds: int = 1
    seed: int = 0
    znormalize: bool = True
    threads: int = 1

    def __post_init__(self):
        self.classifiers = tuple(self.classifiers)
        self.datasets = tuple(self.datasets)
        if not self.classifiers:
            raise ParameterError("no classifiers requested")
        for name in self.classifiers:
            if name not in CLASSIFIERS:
                raise ParameterError(f"unknown classifier {name!r}")
        if not self.datasets:
            raise ParameterError("no datasets requested")
        if self.folds < 1:
            raise ParameterError("folds must be >= 1")
        if self.threads < 1:
            raise ParameterError("threads must be >= 1")


@dataclass
class ExperimentReport:
    completed: int = 0
    skipped: int = 0
    failed: int = 0
    failures: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 2 if self.failed else 0


def dataset_paths(data_dir: str, name: str) -> tuple[str, str]:
    base = os.path.join(data_dir, name)
    return (
        os.path.join(base, f"{name}_TRAIN.txt"),
        os.path.join(base, f"{name}_TEST.txt"),
    )


def discover_datasets(data_dir: str) -> list[str]:
    """Dataset directories under ``data_dir`` that hold a train file."""
    found = []
    if not os.path.isdir(data_dir):
        raise DatasetFormatError(f"data directory {data_dir!r} does not exist")
    for entry in sorted(os.listdir(data_dir)):
        train, _ = dataset_paths(data_dir, entry)
        if os.path.isfile(train):
            found.append(entry)
    return found


def load_dataset_pair(data_dir: str, name: str, znorm: bool) -> tuple[LabeledDataset, LabeledDataset]:
    train_path, test_path = dataset_paths(data_dir, name)
    train = load_ucr(train_path)
    test = load_ucr(test_path)
    if znorm:
        train, test = train.znormalized(), test.znormalized()
    return train, test


def fold_split(
    train: LabeledDataset, test: LabeledDataset, seed: int, fold: int
) -> tuple[LabeledDataset, LabeledDataset]:
    """Fold 0 is the original split; later folds reshuffle it, keeping the
    original per-class train/test counts."""
    spec = ResampleSpec(seed, fold, train.case_count, test.case_count)
    return stratified_resample(train, test, spec)


def _run_single(task) -> dict:
    name, dataset, data_dir, znorm, seed, fold = task
    started = time.perf_counter()
    try:
        train, test = load_dataset_pair(data_dir, dataset, znorm)
        fold_train, fold_test = fold_split(train, test, seed, fold)
        model = create(name)
        fit_start = time.perf_counter()
        model.fit(fold_train, seed=seed + fold)
        train_ms = int(round((time.perf_counter() - fit_start) * 1000))
        predicted = model.predict_batch(fold_test.series)
        test_acc = float(np.mean(predicted == fold_test.labels))
        train_acc = model.train_accuracy
        return {
            "classifier": name,
            "dataset": dataset,
            "fold": str(fold),
            "test_acc": f"{test_acc:.6f}",
            "train_acc": "" if train_acc is None else f"{train_acc:.6f}",
            "params": model.params_string,
            "train_ms": str(train_ms),
        }
    except Exception as exc:  # error rows keep the run going
        elapsed = int(round((time.perf_counter() - started) * 1000))
        message = f"{type(exc).__name__}: {exc}".replace(",", ";").replace("\n", " ")
        return {
            "classifier": name,
            "dataset": dataset,
            "fold": str(fold),
            "test_acc": "error",
            "train_acc": "",
            "params": message[:200],
            "train_ms": str(elapsed),
        }


def read_results(path: str) -> list[dict]:
    """Rows of a results file, deduplicated so the last write of a task wins."""
    if not os.path.isfile(path):
        return []
    by_key = {}
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is not None and tuple(reader.fieldnames) != CSV_FIELDS:
            raise DatasetFormatError(f"{path}: unexpected results header {reader.fieldnames}")
        for row in reader:
            by_key[(row["classifier"], row["dataset"], row["fold"])] = row
    return list(by_key.values())


def _write_rows(path: str, rows: list[dict]) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    os.replace(tmp, path)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Execute every (classifier, dataset, fold) task not already done."""
    existing = {
        (r["classifier"], r["dataset"], r["fold"]): r for r in read_results(config.output)
    }
    tasks = []
    report = ExperimentReport()
    for name in config.classifiers:
        for dataset in config.datasets:
            for fold in range(config.folds):
                key = (name, dataset, str(fold))
                done = existing.get(key)
                if done is not None and done["test_acc"] != "error":
                    report.skipped += 1
                    continue
                tasks.append((name, dataset, config.data_dir, config.znormalize, config.seed, fold))
    if config.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            fresh = list(pool.map(_run_single, tasks))
    else:
        fresh = [_run_single(task) for task in tasks]
    for row in fresh:
        existing[(row["classifier"], row["dataset"], row["fold"])] = row
        if row["test_acc"] == "error":
            report.failed += 1
            report.failures.append(f"{row['classifier']}/{row['dataset']}/{row['fold']}: {row['params']}")
        else:
            report.completed += 1
    ordered = sorted(
        existing.values(),
        key=lambda r: (r["classifier"], r["dataset"], int(r["fold"])),
    )
    if config.output:
        os.makedirs(os.path.dirname(os.path.abspath(config.output)), exist_ok=True)
        _write_rows(config.output, ordered)
    return report


def fold_accuracies(rows: list[dict]) -> dict:
    """classifier -> dataset -> fold-ordered accuracy array, errors omitted."""
    out: dict[str, dict[str, list]] = {}
    for row in rows:
        if row["test_acc"] == "error":
            continue
        out.setdefault(row["classifier"], {}).setdefault(row["dataset"], []).append(
            (int(row["fold"]), float(row["test_acc"]))
        )
    return {
        name: {
            ds: np.array([acc for _, acc in sorted(folds)])
            for ds, folds in by_dataset.items()
        }
        for name, by_dataset in out.items()
    }


def results_to_table(rows: list[dict], classifiers=None, datasets=None) -> ResultsTable:
    """Mean accuracy over folds as a (datasets x classifiers) table.

    Only (classifier, dataset) pairs covered by every requested classifier
    are usable; missing pairs raise.
    """
    folds = fold_accuracies(rows)
    if classifiers is None:
        classifiers = sorted(folds)
    if datasets is None:
        seen = [set(folds.get(name, {})) for name in classifiers]
        datasets = sorted(set.intersection(*seen)) if seen else []
    if not datasets:
        raise ParameterError("no dataset is covered by every requested classifier")
    acc = np.empty((len(datasets), len(classifiers)))
    for j, name in enumerate(classifiers):
        for i, ds in enumerate(datasets):
            try:
                acc[i, j] = folds[name][ds].mean()
            except KeyError:
                raise ParameterError(f"no results for {name} on {ds}") from None
    return ResultsTable(acc, tuple(classifiers), tuple(datasets))

"""Dataset container, UCR-style text ingestion, resampling and series transforms.

Datasets are immutable once loaded: every transform returns a new array and
the resampler returns new dataset objects, so they can be shared freely
between workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DatasetFormatError, LengthMismatchError, ParameterError, SizeError


@dataclass(frozen=True)
class LabeledDataset:
    """Equal-length univariate series with dense integer class labels.

    ``series`` is an (n, m) float array, ``labels`` an (n,) int array with
    values in [0, class_count).  ``label_names`` keeps the original label
    tokens (index = dense class id) for reporting.
    """

    series: np.ndarray
    labels: np.ndarray
    label_names: tuple[str, ...]

    def __post_init__(self):
        series = np.asarray(self.series, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "series", series)
        object.__setattr__(self, "labels", labels)
        if series.ndim != 2 or series.shape[1] < 2:
            raise DatasetFormatError("series must be a 2-d array with length >= 2")
        if len(labels) != len(series):
            raise DatasetFormatError("labels and series disagree on case count")
        if len(series) < 1:
            raise DatasetFormatError("dataset needs at least one case")
        c = len(self.label_names)
        if c < 2:
            raise DatasetFormatError("dataset needs at least two classes")
        if labels.min() < 0 or labels.max() >= c:
            raise DatasetFormatError("labels must be dense ids in [0, class_count)")

    @property
    def case_count(self) -> int:
        return self.series.shape[0]

    @property
    def series_length(self) -> int:
        return self.series.shape[1]

    @property
    def class_count(self) -> int:
        return len(self.label_names)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.class_count)

    def subset(self, indices) -> "LabeledDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledDataset(self.series[idx].copy(), self.labels[idx].copy(), self.label_names)

    def znormalized(self) -> "LabeledDataset":
        out = np.vstack([znormalize(row) for row in self.series])
        return LabeledDataset(out, self.labels.copy(), self.label_names)


@dataclass(frozen=True)
class ResampleSpec:
    """Identifies one stratified train/test re-partition.

    Fold 0 always reproduces the original split.  ``train_size`` and
    ``test_size`` must match the original split sizes.
    """

    seed: int
    fold_index: int
    train_size: int
    test_size: int

    def __post_init__(self):
        if self.fold_index < 0:
            raise ParameterError("fold_index must be >= 0")

    @property
    def tag(self) -> str:
        return f"{self.seed}:{self.fold_index}"


def load_ucr(path) -> LabeledDataset:
    """Load a UCR-format text file: one case per line, label first, comma separated.

    Labels are remapped to contiguous ids 0..c-1 in order of first appearance;
    the original tokens are retained in ``label_names``.
    """
    with open(path, "r", encoding="utf-8") as handle:
        lines = [line.strip() for line in handle]
    lines = [(i + 1, line) for i, line in enumerate(lines) if line]
    if not lines:
        raise DatasetFormatError(f"{path}: empty dataset file")

    series_rows = []
    label_tokens = []
    m = None
    for lineno, line in lines:
        tokens = line.split(",")
        if len(tokens) < 3:
            raise DatasetFormatError(f"{path}:{lineno}: expected a label and at least two values")
        label_tokens.append(tokens[0].strip())
        try:
            values = np.array([float(tok) for tok in tokens[1:]], dtype=np.float64)
        except ValueError as exc:
            raise DatasetFormatError(f"{path}:{lineno}: non-numeric value ({exc})") from None
        if m is None:
            m = len(values)
        elif len(values) != m:
            raise DatasetFormatError(
                f"{path}:{lineno}: ragged line, got {len(values)} values, expected {m}"
            )
        series_rows.append(values)

    names: list[str] = []
    ids = {}
    labels = np.empty(len(series_rows), dtype=np.int64)
    for i, token in enumerate(label_tokens):
        if token not in ids:
            ids[token] = len(names)
            names.append(token)
        labels[i] = ids[token]
    return LabeledDataset(np.vstack(series_rows), labels, tuple(names))


def znormalize(series) -> np.ndarray:
    """Scale a series to mean 0, population standard deviation 1.

    A constant series maps to all zeros so that downstream pipelines stay
    total on degenerate inputs.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.size < 2:
        raise ParameterError("znormalize needs at least two values")
    if np.all(x == x[0]):
        # x.std() can come out tiny but positive on a constant series when
        # the mean itself rounds (e.g. three identical values), so the
        # degenerate case has to be caught before dividing.
        return np.zeros_like(x)
    sd = x.std()
    if sd <= 0.0:
        return np.zeros_like(x)
    return (x - x.mean()) / sd


def stratified_resample(
    train: LabeledDataset, test: LabeledDataset, spec: ResampleSpec
) -> tuple[LabeledDataset, LabeledDataset]:
    """Re-partition the pooled train+test cases, preserving per-class train counts.

    Fold 0 returns the original split.  Later folds shuffle each class's pooled
    indices with a generator seeded by ``seed XOR fold_index`` and take the
    first ``k_c`` cases for the train side, where ``k_c`` is that class's count
    in the original train split.  Deterministic for a fixed (seed, fold).
    """
    if train.label_names != test.label_names:
        raise SizeError("train and test label universes differ")
    if spec.train_size != train.case_count or spec.test_size != test.case_count:
        raise SizeError(
            f"spec sizes {spec.train_size}/{spec.test_size} do not match the "
            f"original split {train.case_count}/{test.case_count}"
        )
    if spec.fold_index == 0:
        return train.subset(np.arange(train.case_count)), test.subset(np.arange(test.case_count))

    pooled_series = np.vstack([train.series, test.series])
    pooled_labels = np.concatenate([train.labels, test.labels])
    train_counts = train.class_counts()

    rng = np.random.default_rng(spec.seed ^ spec.fold_index)
    train_idx = []
    test_idx = []
    for cls in range(train.class_count):
        cls_idx = np.flatnonzero(pooled_labels == cls)
        rng.shuffle(cls_idx)
        k = train_counts[cls]
        train_idx.extend(cls_idx[:k])
        test_idx.extend(cls_idx[k:])
    train_idx = np.array(train_idx, dtype=np.int64)
    test_idx = np.array(test_idx, dtype=np.int64)

    new_train = LabeledDataset(pooled_series[train_idx], pooled_labels[train_idx], train.label_names)
    new_test = LabeledDataset(pooled_series[test_idx], pooled_labels[test_idx], train.label_names)
    return new_train, new_test


def diff_transform(series) -> np.ndarray:
    """First differences: out_i = a_i - a_{i+1}, shrinking the length by one."""
    x = np.asarray(series, dtype=np.float64)
    if x.size < 2:
        raise LengthMismatchError("diff_transform needs length >= 2")
    return x[:-1] - x[1:]


def cosine_transform(series) -> np.ndarray:
    """Cosine transform c_i = sum_j a_j * cos(pi/2 * (j - 1/2) * (i - 1)), 1-based."""
    x = np.asarray(series, dtype=np.float64)
    m = x.size
    if m < 1:
        raise ParameterError("cosine_transform needs a non-empty series")
    i = np.arange(m)[:, None]
    j = np.arange(m)[None, :] + 0.5
    basis = np.cos((math.pi / 2.0) * j * i)
    return basis @ x


def acf_transform(series, max_lag: int) -> np.ndarray:
    """Sample autocorrelations at lags 1..max_lag; all zeros for a constant series."""
    x = np.asarray(series, dtype=np.float64)
    m = x.size
    if max_lag >= m:
        raise ParameterError(f"max_lag {max_lag} must be < series length {m}")
    centered = x - x.mean()
    denom = float(centered @ centered)
    out = np.zeros(max_lag, dtype=np.float64)
    if denom <= 0.0:
        return out
    for lag in range(1, max_lag + 1):
        out[lag - 1] = float(centered[:-lag] @ centered[lag:]) / denom
    return out


def ps_transform(series) -> np.ndarray:
    """Periodogram: magnitudes of DFT bins 1..floor(m/2) (DC excluded)."""
    x = np.asarray(series, dtype=np.float64)
    m = x.size
    if m < 2:
        raise LengthMismatchError("ps_transform needs length >= 2")
    spectrum = np.fft.rfft(x)
    return np.abs(spectrum[1 : m // 2 + 1])

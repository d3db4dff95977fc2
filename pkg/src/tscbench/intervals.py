"""Interval and subseries classifiers.

Three classifiers summarize stretches of a series by simple statistics
instead of comparing whole series pointwise:

* TimeSeriesForest: each tree sees mean, spread, and slope of its own
  random intervals.
* TimeSeriesBagOfFeatures: random subseries become labeled cases for a
  first-stage forest; each series is then re-described by a histogram of
  its subseries' out-of-bag class probabilities and classified by a
  second-stage forest.
* LearnedPatternSimilarity: regression trees predict one randomly chosen
  segment column from the others; the pattern of leaf occupancy across
  trees is the series representation, compared by 1-NN.
"""

from __future__ import annotations

import numpy as np

from .data import LabeledDataset, diff_transform
from .errors import ParameterError
from .learners import (
    RandomForest,
    RandomRegressionTree,
    RandomTree,
    TabularDataset,
    default_attributes_per_node,
)

MIN_INTERVAL_GAP = 3


def interval_stats(series, start: int, end: int) -> tuple[float, float, float]:
    """Mean, population standard deviation, and least-squares slope of
    the closed interval [start, end] (0-based)."""
    x = np.asarray(series, dtype=np.float64)
    if not (0 <= start <= end < len(x)):
        raise ParameterError(f"interval [{start}, {end}] out of range for length {len(x)}")
    seg = x[start : end + 1]
    mean = float(seg.mean())
    sd = float(seg.std())
    cp = np.arange(len(seg), dtype=np.float64)
    cp -= cp.mean()
    denom = float(cp @ cp)
    slope = float((cp @ seg) / denom) if denom > 0 else 0.0
    return mean, sd, slope


def _interval_features(X: np.ndarray, intervals) -> np.ndarray:
    """(mean, std, slope) per interval, vectorized over cases."""
    n = len(X)
    out = np.empty((n, 3 * len(intervals)))
    for k, (a, b) in enumerate(intervals):
        seg = X[:, a : b + 1]
        out[:, 3 * k] = seg.mean(axis=1)
        out[:, 3 * k + 1] = seg.std(axis=1)
        cp = np.arange(b - a + 1, dtype=np.float64)
        cp -= cp.mean()
        denom = cp @ cp
        out[:, 3 * k + 2] = (seg @ cp) / denom if denom > 0 else 0.0
    return out


class TimeSeriesForest:
    """Forest of trees over random-interval summary statistics.

    Each tree draws floor(sqrt(m)) intervals of at least MIN_INTERVAL_GAP+1
    points, summarizes them to 3 features apiece, and splits on random
    attribute subsets.  Trees vote with equal weight; ties go to the lowest
    class id.
    """

    def __init__(self, tree_count: int = 500):
        self.tree_count = tree_count

    def fit(self, train: LabeledDataset, seed: int = 0) -> "TimeSeriesForest":
        X, y = train.series, train.labels
        m = train.series_length
        if m < MIN_INTERVAL_GAP + 2:
            raise ParameterError("series too short for interval sampling")
        self.class_count = train.class_count
        per_tree = max(1, int(np.sqrt(m)))
        attrs = default_attributes_per_node(3 * per_tree)
        self.trees = []
        self._intervals = []
        for index in range(self.tree_count):
            rng = np.random.default_rng(seed + index)
            intervals = []
            for _ in range(per_tree):
                a = int(rng.integers(1, m - MIN_INTERVAL_GAP + 1))
                b = int(rng.integers(a + MIN_INTERVAL_GAP, m + 1))
                intervals.append((a - 1, b - 1))
            features = _interval_features(X, intervals)
            tree = RandomTree(attrs)
            tree.fit(TabularDataset(features, y, class_count=self.class_count), rng)
            self.trees.append(tree)
            self._intervals.append(intervals)
        self.train_accuracy = float(np.mean(self.predict_batch(X) == y))
        return self

    @property
    def params_string(self) -> str:
        return f"tsf(trees={self.tree_count})"

    def _votes(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        votes = np.zeros((len(X), self.class_count))
        for tree, intervals in zip(self.trees, self._intervals):
            predicted = tree.predict_batch(_interval_features(X, intervals))
            votes[np.arange(len(X)), predicted] += 1.0
        return votes / len(self.trees)

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self._votes(X), axis=1).astype(np.int64)

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        return self._votes(np.atleast_2d(series))[0]


class TimeSeriesBagOfFeatures:
    """Two-stage forest over random subseries of parameterized coverage.

    The subseries length factor z is picked from Z_GRID by the second-stage
    forest's out-of-bag error; ties keep the earliest value.
    """

    Z_GRID = (0.1, 0.25, 0.5, 0.75)
    SECTION_FACTOR = 5
    BINS = 10

    def fit(self, train: LabeledDataset, seed: int = 0) -> "TimeSeriesBagOfFeatures":
        X, y = train.series, train.labels
        self.class_count = train.class_count
        m = train.series_length
        best = None
        for zi, z in enumerate(self.Z_GRID):
            v = int(z * m / self.SECTION_FACTOR)
            w = m // self.SECTION_FACTOR - v
            if v < 1 or w < 1:
                continue
            e = v * self.SECTION_FACTOR
            if e >= m:
                continue
            rng = np.random.default_rng(seed)
            spans = []
            for _ in range(w):
                start = int(rng.integers(0, m - e + 1))
                end = int(rng.integers(start + e - 1, m))
                spans.append((start, end))
            stage_seed = seed + 100_000 * (zi + 1)
            cases, case_labels = self._case_features(X, y, spans, v)
            stage1 = RandomForest(incremental=True, seed=stage_seed).fit(
                TabularDataset(cases, case_labels, class_count=self.class_count)
            )
            probs, _ = stage1.oob_probabilities()
            histograms = self._histograms(probs, len(X), len(spans))
            stage2 = RandomForest(incremental=True, seed=stage_seed + 50_000).fit(
                TabularDataset(histograms, y, class_count=self.class_count)
            )
            error = stage2.oob_error()
            if best is None or error < best[0] - 1e-12:
                best = (error, z, spans, v, stage1, stage2)
        if best is None:
            raise ParameterError("series too short for any subseries factor")
        _, self.z, self._spans, self._v, self._stage1, self._stage2 = best
        self.train_accuracy = 1.0 - best[0]
        return self

    @property
    def params_string(self) -> str:
        return f"tsbf(z={self.z:g},v={self._v})"

    def _case_features(self, X, y, spans, v):
        """One labeled case per (series, subseries): v interval summaries
        plus whole-subseries summaries."""
        feats = []
        labels = []
        for start, end in spans:
            bounds = np.linspace(start, end + 1, v + 1).round().astype(int)
            intervals = [
                (bounds[k], max(bounds[k], bounds[k + 1] - 1)) for k in range(v)
            ]
            block = _interval_features(X, intervals + [(start, end)])
            feats.append(block)
            if y is not None:
                labels.append(y)
        stacked = np.vstack(feats)
        return stacked, (np.concatenate(labels) if y is not None else None)

    def _histograms(self, probs, n, w):
        """Series-level summary of its subseries' class probabilities.

        Counts of binned probability for all but the last class, then the
        relative frequency of each predicted class.
        """
        c, b = self.class_count, self.BINS
        per_series = probs.reshape(w, n, c).transpose(1, 0, 2)
        out = np.zeros((n, b * (c - 1) + c))
        for i in range(n):
            block = per_series[i]
            for cls in range(c - 1):
                bins = np.minimum((block[:, cls] * b).astype(int), b - 1)
                out[i, cls * b : (cls + 1) * b] = np.bincount(bins, minlength=b)
            predicted = np.argmax(block, axis=1)
            out[i, b * (c - 1) :] = np.bincount(predicted, minlength=c) / w
        return out

    def _series_histograms(self, X) -> np.ndarray:
        cases, _ = self._case_features(np.atleast_2d(X), None, self._spans, self._v)
        probs = self._stage1.class_distribution_batch(cases)
        return self._histograms(probs, len(np.atleast_2d(X)), len(self._spans))

    def predict_batch(self, X) -> np.ndarray:
        return self._stage2.predict_batch(self._series_histograms(X))

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        return self._stage2.class_distribution_batch(self._series_histograms(np.atleast_2d(series)))[0]


class LearnedPatternSimilarity:
    """1-NN over leaf-occupancy counts of segment-predicting trees.

    Each tree stacks random raw and difference segments into a column
    matrix, picks one column as the regression target, and grows a
    depth-capped tree on the rest; a series is represented by how many of
    its rows fall in each leaf.  Tree depth is chosen from DEPTHS by
    leave-one-out 1-NN accuracy.
    """

    DEPTHS = (2, 4, 6)
    TREES = 200
    SEGMENTS = 20

    def fit(self, train: LabeledDataset, seed: int = 0) -> "LearnedPatternSimilarity":
        X, y = train.series, train.labels
        self.class_count = train.class_count
        m = train.series_length
        if m < 3:
            raise ParameterError("series too short for segment sampling")
        best = None
        for depth in self.DEPTHS:
            trees = self._build_forest(X, depth, seed)
            features = self._leaf_counts(trees, X)
            acc = self._loocv(features, y)
            if best is None or acc > best[0] + 1e-12:
                best = (acc, depth, trees, features)
        self.train_accuracy, self.depth, self._trees, self._features = best
        self._labels = y
        return self

    @property
    def params_string(self) -> str:
        return f"lps(d={self.depth},trees={self.TREES})"

    def _segment_columns(self, X, D, e, raw_starts, diff_starts) -> np.ndarray:
        n = len(X)
        columns = np.empty((n * e, 2 * self.SEGMENTS))
        for k, start in enumerate(raw_starts):
            columns[:, k] = X[:, start : start + e].reshape(-1)
        for k, start in enumerate(diff_starts):
            columns[:, self.SEGMENTS + k] = D[:, start : start + e].reshape(-1)
        return columns

    def _build_forest(self, X, depth, seed):
        n, m = X.shape
        D = np.array([diff_transform(row) for row in X])
        trees = []
        for index in range(self.TREES):
            rng = np.random.default_rng(seed + index)
            lo = max(1, int(0.1 * m))
            hi = min(max(lo, int(0.9 * m)), m - 1)
            e = int(rng.integers(lo, hi + 1))
            raw_starts = [int(rng.integers(0, m - e + 1)) for _ in range(self.SEGMENTS)]
            diff_starts = [int(rng.integers(0, m - e)) for _ in range(self.SEGMENTS)]
            columns = self._segment_columns(X, D, e, raw_starts, diff_starts)
            target = int(rng.integers(0, 2 * self.SEGMENTS))
            predictors = np.delete(columns, target, axis=1)
            tree = RandomRegressionTree(depth)
            tree.fit(predictors, columns[:, target], rng)
            trees.append((tree, e, raw_starts, diff_starts, target))
        return trees

    def _leaf_counts(self, trees, X) -> np.ndarray:
        n = len(X)
        D = np.array([diff_transform(row) for row in X])
        blocks = []
        for tree, e, raw_starts, diff_starts, target in trees:
            columns = self._segment_columns(X, D, e, raw_starts, diff_starts)
            leaves = tree.leaf_indices(np.delete(columns, target, axis=1))
            counts = np.zeros((n, tree.leaf_count))
            for i in range(n):
                seg = leaves[i * e : (i + 1) * e]
                counts[i] = np.bincount(seg, minlength=tree.leaf_count)
            blocks.append(counts)
        return np.hstack(blocks)

    def _loocv(self, features, y) -> float:
        d = (
            (features**2).sum(axis=1)[:, None]
            + (features**2).sum(axis=1)[None, :]
            - 2.0 * features @ features.T
        )
        np.fill_diagonal(d, np.inf)
        return float(np.mean(y[np.argmin(d, axis=1)] == y))

    def predict_batch(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        q = self._leaf_counts(self._trees, X)
        d = (
            (q**2).sum(axis=1)[:, None]
            + (self._features**2).sum(axis=1)[None, :]
            - 2.0 * q @ self._features.T
        )
        return self._labels[np.argmin(d, axis=1)]

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        out = np.zeros(self.class_count)
        out[self.predict(series)] = 1.0
        return out

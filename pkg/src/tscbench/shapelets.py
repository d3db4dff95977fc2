"""Shapelet discovery, the shapelet transform, and two classifiers built on it.

A shapelet is a subsequence whose best-matching distance to a series
separates classes well.  Matching is scale-invariant: both the shapelet and
every window it is compared against are z-normalized, and the squared
euclidean distance of the best window is divided by the shapelet length.

``binary_shapelet_selection`` scores every subsequence of every training
series by one-vs-rest information gain, prunes overlapping candidates from
the same series, and fills a per-class quota.  ``ShapeletTransformClassifier``
feeds the resulting distance features to a weighted vote of nearest
neighbours, naive Bayes, and a random forest.  ``FastShapeletTree`` instead
finds one discriminative subsequence per tree node by hashing symbolic
words under random masks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import _kernels
from .data import LabeledDataset, znormalize
from .dictionary import paa, sax_breakpoints
from .errors import ParameterError
from .learners import best_threshold_split, cv_weighted_members

_CANDIDATE_BLOCK = 1024


def sdist(shapelet, series) -> float:
    """Length-normalized squared distance of the best-matching window.

    The shapelet and each window are z-normalized independently, so a match
    is judged by shape alone.
    """
    shapelet = np.ascontiguousarray(shapelet, dtype=np.float64)
    series = np.ascontiguousarray(series, dtype=np.float64)
    if len(shapelet) < 1 or len(shapelet) > len(series):
        raise ParameterError("shapelet must be no longer than the series")
    return float(_kernels.min_zdist_sq(znormalize(shapelet), series))


def assess_candidate(distances, labels, positive_class: int):
    """One-vs-rest split quality of a candidate's distances.

    Returns (information_gain_bits, threshold); threshold is None when the
    distances cannot be split.
    """
    binary = (np.asarray(labels) == positive_class).astype(np.int64)
    return best_threshold_split(distances, binary, 2)


@dataclass(frozen=True)
class Shapelet:
    values: np.ndarray
    normalized: np.ndarray = field(repr=False)
    series_index: int
    start: int
    quality: float
    source_class: int

    @property
    def length(self) -> int:
        return len(self.values)


def _znormed_windows(X: np.ndarray, length: int):
    """All z-normalized windows of every row, flattened to one matrix."""
    wins = sliding_window_view(X, length, axis=1)
    n, per_series = wins.shape[0], wins.shape[1]
    flat = wins.reshape(n * per_series, length).astype(np.float64)
    mu = flat.mean(axis=1, keepdims=True)
    sd = flat.std(axis=1, keepdims=True)
    z = np.where(sd > 0, (flat - mu) / np.where(sd > 0, sd, 1.0), 0.0)
    return z, per_series


def _min_distances(candidates: np.ndarray, windows: np.ndarray, per_series: int, length: int) -> np.ndarray:
    """Per-candidate minimum squared window distance to every series."""
    w_norms = (windows**2).sum(axis=1)
    n = len(windows) // per_series
    out = np.empty((len(candidates), n))
    for lo in range(0, len(candidates), _CANDIDATE_BLOCK):
        block = candidates[lo : lo + _CANDIDATE_BLOCK]
        d = (
            (block**2).sum(axis=1)[:, None]
            + w_norms[None, :]
            - 2.0 * (block @ windows.T)
        )
        np.maximum(d, 0.0, out=d)
        out[lo : lo + len(block)] = d.reshape(len(block), n, per_series).min(axis=2)
    return out / length


def binary_shapelet_selection(
    train: LabeledDataset,
    total: int | None = None,
    min_length: int = 3,
    max_length: int | None = None,
) -> list[Shapelet]:
    """Exhaustive shapelet search with per-class quotas.

    Every subsequence of every training series is scored by one-vs-rest
    information gain for its source class.  Within a series, overlapping
    candidates are pruned best-first; the survivors fill a quota of
    total / class_count per class, best-first.  ``total`` defaults to
    min(10 * case_count, 1000).
    """
    X, y = train.series, train.labels
    n, m = X.shape
    if total is None:
        total = min(10 * n, 1000)
    if max_length is None:
        max_length = m - 1
    max_length = min(max_length, m)
    if min_length < 2 or min_length > max_length:
        raise ParameterError("no admissible shapelet lengths")
    per_series_kept: list[list] = [[] for _ in range(n)]
    for length in range(min_length, max_length + 1):
        z, per_series = _znormed_windows(X, length)
        dists = _min_distances(z, z, per_series, length)
        for row in range(len(z)):
            series_index = row // per_series
            start = row - series_index * per_series
            gain, threshold = assess_candidate(dists[row], y, int(y[series_index]))
            if threshold is None:
                continue
            per_series_kept[series_index].append((gain, length, start))
    chosen: list[Shapelet] = []
    by_class: dict[int, list] = {}
    for series_index in range(n):
        ranked = sorted(per_series_kept[series_index], key=lambda t: -t[0])
        kept = []
        for gain, length, start in ranked:
            overlaps = any(
                start < s + l and s < start + length for _, l, s in kept
            )
            if not overlaps:
                kept.append((gain, length, start))
        by_class.setdefault(int(y[series_index]), []).extend(
            (gain, series_index, length, start) for gain, length, start in kept
        )
    quota = max(1, total // train.class_count)
    for cls in sorted(by_class):
        ranked = sorted(by_class[cls], key=lambda t: -t[0])[:quota]
        for gain, series_index, length, start in ranked:
            values = X[series_index, start : start + length].copy()
            chosen.append(
                Shapelet(values, znormalize(values), series_index, start, gain, cls)
            )
    chosen.sort(key=lambda s: -s.quality)
    if not chosen:
        raise ParameterError("no shapelet candidate produced a valid split")
    return chosen


def shapelet_transform(shapelets, X) -> np.ndarray:
    """Distance of every series to every shapelet, as a feature matrix."""
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    out = np.empty((len(X), len(shapelets)))
    row = np.empty(len(X))
    for j, sh in enumerate(shapelets):
        _kernels.min_zdist_sq_row(sh.normalized, X, row)
        out[:, j] = row
    return out


class ShapeletTransformClassifier:
    """Weighted vote of standard learners over shapelet distance features."""

    def __init__(self, total: int | None = None, forest_trees: int = 500):
        self.total = total
        self.forest_trees = forest_trees

    def fit(self, train: LabeledDataset, seed: int = 0) -> "ShapeletTransformClassifier":
        self.class_count = train.class_count
        self.shapelets = binary_shapelet_selection(train, self.total)
        features = shapelet_transform(self.shapelets, train.series)
        self.members = cv_weighted_members(
            features, train.labels, self.class_count, seed, self.forest_trees
        )
        self._weights = np.array([w for _, w in self.members])
        if self._weights.sum() <= 0:
            self._weights = np.ones(len(self.members))
        self.train_accuracy = float(max(w for _, w in self.members))
        return self

    @property
    def params_string(self) -> str:
        return f"st(k={len(self.shapelets)})"

    def _distributions(self, X) -> np.ndarray:
        features = shapelet_transform(self.shapelets, X)
        total = np.zeros((len(features), self.class_count))
        for (model, _), weight in zip(self.members, self._weights):
            if weight > 0:
                total += weight * model.class_distribution_batch(features)
        return total / total.sum(axis=1, keepdims=True)

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self._distributions(X), axis=1).astype(np.int64)

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        return self._distributions(np.atleast_2d(series))[0]


class _FsNode:
    __slots__ = ("shapelet", "threshold", "left", "right", "counts")

    def __init__(self):
        self.shapelet = None
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.counts = None


class FastShapeletTree:
    """Decision tree whose nodes test the distance to one subsequence.

    Candidates at each node come from hashing symbolic words of each series
    under random letter masks: words that collide mostly with one class
    score highly, the top few are mapped back to their first occurrence,
    and the best by exact multi-class information gain becomes the node's
    test.
    """

    PROJECTIONS = 10
    TOP_WORDS = 10
    ALPHABET = 4
    MAX_WORD_LENGTH = 16
    MIN_SHAPELET = 5

    def fit(self, train: LabeledDataset, seed: int = 0) -> "FastShapeletTree":
        self.class_count = train.class_count
        self._rng = np.random.default_rng(seed)
        X = np.ascontiguousarray(train.series)
        self.root = self._build(X, train.labels)
        self.train_accuracy = float(np.mean(self.predict_batch(X) == train.labels))
        return self

    @property
    def params_string(self) -> str:
        return f"fs(r={self.PROJECTIONS},k={self.TOP_WORDS})"

    def _build(self, X, y) -> _FsNode:
        node = _FsNode()
        node.counts = np.bincount(y, minlength=self.class_count).astype(np.float64)
        if len(y) < 2 or np.count_nonzero(node.counts) <= 1:
            return node
        found = self._best_shapelet(X, y)
        if found is None:
            return node
        gain, threshold, values, distances = found
        mask = distances <= threshold
        if not mask.any() or mask.all():
            return node
        node.shapelet = (values, znormalize(values))
        node.threshold = threshold
        node.left = self._build(np.ascontiguousarray(X[mask]), y[mask])
        node.right = self._build(np.ascontiguousarray(X[~mask]), y[~mask])
        return node

    def _best_shapelet(self, X, y):
        m = X.shape[1]
        best = None
        class_sizes = np.bincount(y, minlength=self.class_count).astype(np.float64)
        for length in range(self.MIN_SHAPELET, m + 1):
            vocab = self._word_table(X, length)
            if not vocab:
                continue
            symbols = np.stack([rec[0] for rec in vocab.values()])
            word_series = [rec[1] for rec in vocab.values()]
            origins = [rec[2] for rec in vocab.values()]
            scores = self._collision_scores(symbols, word_series, y, class_sizes)
            order = np.argsort(-scores, kind="stable")[: self.TOP_WORDS]
            for w in order:
                series_index, start = origins[w]
                values = X[series_index, start : start + length].copy()
                distances = np.empty(len(X))
                _kernels.min_zdist_sq_row(znormalize(values), X, distances)
                gain, threshold = best_threshold_split(distances, y, self.class_count)
                if threshold is None:
                    continue
                if best is None or gain > best[0] + 1e-12:
                    best = (gain, threshold, values, distances)
        if best is None or best[0] <= 0:
            return None
        return best

    def _word_table(self, X, length):
        """Distinct words with their symbol arrays, series sets, and origins."""
        word_len = min(self.MAX_WORD_LENGTH, length)
        edges = sax_breakpoints(self.ALPHABET)
        vocab: dict[int, list] = {}
        for i, row in enumerate(X):
            wins = sliding_window_view(row, length)
            mu = wins.mean(axis=1, keepdims=True)
            sd = wins.std(axis=1, keepdims=True)
            z = (wins - mu) / np.where(sd > 0, sd, 1.0)
            if length % word_len == 0:
                reduced = z.reshape(len(wins), word_len, length // word_len).mean(axis=2)
            else:
                reduced = np.stack([paa(r, word_len) for r in z])
            symbols = np.searchsorted(edges, reduced, side="right")
            powers = self.ALPHABET ** np.arange(word_len - 1, -1, -1, dtype=np.int64)
            keys = symbols @ powers
            for start, key in enumerate(keys):
                key = int(key)
                rec = vocab.get(key)
                if rec is None:
                    vocab[key] = [symbols[start], {i}, (i, start)]
                else:
                    rec[1].add(i)
        return vocab

    def _collision_scores(self, symbols, word_series, y, class_sizes):
        """Distinguishing power of each word from random-mask collisions."""
        word_len = symbols.shape[1]
        n_words = len(symbols)
        counts = np.zeros((n_words, self.class_count))
        keep = max(1, word_len - word_len // 2)
        for _ in range(self.PROJECTIONS):
            kept = np.sort(self._rng.choice(word_len, size=keep, replace=False))
            powers = self.ALPHABET ** np.arange(keep - 1, -1, -1, dtype=np.int64)
            masked = symbols[:, kept] @ powers
            buckets: dict[int, list[int]] = {}
            for w, key in enumerate(masked):
                buckets.setdefault(int(key), []).append(w)
            for members in buckets.values():
                series_union: set[int] = set()
                for w in members:
                    series_union |= word_series[w]
                vec = np.bincount(y[sorted(series_union)], minlength=self.class_count)
                for w in members:
                    counts[w] += vec
        frac = counts / (self.PROJECTIONS * np.maximum(class_sizes, 1.0))[None, :]
        c = self.class_count
        if c < 2:
            return np.zeros(n_words)
        others = (frac.sum(axis=1, keepdims=True) - frac) / (c - 1)
        return np.abs(frac - others).sum(axis=1)

    def _leaf(self, series) -> _FsNode:
        node = self.root
        x = np.ascontiguousarray(series, dtype=np.float64)
        while node.shapelet is not None:
            d = float(_kernels.min_zdist_sq(node.shapelet[1], x))
            node = node.left if d <= node.threshold else node.right
        return node

    def predict(self, series) -> int:
        return int(np.argmax(self._leaf(series).counts))

    def predict_batch(self, X) -> np.ndarray:
        return np.array([self.predict(row) for row in np.atleast_2d(X)], dtype=np.int64)

    def class_distribution(self, series) -> np.ndarray:
        counts = self._leaf(series).counts
        return counts / counts.sum()

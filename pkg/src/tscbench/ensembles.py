"""Ensembles over heterogeneous constituents.

ElasticEnsemble combines the eleven 1-NN elastic-distance classifiers,
each voting its training leave-one-out accuracy.  CollectiveEnsemble
extends it with the standard learner trio on three further views of the
data: shapelet distances, autocorrelation coefficients, and power-spectrum
magnitudes, for twenty members in all.
"""

from __future__ import annotations

import numpy as np

from .data import LabeledDataset, acf_transform, ps_transform
from .errors import ParameterError
from .learners import cv_weighted_members
from .neighbors import OneNearestNeighbor
from .shapelets import binary_shapelet_selection, shapelet_transform

ELASTIC_KINDS = (
    "ed",
    "dtw",
    "dtwcv",
    "ddtw",
    "ddtwcv",
    "wdtw",
    "wddtw",
    "lcss",
    "erp",
    "twe",
    "msm",
)


class ElasticEnsemble:
    """Accuracy-weighted vote of the elastic-distance 1-NN family."""

    def __init__(self, kinds=ELASTIC_KINDS):
        self.kinds = tuple(kinds)
        if not self.kinds:
            raise ParameterError("ensemble needs at least one constituent")

    def fit(self, train: LabeledDataset, seed: int = 0) -> "ElasticEnsemble":
        self.class_count = train.class_count
        self.members = []
        loocv_votes = np.zeros((train.case_count, self.class_count))
        for kind in self.kinds:
            model = OneNearestNeighbor(kind).fit(train, seed)
            weight = model.train_accuracy
            self.members.append((model, weight))
            predicted = model.loocv_predictions()
            loocv_votes[np.arange(len(predicted)), predicted] += weight
        self.train_accuracy = float(
            np.mean(np.argmax(loocv_votes, axis=1) == train.labels)
        )
        return self

    @property
    def params_string(self) -> str:
        inner = ",".join(f"{m.kind}={w:.3f}" for m, w in self.members)
        return f"ee({inner})"

    def _distributions(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros((len(X), self.class_count))
        for model, weight in self.members:
            if weight > 0:
                total += weight * model.class_distribution_batch(X)
        sums = total.sum(axis=1, keepdims=True)
        sums[sums == 0] = 1.0
        return total / sums

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self._distributions(X), axis=1).astype(np.int64)

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        return self._distributions(np.atleast_2d(series))[0]


class _TransformBlock:
    """Standard learner trio bound to a fixed series-to-features map."""

    def __init__(self, transform, members):
        self.transform = transform
        self.members = members

    def distributions(self, X, class_count) -> np.ndarray:
        features = self.transform(X)
        total = np.zeros((len(features), class_count))
        for model, weight in self.members:
            if weight > 0:
                total += weight * model.class_distribution_batch(features)
        return total


class CollectiveEnsemble:
    """Twenty-member vote across elastic, shapelet, autocorrelation, and
    spectral views, every member weighted by its cross-validation accuracy."""

    MAX_ACF_LAG = 100

    def fit(self, train: LabeledDataset, seed: int = 0) -> "CollectiveEnsemble":
        self.class_count = train.class_count
        y = train.labels
        self._elastic = []
        for kind in ELASTIC_KINDS:
            model = OneNearestNeighbor(kind).fit(train, seed)
            self._elastic.append((model, model.train_accuracy))
        self.shapelets = binary_shapelet_selection(train)
        self._blocks = []
        shapelet_map = lambda X: shapelet_transform(self.shapelets, X)
        max_lag = min(train.series_length - 2, self.MAX_ACF_LAG)
        acf_map = lambda X: np.array(
            [acf_transform(row, max_lag) for row in np.atleast_2d(X)]
        )
        ps_map = lambda X: np.array([ps_transform(row) for row in np.atleast_2d(X)])
        for transform in (shapelet_map, acf_map, ps_map):
            features = transform(train.series)
            members = cv_weighted_members(features, y, self.class_count, seed)
            self._blocks.append(_TransformBlock(transform, members))
        self.train_accuracy = float(max(self._weights()))
        return self

    def _weights(self):
        weights = [w for _, w in self._elastic]
        for block in self._blocks:
            weights.extend(w for _, w in block.members)
        return weights

    @property
    def member_count(self) -> int:
        return len(self._weights())

    @property
    def params_string(self) -> str:
        return f"cote(members={self.member_count})"

    def _distributions(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros((len(X), self.class_count))
        for model, weight in self._elastic:
            if weight > 0:
                total += weight * model.class_distribution_batch(X)
        for block in self._blocks:
            total += block.distributions(X, self.class_count)
        sums = total.sum(axis=1, keepdims=True)
        sums[sums == 0] = 1.0
        return total / sums

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self._distributions(X), axis=1).astype(np.int64)

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        return self._distributions(np.atleast_2d(series))[0]

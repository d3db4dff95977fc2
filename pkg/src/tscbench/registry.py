"""Name-to-classifier registry used by the benchmark harness."""

from __future__ import annotations

import numpy as np

from .data import LabeledDataset
from .dictionary import BagOfPatterns, BossEnsemble, DtwFeatures, SaxVsm
from .ensembles import CollectiveEnsemble, ElasticEnsemble
from .errors import ParameterError
from .intervals import LearnedPatternSimilarity, TimeSeriesBagOfFeatures, TimeSeriesForest
from .learners import RandomForest, TabularDataset
from .neighbors import OneNearestNeighbor
from .shapelets import FastShapeletTree, ShapeletTransformClassifier


class RawValuesForest:
    """Random forest on the raw value vector, the sanity baseline."""

    def __init__(self, tree_count: int = 500):
        self.tree_count = tree_count

    def fit(self, train: LabeledDataset, seed: int = 0) -> "RawValuesForest":
        self.class_count = train.class_count
        self._forest = RandomForest(self.tree_count, seed=seed).fit(
            TabularDataset(train.series, train.labels, class_count=train.class_count)
        )
        self.train_accuracy = self._forest.train_accuracy
        return self

    @property
    def params_string(self) -> str:
        return f"randf(trees={self.tree_count})"

    def predict_batch(self, X) -> np.ndarray:
        return self._forest.predict_batch(np.atleast_2d(X))

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        return self._forest.class_distribution(np.asarray(series, dtype=np.float64))


def _nn(kind):
    return lambda: OneNearestNeighbor(kind)


CLASSIFIERS = {
    "ed": _nn("ed"),
    "dtw": _nn("dtw"),
    "dtwcv": _nn("dtwcv"),
    "wdtw": _nn("wdtw"),
    "lcss": _nn("lcss"),
    "erp": _nn("erp"),
    "twe": _nn("twe"),
    "msm": _nn("msm"),
    "cid": _nn("cid"),
    "dddtw": _nn("dddtw"),
    "dtdc": _nn("dtdc"),
    "bop": BagOfPatterns,
    "saxvsm": SaxVsm,
    "boss": BossEnsemble,
    "dtwf": DtwFeatures,
    "fs": FastShapeletTree,
    "st": ShapeletTransformClassifier,
    "tsf": TimeSeriesForest,
    "tsbf": TimeSeriesBagOfFeatures,
    "lps": LearnedPatternSimilarity,
    "ee": ElasticEnsemble,
    "cote-lite": CollectiveEnsemble,
    "randf": RawValuesForest,
}


def classifier_names() -> list[str]:
    return sorted(CLASSIFIERS)


def create(name: str):
    """Instantiate an unfitted classifier by registry name."""
    try:
        factory = CLASSIFIERS[name]
    except KeyError:
        known = ", ".join(classifier_names())
        raise ParameterError(f"unknown classifier {name!r}; known: {known}") from None
    return factory()

"""1-NN classification over elastic distances, with LOOCV parameter search.

Grid search works on precomputed pairwise matrices.  Measures that are
weighted mixes of cached component matrices (dd/dtdc/cid) share those
components across the whole grid instead of recomputing the DP per cell.
All tie-breaks (equidistant neighbours, equal-accuracy grid cells) resolve
to the lowest index.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .data import LabeledDataset, diff_transform, cosine_transform
from .distances import DistanceSpec, band_steps, cid_factor, wdtw_weights
from .errors import LengthMismatchError, ParameterError

# the printed grids for the two inclusive [0,1] sweeps hold 101 values,
# one over the nominal budget of 100
GRID_BUDGET = 101

SUBSAMPLE_CAP = 500


class ParameterGrid:
    """Ordered candidate DistanceSpecs sharing one kind."""

    def __init__(self, specs):
        specs = list(specs)
        if not specs:
            raise ParameterError("parameter grid must be non-empty")
        kinds = {s.kind for s in specs}
        if len(kinds) != 1:
            raise ParameterError(f"grid mixes distance kinds: {sorted(kinds)}")
        if len(specs) > GRID_BUDGET:
            raise ParameterError(
                f"grid holds {len(specs)} specs, budget is {GRID_BUDGET}"
            )
        self.specs = specs
        self.kind = specs[0].kind

    def __len__(self):
        return len(self.specs)

    def __iter__(self):
        return iter(self.specs)


def window_fractions() -> list[float]:
    """Warping-window search values 0, 0.01, ..., 0.99."""
    return [i / 100.0 for i in range(100)]


def dtw_grid() -> ParameterGrid:
    return ParameterGrid(DistanceSpec.make("dtw", r=r) for r in window_fractions())


def ddtw_grid() -> ParameterGrid:
    return ParameterGrid(DistanceSpec.make("ddtw", r=r) for r in window_fractions())


def wdtw_grid(kind: str = "wdtw") -> ParameterGrid:
    return ParameterGrid(DistanceSpec.make(kind, g=i / 100.0) for i in range(101))


def lcss_grid(train: LabeledDataset) -> ParameterGrid:
    sigma = float(train.series.std())
    eps_values = np.linspace(0.2 * sigma, sigma, 10)
    delta_values = np.linspace(0.0, 0.25, 10)
    return ParameterGrid(
        DistanceSpec.make("lcss", epsilon=float(e), delta=float(d))
        for e in eps_values
        for d in delta_values
    )


def erp_grid() -> ParameterGrid:
    return ParameterGrid(
        DistanceSpec.make("erp", g=0.0, band=float(b))
        for b in np.linspace(0.0, 0.25, 10)
    )


def twe_grid() -> ParameterGrid:
    nus = [1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0]
    lams = [0.0, 0.25, 0.5, 0.75, 1.0]
    return ParameterGrid(
        DistanceSpec.make("twe", nu=nu, lam=lam) for nu in nus for lam in lams
    )


def msm_grid() -> ParameterGrid:
    return ParameterGrid(
        DistanceSpec.make("msm", c=c) for c in (0.01, 0.1, 1.0, 10.0, 100.0)
    )


def cid_grid() -> ParameterGrid:
    return ParameterGrid(DistanceSpec.make("cid", r=r) for r in window_fractions())


def dddtw_grid() -> ParameterGrid:
    return ParameterGrid(
        DistanceSpec.make("dddtw", alpha=i / 100.0) for i in range(101)
    )


def dtdc_grid() -> ParameterGrid:
    specs = []
    for i in range(11):
        for j in range(11):
            if i + j <= 10:
                specs.append(DistanceSpec.make("dtdc", alpha=i / 10.0, beta=j / 10.0))
    return ParameterGrid(specs)


GRID_BUILDERS = {
    "ed": lambda train: ParameterGrid([DistanceSpec.make("ed")]),
    "dtw": lambda train: ParameterGrid([DistanceSpec.make("dtw", r=1.0)]),
    "dtwcv": lambda train: dtw_grid(),
    "ddtw": lambda train: ParameterGrid([DistanceSpec.make("ddtw", r=1.0)]),
    "ddtwcv": lambda train: ddtw_grid(),
    "wdtw": lambda train: wdtw_grid("wdtw"),
    "wddtw": lambda train: wdtw_grid("wddtw"),
    "lcss": lcss_grid,
    "erp": lambda train: erp_grid(),
    "twe": lambda train: twe_grid(),
    "msm": lambda train: msm_grid(),
    "cid": lambda train: cid_grid(),
    "dddtw": lambda train: dddtw_grid(),
    "dtdc": lambda train: dtdc_grid(),
}


def _rows(X) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(X, dtype=np.float64))


def _diff_rows(X: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(X[:, :-1] - X[:, 1:])


def _cosine_rows(X: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.vstack([cosine_transform(row) for row in X]))


def _squared_ed_cross(Q: np.ndarray, X: np.ndarray) -> np.ndarray:
    d = (
        (Q * Q).sum(axis=1)[:, None]
        + (X * X).sum(axis=1)[None, :]
        - 2.0 * (Q @ X.T)
    )
    np.maximum(d, 0.0, out=d)
    return d


def _complexities(X: np.ndarray) -> np.ndarray:
    d = X[:, :-1] - X[:, 1:]
    return (d * d).sum(axis=1)


def cid_factor_matrix(ca: np.ndarray, cb: np.ndarray) -> np.ndarray:
    out = np.empty((len(ca), len(cb)))
    for i, value in enumerate(ca):
        for j, other in enumerate(cb):
            out[i, j] = cid_factor(value, other)
    return out


def distance_matrix(X, spec: DistanceSpec, Y=None) -> np.ndarray:
    """Pairwise distances under ``spec``: X vs itself (symmetric) or X vs Y."""
    X = _rows(X)
    kind = spec.kind
    cross = Y is not None
    if cross:
        Y = _rows(Y)
        if Y.shape[1] != X.shape[1]:
            raise LengthMismatchError("matrix inputs disagree on series length")
    m = X.shape[1]

    if kind == "ed":
        return _squared_ed_cross(X, Y) if cross else _squared_ed_cross(X, X)
    if kind == "dtw":
        w = band_steps(spec.get("r"), m)
        return _kernels.dtw_cross(X, Y, w) if cross else _kernels.dtw_self(X, w)
    if kind == "ddtw":
        dX = _diff_rows(X)
        w = band_steps(spec.get("r"), m - 1)
        if cross:
            return _kernels.dtw_cross(dX, _diff_rows(Y), w)
        return _kernels.dtw_self(dX, w)
    if kind == "wdtw":
        weights = wdtw_weights(spec.get("g"), m)
        if cross:
            return _kernels.wdtw_cross(X, Y, weights)
        return _kernels.wdtw_self(X, weights)
    if kind == "wddtw":
        dX = _diff_rows(X)
        weights = wdtw_weights(spec.get("g"), m - 1)
        if cross:
            return _kernels.wdtw_cross(dX, _diff_rows(Y), weights)
        return _kernels.wdtw_self(dX, weights)
    if kind == "lcss":
        eps = spec.get("epsilon")
        w = band_steps(spec.get("delta"), m)
        if cross:
            return _kernels.lcss_cross(X, Y, eps, w)
        return _kernels.lcss_self(X, eps, w)
    if kind == "erp":
        g = spec.get("g")
        w = band_steps(spec.get("band"), m)
        if cross:
            return _kernels.erp_cross(X, Y, g, w)
        return _kernels.erp_self(X, g, w)
    if kind == "twe":
        nu, lam = spec.get("nu"), spec.get("lam")
        if cross:
            return _kernels.twe_cross(X, Y, nu, lam)
        return _kernels.twe_self(X, nu, lam)
    if kind == "msm":
        c = spec.get("c")
        return _kernels.msm_cross(X, Y, c) if cross else _kernels.msm_self(X, c)
    if kind == "cid":
        w = band_steps(spec.get("r"), m)
        if cross:
            base = _kernels.dtw_cross(X, Y, w)
            factors = cid_factor_matrix(_complexities(X), _complexities(Y))
        else:
            base = _kernels.dtw_self(X, w)
            factors = cid_factor_matrix(_complexities(X), _complexities(X))
            np.fill_diagonal(factors, 1.0)
        return base * factors
    if kind == "dddtw":
        alpha = spec.get("alpha")
        dX = _diff_rows(X)
        if cross:
            raw = _kernels.dtw_cross(X, Y, m)
            diffed = _kernels.dtw_cross(dX, _diff_rows(Y), m - 1)
        else:
            raw = _kernels.dtw_self(X, m)
            diffed = _kernels.dtw_self(dX, m - 1)
        return alpha * raw + (1.0 - alpha) * diffed
    if kind == "dtdc":
        alpha, beta = spec.get("alpha"), spec.get("beta")
        dX, cX = _diff_rows(X), _cosine_rows(X)
        if cross:
            raw = _kernels.dtw_cross(X, Y, m)
            diffed = _kernels.dtw_cross(dX, _diff_rows(Y), m - 1)
            cosined = _kernels.dtw_cross(cX, _cosine_rows(Y), m)
        else:
            raw = _kernels.dtw_self(X, m)
            diffed = _kernels.dtw_self(dX, m - 1)
            cosined = _kernels.dtw_self(cX, m)
        return alpha * raw + beta * diffed + (1.0 - alpha - beta) * cosined
    raise ParameterError(f"unknown distance kind {kind!r}")


def _loocv_from_matrix(D: np.ndarray, labels: np.ndarray) -> float:
    D = D.copy()
    np.fill_diagonal(D, np.inf)
    predicted = labels[np.argmin(D, axis=1)]
    return float(np.mean(predicted == labels))


def grid_loocv_accuracies(train: LabeledDataset, grid: ParameterGrid) -> np.ndarray:
    """LOOCV 1-NN accuracy for every grid cell, sharing component matrices."""
    X = _rows(train.series)
    y = train.labels
    m = X.shape[1]
    kind = grid.kind
    accs = np.empty(len(grid))

    if kind == "dddtw":
        raw = _kernels.dtw_self(X, m)
        diffed = _kernels.dtw_self(_diff_rows(X), m - 1)
        for i, spec in enumerate(grid):
            a = spec.get("alpha")
            accs[i] = _loocv_from_matrix(a * raw + (1.0 - a) * diffed, y)
        return accs
    if kind == "dtdc":
        raw = _kernels.dtw_self(X, m)
        diffed = _kernels.dtw_self(_diff_rows(X), m - 1)
        cosined = _kernels.dtw_self(_cosine_rows(X), m)
        for i, spec in enumerate(grid):
            a, b = spec.get("alpha"), spec.get("beta")
            accs[i] = _loocv_from_matrix(
                a * raw + b * diffed + (1.0 - a - b) * cosined, y
            )
        return accs
    if kind == "cid":
        comp = _complexities(X)
        factors = cid_factor_matrix(comp, comp)
        np.fill_diagonal(factors, 1.0)
        for i, spec in enumerate(grid):
            base = _kernels.dtw_self(X, band_steps(spec.get("r"), m))
            accs[i] = _loocv_from_matrix(base * factors, y)
        return accs

    for i, spec in enumerate(grid):
        accs[i] = _loocv_from_matrix(distance_matrix(X, spec), y)
    return accs


def stratified_subsample(
    labels: np.ndarray, cap: int, seed: int
) -> np.ndarray | None:
    """Indices of a stratified subsample of at most ``cap`` cases, or None if not needed."""
    n = len(labels)
    if n <= cap:
        return None
    rng = np.random.default_rng(seed)
    classes = np.unique(labels)
    targets = {}
    floors = 0
    fractional = []
    for cls in classes:
        share = cap * np.sum(labels == cls) / n
        targets[cls] = max(1, int(np.floor(share)))
        floors += targets[cls]
        fractional.append((share - np.floor(share), cls))
    leftover = cap - floors
    # hand remaining slots to the largest fractional shares, lowest class first on ties
    for _, cls in sorted(fractional, key=lambda t: (-t[0], t[1])):
        if leftover <= 0:
            break
        targets[cls] += 1
        leftover -= 1
    chosen = []
    for cls in classes:
        idx = np.flatnonzero(labels == cls)
        rng.shuffle(idx)
        chosen.extend(idx[: targets[cls]])
    return np.sort(np.array(chosen, dtype=np.int64))


def loocv_select(
    train: LabeledDataset,
    grid: ParameterGrid,
    cap: int = SUBSAMPLE_CAP,
    seed: int = 0,
) -> tuple[DistanceSpec, float]:
    """Best grid cell by leave-one-out 1-NN accuracy; ties to the earliest cell."""
    if train.case_count < 2:
        raise ParameterError("loocv needs at least two training cases")
    idx = stratified_subsample(train.labels, cap, seed)
    searched = train if idx is None else train.subset(idx)
    accs = grid_loocv_accuracies(searched, grid)
    best = int(np.argmax(accs))
    return grid.specs[best], float(accs[best])


def loocv_accuracy(train: LabeledDataset, spec: DistanceSpec) -> float:
    """LOOCV 1-NN accuracy of one spec on the full training set."""
    return float(grid_loocv_accuracies(train, ParameterGrid([spec]))[0])


def one_nn_predict(train: LabeledDataset, spec: DistanceSpec, query) -> int:
    """Label of the nearest training case; ties go to the lowest case index."""
    q = _rows(np.atleast_2d(np.asarray(query, dtype=np.float64)))
    if q.shape[1] != train.series_length:
        raise LengthMismatchError(
            f"query length {q.shape[1]} != training length {train.series_length}"
        )
    d = distance_matrix(q, spec, Y=train.series)
    return int(train.labels[int(np.argmin(d[0]))])


class OneNearestNeighbor:
    """1-NN classifier with LOOCV-selected distance parameters.

    ``kind`` picks the grid from GRID_BUILDERS ("dtwcv" searches the window,
    "dtw" is fixed full-window, and so on).
    """

    def __init__(self, kind: str, cap: int = SUBSAMPLE_CAP):
        if kind not in GRID_BUILDERS:
            raise ParameterError(f"unknown 1-NN classifier kind {kind!r}")
        self.kind = kind
        self.cap = cap
        self.spec = None
        self.train_accuracy = None
        self._train = None

    def fit(self, train: LabeledDataset, seed: int = 0) -> "OneNearestNeighbor":
        grid = GRID_BUILDERS[self.kind](train)
        self.spec, self.train_accuracy = loocv_select(train, grid, self.cap, seed)
        self._train = train
        return self

    @property
    def class_count(self) -> int:
        return self._train.class_count

    @property
    def params_string(self) -> str:
        return str(self.spec)

    def predict_batch(self, X) -> np.ndarray:
        d = distance_matrix(_rows(X), self.spec, Y=self._train.series)
        return self._train.labels[np.argmin(d, axis=1)].astype(np.int64)

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(np.asarray(series, float)))[0])

    def class_distribution_batch(self, X) -> np.ndarray:
        predicted = self.predict_batch(np.atleast_2d(np.asarray(X, float)))
        out = np.zeros((len(predicted), self._train.class_count))
        out[np.arange(len(predicted)), predicted] = 1.0
        return out

    def class_distribution(self, series) -> np.ndarray:
        return self.class_distribution_batch(np.atleast_2d(np.asarray(series, float)))[0]

    def loocv_predictions(self) -> np.ndarray:
        """Leave-one-out predicted class per training case at the fitted spec."""
        d = distance_matrix(self._train.series, self.spec)
        np.fill_diagonal(d, np.inf)
        return self._train.labels[np.argmin(d, axis=1)].astype(np.int64)

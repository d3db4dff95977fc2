"""Dictionary classifiers: histograms of symbolic words over sliding windows.

Four classifiers share the window-to-word machinery:

* BagOfPatterns: per-series word histograms compared by 1-NN.
* SaxVsm: class-level tf-idf word vectors compared by cosine similarity.
* BossEnsemble: words from quantized truncated Fourier coefficients, an
  asymmetric histogram distance, and retention of all configurations close
  to the best.
* DtwFeatures: pairwise elastic distances plus a word histogram fed to a
  polynomial-kernel SVM.

Value-based words (BagOfPatterns, SaxVsm) z-normalize each window, shrink
it by piecewise aggregate approximation, and bin against Gaussian
breakpoints.  Fourier words (BossEnsemble) keep windows raw and learn
equal-frequency bins per coefficient from the training windows.
"""

from __future__ import annotations

import warnings

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.sparse import csr_matrix
from scipy.stats import norm

from .data import LabeledDataset, znormalize
from .errors import ParameterError
from .learners import TabularDataset, kfold_accuracy, svm_poly
from .neighbors import (
    SUBSAMPLE_CAP,
    distance_matrix,
    dtw_grid,
    loocv_select,
    stratified_subsample,
)
from .distances import DistanceSpec

_LETTERS = "abcdefgh"


def paa(series, segments: int) -> np.ndarray:
    """Piecewise aggregate approximation with fractional segment boundaries.

    Every point contributes to each segment in proportion to its overlap,
    so the segment means are exact for any series length.
    """
    x = np.asarray(series, dtype=np.float64)
    m = len(x)
    if segments < 1 or segments > m:
        raise ParameterError(f"cannot reduce {m} points to {segments} segments")
    if m % segments == 0:
        return x.reshape(segments, m // segments).mean(axis=1)
    out = np.zeros(segments)
    width = m / segments
    for s in range(segments):
        lo = s * width
        hi = lo + width
        first, last = int(np.floor(lo)), int(np.ceil(hi))
        for p in range(first, min(last, m)):
            overlap = min(hi, p + 1) - max(lo, p)
            if overlap > 0:
                out[s] += overlap * x[p]
    return out / width


def sax_breakpoints(alphabet_size: int) -> np.ndarray:
    """Gaussian equal-probability breakpoints, one fewer than the alphabet."""
    if alphabet_size < 2:
        raise ParameterError("alphabet must have at least two symbols")
    return norm.ppf(np.arange(1, alphabet_size) / alphabet_size)


def sax_word(window, word_length: int, alphabet_size: int) -> np.ndarray:
    """Symbols for one window: z-normalize, shrink, bin against breakpoints.

    A constant window z-normalizes to zeros, which all land in the same
    symbol just above the middle breakpoint.
    """
    z = znormalize(np.asarray(window, dtype=np.float64))
    reduced = paa(z, word_length)
    return np.searchsorted(sax_breakpoints(alphabet_size), reduced, side="right")


def word_key(symbols: np.ndarray, alphabet_size: int) -> int:
    """Pack a symbol array into a single base-alphabet integer."""
    key = 0
    for s in symbols:
        key = key * alphabet_size + int(s)
    return key


def word_text(key: int, word_length: int, alphabet_size: int) -> str:
    out = []
    for _ in range(word_length):
        out.append(_LETTERS[key % alphabet_size])
        key //= alphabet_size
    return "".join(reversed(out))


def numerosity_reduce(keys: np.ndarray) -> np.ndarray:
    """Drop runs of consecutive identical words, keeping the first of each."""
    keys = np.asarray(keys)
    if len(keys) == 0:
        return keys
    keep = np.empty(len(keys), dtype=bool)
    keep[0] = True
    keep[1:] = keys[1:] != keys[:-1]
    return keys[keep]


def mcb_breakpoints(values, alphabet_size: int) -> np.ndarray:
    """Equal-frequency bin edges learned from observed coefficient values.

    Edge j sits at the midpoint of the two sorted values around rank
    j*N/alphabet, so roughly equal counts fall in each bin.
    """
    v = np.sort(np.asarray(values, dtype=np.float64))
    n = len(v)
    if n == 0:
        raise ParameterError("cannot learn breakpoints from no values")
    edges = np.empty(alphabet_size - 1)
    for j in range(1, alphabet_size):
        k = min(max(int(round(j * n / alphabet_size)), 1), n - 1)
        edges[j - 1] = 0.5 * (v[k - 1] + v[k])
    return edges


def boss_distance(h1: dict, h2: dict) -> float:
    """Sum of squared count differences over the first histogram's support.

    Asymmetric by design: words present only in ``h2`` contribute nothing.
    """
    return float(sum((c - h2.get(w, 0)) ** 2 for w, c in h1.items()))


def _value_word_keys(series: np.ndarray, window: int, word_length: int, alphabet_size: int) -> np.ndarray:
    """Word key sequence for one series via z-normed value quantization."""
    windows = sliding_window_view(series, window)
    mu = windows.mean(axis=1, keepdims=True)
    sd = windows.std(axis=1, keepdims=True)
    sd = np.where(sd > 0, sd, 1.0)
    z = (windows - mu) / sd
    # vectorized PAA when the window divides evenly, per-row otherwise
    if window % word_length == 0:
        reduced = z.reshape(len(windows), word_length, window // word_length).mean(axis=2)
    else:
        reduced = np.stack([paa(row, word_length) for row in z])
    symbols = np.searchsorted(sax_breakpoints(alphabet_size), reduced, side="right")
    powers = alphabet_size ** np.arange(word_length - 1, -1, -1, dtype=np.int64)
    return numerosity_reduce(symbols @ powers)


def _sparse_histograms(key_lists, vocabulary=None):
    """Rows of word counts over a shared vocabulary as a CSR matrix."""
    if vocabulary is None:
        vocabulary = np.unique(np.concatenate([k for k in key_lists if len(k)] or [np.array([], dtype=np.int64)]))
    indptr = [0]
    indices = []
    values = []
    for keys in key_lists:
        if len(keys) and len(vocabulary):
            uniq, counts = np.unique(keys, return_counts=True)
            pos = np.searchsorted(vocabulary, uniq)
            known = (pos < len(vocabulary)) & (vocabulary[np.minimum(pos, len(vocabulary) - 1)] == uniq)
            indices.extend(pos[known])
            values.extend(counts[known].astype(np.float64))
        indptr.append(len(indices))
    mat = csr_matrix(
        (np.array(values), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(key_lists), len(vocabulary)),
    )
    return mat, vocabulary


def _squared_distances(Q: csr_matrix, H: csr_matrix) -> np.ndarray:
    """Dense pairwise squared euclidean distances between sparse rows."""
    qs = np.asarray(Q.multiply(Q).sum(axis=1)).ravel()
    hs = np.asarray(H.multiply(H).sum(axis=1)).ravel()
    g = (Q @ H.T).toarray()
    d = qs[:, None] + hs[None, :] - 2.0 * g
    np.maximum(d, 0.0, out=d)
    return d


def _asymmetric_distances(Q: csr_matrix, H: csr_matrix) -> np.ndarray:
    """Pairwise sums of squared differences over each query row's support."""
    qs = np.asarray(Q.multiply(Q).sum(axis=1)).ravel()
    g = (Q @ H.T).toarray()
    mask = Q.copy()
    mask.data = np.ones_like(mask.data)
    masked_h = (mask @ H.multiply(H).T).toarray()
    d = qs[:, None] - 2.0 * g + masked_h
    np.maximum(d, 0.0, out=d)
    return d


def _nn_from_matrix(d: np.ndarray, labels: np.ndarray) -> np.ndarray:
    return labels[np.argmin(d, axis=1)]


def _loocv_accuracy_from(d: np.ndarray, labels: np.ndarray) -> float:
    d = d.copy()
    np.fill_diagonal(d, np.inf)
    return float(np.mean(_nn_from_matrix(d, labels) == labels))


def value_word_grid(series_length: int, word_lengths=None):
    """(alphabet, window, word_length) cells for value-quantized words.

    Windows span 10% to 36% of the series at six sizes; word lengths
    default to powers of two no longer than half the window.
    """
    windows = []
    for f in np.linspace(0.10, 0.36, 6):
        w = max(4, int(round(f * series_length)))
        w = min(w, series_length)
        if w not in windows:
            windows.append(w)
    cells = []
    for alpha in (2, 4, 6, 8):
        for w in windows:
            if word_lengths is None:
                lengths, l = [], 2
                while l <= w // 2:
                    lengths.append(l)
                    l *= 2
            else:
                lengths = [l for l in word_lengths if l <= w]
            for l in lengths:
                cells.append((alpha, w, l))
    if not cells:
        raise ParameterError("series too short for any word configuration")
    return cells


class BagOfPatterns:
    """1-NN over per-series word-count histograms.

    The (alphabet, window, word length) cell is chosen by leave-one-out
    accuracy on the training set; ties keep the earliest cell.
    """

    def __init__(self, cap: int = SUBSAMPLE_CAP):
        self.cap = cap

    def fit(self, train: LabeledDataset, seed: int = 0) -> "BagOfPatterns":
        X = train.series
        pick = stratified_subsample(train.labels, self.cap, seed)
        sel_X = X if pick is None else X[pick]
        sel_y = train.labels if pick is None else train.labels[pick]
        best = (-1.0, None)
        for cell in value_word_grid(train.series_length):
            alpha, w, l = cell
            keys = [_value_word_keys(row, w, l, alpha) for row in sel_X]
            H, vocab = _sparse_histograms(keys)
            acc = _loocv_accuracy_from(_squared_distances(H, H), sel_y)
            if acc > best[0] + 1e-12:
                best = (acc, cell)
        self.train_accuracy, self.cell = best
        alpha, w, l = self.cell
        keys = [_value_word_keys(row, w, l, alpha) for row in X]
        self._H, self._vocab = _sparse_histograms(keys)
        self._labels = train.labels
        self.class_count = train.class_count
        return self

    @property
    def params_string(self) -> str:
        a, w, l = self.cell
        return f"bop(a={a},w={w},l={l})"

    def _histogram_rows(self, X) -> csr_matrix:
        a, w, l = self.cell
        keys = [_value_word_keys(row, w, l, a) for row in np.atleast_2d(X)]
        H, _ = _sparse_histograms(keys, self._vocab)
        return H

    def predict_batch(self, X) -> np.ndarray:
        d = _squared_distances(self._histogram_rows(X), self._H)
        return _nn_from_matrix(d, self._labels)

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        out = np.zeros(self.class_count)
        out[self.predict(series)] = 1.0
        return out


class SaxVsm:
    """Class-level tf-idf vectors over words, compared by cosine similarity.

    All training series of a class pool their words into one bag; a query's
    raw word counts score against each class vector.  A query sharing no
    vocabulary with the training corpus falls back to class 0 with a warning.
    """

    WORD_LENGTHS = (2, 4, 6, 8)

    def __init__(self, cap: int = SUBSAMPLE_CAP):
        self.cap = cap

    def fit(self, train: LabeledDataset, seed: int = 0) -> "SaxVsm":
        X, y = train.series, train.labels
        self.class_count = train.class_count
        pick = stratified_subsample(y, self.cap, seed)
        sel_X = X if pick is None else X[pick]
        sel_y = y if pick is None else y[pick]
        best = (-1.0, None)
        for cell in value_word_grid(train.series_length, self.WORD_LENGTHS):
            acc = self._cell_loocv(sel_X, sel_y, cell)
            if acc > best[0] + 1e-12:
                best = (acc, cell)
        self.train_accuracy, self.cell = best
        a, w, l = self.cell
        keys = [_value_word_keys(row, w, l, a) for row in X]
        H, vocab = _sparse_histograms(keys)
        self._vocab = vocab
        self._weights = self._tfidf(self._class_counts(H, y))
        return self

    def _class_counts(self, H: csr_matrix, y: np.ndarray) -> np.ndarray:
        counts = np.zeros((self.class_count, H.shape[1]))
        for cls in range(self.class_count):
            rows = np.flatnonzero(y == cls)
            if len(rows):
                counts[cls] = np.asarray(H[rows].sum(axis=0)).ravel()
        return counts

    def _tfidf(self, counts: np.ndarray) -> np.ndarray:
        df = (counts > 0).sum(axis=0)
        with np.errstate(divide="ignore"):
            idf = np.where(df > 0, np.log(self.class_count / np.maximum(df, 1)), 0.0)
        return np.log1p(counts) * idf[None, :]

    def _cell_loocv(self, X, y, cell) -> float:
        a, w, l = cell
        keys = [_value_word_keys(row, w, l, a) for row in X]
        H, vocab = _sparse_histograms(keys)
        counts = self._class_counts(H, y)
        df = (counts > 0).sum(axis=0)
        w_global = self._tfidf(counts)
        base_sq = (w_global**2).sum(axis=1)
        correct = 0
        for i in range(len(y)):
            row = H.getrow(i)
            support = row.indices
            q = row.data
            ci = y[i]
            held = counts[:, support].copy()
            held[ci] -= q
            df_local = df[support] - ((counts[ci, support] > 0) & (held[ci] <= 0))
            with np.errstate(divide="ignore"):
                idf_local = np.where(df_local > 0, np.log(self.class_count / np.maximum(df_local, 1)), 0.0)
            w_local = np.log1p(np.maximum(held, 0.0)) * idf_local[None, :]
            # full-vector norms: global weights with the support block swapped out
            norm_sq = base_sq - (w_global[:, support] ** 2).sum(axis=1) + (w_local**2).sum(axis=1)
            numer = w_local @ q
            denom = np.sqrt(np.maximum(norm_sq, 0.0)) * np.linalg.norm(q)
            with np.errstate(invalid="ignore", divide="ignore"):
                sims = np.where(denom > 0, numer / denom, 0.0)
            predicted = 0 if not (sims > 0).any() else int(np.argmax(sims))
            if predicted == ci:
                correct += 1
        return correct / len(y)

    @property
    def params_string(self) -> str:
        a, w, l = self.cell
        return f"saxvsm(a={a},w={w},l={l})"

    def _similarities(self, series) -> np.ndarray:
        a, w, l = self.cell
        keys = _value_word_keys(np.asarray(series, dtype=np.float64), w, l, a)
        H, _ = _sparse_histograms([keys], self._vocab)
        q = H.toarray().ravel()
        qn = np.linalg.norm(q)
        if qn == 0:
            return np.zeros(self.class_count)
        wn = np.linalg.norm(self._weights, axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(wn > 0, (self._weights @ q) / (wn * qn), 0.0)

    def predict(self, series) -> int:
        sims = self._similarities(series)
        if not (sims > 0).any():
            warnings.warn("query shares no vocabulary with the training corpus")
            return 0
        return int(np.argmax(sims))

    def predict_batch(self, X) -> np.ndarray:
        return np.array([self.predict(row) for row in np.atleast_2d(X)], dtype=np.int64)

    def class_distribution(self, series) -> np.ndarray:
        sims = self._similarities(series)
        total = sims.sum()
        if total <= 0:
            out = np.zeros(self.class_count)
            out[0] = 1.0
            return out
        return sims / total


def _fourier_reals(X: np.ndarray, window: int, max_half: int) -> list[np.ndarray]:
    """Per-series real/imaginary Fourier parts of every sliding window.

    Returns one (windows, 2*max_half + 2) array per series holding
    coefficients 0..max_half interleaved as re, im.
    """
    t = np.arange(window)
    k = np.arange(max_half + 1)
    basis = np.exp(-2j * np.pi * np.outer(t, k) / window)
    out = []
    for row in X:
        wins = sliding_window_view(row, window)
        coeffs = wins @ basis
        reals = np.empty((len(wins), 2 * (max_half + 1)))
        reals[:, 0::2] = coeffs.real
        reals[:, 1::2] = coeffs.imag
        out.append(reals)
    return out


def _fourier_word_keys(reals_list, word_length, drop_first, edges):
    """Quantize Fourier reals into word keys using per-column bin edges."""
    start = 2 if drop_first else 0
    alpha = edges.shape[1] + 1
    powers = alpha ** np.arange(word_length - 1, -1, -1, dtype=np.int64)
    keys = []
    for reals in reals_list:
        block = reals[:, start : start + word_length]
        symbols = np.empty(block.shape, dtype=np.int64)
        for col in range(word_length):
            symbols[:, col] = np.searchsorted(edges[col], block[:, col], side="left")
        keys.append(numerosity_reduce(symbols @ powers))
    return keys


def boss_window_sizes(series_length: int) -> list[int]:
    """Window lengths between 10 and the series length, square-root many."""
    count = max(1, min(200, int(np.sqrt(series_length))))
    lo = min(10, series_length)
    sizes = np.unique(np.round(np.linspace(lo, series_length, count)).astype(int))
    return [int(s) for s in sizes if s >= 2]


class BossEnsemble:
    """Votes over all Fourier-word configurations near the best accuracy.

    Every (window, word length, drop-first-coefficient) cell trains per-series
    histograms; cells whose leave-one-out accuracy reaches ``retention``
    times the best are kept and vote with equal weight.
    """

    WORD_LENGTHS = (8, 10, 12, 14, 16)
    ALPHABET = 4

    def __init__(self, retention: float = 0.92, cap: int = SUBSAMPLE_CAP):
        self.retention = retention
        self.cap = cap

    def fit(self, train: LabeledDataset, seed: int = 0) -> "BossEnsemble":
        X, y = train.series, train.labels
        self.class_count = train.class_count
        self._labels = y
        pick = stratified_subsample(y, self.cap, seed)
        sel = np.arange(len(y)) if pick is None else pick
        evaluated = []
        for w in boss_window_sizes(train.series_length):
            lengths = [l for l in self.WORD_LENGTHS if l <= w]
            if not lengths:
                continue
            max_half = (2 + max(lengths)) // 2
            reals = _fourier_reals(X, w, max_half)
            stacked = np.vstack(reals)
            for drop_first in (True, False):
                start = 2 if drop_first else 0
                for l in lengths:
                    if start + l > 2 * (max_half + 1):
                        continue
                    edges = np.stack(
                        [mcb_breakpoints(stacked[:, start + col], self.ALPHABET) for col in range(l)]
                    )
                    keys = _fourier_word_keys([reals[i] for i in sel], l, drop_first, edges)
                    H, _ = _sparse_histograms(keys)
                    acc = _loocv_accuracy_from(_asymmetric_distances(H, H), y[sel])
                    evaluated.append((acc, w, l, drop_first, edges))
        if not evaluated:
            raise ParameterError("series too short for any window size")
        best = max(acc for acc, *_ in evaluated)
        retained = [rec for rec in evaluated if rec[0] >= self.retention * best - 1e-12]
        self.members = []
        for w in sorted({rec[1] for rec in retained}):
            group = [rec for rec in retained if rec[1] == w]
            max_half = (2 + max(rec[2] for rec in group)) // 2
            reals = _fourier_reals(X, w, max_half)
            for acc, _, l, drop_first, edges in group:
                keys = _fourier_word_keys(reals, l, drop_first, edges)
                H, vocab = _sparse_histograms(keys)
                self.members.append(
                    {"acc": acc, "window": w, "length": l, "drop_first": drop_first,
                     "edges": edges, "H": H, "vocab": vocab}
                )
        self.train_accuracy = best
        return self

    @property
    def params_string(self) -> str:
        return f"boss(members={len(self.members)})"

    def _votes(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        votes = np.zeros((len(X), self.class_count))
        by_window: dict[int, list[np.ndarray]] = {}
        for w in {member["window"] for member in self.members}:
            max_half = (2 + max(m["length"] for m in self.members if m["window"] == w)) // 2
            by_window[w] = _fourier_reals(X, w, max_half)
        for member in self.members:
            reals = by_window[member["window"]]
            keys = _fourier_word_keys(reals, member["length"], member["drop_first"], member["edges"])
            Q, _ = _sparse_histograms(keys, member["vocab"])
            d = _asymmetric_distances(Q, member["H"])
            predicted = _nn_from_matrix(d, self._labels)
            votes[np.arange(len(X)), predicted] += 1.0
        return votes

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self._votes(X), axis=1).astype(np.int64)

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        votes = self._votes(np.atleast_2d(series))[0]
        return votes / votes.sum()


class DtwFeatures:
    """Polynomial-kernel SVM over elastic distances and word histograms.

    Per case, the features are its full-window elastic distances to every
    training case, its tuned-window distances, and a dense word histogram.
    The kernel degree is picked by 10-fold cross-validation.
    """

    DEGREES = (1, 2, 3)
    KEY_BUDGET = 4096

    def __init__(self, cap: int = SUBSAMPLE_CAP):
        self.cap = cap

    def fit(self, train: LabeledDataset, seed: int = 0) -> "DtwFeatures":
        X, y = train.series, train.labels
        self.class_count = train.class_count
        self._train_series = X
        self._window_spec, _ = loocv_select(train, dtw_grid(), cap=self.cap, seed=seed)
        self._full_spec = DistanceSpec.make("dtw", r=1.0)
        best = (-1.0, None)
        for cell in value_word_grid(train.series_length):
            alpha, w, l = cell
            if alpha**l > self.KEY_BUDGET:
                continue
            keys = [_value_word_keys(row, w, l, alpha) for row in X]
            H, _ = _sparse_histograms(keys)
            acc = _loocv_accuracy_from(_squared_distances(H, H), y)
            if acc > best[0] + 1e-12:
                best = (acc, cell)
        if best[1] is None:
            raise ParameterError("no word configuration fits the key budget")
        self.cell = best[1]
        full = distance_matrix(X, self._full_spec)
        windowed = distance_matrix(X, self._window_spec)
        histograms = self._dense_histograms(X)
        features = np.hstack([full, windowed, histograms])
        best_degree = (-1.0, None)
        for degree in self.DEGREES:
            acc = kfold_accuracy(
                lambda Xt, yt: svm_poly(TabularDataset(Xt, yt, class_count=self.class_count), degree),
                features, y, self.class_count, folds=10, seed=seed,
            )
            if acc > best_degree[0] + 1e-12:
                best_degree = (acc, degree)
        self.train_accuracy, self.degree = best_degree
        self._svm = svm_poly(TabularDataset(features, y, class_count=self.class_count), self.degree)
        return self

    def _dense_histograms(self, X) -> np.ndarray:
        alpha, w, l = self.cell
        size = alpha**l
        out = np.zeros((len(X), size))
        for i, row in enumerate(np.atleast_2d(X)):
            keys = _value_word_keys(row, w, l, alpha)
            if len(keys):
                out[i] = np.bincount(keys, minlength=size)
        return out

    @property
    def params_string(self) -> str:
        a, w, l = self.cell
        r = dict(self._window_spec.params)["r"]
        return f"dtwf(r={r:.2f},s={self.degree},a={a},w={w},l={l})"

    def _feature_rows(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        full = distance_matrix(X, self._full_spec, self._train_series)
        windowed = distance_matrix(X, self._window_spec, self._train_series)
        return np.hstack([full, windowed, self._dense_histograms(X)])

    def predict_batch(self, X) -> np.ndarray:
        return self._svm.predict_batch(self._feature_rows(X))

    def predict(self, series) -> int:
        return int(self.predict_batch(np.atleast_2d(series))[0])

    def class_distribution(self, series) -> np.ndarray:
        return self._svm.class_distribution_batch(self._feature_rows(np.atleast_2d(series)))[0]

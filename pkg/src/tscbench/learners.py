"""Component learners for the transform-based classifiers.

Random trees and forests (with out-of-bag estimates), a depth-capped random
regression tree, Gaussian naive Bayes, a polynomial-kernel SVM trained by
sequential pair optimization, a small-k nearest-neighbour learner for
tabular data, and the weighted-vote ensemble shell.

Everything is deterministic for a fixed seed: per-tree generators are
seeded seed + tree_index, attribute draws happen in a fixed recursion
order, and every tie (split gain, vote, neighbour) breaks to the lowest
index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ParameterError


@dataclass
class TabularDataset:
    """Rectangular feature matrix with class labels or real targets."""

    features: np.ndarray
    labels: np.ndarray | None = None
    targets: np.ndarray | None = None
    class_count: int = 0

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        if self.features.ndim != 2 or self.features.shape[1] < 1:
            raise ParameterError("features must be 2-d with at least one column")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if len(self.labels) != len(self.features):
                raise ParameterError("labels and features disagree on row count")
            if self.class_count == 0:
                self.class_count = int(self.labels.max()) + 1 if len(self.labels) else 0
        if self.targets is not None:
            self.targets = np.asarray(self.targets, dtype=np.float64)
            if len(self.targets) != len(self.features):
                raise ParameterError("targets and features disagree on row count")

    @property
    def row_count(self) -> int:
        return self.features.shape[0]

    @property
    def feature_count(self) -> int:
        return self.features.shape[1]


def entropy_bits(counts: np.ndarray) -> np.ndarray:
    """Shannon entropy in bits per row of class counts."""
    counts = np.asarray(counts, dtype=np.float64)
    single = counts.ndim == 1
    if single:
        counts = counts[None, :]
    totals = counts.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(totals > 0, counts / np.maximum(totals, 1e-300), 0.0)
        logs = np.where(p > 0, np.log2(np.maximum(p, 1e-300)), 0.0)
    h = -(p * logs).sum(axis=1)
    return h[0] if single else h


def best_threshold_split(values, labels, class_count: int):
    """Maximum-information-gain binary split of one real attribute.

    Returns (gain_bits, threshold); threshold is the midpoint between the
    adjacent distinct values around the best cut, None when no cut exists.
    Ties between cuts resolve to the lowest threshold.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    gain, threshold, found = _kernels.split_gain_scan(values, labels, class_count)
    return (gain, threshold) if found else (0.0, None)


class _TreeNode:
    __slots__ = ("attribute", "threshold", "left", "right", "counts", "leaf_id")

    def __init__(self):
        self.attribute = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.counts = None
        self.leaf_id = -1


class RandomTree:
    """Classification tree over random attribute subsets, unlimited depth.

    Each node draws ``attributes_per_node`` attributes without replacement,
    evaluates every split point by information gain, and keeps the best.
    """

    def __init__(self, attributes_per_node: int, max_depth: int | None = None, seed: int = 0):
        self.attributes_per_node = attributes_per_node
        self.max_depth = max_depth
        self.seed = seed
        self.root = None
        self.class_count = 0

    def fit(self, data: TabularDataset, rng: np.random.Generator | None = None) -> "RandomTree":
        if data.row_count < 1:
            raise ParameterError("cannot build a tree on empty data")
        self.class_count = data.class_count
        if rng is None:
            rng = np.random.default_rng(self.seed)
        self.root = self._build(data.features, data.labels, rng, 0)
        return self

    def _build(self, X, y, rng, depth) -> _TreeNode:
        node = _TreeNode()
        counts = np.bincount(y, minlength=self.class_count).astype(np.float64)
        node.counts = counts
        if (
            len(y) < 2
            or np.count_nonzero(counts) <= 1
            or (self.max_depth is not None and depth >= self.max_depth)
        ):
            return node
        f = X.shape[1]
        k = min(self.attributes_per_node, f)
        attrs = rng.choice(f, size=k, replace=False)
        best_gain, best_attr, best_threshold = 0.0, -1, None
        for attr in attrs:
            gain, threshold = best_threshold_split(X[:, attr], y, self.class_count)
            if threshold is not None and gain > best_gain + 1e-12:
                best_gain, best_attr, best_threshold = gain, int(attr), threshold
        if best_attr < 0:
            return node
        mask = X[:, best_attr] <= best_threshold
        if not mask.any() or mask.all():
            return node
        node.attribute = best_attr
        node.threshold = best_threshold
        node.left = self._build(X[mask], y[mask], rng, depth + 1)
        node.right = self._build(X[~mask], y[~mask], rng, depth + 1)
        return node

    def depth(self) -> int:
        def walk(node):
            if node.attribute < 0:
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)

    def class_distribution_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.empty((len(X), self.class_count))

        def walk(node, idx):
            if node.attribute < 0:
                total = node.counts.sum()
                out[idx] = node.counts / total if total > 0 else 1.0 / self.class_count
                return
            mask = X[idx, node.attribute] <= node.threshold
            if mask.any():
                walk(node.left, idx[mask])
            if (~mask).any():
                walk(node.right, idx[~mask])

        walk(self.root, np.arange(len(X)))
        return out

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self.class_distribution_batch(X), axis=1).astype(np.int64)


def build_random_tree(
    data: TabularDataset, attributes_per_node: int, max_depth: int | None = None, seed: int = 0
) -> RandomTree:
    return RandomTree(attributes_per_node, max_depth, seed).fit(data)


def default_attributes_per_node(feature_count: int) -> int:
    return max(1, int(math.log2(feature_count) + 1))


class RandomForest:
    """Bootstrap ensemble of RandomTrees with out-of-bag class probabilities.

    ``tree_count`` fixes the size; ``incremental=True`` instead grows the
    forest in groups of ``group`` trees until out-of-bag error stops
    decreasing, capped at ``cap`` trees.
    """

    def __init__(
        self,
        tree_count: int | None = None,
        incremental: bool = False,
        group: int = 50,
        cap: int = 1000,
        attributes_per_node: int | None = None,
        seed: int = 0,
    ):
        if tree_count is None and not incremental:
            raise ParameterError("need a tree_count or incremental=True")
        self.tree_count = tree_count
        self.incremental = incremental
        self.group = group
        self.cap = cap
        self.attributes_per_node = attributes_per_node
        self.seed = seed
        self.trees: list[RandomTree] = []
        self.class_count = 0
        self._oob_votes = None
        self._labels = None
        self.train_accuracy = None

    def fit(self, data: TabularDataset) -> "RandomForest":
        if data.row_count < 2:
            raise ParameterError("forest needs at least two rows")
        self.class_count = data.class_count
        self._labels = data.labels
        n = data.row_count
        k = self.attributes_per_node or default_attributes_per_node(data.feature_count)
        self._oob_votes = np.zeros((n, self.class_count))
        if not self.incremental:
            self._grow(data, k, self.tree_count)
        else:
            best_error = np.inf
            while len(self.trees) < self.cap:
                self._grow(data, k, min(self.group, self.cap - len(self.trees)))
                error = self.oob_error()
                if error >= best_error:
                    break
                best_error = error
        self.train_accuracy = 1.0 - self.oob_error()
        return self

    def _grow(self, data: TabularDataset, attrs_per_node: int, count: int):
        n = data.row_count
        for _ in range(count):
            index = len(self.trees)
            rng = np.random.default_rng(self.seed + index)
            sample = rng.integers(0, n, size=n)
            tree = RandomTree(attrs_per_node, seed=self.seed + index)
            boot = TabularDataset(
                data.features[sample], data.labels[sample], class_count=self.class_count
            )
            # attribute draws continue the bootstrap generator's stream
            tree.fit(boot, rng)
            self.trees.append(tree)
            oob = np.ones(n, dtype=bool)
            oob[sample] = False
            if oob.any():
                predicted = tree.predict_batch(data.features[oob])
                rows = np.flatnonzero(oob)
                self._oob_votes[rows, predicted] += 1.0

    def oob_probabilities(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-row OOB class probabilities and a mask of rows with no votes.

        Voteless rows fall back to the training class prior.
        """
        votes = self._oob_votes
        totals = votes.sum(axis=1)
        missing = totals == 0
        probs = np.empty_like(votes)
        ok = ~missing
        probs[ok] = votes[ok] / totals[ok, None]
        if missing.any():
            prior = np.bincount(self._labels, minlength=self.class_count).astype(float)
            probs[missing] = prior / prior.sum()
        return probs, missing

    def oob_error(self) -> float:
        votes = self._oob_votes
        counted = votes.sum(axis=1) > 0
        if not counted.any():
            return 1.0
        predicted = np.argmax(votes[counted], axis=1)
        return float(np.mean(predicted != self._labels[counted]))

    def class_distribution_batch(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        votes = np.zeros((len(X), self.class_count))
        for tree in self.trees:
            predicted = tree.predict_batch(X)
            votes[np.arange(len(X)), predicted] += 1.0
        return votes / len(self.trees)

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self.class_distribution_batch(X), axis=1).astype(np.int64)

    def predict(self, row) -> int:
        return int(self.predict_batch(np.atleast_2d(row))[0])

    def class_distribution(self, row) -> np.ndarray:
        return self.class_distribution_batch(np.atleast_2d(row))[0]


def build_random_forest(
    data: TabularDataset,
    tree_count: int | None = None,
    incremental: bool = False,
    seed: int = 0,
    **kwargs,
) -> RandomForest:
    return RandomForest(tree_count, incremental, seed=seed, **kwargs).fit(data)


def _best_variance_split(values: np.ndarray, targets: np.ndarray):
    """Split minimizing child SSE; returns (sse, threshold) or (None, None)."""
    sse, threshold, found = _kernels.split_sse_scan(
        np.ascontiguousarray(values, dtype=np.float64),
        np.ascontiguousarray(targets, dtype=np.float64),
    )
    return (sse, threshold) if found else (None, None)


class RandomRegressionTree:
    """Depth-capped regression tree splitting on one random attribute per level.

    All nodes at a given depth share that level's attribute; each finds its
    own best variance-reduction split point.  Leaves are indexed in
    construction (breadth-first) order.
    """

    def __init__(self, max_depth: int, seed: int = 0):
        if max_depth < 1:
            raise ParameterError("max_depth must be >= 1")
        self.max_depth = max_depth
        self.seed = seed
        self.root = None
        self.leaf_count = 0
        self.level_attributes: list[int] = []

    def fit(self, features, targets, rng: np.random.Generator | None = None):
        X = np.asarray(features, dtype=np.float64)
        t = np.asarray(targets, dtype=np.float64)
        if rng is None:
            rng = np.random.default_rng(self.seed)
        self.root = _TreeNode()
        frontier = [(self.root, np.arange(len(X)))]
        for _ in range(self.max_depth):
            if not frontier:
                break
            attr = int(rng.integers(0, X.shape[1]))
            self.level_attributes.append(attr)
            next_frontier = []
            for node, idx in frontier:
                values = X[idx, attr]
                node_t = t[idx]
                parent_sse = float(((node_t - node_t.mean()) ** 2).sum()) if len(idx) else 0.0
                sse, threshold = _best_variance_split(values, node_t)
                if threshold is None or sse >= parent_sse - 1e-12:
                    continue
                mask = values <= threshold
                node.attribute = attr
                node.threshold = threshold
                node.left = _TreeNode()
                node.right = _TreeNode()
                next_frontier.append((node.left, idx[mask]))
                next_frontier.append((node.right, idx[~mask]))
            frontier = next_frontier
        self._index_leaves()
        return self

    def _index_leaves(self):
        queue = [self.root]
        count = 0
        while queue:
            node = queue.pop(0)
            if node.attribute < 0:
                node.leaf_id = count
                count += 1
            else:
                queue.append(node.left)
                queue.append(node.right)
        self.leaf_count = count

    def leaf_indices(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(len(X), dtype=np.int64)

        def walk(node, idx):
            if node.attribute < 0:
                out[idx] = node.leaf_id
                return
            mask = X[idx, node.attribute] <= node.threshold
            if mask.any():
                walk(node.left, idx[mask])
            if (~mask).any():
                walk(node.right, idx[~mask])

        walk(self.root, np.arange(len(X)))
        return out


def build_random_regression_tree(
    features, targets, max_depth: int, seed: int = 0
) -> RandomRegressionTree:
    return RandomRegressionTree(max_depth, seed).fit(features, targets)


class GaussianNaiveBayes:
    """Per-class Gaussian likelihoods with a variance floor of 1e-6."""

    VARIANCE_FLOOR = 1e-6

    def fit(self, features, labels, class_count: int | None = None):
        X = np.asarray(features, dtype=np.float64)
        y = np.asarray(labels, dtype=np.int64)
        c = class_count or int(y.max()) + 1
        self.class_count = c
        self.means = np.zeros((c, X.shape[1]))
        self.variances = np.full((c, X.shape[1]), self.VARIANCE_FLOOR)
        self.log_priors = np.full(c, -np.inf)
        for cls in range(c):
            rows = X[y == cls]
            if len(rows) == 0:
                continue
            self.means[cls] = rows.mean(axis=0)
            self.variances[cls] = np.maximum(rows.var(axis=0), self.VARIANCE_FLOOR)
            self.log_priors[cls] = math.log(len(rows) / len(X))
        return self

    def _log_posteriors(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        out = np.empty((len(X), self.class_count))
        for cls in range(self.class_count):
            var = self.variances[cls]
            ll = -0.5 * (
                np.log(2.0 * math.pi * var)[None, :]
                + (X - self.means[cls]) ** 2 / var[None, :]
            ).sum(axis=1)
            out[:, cls] = self.log_priors[cls] + ll
        return out

    def class_distribution_batch(self, X) -> np.ndarray:
        logp = self._log_posteriors(X)
        logp -= logp.max(axis=1, keepdims=True)
        p = np.exp(logp)
        return p / p.sum(axis=1, keepdims=True)

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self._log_posteriors(X), axis=1).astype(np.int64)


class _BinarySMO:
    """Sequential pair optimization for a soft-margin kernel SVM.

    Deterministic: first-choice scans run in index order, the second index
    maximizes |E_i - E_j| with ties to the lowest index.  The dual objective
    after each pass is recorded in ``objective_trace``.
    """

    def __init__(self, K, y, C=1.0, tol=1e-3, max_passes=60):
        self.K = K
        self.y = y.astype(np.float64)
        self.C = C
        self.tol = tol
        self.max_passes = max_passes
        n = len(y)
        self.alpha = np.zeros(n)
        self.b = 0.0
        self.objective_trace: list[float] = []

    def _error(self, i) -> float:
        return float((self.alpha * self.y) @ self.K[:, i] + self.b - self.y[i])

    def _objective(self) -> float:
        ay = self.alpha * self.y
        return float(self.alpha.sum() - 0.5 * ay @ self.K @ ay)

    def solve(self):
        n = len(self.y)
        for _ in range(self.max_passes):
            changed = 0
            for i in range(n):
                e_i = float((self.alpha * self.y) @ self.K[:, i] + self.b - self.y[i])
                r = e_i * self.y[i]
                if (r < -self.tol and self.alpha[i] < self.C) or (
                    r > self.tol and self.alpha[i] > 0
                ):
                    errors = (self.alpha * self.y) @ self.K + self.b - self.y
                    gaps = np.abs(e_i - errors)
                    gaps[i] = -1.0
                    j = int(np.argmax(gaps))
                    if self._update_pair(i, j, e_i, float(errors[j])):
                        changed += 1
            self.objective_trace.append(self._objective())
            if changed == 0:
                break
        return self

    def _update_pair(self, i, j, e_i, e_j) -> bool:
        if i == j:
            return False
        a_i, a_j = self.alpha[i], self.alpha[j]
        y_i, y_j = self.y[i], self.y[j]
        if y_i != y_j:
            low = max(0.0, a_j - a_i)
            high = min(self.C, self.C + a_j - a_i)
        else:
            low = max(0.0, a_i + a_j - self.C)
            high = min(self.C, a_i + a_j)
        if high - low < 1e-12:
            return False
        eta = 2.0 * self.K[i, j] - self.K[i, i] - self.K[j, j]
        if eta >= 0:
            return False
        new_j = a_j - y_j * (e_i - e_j) / eta
        new_j = min(high, max(low, new_j))
        if abs(new_j - a_j) < 1e-7:
            return False
        new_i = a_i + y_i * y_j * (a_j - new_j)
        b1 = (
            self.b
            - e_i
            - y_i * (new_i - a_i) * self.K[i, i]
            - y_j * (new_j - a_j) * self.K[i, j]
        )
        b2 = (
            self.b
            - e_j
            - y_i * (new_i - a_i) * self.K[i, j]
            - y_j * (new_j - a_j) * self.K[j, j]
        )
        self.alpha[i], self.alpha[j] = new_i, new_j
        if 0 < new_i < self.C:
            self.b = b1
        elif 0 < new_j < self.C:
            self.b = b2
        else:
            self.b = (b1 + b2) / 2.0
        return True


class PolynomialSVM:
    """One-vs-one polynomial-kernel SVM, K(x, z) = (x . z)^degree.

    Features are standardized before training; the pairwise decision
    functions vote and ties resolve to the lowest class id.
    """

    def __init__(self, degree: int, C: float = 1.0, seed: int = 0):
        if degree not in (1, 2, 3):
            raise ParameterError("svm degree must be 1, 2, or 3")
        self.degree = degree
        self.C = C
        self.seed = seed

    def _kernel(self, A, B) -> np.ndarray:
        return (A @ B.T) ** self.degree

    def fit(self, features, labels, class_count: int | None = None):
        X = np.asarray(features, dtype=np.float64)
        y = np.asarray(labels, dtype=np.int64)
        self.class_count = class_count or int(y.max()) + 1
        self._mean = X.mean(axis=0)
        sd = X.std(axis=0)
        sd[sd <= 0] = 1.0
        self._sd = sd
        Z = (X - self._mean) / self._sd
        self._machines = []
        self.objective_traces = []
        for a in range(self.class_count):
            for b in range(a + 1, self.class_count):
                rows = np.flatnonzero((y == a) | (y == b))
                if len(rows) == 0:
                    self._machines.append((a, b, None, None, None, 0.0))
                    continue
                sub = Z[rows]
                signs = np.where(y[rows] == a, 1.0, -1.0)
                smo = _BinarySMO(self._kernel(sub, sub), signs, C=self.C).solve()
                self._machines.append((a, b, sub, signs, smo.alpha, smo.b))
                self.objective_traces.append(smo.objective_trace)
        return self

    def _votes(self, X) -> np.ndarray:
        Z = (np.atleast_2d(np.asarray(X, dtype=np.float64)) - self._mean) / self._sd
        votes = np.zeros((len(Z), self.class_count))
        for a, b, sub, signs, alpha, bias in self._machines:
            if sub is None:
                continue
            scores = self._kernel(Z, sub) @ (alpha * signs) + bias
            votes[:, a] += scores >= 0
            votes[:, b] += scores < 0
        return votes

    def class_distribution_batch(self, X) -> np.ndarray:
        votes = self._votes(X)
        totals = votes.sum(axis=1, keepdims=True)
        totals[totals == 0] = 1.0
        return votes / totals

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self._votes(X), axis=1).astype(np.int64)


def naive_bayes(data: TabularDataset) -> GaussianNaiveBayes:
    if data.class_count < 2:
        raise ParameterError("naive bayes needs at least two classes")
    return GaussianNaiveBayes().fit(data.features, data.labels, data.class_count)


def svm_poly(data: TabularDataset, degree: int, seed: int = 0) -> PolynomialSVM:
    if data.class_count < 2:
        raise ParameterError("svm needs at least two classes")
    return PolynomialSVM(degree, seed=seed).fit(data.features, data.labels, data.class_count)


class KNearestTabular:
    """k-NN over squared euclidean distance on feature vectors.

    With ``k=None`` the neighbour count is chosen by leave-one-out accuracy
    over odd values 1, 3, ..., capped at n/2 and 21; accuracy ties keep the
    smallest k.
    """

    def __init__(self, k: int | None = None):
        self.k = k
        self.train_accuracy = None

    def fit(self, features, labels, class_count: int | None = None):
        X = np.asarray(features, dtype=np.float64)
        y = np.asarray(labels, dtype=np.int64)
        self._X = X
        self._y = y
        self.class_count = class_count or int(y.max()) + 1
        if self.k is None:
            self.k, self.train_accuracy = self._select_k()
        else:
            self.train_accuracy = self._loocv_accuracy(self.k)
        return self

    def _distances(self, Q) -> np.ndarray:
        X = self._X
        d = (
            (Q * Q).sum(axis=1)[:, None]
            + (X * X).sum(axis=1)[None, :]
            - 2.0 * (Q @ X.T)
        )
        np.maximum(d, 0.0, out=d)
        return d

    def _k_candidates(self) -> list[int]:
        n = len(self._y)
        cap = min(21, max(1, n // 2))
        return [k for k in range(1, cap + 1, 2)]

    def _loocv_accuracy(self, k: int) -> float:
        d = self._distances(self._X)
        np.fill_diagonal(d, np.inf)
        order = np.argsort(d, axis=1, kind="stable")[:, :k]
        correct = 0
        for i in range(len(self._y)):
            votes = np.bincount(self._y[order[i]], minlength=self.class_count)
            if int(np.argmax(votes)) == self._y[i]:
                correct += 1
        return correct / len(self._y)

    def _select_k(self) -> tuple[int, float]:
        best_k, best_acc = 1, -1.0
        for k in self._k_candidates():
            acc = self._loocv_accuracy(k)
            if acc > best_acc + 1e-12:
                best_k, best_acc = k, acc
        return best_k, best_acc

    def class_distribution_batch(self, Q) -> np.ndarray:
        Q = np.atleast_2d(np.asarray(Q, dtype=np.float64))
        d = self._distances(Q)
        order = np.argsort(d, axis=1, kind="stable")[:, : self.k]
        out = np.empty((len(Q), self.class_count))
        for i in range(len(Q)):
            votes = np.bincount(self._y[order[i]], minlength=self.class_count)
            out[i] = votes / votes.sum()
        return out

    def predict_batch(self, Q) -> np.ndarray:
        return np.argmax(self.class_distribution_batch(Q), axis=1).astype(np.int64)


class WeightedVoteEnsemble:
    """Members vote with fixed non-negative weights on class distributions."""

    def __init__(self, members):
        members = list(members)
        if not members:
            raise ParameterError("ensemble needs at least one member")
        weights = np.array([w for _, w in members], dtype=np.float64)
        if (weights < 0).any() or weights.sum() <= 0:
            raise ParameterError("weights must be non-negative and not all zero")
        self.members = members
        self.class_count = members[0][0].class_count

    def class_distribution_batch(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        total = np.zeros((len(X), self.class_count))
        for model, weight in self.members:
            if weight > 0:
                total += weight * model.class_distribution_batch(X)
        return total / total.sum(axis=1, keepdims=True)

    def predict_batch(self, X) -> np.ndarray:
        return np.argmax(self.class_distribution_batch(X), axis=1).astype(np.int64)

    def predict(self, row) -> int:
        return int(self.predict_batch(np.atleast_2d(row))[0])

    def class_distribution(self, row) -> np.ndarray:
        return self.class_distribution_batch(np.atleast_2d(row))[0]


def weighted_vote_ensemble(members) -> WeightedVoteEnsemble:
    return WeightedVoteEnsemble(members)


def cv_weighted_members(features, labels, class_count: int, seed: int = 0, forest_trees: int = 500):
    """The standard transform-side trio with cross-validation weights.

    A nearest-neighbour learner (weight from its leave-one-out accuracy),
    Gaussian naive Bayes, and a random forest (both weighted by 10-fold
    accuracy).  Returns [(model, weight), ...].
    """
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    knn = KNearestTabular().fit(X, y, class_count)
    nb = GaussianNaiveBayes().fit(X, y, class_count)
    nb_weight = kfold_accuracy(
        lambda Xt, yt: GaussianNaiveBayes().fit(Xt, yt, class_count),
        X, y, class_count, folds=10, seed=seed,
    )
    forest = RandomForest(forest_trees, seed=seed).fit(
        TabularDataset(X, y, class_count=class_count)
    )
    forest_weight = kfold_accuracy(
        lambda Xt, yt: RandomForest(forest_trees, seed=seed).fit(
            TabularDataset(Xt, yt, class_count=class_count)
        ),
        X, y, class_count, folds=10, seed=seed,
    )
    return [(knn, knn.train_accuracy), (nb, nb_weight), (forest, forest_weight)]


def kfold_accuracy(build, features, labels, class_count: int, folds: int = 10, seed: int = 0) -> float:
    """Stratified k-fold cross-validation accuracy of ``build(X, y) -> model``."""
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    n = len(y)
    folds = min(folds, n)
    rng = np.random.default_rng(seed)
    assignment = np.empty(n, dtype=np.int64)
    cursor = 0
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        rng.shuffle(idx)
        for pos, row in enumerate(idx):
            assignment[row] = (cursor + pos) % folds
        cursor += len(idx)
    correct = 0
    for fold in range(folds):
        test_mask = assignment == fold
        if not test_mask.any() or test_mask.all():
            continue
        model = build(X[~test_mask], y[~test_mask])
        correct += int(np.sum(model.predict_batch(X[test_mask]) == y[test_mask]))
    return correct / n

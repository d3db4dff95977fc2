"""Rank-based comparison machinery for accuracy tables.

A results table holds one accuracy per (dataset, classifier).  Classifiers
are ranked per dataset (rank 1 is best, ties averaged), tested jointly for
any difference, and separated by a critical rank gap.  Paired per-dataset
tests back up head-to-head claims.

The ranking, the joint test statistics, and both paired tests are
implemented here directly; only tail probabilities of the reference
distributions come from scipy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2 as _chi2_dist
from scipy.stats import f as _f_dist
from scipy.stats import norm as _norm_dist

from .errors import ParameterError, SizeError

# upper 5% and 10% points of the studentized range over sqrt(2), k = 2..20
_Q_ALPHA = {
    0.05: (
        1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164,
        3.219, 3.268, 3.313, 3.354, 3.391, 3.426, 3.458, 3.489, 3.517, 3.544,
    ),
    0.10: (
        1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920,
        2.978, 3.030, 3.077, 3.120, 3.159, 3.196, 3.230, 3.261, 3.291, 3.319,
    ),
}


def rank_average(values) -> np.ndarray:
    """Ascending ranks starting at 1, with tied values sharing their mean rank."""
    values = np.asarray(values, dtype=np.float64)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values))
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


@dataclass(frozen=True)
class ResultsTable:
    """Accuracies with shape (datasets, classifiers)."""

    accuracies: np.ndarray
    classifiers: tuple
    datasets: tuple

    def __post_init__(self):
        acc = np.asarray(self.accuracies, dtype=np.float64)
        object.__setattr__(self, "accuracies", acc)
        object.__setattr__(self, "classifiers", tuple(self.classifiers))
        object.__setattr__(self, "datasets", tuple(self.datasets))
        if acc.ndim != 2:
            raise SizeError("accuracy table must be 2-d")
        if acc.shape != (len(self.datasets), len(self.classifiers)):
            raise SizeError("table shape disagrees with its names")
        if len(self.classifiers) < 2:
            raise SizeError("need at least two classifiers to compare")
        if len(self.datasets) < 1:
            raise SizeError("need at least one dataset")
        if not np.isfinite(acc).all():
            raise ParameterError("accuracy table contains non-finite values")

    def ranks(self) -> np.ndarray:
        """Per-dataset ranks; rank 1 is the highest accuracy."""
        return np.vstack([rank_average(-row) for row in self.accuracies])

    def mean_ranks(self) -> np.ndarray:
        return self.ranks().mean(axis=0)


@dataclass(frozen=True)
class JointTestResult:
    chi2: float
    chi2_pvalue: float
    iman_davenport_f: float
    f_pvalue: float
    mean_ranks: np.ndarray
    dataset_count: int
    classifier_count: int


def friedman_test(table: ResultsTable) -> JointTestResult:
    """Rank-based joint test for any difference among the classifiers.

    Reports the chi-square form and the less conservative F form.
    """
    n, k = table.accuracies.shape
    mean_ranks = table.mean_ranks()
    chi2 = (12.0 * n / (k * (k + 1))) * (
        float((mean_ranks**2).sum()) - k * (k + 1) ** 2 / 4.0
    )
    chi2_p = float(_chi2_dist.sf(chi2, k - 1))
    denom = n * (k - 1) - chi2
    if denom <= 0:
        f_stat, f_p = math.inf, 0.0
    else:
        f_stat = (n - 1) * chi2 / denom
        f_p = float(_f_dist.sf(f_stat, k - 1, (k - 1) * (n - 1)))
    return JointTestResult(chi2, chi2_p, f_stat, f_p, mean_ranks, n, k)


def nemenyi_critical_difference(k: int, n: int, alpha: float = 0.05) -> float:
    """Mean-rank gap below which two classifiers are not distinguished."""
    if alpha not in _Q_ALPHA:
        raise ParameterError("alpha must be 0.05 or 0.10")
    if not 2 <= k <= 20:
        raise ParameterError("critical values embedded for 2 to 20 classifiers only")
    if n < 1:
        raise SizeError("need at least one dataset")
    q = _Q_ALPHA[alpha][k - 2]
    return q * math.sqrt(k * (k + 1) / (6.0 * n))


def _exact_signrank_cdf(ranks: np.ndarray, statistic: float) -> float:
    """P(T <= statistic) over all sign assignments, by subset-sum counting.

    Ranks are doubled first so averaged ranks stay integral.
    """
    doubled = np.round(ranks * 2).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros(total + 1)
    counts[0] = 1.0
    for r in doubled:
        counts[r:] += counts[: total + 1 - r].copy()
    threshold = int(math.floor(statistic * 2 + 1e-9))
    return float(counts[: threshold + 1].sum() / 2.0 ** len(doubled))


@dataclass(frozen=True)
class PairedTestResult:
    statistic: float
    pvalue: float
    used_exact: bool
    sample_count: int


def wilcoxon_signrank(a, b, exact_limit: int = 20) -> PairedTestResult:
    """Two-sided paired signed-rank test on a - b.

    Zero differences are dropped.  With ``exact_limit`` or fewer non-zero
    differences and no tied magnitudes the null distribution is enumerated
    exactly; otherwise a normal approximation with continuity correction
    and tie-adjusted variance is used.  The statistic is the smaller signed
    rank sum.
    """
    d = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    d = d[d != 0]
    n = len(d)
    if n < 1:
        raise SizeError("all paired differences are zero")
    ranks = rank_average(np.abs(d))
    r_plus = float(ranks[d > 0].sum())
    r_minus = float(ranks[d < 0].sum())
    statistic = min(r_plus, r_minus)
    magnitudes, tie_counts = np.unique(np.abs(d), return_counts=True)
    has_ties = bool((tie_counts > 1).any())
    if n <= exact_limit and not has_ties:
        cdf = _exact_signrank_cdf(ranks, statistic)
        return PairedTestResult(statistic, min(1.0, 2.0 * cdf), True, n)
    mean = n * (n + 1) / 4.0
    variance = n * (n + 1) * (2 * n + 1) / 24.0
    variance -= float((tie_counts**3 - tie_counts).sum()) / 48.0
    if variance <= 0:
        return PairedTestResult(statistic, 1.0, False, n)
    # continuity correction pulls the statistic toward the mean
    z = (statistic - mean + 0.5) / math.sqrt(variance)
    return PairedTestResult(statistic, float(min(1.0, 2.0 * _norm_dist.cdf(z))), False, n)


def sign_test(a, b) -> PairedTestResult:
    """Two-sided test on the count of wins, ignoring tied pairs."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    wins = int((a > b).sum())
    losses = int((a < b).sum())
    n = wins + losses
    if n < 1:
        raise SizeError("all pairs are tied")
    s = max(wins, losses)
    tail = sum(math.comb(n, i) for i in range(s, n + 1)) / 2.0**n
    return PairedTestResult(float(wins), min(1.0, 2.0 * tail), True, n)


@dataclass(frozen=True)
class PairwiseSummary:
    better: int
    worse: int
    tied: int
    significant_better: int
    significant_worse: int
    prop_better: float
    mean_difference: float


def pairwise_summary(folds_a: dict, folds_b: dict, alpha: float = 0.05) -> PairwiseSummary:
    """Head-to-head over shared datasets with per-dataset fold accuracies.

    A dataset counts as better/worse by mean fold accuracy; it counts as
    significant only when the paired signed-rank test over its folds
    rejects at ``alpha``.
    """
    shared = sorted(set(folds_a) & set(folds_b))
    if not shared:
        raise SizeError("no shared datasets to compare")
    better = worse = tied = sig_better = sig_worse = 0
    differences = []
    for name in shared:
        fa = np.asarray(folds_a[name], dtype=np.float64)
        fb = np.asarray(folds_b[name], dtype=np.float64)
        if len(fa) != len(fb):
            raise SizeError(f"fold counts differ on {name}")
        diff = float(fa.mean() - fb.mean())
        differences.append(diff)
        if diff > 0:
            better += 1
        elif diff < 0:
            worse += 1
        else:
            tied += 1
        try:
            result = wilcoxon_signrank(fa, fb)
        except SizeError:
            continue
        if result.pvalue < alpha:
            if diff > 0:
                sig_better += 1
            elif diff < 0:
                sig_worse += 1
    return PairwiseSummary(
        better, worse, tied, sig_better, sig_worse,
        better / len(shared), float(np.mean(differences)),
    )

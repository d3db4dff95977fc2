"""Rank-based comparison machinery checked against scipy and hand values."""

import math

import numpy as np
import pytest
import scipy.stats

from tscbench import (
    ParameterError,
    ResultsTable,
    SizeError,
    friedman_test,
    nemenyi_critical_difference,
    pairwise_summary,
    rank_average,
    sign_test,
    wilcoxon_signrank,
)


def random_table(rng, n, k):
    acc = rng.uniform(0.4, 1.0, size=(n, k))
    return ResultsTable(acc, tuple(f"c{j}" for j in range(k)), tuple(f"d{i}" for i in range(n)))


class TestRankAverage:
    def test_matches_scipy_rankdata(self, rng):
        for _ in range(30):
            values = rng.integers(0, 6, size=10).astype(float)
            np.testing.assert_allclose(
                rank_average(values), scipy.stats.rankdata(values), atol=1e-12
            )

    def test_simple_tie(self):
        np.testing.assert_allclose(rank_average([3.0, 1.0, 3.0]), [2.5, 1.0, 2.5])


class TestResultsTable:
    def test_rank_one_is_best_accuracy(self):
        table = ResultsTable(
            np.array([[0.9, 0.5, 0.7]]), ("a", "b", "c"), ("d0",)
        )
        np.testing.assert_allclose(table.ranks()[0], [1.0, 3.0, 2.0])

    def test_each_row_of_ranks_sums_to_triangle_number(self, rng):
        table = random_table(rng, 7, 5)
        np.testing.assert_allclose(table.ranks().sum(axis=1), 5 * 6 / 2)
        assert table.mean_ranks().sum() == pytest.approx(15.0)

    def test_shape_and_validity_checks(self):
        with pytest.raises(SizeError):
            ResultsTable(np.zeros((3, 1)), ("a",), ("d0", "d1", "d2"))
        with pytest.raises(SizeError):
            ResultsTable(np.zeros((2, 2)), ("a", "b"), ("d0",))
        with pytest.raises(ParameterError):
            ResultsTable(
                np.array([[0.5, np.nan]]), ("a", "b"), ("d0",)
            )


class TestFriedman:
    def test_two_classifier_sweep_hand_value(self):
        # one classifier always wins over four datasets: chi2 = N = 4
        table = ResultsTable(
            np.array([[0.9, 0.6], [0.8, 0.5], [0.95, 0.7], [0.85, 0.6]]),
            ("a", "b"),
            tuple(f"d{i}" for i in range(4)),
        )
        result = friedman_test(table)
        assert result.chi2 == pytest.approx(4.0)
        assert result.dataset_count == 4 and result.classifier_count == 2

    def test_all_tied_table_scores_zero(self):
        table = ResultsTable(
            np.full((5, 3), 0.8), ("a", "b", "c"), tuple(f"d{i}" for i in range(5))
        )
        result = friedman_test(table)
        assert result.chi2 == pytest.approx(0.0)
        assert result.chi2_pvalue == pytest.approx(1.0)
        assert result.iman_davenport_f == pytest.approx(0.0)

    def test_matches_scipy_and_manual_f_form(self, rng):
        for _ in range(20):
            n = int(rng.integers(4, 12))
            k = int(rng.integers(3, 6))
            table = random_table(rng, n, k)
            result = friedman_test(table)
            chi2_ref, p_ref = scipy.stats.friedmanchisquare(
                *[table.accuracies[:, j] for j in range(k)]
            )
            assert result.chi2 == pytest.approx(chi2_ref, abs=1e-6)
            assert result.chi2_pvalue == pytest.approx(p_ref, abs=1e-4)
            f_ref = (n - 1) * result.chi2 / (n * (k - 1) - result.chi2)
            assert result.iman_davenport_f == pytest.approx(f_ref, abs=1e-6)
            p_f = scipy.stats.f.sf(f_ref, k - 1, (k - 1) * (n - 1))
            assert result.f_pvalue == pytest.approx(p_f, abs=1e-4)

    def test_invariant_under_monotone_per_dataset_transforms(self, rng):
        table = random_table(rng, 6, 4)
        base = friedman_test(table)
        warped = ResultsTable(
            np.exp(table.accuracies), table.classifiers, table.datasets
        )
        result = friedman_test(warped)
        assert result.chi2 == pytest.approx(base.chi2, abs=1e-9)
        np.testing.assert_allclose(result.mean_ranks, base.mean_ranks)

    def test_pvalues_are_probabilities(self, rng):
        for _ in range(10):
            result = friedman_test(random_table(rng, 5, 4))
            assert 0.0 <= result.chi2_pvalue <= 1.0
            assert 0.0 <= result.f_pvalue <= 1.0


class TestNemenyi:
    def test_two_classifier_reduction(self):
        for n in (10, 25, 85):
            assert nemenyi_critical_difference(2, n) == pytest.approx(
                1.96 / math.sqrt(n), abs=1e-9
            )

    def test_published_configuration(self):
        expected = 3.219 * math.sqrt(11 * 12 / (6.0 * 85))
        assert nemenyi_critical_difference(11, 85) == pytest.approx(expected, abs=1e-3)

    def test_strictly_decreasing_in_dataset_count(self):
        values = [nemenyi_critical_difference(5, n) for n in (5, 10, 50, 200)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_ten_percent_level_is_smaller(self):
        assert nemenyi_critical_difference(6, 30, alpha=0.10) < (
            nemenyi_critical_difference(6, 30, alpha=0.05)
        )

    def test_rejects_unsupported_inputs(self):
        with pytest.raises(ParameterError):
            nemenyi_critical_difference(1, 10)
        with pytest.raises(ParameterError):
            nemenyi_critical_difference(21, 10)
        with pytest.raises(ParameterError):
            nemenyi_critical_difference(5, 10, alpha=0.01)
        with pytest.raises(SizeError):
            nemenyi_critical_difference(5, 0)


class TestWilcoxon:
    def test_exact_branch_matches_scipy(self, rng):
        for _ in range(25):
            n = int(rng.integers(6, 15))
            d = rng.standard_normal(n)
            a = rng.uniform(0, 1, size=n)
            result = wilcoxon_signrank(a, a - d)
            if not result.used_exact:
                continue
            ref = scipy.stats.wilcoxon(a, a - d, zero_method="wilcox", method="exact")
            assert result.statistic == pytest.approx(ref.statistic, abs=1e-9)
            assert result.pvalue == pytest.approx(ref.pvalue, abs=1e-6)

    def test_approx_branch_matches_scipy(self, rng):
        for _ in range(15):
            n = 40
            a = rng.uniform(0, 1, size=n)
            b = a + rng.standard_normal(n) * 0.1
            result = wilcoxon_signrank(a, b)
            assert not result.used_exact
            ref = scipy.stats.wilcoxon(
                a, b, zero_method="wilcox", method="approx", correction=True
            )
            assert result.statistic == pytest.approx(ref.statistic, abs=1e-9)
            assert result.pvalue == pytest.approx(ref.pvalue, abs=1e-6)

    def test_tied_magnitudes_force_the_approximation(self):
        a = np.array([0.5, 0.6, 0.7, 0.8, 0.9, 0.4])
        b = a - np.array([0.1, 0.1, 0.2, -0.2, 0.3, -0.3])
        result = wilcoxon_signrank(a, b)
        assert not result.used_exact

    def test_zero_differences_dropped(self):
        a = np.array([0.5, 0.6, 0.7, 0.8])
        b = np.array([0.5, 0.4, 0.9, 0.6])
        result = wilcoxon_signrank(a, b)
        assert result.sample_count == 3

    def test_all_zero_differences_rejected(self):
        with pytest.raises(SizeError):
            wilcoxon_signrank([0.5, 0.5], [0.5, 0.5])

    def test_symmetric_differences_give_high_pvalue(self):
        a = np.array([1.0, 2.0, 3.0, 4.0])
        b = a + np.array([0.5, -0.5, 1.5, -1.5])
        assert wilcoxon_signrank(a, b).pvalue == pytest.approx(1.0, abs=1e-9)

    def test_exact_and_approx_agree_at_the_boundary(self, rng):
        for _ in range(10):
            d = rng.standard_normal(20) + 0.4
            a = rng.uniform(0, 1, size=20)
            exact = wilcoxon_signrank(a, a - d)
            approx = wilcoxon_signrank(a, a - d, exact_limit=0)
            if exact.used_exact:
                assert exact.pvalue == pytest.approx(approx.pvalue, abs=0.01)


class TestSignTest:
    def test_sweep_hand_value(self):
        a = np.arange(10, dtype=float) + 1.0
        b = np.arange(10, dtype=float)
        result = sign_test(a, b)
        assert result.statistic == 10.0
        assert result.pvalue == pytest.approx(2.0 * 0.5**10, abs=1e-12)

    def test_ties_are_dropped(self):
        result = sign_test([1.0, 2.0, 3.0, 4.0], [1.0, 1.0, 4.0, 4.0])
        assert result.sample_count == 2

    def test_balanced_wins_give_pvalue_one(self):
        result = sign_test([1.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 1.0])
        assert result.pvalue == pytest.approx(1.0)

    def test_all_tied_rejected(self):
        with pytest.raises(SizeError):
            sign_test([0.5, 0.5], [0.5, 0.5])


class TestPairwiseSummary:
    def test_self_comparison_is_all_ties(self):
        folds = {f"d{i}": [0.5, 0.6, 0.7] for i in range(5)}
        result = pairwise_summary(folds, folds)
        assert result.better == 0 and result.worse == 0 and result.tied == 5
        assert result.prop_better == pytest.approx(0.0)
        assert result.mean_difference == pytest.approx(0.0)
        assert result.significant_better == 0 and result.significant_worse == 0

    def test_constant_improvement(self, rng):
        folds_b = {
            f"d{i}": rng.uniform(0.4, 0.9, size=10).tolist() for i in range(6)
        }
        folds_a = {
            name: [v + 0.05 for v in values] for name, values in folds_b.items()
        }
        result = pairwise_summary(folds_a, folds_b)
        assert result.better == 6 and result.worse == 0
        assert result.prop_better == pytest.approx(1.0)
        assert result.mean_difference == pytest.approx(0.05, abs=1e-9)
        assert result.significant_better == 6

    def test_restricted_to_shared_datasets(self):
        folds_a = {"x": [0.9, 0.8], "y": [0.7, 0.6]}
        folds_b = {"y": [0.5, 0.4], "z": [0.9, 0.9]}
        result = pairwise_summary(folds_a, folds_b)
        assert result.better + result.worse + result.tied == 1

    def test_disjoint_datasets_rejected(self):
        with pytest.raises(SizeError):
            pairwise_summary({"x": [0.5]}, {"y": [0.5]})

    def test_mismatched_fold_counts_rejected(self):
        with pytest.raises(SizeError):
            pairwise_summary({"x": [0.5, 0.6]}, {"x": [0.5]})

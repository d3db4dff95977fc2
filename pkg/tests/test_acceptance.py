"""End-to-end acceptance checks, one printed verdict line per criterion.

Each test prints ``acceptance NN PASS/FAIL/SKIP`` straight to the terminal
so the suite's summary can be read off a plain ``pytest -v`` run.
"""

import contextlib
import math
import os
import time
import warnings

import numpy as np
import pytest
import scipy.stats

from tscbench import (
    BossEnsemble,
    OneNearestNeighbor,
    ResultsTable,
    ShapeletTransformClassifier,
    TimeSeriesBagOfFeatures,
    TimeSeriesForest,
    binary_shapelet_selection,
    boss_distance,
    create,
    classifier_names,
    dtw,
    friedman_test,
    load_ucr,
    msm,
    nemenyi_critical_difference,
    read_results,
    run_experiment,
    sign_test,
    wilcoxon_signrank,
    ExperimentConfig,
)
from tscbench.data import ResampleSpec, stratified_resample
from tscbench.experiments import fold_split
from oracles import dtw_by_enumeration
from synthetic import (
    contest_suite,
    gaussian_bumps,
    mean_shift,
    sinusoid_vs_noise,
    square_pulse,
    write_ucr_layout,
)


@contextlib.contextmanager
def verdict(capsys, number, label):
    started = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        tag = "SKIP" if isinstance(exc, pytest.skip.Exception) else "FAIL"
        with capsys.disabled():
            print(f"\nacceptance {number:02d} {tag}  {label}")
        raise
    elapsed = time.perf_counter() - started
    with capsys.disabled():
        print(f"\nacceptance {number:02d} PASS  {label} ({elapsed:.1f}s)")


def test_01_dtw_equals_path_enumeration(capsys, rng):
    with verdict(capsys, 1, "dtw equals exhaustive warping-path enumeration"):
        started = time.perf_counter()
        for _ in range(200):
            n = int(rng.integers(2, 9))
            a = rng.standard_normal(n)
            b = rng.standard_normal(n)
            for r in (0.0, 0.25, 0.5, 1.0):
                band = int(r * n + 1e-9)
                expected = dtw_by_enumeration(a, b, band)
                assert abs(dtw(a, b, r=r) - expected) <= 1e-9
        assert time.perf_counter() - started < 60.0


def _coffee_dir():
    for root in (os.environ.get("TSCBENCH_DATA"), os.path.join(os.path.dirname(__file__), "..", "data")):
        if not root:
            continue
        if os.path.isfile(os.path.join(root, "Coffee", "Coffee_TRAIN.txt")):
            return root
    return None


def test_02_coffee_split_error_counts(capsys):
    with verdict(capsys, 2, "1-NN full dtw on the original Coffee split"):
        root = _coffee_dir()
        if root is None:
            warnings.warn(
                "Coffee dataset not found (set TSCBENCH_DATA or place the "
                "archive under data/); skipping the archive reproduction check"
            )
            pytest.skip("Coffee dataset not available")
        train = load_ucr(os.path.join(root, "Coffee", "Coffee_TRAIN.txt"))
        test = load_ucr(os.path.join(root, "Coffee", "Coffee_TEST.txt"))
        model = OneNearestNeighbor("dtw").fit(train.znormalized())
        errors = int(np.sum(model.predict_batch(test.znormalized().series) != test.labels))
        assert errors == 0
        raw = OneNearestNeighbor("dtw").fit(train)
        raw_errors = int(np.sum(raw.predict_batch(test.series) != test.labels))
        assert raw_errors == 5
        assert len(test.labels) == 28


def test_03_msm_metric_axioms(capsys, rng):
    with verdict(capsys, 3, "msm symmetry, identity, and triangle inequality"):
        for _ in range(1000):
            n = int(rng.integers(2, 11))
            a = rng.standard_normal(n)
            b = rng.standard_normal(n)
            c = rng.standard_normal(n)
            for cost in (0.01, 1.0, 100.0):
                assert msm(a, a, c=cost) == 0.0
                assert msm(a, b, c=cost) == msm(b, a, c=cost)
                ab, bc, ac = (
                    msm(a, b, c=cost),
                    msm(b, c, c=cost),
                    msm(a, c, c=cost),
                )
                assert ac <= ab + bc + 1e-9


def test_04_wdtw_collapses_to_half_dtw(capsys, rng):
    with verdict(capsys, 4, "wdtw at g=0 equals half of full-window dtw"):
        from tscbench import wdtw

        for _ in range(100):
            n = int(rng.integers(4, 31))
            a = rng.standard_normal(n)
            b = rng.standard_normal(n)
            assert abs(wdtw(a, b, g=0.0) - dtw(a, b, r=1.0) / 2.0) <= 1e-9


def test_05_boss_distance_and_ensemble(capsys):
    with verdict(capsys, 5, "boss distance hand values and ensemble accuracy"):
        h1 = {"a": 2.0}
        h2 = {"a": 2.0, "b": 5.0}
        assert boss_distance(h1, h2) == 0.0
        assert boss_distance(h2, h1) == 25.0
        started = time.perf_counter()
        train, test = sinusoid_vs_noise(500, 500, 100, seed=0)
        model = BossEnsemble().fit(train, seed=0)
        accuracy = np.mean(model.predict_batch(test.series) == test.labels)
        assert accuracy >= 0.95
        assert time.perf_counter() - started < 300.0


def test_06_shapelet_pipeline(capsys):
    with verdict(capsys, 6, "top shapelet overlaps the planted pulse; st accuracy"):
        train, test = square_pulse(n_per_class=15, m=60, seed=3, start=20, width=10)
        top = binary_shapelet_selection(train, total=10)[0]
        # the pulse is planted on [start, start+width) with up to 3 steps of jitter
        assert top.start < 30 + 3 and top.start + top.length > 20 - 3
        model = ShapeletTransformClassifier().fit(train, seed=0)
        accuracy = np.mean(model.predict_batch(test.series) == test.labels)
        assert accuracy >= 0.95


def test_07_interval_pipeline(capsys):
    with verdict(capsys, 7, "tsf and tsbf accuracy on the mean-shift synthetic"):
        train, test = mean_shift(n=100, m=100, seed=0)
        started = time.perf_counter()
        tsf = TimeSeriesForest(tree_count=500).fit(train, seed=0)
        tsf_acc = np.mean(tsf.predict_batch(test.series) == test.labels)
        assert tsf_acc >= 0.95
        assert time.perf_counter() - started < 120.0
        started = time.perf_counter()
        tsbf = TimeSeriesBagOfFeatures().fit(train, seed=0)
        tsbf_acc = np.mean(tsbf.predict_batch(test.series) == test.labels)
        assert tsbf_acc >= 0.90
        assert time.perf_counter() - started < 120.0


def test_08_ensemble_rank_ordering(capsys):
    with verdict(capsys, 8, "ensemble mean-rank ordering: cote-lite <= ee <= ed"):
        suite = contest_suite()
        names = ("ed", "ee", "cote-lite")
        accuracies = np.zeros((len(suite), len(names)))
        for i, dataset in enumerate(sorted(suite)):
            train, test = suite[dataset]
            for fold in range(5):
                fold_train, fold_test = fold_split(train, test, seed=0, fold=fold)
                for j, name in enumerate(names):
                    model = create(name)
                    model.fit(fold_train, seed=fold)
                    hits = model.predict_batch(fold_test.series) == fold_test.labels
                    accuracies[i, j] += np.mean(hits) / 5.0
        table = ResultsTable(accuracies, names, tuple(sorted(suite)))
        ed_rank, ee_rank, cote_rank = table.mean_ranks()
        assert cote_rank <= ee_rank <= ed_rank


def test_09_statistics_against_second_implementation(capsys, rng):
    with verdict(capsys, 9, "rank statistics match an independent implementation"):
        for _ in range(20):
            n = int(rng.integers(5, 31))
            k = int(rng.integers(3, 9))
            accuracies = rng.uniform(0.3, 1.0, size=(n, k))
            table = ResultsTable(
                accuracies,
                tuple(f"c{j}" for j in range(k)),
                tuple(f"d{i}" for i in range(n)),
            )
            joint = friedman_test(table)
            chi2_ref, chi2_p_ref = scipy.stats.friedmanchisquare(
                *[accuracies[:, j] for j in range(k)]
            )
            assert abs(joint.chi2 - chi2_ref) <= 1e-6
            assert abs(joint.chi2_pvalue - chi2_p_ref) <= 1e-4
            f_ref = (n - 1) * chi2_ref / (n * (k - 1) - chi2_ref)
            assert abs(joint.iman_davenport_f - f_ref) <= 1e-6
            f_p_ref = float(scipy.stats.f.sf(f_ref, k - 1, (k - 1) * (n - 1)))
            assert abs(joint.f_pvalue - f_p_ref) <= 1e-4

            a, b = accuracies[:, 0], accuracies[:, 1]
            ours = wilcoxon_signrank(a, b)
            method = "exact" if ours.used_exact else "approx"
            reference = scipy.stats.wilcoxon(
                a, b, zero_method="wilcox", method=method, correction=True
            )
            assert abs(ours.statistic - reference.statistic) <= 1e-6
            assert abs(ours.pvalue - reference.pvalue) <= 1e-4

            sign_ours = sign_test(a, b)
            wins = int(np.sum(a > b))
            sign_ref = scipy.stats.binomtest(wins, wins + int(np.sum(a < b)), 0.5)
            assert abs(sign_ours.pvalue - sign_ref.pvalue) <= 1e-4
        expected = 3.219 * math.sqrt(132.0 / 510.0)
        assert abs(nemenyi_critical_difference(11, 85) - expected) <= 1e-3


def test_10_determinism(capsys, tmp_path):
    with verdict(capsys, 10, "repeat fits and worker counts leave results unchanged"):
        train, test = gaussian_bumps(n_per_class=8, m=36, seed=5)
        fold_train, fold_test = fold_split(train, test, seed=0, fold=1)
        for name in classifier_names():
            first = create(name).fit(fold_train, seed=7).predict_batch(fold_test.series)
            second = create(name).fit(fold_train, seed=7).predict_batch(fold_test.series)
            assert np.array_equal(first, second), name

        root = tmp_path / "data"
        root.mkdir()
        write_ucr_layout(root, "Bumps", *gaussian_bumps(n_per_class=6, m=24, seed=0))
        write_ucr_layout(root, "Level", *mean_shift(n=12, m=24, seed=1, lo=6, hi=14))
        outputs = []
        for threads in (1, 3):
            output = tmp_path / f"threads{threads}.csv"
            run_experiment(
                ExperimentConfig(
                    data_dir=str(root),
                    output=str(output),
                    classifiers=("ed", "randf"),
                    datasets=("Bumps", "Level"),
                    folds=2,
                    seed=0,
                    threads=threads,
                )
            )
            rows = read_results(str(output))
            # train_ms is wall-clock and may differ between runs
            outputs.append(
                sorted(
                    tuple(v for k, v in row.items() if k != "train_ms")
                    for row in rows
                )
            )
        assert outputs[0] == outputs[1]


def test_11_resampling_protocol(capsys, rng):
    with verdict(capsys, 11, "fold 0 is the original split; class counts preserved"):
        from tscbench import LabeledDataset

        train = LabeledDataset(
            rng.standard_normal((10, 12)),
            np.array([0] * 6 + [1] * 4),
            ("a", "b"),
        )
        test = LabeledDataset(
            rng.standard_normal((8, 12)),
            np.array([0] * 3 + [1] * 5),
            ("a", "b"),
        )
        spec = ResampleSpec(seed=9, fold_index=0, train_size=10, test_size=8)
        fold_train, fold_test = stratified_resample(train, test, spec)
        np.testing.assert_array_equal(fold_train.series, train.series)
        np.testing.assert_array_equal(fold_train.labels, train.labels)
        np.testing.assert_array_equal(fold_test.series, test.series)
        np.testing.assert_array_equal(fold_test.labels, test.labels)
        for fold in range(100):
            spec = ResampleSpec(seed=9, fold_index=fold, train_size=10, test_size=8)
            fold_train, fold_test = stratified_resample(train, test, spec)
            assert fold_train.class_counts().tolist() == [6, 4]
            assert fold_test.class_counts().tolist() == [3, 5]

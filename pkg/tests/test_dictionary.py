"""Symbolic word pipelines: PAA, SAX, MCB, and the histogram classifiers."""

import numpy as np
import pytest

from tscbench import (
    BagOfPatterns,
    BossEnsemble,
    DtwFeatures,
    SaxVsm,
    boss_distance,
    mcb_breakpoints,
    numerosity_reduce,
    paa,
    sax_breakpoints,
    sax_word,
)
from tscbench.dictionary import (
    _sparse_histograms,
    _value_word_keys,
    boss_window_sizes,
    value_word_grid,
    word_key,
    word_text,
)
from synthetic import frequency_classes, mean_shift


class TestPaa:
    def test_full_length_is_identity(self, rng):
        x = rng.standard_normal(7)
        np.testing.assert_allclose(paa(x, 7), x, atol=1e-12)

    def test_even_split_segment_means(self):
        np.testing.assert_allclose(paa([1.0, 2.0, 3.0, 4.0], 2), [1.5, 3.5])

    def test_six_to_three(self):
        np.testing.assert_allclose(
            paa([1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 3), [1.5, 3.5, 5.5]
        )

    def test_fractional_segments_preserve_mass(self, rng):
        # 4 values into 3 segments splits cell 2 between segments 1 and 2
        np.testing.assert_allclose(paa([1.0, 2.0, 3.0, 4.0], 3), [1.25, 2.5, 3.75])
        x = rng.standard_normal(11)
        assert paa(x, 5).mean() == pytest.approx(x.mean(), abs=1e-9)

    def test_mean_preserved_for_many_shapes(self, rng):
        for m, l in [(10, 3), (16, 5), (9, 4), (12, 12)]:
            x = rng.standard_normal(m)
            assert paa(x, l).mean() == pytest.approx(x.mean(), abs=1e-9)


class TestSax:
    def test_four_letter_breakpoints_are_quartiles(self):
        np.testing.assert_allclose(
            sax_breakpoints(4), [-0.67448975, 0.0, 0.67448975], atol=1e-6
        )

    def test_monotone_ramp_spells_the_alphabet(self):
        symbols = sax_word([1.0, 2.0, 3.0, 4.0], word_length=4, alphabet_size=4)
        assert symbols.tolist() == [0, 1, 2, 3]
        assert word_text(word_key(symbols, 4), 4, 4) == "abcd"

    def test_constant_window_collapses_to_one_symbol(self):
        symbols = sax_word([3.0, 3.0, 3.0, 3.0], word_length=4, alphabet_size=4)
        assert len(set(symbols.tolist())) == 1

    def test_word_key_round_trip(self, rng):
        for _ in range(20):
            symbols = rng.integers(0, 4, size=6)
            key = word_key(symbols, 4)
            assert word_text(key, 6, 4) == "".join("abcd"[s] for s in symbols)


class TestNumerosityReduce:
    def test_consecutive_repeat_collapsed(self):
        keys = np.array([7, 7, 9])
        np.testing.assert_array_equal(numerosity_reduce(keys), [7, 9])

    def test_non_consecutive_repeat_kept(self):
        keys = np.array([7, 9, 7])
        np.testing.assert_array_equal(numerosity_reduce(keys), [7, 9, 7])

    def test_counts_never_increase(self, rng):
        keys = rng.integers(0, 5, size=50)
        reduced = numerosity_reduce(keys)
        full = np.bincount(keys, minlength=5)
        kept = np.bincount(reduced, minlength=5)
        assert np.all(kept <= full)


class TestMcb:
    def test_median_cut_for_two_bins(self):
        edges = mcb_breakpoints(np.array([1.0, 2.0, 3.0, 4.0]), 2)
        assert edges.shape == (1,)
        assert edges[0] == pytest.approx(2.5)

    def test_constant_column_collapses(self):
        edges = mcb_breakpoints(np.full(10, 3.3), 4)
        assert np.all(edges == edges[0])
        bins = np.searchsorted(edges, np.full(5, 3.3), side="left")
        assert np.all(bins == 0)

    def test_equal_frequency_within_two_elements(self, rng):
        values = rng.uniform(0, 1, size=200)
        edges = mcb_breakpoints(values, 4)
        bins = np.searchsorted(edges, values, side="left")
        counts = np.bincount(bins, minlength=4)
        assert np.all(np.abs(counts - 50) <= 2)


class TestBossDistance:
    def test_self_distance_zero(self):
        h = {1: 3.0, 2: 5.0}
        assert boss_distance(h, h) == 0.0

    def test_asymmetry_hand_values(self):
        h1 = {"a": 2.0}
        h2 = {"a": 2.0, "b": 5.0}
        assert boss_distance(h1, h2) == pytest.approx(0.0)
        assert boss_distance(h2, h1) == pytest.approx(25.0)

    def test_empty_left_side_is_zero(self):
        assert boss_distance({}, {"a": 9.0}) == 0.0

    def test_bounded_by_dense_squared_distance(self, rng):
        for _ in range(30):
            words = list(range(6))
            h1 = {w: float(rng.integers(0, 5)) for w in words if rng.random() < 0.7}
            h2 = {w: float(rng.integers(0, 5)) for w in words if rng.random() < 0.7}
            dense = sum((h1.get(w, 0.0) - h2.get(w, 0.0)) ** 2 for w in words)
            assert boss_distance(h1, h2) <= dense + 1e-12
            if set(h2) <= set(h1):
                assert boss_distance(h1, h2) == pytest.approx(dense)


class TestSparseHistograms:
    def test_counts_match_dense_bincount(self, rng):
        key_lists = [rng.integers(0, 9, size=12) for _ in range(4)]
        H, vocab = _sparse_histograms(key_lists)
        dense = H.toarray()
        for i, keys in enumerate(key_lists):
            for column, word in enumerate(vocab):
                assert dense[i, column] == np.sum(keys == word)

    def test_unknown_words_dropped_under_fixed_vocabulary(self):
        H, vocab = _sparse_histograms([np.array([1, 1, 2])])
        Q, _ = _sparse_histograms([np.array([1, 7, 7, 7])], vocab)
        column = int(np.searchsorted(vocab, 1))
        assert Q.toarray()[0, column] == 1
        assert Q.toarray().sum() == 1


class TestValueWordGrid:
    def test_cell_inventory(self):
        cells = list(value_word_grid(100))
        alphabets = {a for a, _, _ in cells}
        assert alphabets == {2, 4, 6, 8}
        for _, w, l in cells:
            assert l <= w // 2
            assert l >= 2 and (l & (l - 1)) == 0  # powers of two

    def test_window_range_tracks_series_length(self):
        cells = list(value_word_grid(100))
        windows = sorted({w for _, w, _ in cells})
        assert windows[0] >= 4
        assert windows[-1] <= 36

    def test_vectorized_keys_match_loop(self, rng):
        x = rng.standard_normal(40)
        keys = _value_word_keys(x, window=8, word_length=4, alphabet_size=4)
        # windows stride one step; numerosity reduction applied
        assert len(keys) <= 40 - 8 + 1


class TestBagOfPatterns:
    def test_training_series_recovers_its_label(self):
        train, _ = frequency_classes(n_per_class=8, m=48, seed=0)
        model = BagOfPatterns().fit(train, seed=0)
        hits = [model.predict(row) == label for row, label in zip(train.series, train.labels)]
        assert np.mean(hits) >= 0.9

    def test_frequency_data_separates(self):
        train, test = frequency_classes(n_per_class=8, m=48, seed=1)
        model = BagOfPatterns().fit(train, seed=0)
        predictions = model.predict_batch(test.series)
        assert np.mean(predictions == test.labels) >= 0.9

    def test_params_string_names_the_cell(self):
        train, _ = frequency_classes(n_per_class=6, m=48, seed=2)
        model = BagOfPatterns().fit(train, seed=0)
        assert model.params_string.startswith("bop(")


class TestSaxVsm:
    def test_frequency_data_separates(self):
        train, test = frequency_classes(n_per_class=8, m=48, seed=3)
        model = SaxVsm().fit(train, seed=0)
        assert np.mean(model.predict_batch(test.series) == test.labels) >= 0.9

    def test_distribution_sums_to_one(self):
        train, test = frequency_classes(n_per_class=6, m=48, seed=4)
        model = SaxVsm().fit(train, seed=0)
        dist = model.class_distribution(test.series[0])
        assert dist.sum() == pytest.approx(1.0, abs=1e-9)

    def test_prediction_invariant_to_weight_rescaling(self):
        train, test = frequency_classes(n_per_class=6, m=48, seed=5)
        model = SaxVsm().fit(train, seed=0)
        base = model.predict_batch(test.series)
        model._weights = model._weights * 7.5  # uniform rescale preserves cosine
        np.testing.assert_array_equal(model.predict_batch(test.series), base)

    def test_disjoint_vocabulary_prefers_the_sharing_class(self):
        # class 0 low-frequency, class 1 high-frequency; a query built from
        # class 0's generator shares words only with class 0
        train, _ = frequency_classes(n_per_class=8, m=48, seed=6)
        model = SaxVsm().fit(train, seed=0)
        t = np.arange(48)
        query = np.sin(2 * np.pi * 3 * t / 48 + 0.3)
        assert model.predict(query) == 0


class TestBossEnsemble:
    def test_frequency_data_separates(self):
        train, test = frequency_classes(n_per_class=8, m=48, seed=7)
        model = BossEnsemble().fit(train, seed=0)
        assert np.mean(model.predict_batch(test.series) == test.labels) >= 0.9

    def test_member_retention_near_best(self):
        train, _ = frequency_classes(n_per_class=8, m=48, seed=8)
        model = BossEnsemble().fit(train, seed=0)
        best = max(member["acc"] for member in model.members)
        assert all(member["acc"] >= 0.92 * best - 1e-12 for member in model.members)
        assert model.params_string == f"boss(members={len(model.members)})"

    def test_single_member_ensemble_is_that_member(self):
        train, test = frequency_classes(n_per_class=8, m=48, seed=9)
        model = BossEnsemble().fit(train, seed=0)
        model.members = model.members[:1]
        dist = model.class_distribution(test.series[0])
        assert set(np.unique(dist)) <= {0.0, 1.0}

    def test_word_uses_half_window_of_complex_coefficients(self):
        # l real values come from l/2 complex coefficients
        sizes = boss_window_sizes(100)
        assert all(10 <= w <= 100 for w in sizes)
        assert len(sizes) == len(set(sizes))
        train, _ = frequency_classes(n_per_class=6, m=48, seed=10)
        model = BossEnsemble().fit(train, seed=0)
        for member in model.members:
            assert member["edges"].shape[0] == member["length"]


class TestDtwFeatures:
    def test_feature_width_formula(self):
        train, _ = frequency_classes(n_per_class=5, m=48, seed=11)
        model = DtwFeatures().fit(train, seed=0)
        n = train.case_count
        alpha, _, l = model.cell
        width = model._feature_rows(train.series[:1]).shape[1]
        assert width == 2 * n + alpha**l

    def test_dtw_block_diagonal_zero_and_matches_direct(self):
        from tscbench import DistanceSpec, distance_matrix

        train, _ = frequency_classes(n_per_class=5, m=48, seed=12)
        model = DtwFeatures().fit(train, seed=0)
        rows = model._feature_rows(train.series)
        n = train.case_count
        full_block = rows[:, :n]
        assert np.allclose(np.diag(full_block), 0.0, atol=1e-12)
        direct = distance_matrix(train.series, DistanceSpec.make("dtw", r=1.0))
        np.testing.assert_allclose(full_block, direct, atol=1e-12)

    def test_frequency_data_separates(self):
        train, test = frequency_classes(n_per_class=8, m=48, seed=13)
        model = DtwFeatures().fit(train, seed=0)
        assert np.mean(model.predict_batch(test.series) == test.labels) >= 0.9

import math

import numpy as np
import pytest
import scipy.special
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from fverify import (
    c_statistic,
    discrimination_summary,
    five_number_summary,
    ks_test,
    validate_series,
    wilcoxon_exact_test,
    wilcoxon_test,
    yates_decompose,
)
from fverify.errors import DegenerateClass, ZeroVariance

from _oracles import concordance_brute_force


def _series(p0, p1):
    return validate_series(list(p0) + list(p1), [0] * len(p0) + [1] * len(p1))


def _random_series(rng, max_n=60, ties=False):
    while True:
        n = int(rng.integers(2, max_n + 1))
        x = rng.integers(0, 2, n)
        if 0 < x.sum() < n:
            break
    p = rng.random(n)
    if ties:
        p = np.round(p, 1)
    return validate_series(p, x)


class TestSummary:
    def test_hand_means(self):
        s = _series([0.2, 0.4], [0.6, 0.8])
        d = discrimination_summary(s)
        assert (d.n0, d.n1) == (2, 2)
        assert d.m0 == pytest.approx(0.30, abs=1e-15)
        assert d.m1 == pytest.approx(0.70, abs=1e-15)
        assert d.diff == pytest.approx(0.40, abs=1e-15)

    def test_identical_class_distributions(self):
        d = discrimination_summary(_series([0.3, 0.7], [0.3, 0.7]))
        assert d.diff == 0.0
        assert d.wilcoxon.statistic == 0.0
        assert d.wilcoxon.p_value == 0.5
        assert d.ks.statistic == 0.0
        assert d.c_statistic == 0.5

    def test_degenerate_class(self):
        with pytest.raises(DegenerateClass):
            discrimination_summary(validate_series([0.2, 0.4], [1, 1]))

    def test_diff_equals_yates_coefficient(self):
        rng = np.random.default_rng(61)
        for _ in range(200):
            s = _random_series(rng, ties=bool(rng.integers(0, 2)))
            d = discrimination_summary(s)
            y = yates_decompose(s)
            assert d.diff == y.extras["b"]  # bitwise: same class-mean kernel
            dis = (d.n0 * d.n1 / s.n ** 2) * d.diff ** 2
            assert abs(dis - y.components["VPB"]) <= 1e-12


class TestWilcoxon:
    def test_separated_example(self):
        t = wilcoxon_test(_series([0.2, 0.4], [0.6, 0.8]))
        assert t.statistic == pytest.approx(2.0 / math.sqrt(5.0 / 3.0), abs=1e-12)
        assert t.p_value == pytest.approx(0.0607, abs=2e-4)
        assert t.sided == "one-sided"

    def test_exact_enumeration_example(self):
        t = wilcoxon_exact_test(_series([0.2, 0.4], [0.6, 0.8]))
        assert t.p_value == pytest.approx(1 / 6, abs=1e-12)

    def test_exact_rejects_large_samples(self):
        rng = np.random.default_rng(0)
        s = _random_series(rng, max_n=60)
        while s.n <= 12:
            s = _random_series(rng, max_n=60)
        with pytest.raises(ValueError):
            wilcoxon_exact_test(s)

    def test_all_tied_raises(self):
        with pytest.raises(ZeroVariance):
            wilcoxon_test(validate_series([0.4, 0.4, 0.4], [0, 1, 1]))

    def test_matches_scipy_asymptotic(self):
        rng = np.random.default_rng(62)
        for _ in range(50):
            s = _random_series(rng, ties=True)
            try:
                ours = wilcoxon_test(s)
            except ZeroVariance:
                continue
            p0 = s.forecasts[s.outcomes == 0]
            p1 = s.forecasts[s.outcomes == 1]
            ref = scipy.stats.mannwhitneyu(p1, p0, alternative="greater",
                                           use_continuity=False,
                                           method="asymptotic")
            assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-12)


class TestKs:
    def test_fully_separated(self):
        t = ks_test(_series([0.2, 0.4], [0.6, 0.8]))
        assert t.statistic == 1.0

    def test_interleaved(self):
        t = ks_test(_series([0.2, 0.6], [0.4, 0.8]))
        assert t.statistic == 0.5

    def test_identical_samples(self):
        t = ks_test(_series([0.1, 0.5, 0.9], [0.1, 0.5, 0.9]))
        assert t.statistic == 0.0
        assert t.p_value == 1.0

    def test_statistic_matches_scipy(self):
        rng = np.random.default_rng(63)
        for _ in range(50):
            s = _random_series(rng, ties=True)
            p0 = s.forecasts[s.outcomes == 0]
            p1 = s.forecasts[s.outcomes == 1]
            ref = scipy.stats.ks_2samp(p0, p1, method="asymp")
            ours = ks_test(s)
            assert ours.statistic == pytest.approx(ref.statistic, abs=1e-12)
            # our asymptotic tail equals the Kolmogorov survival function
            n_eff = p0.size * p1.size / s.n
            expected = scipy.special.kolmogorov(math.sqrt(n_eff) * ours.statistic)
            assert ours.p_value == pytest.approx(min(1.0, expected), abs=1e-9)


class TestCStatistic:
    def test_perfect_separation(self):
        assert c_statistic(_series([0.2, 0.4], [0.6, 0.8])) == 1.0

    def test_single_tie(self):
        assert c_statistic(_series([0.5], [0.5])) == 0.5

    def test_hand_pair_count(self):
        assert c_statistic(_series([0.3, 0.5], [0.5, 0.7])) == 3.5 / 4

    def test_equals_brute_force_exactly(self):
        rng = np.random.default_rng(64)
        for _ in range(200):
            s = _random_series(rng, ties=bool(rng.integers(0, 2)))
            p0 = s.forecasts[s.outcomes == 0]
            p1 = s.forecasts[s.outcomes == 1]
            assert c_statistic(s) == concordance_brute_force(p0, p1)

    @given(st.lists(st.floats(0.01, 0.99), min_size=1, max_size=10),
           st.lists(st.floats(0.01, 0.99), min_size=1, max_size=10))
    @settings(max_examples=60, deadline=None)
    def test_monotone_invariance(self, p0, p1):
        s = _series(p0, p1)
        transformed = _series([v ** 3 for v in p0], [v ** 3 for v in p1])
        assert c_statistic(s) == c_statistic(transformed)
        assert ks_test(s).statistic == ks_test(transformed).statistic
        try:
            assert wilcoxon_test(s).statistic == wilcoxon_test(transformed).statistic
        except ZeroVariance:
            pass


class TestFiveNumberSummary:
    def test_type7_quartiles(self):
        values = [0.1, 0.2, 0.3, 0.4]
        assert five_number_summary(values) == pytest.approx(
            tuple(np.quantile(values, [0, 0.25, 0.5, 0.75, 1])))

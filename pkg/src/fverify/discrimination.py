"""Separation between the forecast distributions conditional on the
outcome: class means, rank-sum and Kolmogorov-Smirnov tests, and the
concordance (ROC-area) statistic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import fsum

import numpy as np

from ._numeric import class_means, five_numbers, kolmogorov_sf, midranks, normal_sf
from .domain import BinaryForecastSeries
from .errors import DegenerateClass, ZeroVariance
from .inference import TestResult


@dataclass(frozen=True)
class DiscriminationSummary:
    """Conditional-distribution characteristics of a binary series.

    ``diff`` (m1 - m0) equals the forecast-on-outcome regression
    coefficient used by the covariance decomposition.
    """

    n0: int
    n1: int
    m0: float
    m1: float
    diff: float
    wilcoxon: TestResult
    ks: TestResult
    c_statistic: float


def _split(series: BinaryForecastSeries) -> tuple[np.ndarray, np.ndarray]:
    mask = series.outcomes == 1.0
    p0 = series.forecasts[~mask]
    p1 = series.forecasts[mask]
    if p0.size == 0 or p1.size == 0:
        raise DegenerateClass("both outcome classes must be non-empty")
    return p0, p1


def wilcoxon_test(series: BinaryForecastSeries) -> TestResult:
    """Normal approximation of the rank-sum test with midranks.

    Tie-corrected variance, no continuity correction; one-sided p-value
    for class-1 forecasts being stochastically larger.
    """
    p0, p1 = _split(series)
    n0, n1 = p0.size, p1.size
    n = n0 + n1
    ranks = midranks(series.forecasts)
    w = fsum(ranks[series.outcomes == 1.0])
    mu = n1 * (n + 1) / 2.0
    _, tie_counts = np.unique(series.forecasts, return_counts=True)
    tie_term = float(np.sum(tie_counts.astype(float) ** 3 - tie_counts))
    variance = n0 * n1 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0.0:
        raise ZeroVariance("all forecasts are tied")
    z = (w - mu) / math.sqrt(variance)
    return TestResult(statistic=z, df=None, p_value=normal_sf(z), sided="one-sided")


def wilcoxon_exact_test(series: BinaryForecastSeries, max_n: int = 12) -> TestResult:
    """Exact permutation tail of the rank sum for small samples.

    Enumerates all class-1 index subsets; the one-sided p-value is the
    fraction of assignments with a rank sum at least as large as the one
    observed.
    """
    p0, p1 = _split(series)
    n = series.n
    if n > max_n:
        raise ValueError(f"exact enumeration is limited to N <= {max_n}, got {n}")
    ranks = midranks(series.forecasts)
    observed = fsum(ranks[series.outcomes == 1.0])
    at_least = 0
    total = 0
    for subset in itertools.combinations(range(n), p1.size):
        total += 1
        if fsum(ranks[list(subset)]) >= observed - 1e-12:
            at_least += 1
    return TestResult(statistic=observed, df=None, p_value=at_least / total,
                      sided="one-sided")


def ks_test(series: BinaryForecastSeries) -> TestResult:
    """Two-sample Kolmogorov-Smirnov test on the class-conditional CDFs.

    D = sup |F0 - F1| over the pooled sample points; p-value from the
    asymptotic Kolmogorov distribution at effective size n0 n1 / (n0+n1).
    """
    p0, p1 = _split(series)
    s0 = np.sort(p0)
    s1 = np.sort(p1)
    pooled = np.unique(series.forecasts)
    f0 = np.searchsorted(s0, pooled, side="right") / s0.size
    f1 = np.searchsorted(s1, pooled, side="right") / s1.size
    d = float(np.max(np.abs(f0 - f1)))
    n_eff = s0.size * s1.size / (s0.size + s1.size)
    return TestResult(statistic=d, df=None, p_value=kolmogorov_sf(d, n_eff),
                      sided="two-sided")


def c_statistic(series: BinaryForecastSeries) -> float:
    """Concordance index: P(class-1 forecast > class-0 forecast), ties 0.5.

    Computed in O(N log N) from the rank sum; agrees exactly with the
    quadratic pair count because midrank sums are exact multiples of 1/2.
    """
    p0, p1 = _split(series)
    n0, n1 = p0.size, p1.size
    ranks = midranks(series.forecasts)
    w1 = fsum(ranks[series.outcomes == 1.0])
    u1 = w1 - n1 * (n1 + 1) / 2.0
    return u1 / (n0 * n1)


def discrimination_summary(series: BinaryForecastSeries) -> DiscriminationSummary:
    """All conditional-distribution diagnostics in one record."""
    n0, n1, m0, m1 = class_means(series.forecasts, series.outcomes)
    if n0 == 0 or n1 == 0:
        raise DegenerateClass("both outcome classes must be non-empty")
    return DiscriminationSummary(
        n0=n0,
        n1=n1,
        m0=m0,
        m1=m1,
        diff=m1 - m0,
        wilcoxon=wilcoxon_test(series),
        ks=ks_test(series),
        c_statistic=c_statistic(series),
    )


def five_number_summary(values) -> tuple[float, float, float, float, float]:
    """Box-plot numbers (min, Q1, median, Q3, max) with type-7 quantiles."""
    return five_numbers(values)

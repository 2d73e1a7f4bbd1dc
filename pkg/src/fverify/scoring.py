"""Proper scoring rules evaluated per observation and as empirical means.

Conventions: lower is better for every rule here, all rules live on a
[0, 1]-comparable scale for binary or three-category inputs, and the
logarithmic (ignorance) score uses natural logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum

import numpy as np

from .domain import BinaryForecastSeries, MulticlassForecastSeries, outcome_index


@dataclass(frozen=True)
class ScoringRule:
    """Tagged scoring rule; ``epsilon`` only matters for the ignorance score."""

    tag: str  # half_brier | ignorance | zero_one | rps
    epsilon: float = 1e-12


HALF_BRIER = ScoringRule("half_brier")
IGNORANCE = ScoringRule("ignorance")
ZERO_ONE = ScoringRule("zero_one")
RPS = ScoringRule("rps")

_BINARY_TAGS = ("half_brier", "ignorance", "zero_one")


def _maybe_scalar(value, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return float(value)
    return value


def half_brier(p, x):
    """Quadratic score (p - x)^2.

    Perfect forecasts score 0; the worst possible forecast scores 1.
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    return _maybe_scalar((p - x) ** 2, p, x)


def ignorance(p, x, epsilon: float = 1e-12):
    """Logarithmic score -x log(p) - (1 - x) log(1 - p), natural log.

    The forecast is clamped to [epsilon, 1 - epsilon] first so degenerate
    forecasts stay finite while still being punished hard.
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    q = np.clip(p, epsilon, 1.0 - epsilon)
    return _maybe_scalar(-x * np.log(q) - (1.0 - x) * np.log1p(-q), p, x)


def zero_one(p, x):
    """Categorical miss indicator with the fair-coin tie convention.

    0 for a correct side of 0.5, 1 for the wrong side, 0.5 when p is
    exactly 0.5.
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    miss = ((p > 0.5) & (x == 0.0)) | ((p < 0.5) & (x == 1.0))
    out = np.where(p == 0.5, 0.5, miss.astype(float))
    return _maybe_scalar(out, p, x)


def rps(probabilities, outcome) -> float:
    """Ranked probability score for one (pH, pD, pA) vector.

    Mean squared gap between forecast and outcome CDFs over the ordered
    categories H < D < A, normalized by the number of categories minus
    one so the score lives in [0, 1].
    """
    probs = np.asarray(probabilities, dtype=float)
    if probs.shape != (3,):
        raise ValueError("rps expects a length-3 probability vector")
    idx = outcome if isinstance(outcome, (int, np.integer)) else outcome_index(outcome)
    cum_p = np.cumsum(probs)[:2]
    cum_x = (np.arange(2) >= idx).astype(float)
    return fsum((cum_p - cum_x) ** 2) / 2.0


def _binary_scores(series: BinaryForecastSeries, rule: ScoringRule) -> np.ndarray:
    p = series.forecasts
    x = series.outcomes
    if rule.tag == "half_brier":
        return half_brier(p, x)
    if rule.tag == "ignorance":
        return ignorance(p, x, rule.epsilon)
    if rule.tag == "zero_one":
        return zero_one(p, x)
    raise ValueError(f"rule {rule.tag!r} does not apply to binary series")


def mean_score(series: BinaryForecastSeries, rule: ScoringRule = HALF_BRIER) -> float:
    """Empirical mean score over the series, compensated summation.

    The mean is exactly rounded, hence invariant under permutation of the
    observations.
    """
    if rule.tag not in _BINARY_TAGS:
        raise ValueError("use mean_rps for ranked probability scoring")
    return fsum(_binary_scores(series, rule)) / series.n


def mean_rps(series: MulticlassForecastSeries) -> float:
    """Mean ranked probability score of a three-category series."""
    cum_p = np.cumsum(series.probabilities, axis=1)[:, :2]
    cum_x = (np.arange(2)[None, :] >= series.outcomes[:, None]).astype(float)
    per_row = ((cum_p - cum_x) ** 2).sum(axis=1) / 2.0
    return fsum(per_row) / series.n

"""Shared numeric kernels: compensated means, stable link functions,
closed-form survival functions, midranks."""

from __future__ import annotations

import math
from math import fsum

import numpy as np

_SQRT2 = math.sqrt(2.0)


def fmean(values) -> float:
    """Compensated (exactly rounded) arithmetic mean."""
    values = np.asarray(values, dtype=float)
    return fsum(values) / values.size


def population_variance(values) -> float:
    """Two-pass population variance (divide by N)."""
    values = np.asarray(values, dtype=float)
    m = fmean(values)
    return fsum((values - m) ** 2) / values.size


def population_covariance(a, b) -> float:
    """Two-pass population covariance (divide by N)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ma = fmean(a)
    mb = fmean(b)
    return fsum((a - ma) * (b - mb)) / a.size


def class_means(forecasts, outcomes) -> tuple[int, int, float, float]:
    """Counts and mean forecasts conditional on the binary outcome.

    Returns (n0, n1, m0, m1); a mean is NaN when its class is empty.
    """
    forecasts = np.asarray(forecasts, dtype=float)
    outcomes = np.asarray(outcomes, dtype=float)
    mask1 = outcomes == 1.0
    p0 = forecasts[~mask1]
    p1 = forecasts[mask1]
    m0 = fsum(p0) / p0.size if p0.size else math.nan
    m1 = fsum(p1) / p1.size if p1.size else math.nan
    return p0.size, p1.size, m0, m1


def normal_sf(z: float) -> float:
    """Standard normal survival function P(Z > z)."""
    return 0.5 * math.erfc(z / _SQRT2)


def chi2_sf(x: float, df: int) -> float:
    """Chi-square survival function for df in {1, 2} (closed forms)."""
    x = max(float(x), 0.0)
    if df == 1:
        return math.erfc(math.sqrt(x / 2.0))
    if df == 2:
        return math.exp(-x / 2.0)
    raise ValueError(f"df must be 1 or 2, got {df}")


def kolmogorov_sf(d: float, n_eff: float, terms: int = 100) -> float:
    """Asymptotic two-sample Kolmogorov survival probability.

    Alternating series 2 * sum_k (-1)^(k-1) exp(-2 k^2 n_eff d^2),
    truncated and clipped to [0, 1].
    """
    lam2 = n_eff * d * d
    if lam2 == 0.0:
        return 1.0
    total = 0.0
    for k in range(1, terms + 1):
        term = math.exp(-2.0 * k * k * lam2)
        total += term if k % 2 else -term
    return min(1.0, max(0.0, 2.0 * total))


def midranks(values) -> np.ndarray:
    """Ranks starting at 1 with tied observations given their average rank."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=float)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def logit(p):
    """log(p / (1 - p)), +-inf at the boundary."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log(p) - np.log1p(-p)


def expit(z):
    """Numerically stable inverse logit."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def log_expit(z):
    """log(expit(z)) without underflow."""
    z = np.asarray(z, dtype=float)
    return -np.logaddexp(0.0, -z)


def five_numbers(values) -> tuple[float, float, float, float, float]:
    """Min, lower quartile, median, upper quartile, max (type-7 quantiles)."""
    values = np.asarray(values, dtype=float)
    q = np.quantile(values, [0.0, 0.25, 0.5, 0.75, 1.0])
    return tuple(float(v) for v in q)

"""Brute-force reference implementations used to pin expected values.

These deliberately share no code with the library paths they check.
"""

from __future__ import annotations

from math import fsum

import numpy as np


def isotonic_brute_force(values):
    """Least-squares non-decreasing fit by exhaustive enumeration.

    Tries every consecutive-block partition whose block means are
    monotone non-decreasing and returns (minimal SSE, fitted vector).
    Exponential in len(values); only for tiny inputs.
    """
    y = [float(v) for v in values]
    n = len(y)
    best_sse = None
    best_fit = None
    for mask in range(1 << (n - 1)):
        cuts = [i + 1 for i in range(n - 1) if (mask >> i) & 1]
        bounds = [0] + cuts + [n]
        means = [fsum(y[a:b]) / (b - a) for a, b in zip(bounds, bounds[1:])]
        if any(m0 > m1 for m0, m1 in zip(means, means[1:])):
            continue
        fitted = []
        for (a, b), m in zip(zip(bounds, bounds[1:]), means):
            fitted.extend([m] * (b - a))
        sse = fsum((q - v) ** 2 for q, v in zip(fitted, y))
        if best_sse is None or sse < best_sse:
            best_sse = sse
            best_fit = np.asarray(fitted)
    return best_sse, best_fit


def isotonic_calibration_brute_force(sorted_p, sorted_x):
    """Exhaustive minimum for the recalibration problem.

    The fit is a function of the forecast value, so observations sharing
    a forecast form an atomic group; blocks are consecutive unions of
    groups with monotone non-decreasing weighted means. Returns
    (minimal SSE, fitted vector aligned to the sorted observations).
    """
    sorted_p = np.asarray(sorted_p, dtype=float)
    sorted_x = np.asarray(sorted_x, dtype=float)
    starts = [0] + [i for i in range(1, sorted_p.size)
                    if sorted_p[i] != sorted_p[i - 1]]
    edges = starts + [sorted_p.size]
                        # observation slices of the tie groups
    g = len(starts)
    best_sse = None
    best_fit = None
    for mask in range(1 << (g - 1)):
        cuts = [i + 1 for i in range(g - 1) if (mask >> i) & 1]
        bounds = [0] + cuts + [g]
        means = []
        for a, b in zip(bounds, bounds[1:]):
            lo, hi = edges[a], edges[b]
            means.append(fsum(sorted_x[lo:hi]) / (hi - lo))
        if any(m0 > m1 for m0, m1 in zip(means, means[1:])):
            continue
        fitted = np.empty(sorted_p.size)
        for (a, b), m in zip(zip(bounds, bounds[1:]), means):
            fitted[edges[a]:edges[b]] = m
        sse = fsum((fitted - sorted_x) ** 2)
        if best_sse is None or sse < best_sse:
            best_sse = sse
            best_fit = fitted
    return best_sse, best_fit


def concordance_brute_force(p0, p1) -> float:
    """Quadratic pair count of P(class-1 forecast > class-0), ties 0.5."""
    total = 0.0
    for a in p1:
        for b in p0:
            if a > b:
                total += 1.0
            elif a == b:
                total += 0.5
    return total / (len(p0) * len(p1))


def per_value_components(series) -> tuple[float, float]:
    """Reliability and resolution summed over unique forecast values."""
    p = series.forecasts
    x = series.outcomes
    xbar = series.base_rate
    rel = 0.0
    res = 0.0
    for v in np.unique(p):
        mask = p == v
        nk = int(mask.sum())
        xk = fsum(x[mask]) / nk
        rel += nk * (xk - v) ** 2
        res += nk * (xk - xbar) ** 2
    return rel / series.n, res / series.n


def lb_class_conditional_cb2(series) -> float:
    """Type-2 conditional bias straight from its definition:
    the outcome-class-weighted squared gap between the class mean
    forecast and the outcome value."""
    p = series.forecasts
    x = series.outcomes
    n = series.n
    cb2 = 0.0
    for value in (0.0, 1.0):
        cls = p[x == value]
        if cls.size:
            cb2 += (cls.size / n) * (fsum(cls) / cls.size - value) ** 2
    return cb2

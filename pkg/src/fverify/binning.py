"""Partition forecasts into bins by fixed thresholds, quantiles, or
pool-adjacent-violators isotonic regression.

Every method produces a :class:`~fverify.domain.BinnedForecasts` whose
recalibrated vector replaces each forecast by the event frequency of its
bin. Fixed intervals are half-open [lo, hi) except the last bin, which
is closed at 1 so that p = 1.0 is always binned.
"""

from __future__ import annotations

from math import fsum

import numpy as np

from .domain import BinaryForecastSeries, BinnedForecasts
from .errors import BadBinCount, NonAscendingThresholds

#: Named fixed-threshold presets for the three match-outcome categories:
#: ten equal bins for home wins, the five stated draw bounds (six
#: intervals), and seven equal bins to 0.7 plus [0.7, 1] for away wins.
PRESETS: dict[str, tuple[float, ...]] = {
    "hwin10": tuple(k / 10.0 for k in range(1, 10)),
    "draw5": (0.10, 0.15, 0.20, 0.25, 0.35),
    "awin8": tuple(k / 10.0 for k in range(1, 8)),
}


def preset_thresholds(name: str) -> tuple[float, ...]:
    """Thresholds of a named preset; KeyError lists the known names."""
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None


def _assemble(series: BinaryForecastSeries, bin_ids: np.ndarray,
              total_bins: int, original_lowers: np.ndarray,
              method: str) -> BinnedForecasts:
    """Build a BinnedForecasts from per-observation bin membership.

    ``original_lowers[d]`` is the lower edge of original bin d. Empty
    bins are dropped; retained bins are re-tiled so they cover [0, 1].
    """
    counts = np.bincount(bin_ids, minlength=total_bins)
    event_sums = np.bincount(bin_ids, weights=series.outcomes, minlength=total_bins)
    forecast_sums = np.bincount(bin_ids, weights=series.forecasts, minlength=total_bins)
    with np.errstate(invalid="ignore"):
        freqs_full = event_sums / counts
    keep = counts > 0
    lowers = original_lowers[keep].astype(float).copy()
    lowers[0] = 0.0
    uppers = np.append(lowers[1:], 1.0)
    return BinnedForecasts(
        lower_bounds=lowers,
        upper_bounds=uppers,
        mean_forecasts=forecast_sums[keep] / counts[keep],
        event_frequencies=freqs_full[keep],
        counts=counts[keep],
        recalibrated=freqs_full[bin_ids],
        method=method,
    )


def _bin_by_edges(series: BinaryForecastSeries, thresholds: np.ndarray,
                  method: str) -> BinnedForecasts:
    edges = np.concatenate(([0.0], thresholds, [1.0]))
    ids = np.searchsorted(edges, series.forecasts, side="right") - 1
    ids = np.minimum(ids, edges.size - 2)  # p = 1.0 joins the last bin
    return _assemble(series, ids, edges.size - 1, edges[:-1], method)


def bin_fixed(series: BinaryForecastSeries, thresholds) -> BinnedForecasts:
    """Bin by explicit interior breakpoints.

    Thresholds must be strictly ascending and inside (0, 1); the bins are
    [0, t1), [t1, t2), ..., [tk, 1].
    """
    t = np.asarray(thresholds, dtype=float).reshape(-1)
    if t.size == 0:
        raise NonAscendingThresholds("at least one threshold is required")
    if np.any(np.diff(t) <= 0.0):
        raise NonAscendingThresholds(f"thresholds {t.tolist()} are not strictly ascending")
    if t[0] <= 0.0 or t[-1] >= 1.0:
        raise NonAscendingThresholds(f"thresholds {t.tolist()} must lie strictly inside (0, 1)")
    return _bin_by_edges(series, t, "fixed")


def bin_quantile(series: BinaryForecastSeries, bin_count: int) -> BinnedForecasts:
    """Bin at empirical quantiles k/D of the forecast sample.

    Type-7 (linear interpolation) quantiles; duplicate breakpoints are
    merged, so heavily tied samples may yield fewer than D bins.
    """
    d = int(bin_count)
    if not 1 <= d <= series.n:
        raise BadBinCount(f"bin count {bin_count} is outside [1, {series.n}]")
    if d == 1:
        t = np.empty(0)
    else:
        q = np.quantile(series.forecasts, np.arange(1, d) / d)
        t = np.unique(q)
        t = t[(t > 0.0) & (t < 1.0)]
    return _bin_by_edges(series, t, "quantile")


def bin_preset(series: BinaryForecastSeries, name: str) -> BinnedForecasts:
    """Fixed binning with a named preset's thresholds."""
    return bin_fixed(series, preset_thresholds(name))


def _pav_blocks(sums, sizes) -> tuple[list[float], list[int]]:
    """Pool-adjacent-violators pass over pre-aggregated points.

    ``sums[i]`` and ``sizes[i]`` describe one point as a (value total,
    weight) pair. Returns (block sums, block sizes) of the least-squares
    non-decreasing fit; blocks with equal means are merged, so block
    means end up strictly increasing. Comparisons are done on
    cross-multiplied sums, which is exact for integer-valued inputs such
    as binary outcomes.
    """
    out_sums: list[float] = []
    out_sizes: list[int] = []
    for cur_sum, cur_size in zip(sums, sizes):
        cur_sum = float(cur_sum)
        cur_size = int(cur_size)
        # pool while the previous block mean is >= the current one
        while out_sums and out_sums[-1] * cur_size >= cur_sum * out_sizes[-1]:
            cur_sum += out_sums.pop()
            cur_size += out_sizes.pop()
        out_sums.append(cur_sum)
        out_sizes.append(cur_size)
    return out_sums, out_sizes


def _tie_groups(sorted_p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Start indices and sizes of the runs of equal values in a sorted array."""
    starts = np.flatnonzero(np.concatenate(([True], sorted_p[1:] != sorted_p[:-1])))
    sizes = np.diff(np.append(starts, sorted_p.size))
    return starts, sizes


def pav_fit(values) -> np.ndarray:
    """Least-squares non-decreasing fit to a sequence, in sequence order.

    Applying pav_fit to its own output returns it unchanged: a monotone
    sequence is its own optimal fit, so it is returned as-is rather than
    re-pooled (which could perturb the last bit of repeated values).
    """
    seq = np.asarray(values, dtype=float).reshape(-1)
    if np.all(np.diff(seq) >= 0.0):
        return seq.copy()
    sums, sizes = _pav_blocks(seq.tolist(), [1] * seq.size)
    return np.repeat(np.asarray(sums) / np.asarray(sizes), sizes)


def pav_calibrate(series: BinaryForecastSeries) -> BinnedForecasts:
    """Isotonic-regression binning of outcomes on forecasts.

    Observations are ordered by (forecast, original index) and tied
    forecasts are pooled into one weighted point first, since the fitted
    curve is a function of the forecast value. The maximal constant
    blocks of the monotone least-squares fit become the bins, and each
    observation is recalibrated to its block value. Boundaries between
    blocks sit halfway between the adjacent block forecast ranges.
    """
    order = np.argsort(series.forecasts, kind="stable")
    ps = series.forecasts[order]
    xs = series.outcomes[order]
    group_starts, group_sizes = _tie_groups(ps)
    sums, sizes = _pav_blocks(np.add.reduceat(xs, group_starts), group_sizes)
    sizes_arr = np.asarray(sizes, dtype=np.int64)
    values = np.asarray(sums) / sizes_arr
    starts = np.concatenate(([0], np.cumsum(sizes_arr)[:-1]))
    ends = np.cumsum(sizes_arr)

    lowers = np.empty(sizes_arr.size)
    lowers[0] = 0.0
    lowers[1:] = 0.5 * (ps[ends[:-1] - 1] + ps[starts[1:]])
    uppers = np.append(lowers[1:], 1.0)

    mean_forecasts = np.array(
        [fsum(ps[a:b]) / (b - a) for a, b in zip(starts, ends)])
    recalibrated = np.empty(series.n)
    recalibrated[order] = np.repeat(values, sizes_arr)
    return BinnedForecasts(
        lower_bounds=lowers,
        upper_bounds=uppers,
        mean_forecasts=mean_forecasts,
        event_frequencies=values,
        counts=sizes_arr,
        recalibrated=recalibrated,
        method="pav",
    )

"""Reliability-diagram data: calibration points, marginal forecast
histogram, resampled consistency bands, and CSV/SVG rendering.

Bands are computed under the calibration null: outcomes are redrawn as
independent Bernoulli trials with the observed forecasts as success
probabilities, the isotonic recalibration is refit per replicate, and
pointwise empirical quantiles of the refit curves form the band.
Replicate r draws from a stream derived from (seed, r), so results do
not depend on execution order or the thread cap.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .binning import _pav_blocks, _tie_groups
from .domain import BinaryForecastSeries, BinnedForecasts
from .errors import BadLevel, BadReps

#: Evaluation grid for the band, intersected with the observed forecast range.
GRID = np.arange(101) / 100.0

HISTOGRAM_CELLS = 20


@dataclass(frozen=True)
class DiagramData:
    """Everything needed to draw one reliability diagram."""

    point_forecasts: np.ndarray
    point_frequencies: np.ndarray
    point_counts: np.ndarray
    band_grid: np.ndarray
    band_lower: np.ndarray
    band_upper: np.ndarray
    histogram: np.ndarray
    level: float
    reps: int
    seed: int

    def __post_init__(self):
        if self.band_grid.size and np.any(self.band_lower > self.band_upper):
            raise ValueError("band lower bound exceeds upper bound")
        for name in ("point_forecasts", "point_frequencies", "point_counts",
                     "band_grid", "band_lower", "band_upper", "histogram"):
            arr = np.asarray(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _thread_cap() -> int:
    raw = os.environ.get("FVERIFY_THREADS", "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            cap = 0
        if cap > 0:
            return cap
    return os.cpu_count() or 1


def _step_eval(sorted_p: np.ndarray, group_starts: np.ndarray,
               group_sizes: np.ndarray, xs: np.ndarray,
               grid: np.ndarray) -> np.ndarray:
    """Refit PAV on outcomes (sorted-forecast order, ties pre-pooled) and
    evaluate the step function at the grid points, with block edges at
    forecast midpoints."""
    sums, sizes = _pav_blocks(np.add.reduceat(xs, group_starts), group_sizes)
    sizes_arr = np.asarray(sizes, dtype=np.int64)
    values = np.asarray(sums) / sizes_arr
    starts = np.concatenate(([0], np.cumsum(sizes_arr)[:-1]))
    ends = np.cumsum(sizes_arr)
    lowers = np.empty(sizes_arr.size)
    lowers[0] = 0.0
    lowers[1:] = 0.5 * (sorted_p[ends[:-1] - 1] + sorted_p[starts[1:]])
    idx = np.searchsorted(lowers, grid, side="right") - 1
    return values[idx]


def diagram_data(series: BinaryForecastSeries, binned: BinnedForecasts, *,
                 level: float = 0.95, reps: int = 1000, seed: int = 0,
                 with_band: bool = True) -> DiagramData:
    """Assemble diagram data for a series and its binning.

    ``reps`` must be at least 100 and ``level`` inside (0.5, 1). Fixed
    inputs and seed give bit-identical output whatever the thread cap.
    """
    if not 0.5 < level < 1.0:
        raise BadLevel(f"level {level!r} must lie in (0.5, 1)")
    if with_band and reps < 100:
        raise BadReps(f"reps {reps!r} must be at least 100")

    order = np.argsort(series.forecasts, kind="stable")
    sorted_p = series.forecasts[order]
    grid = GRID[(GRID >= sorted_p[0]) & (GRID <= sorted_p[-1])]

    if with_band and grid.size:
        group_starts, group_sizes = _tie_groups(sorted_p)
        curves = np.empty((reps, grid.size))

        def one_replicate(r: int) -> None:
            rng = np.random.default_rng(
                np.random.SeedSequence(entropy=seed, spawn_key=(r,)))
            resampled = (rng.random(sorted_p.size) < sorted_p).astype(float)
            curves[r] = _step_eval(sorted_p, group_starts, group_sizes,
                                   resampled, grid)

        workers = min(_thread_cap(), reps)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                list(pool.map(one_replicate, range(reps)))
        else:
            for r in range(reps):
                one_replicate(r)
        lower = np.quantile(curves, (1.0 - level) / 2.0, axis=0)
        upper = np.quantile(curves, (1.0 + level) / 2.0, axis=0)
    else:
        grid = np.empty(0)
        lower = np.empty(0)
        upper = np.empty(0)

    histogram = np.histogram(series.forecasts, bins=HISTOGRAM_CELLS,
                             range=(0.0, 1.0))[0]
    return DiagramData(
        point_forecasts=binned.mean_forecasts.copy(),
        point_frequencies=binned.event_frequencies.copy(),
        point_counts=binned.counts.copy(),
        band_grid=grid,
        band_lower=lower,
        band_upper=upper,
        histogram=histogram,
        level=level,
        reps=reps,
        seed=seed,
    )


def export_csv(data: DiagramData) -> str:
    """Three-section CSV (points, band, histogram), fixed 6-decimal floats."""
    lines = ["section,p,value,lower,upper,count"]
    for p, v, n in zip(data.point_forecasts, data.point_frequencies,
                       data.point_counts):
        lines.append(f"points,{p:.6f},{v:.6f},,,{int(n)}")
    for g, lo, hi in zip(data.band_grid, data.band_lower, data.band_upper):
        lines.append(f"band,{g:.6f},,{lo:.6f},{hi:.6f},")
    for i, count in enumerate(data.histogram):
        center = (i + 0.5) / HISTOGRAM_CELLS
        lines.append(f"histogram,{center:.6f},,,,{int(count)}")
    return "\n".join(lines) + "\n"


# SVG geometry: fixed 800x600 canvas, calibration square on top,
# marginal histogram strip underneath.
_W, _H = 800, 600
_PLOT = (80.0, 30.0, 760.0, 440.0)   # x0, y0, x1, y1
_STRIP = (80.0, 480.0, 760.0, 560.0)


def _px(p: float) -> float:
    x0, _, x1, _ = _PLOT
    return x0 + p * (x1 - x0)


def _py(v: float) -> float:
    _, y0, _, y1 = _PLOT
    return y1 - v * (y1 - y0)


def render_svg(data: DiagramData) -> str:
    """Standalone deterministic SVG: unit square, diagonal, band polygon,
    calibration points sized by bin count, histogram strip."""
    x0, y0, x1, y1 = _PLOT
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{x1 - x0:.2f}" '
        f'height="{y1 - y0:.2f}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    # axis ticks and labels every 0.2
    for k in range(6):
        t = k / 5.0
        parts.append(
            f'<text x="{_px(t):.2f}" y="{y1 + 18:.2f}" font-size="12" '
            f'text-anchor="middle">{t:.1f}</text>')
        parts.append(
            f'<text x="{x0 - 8:.2f}" y="{_py(t) + 4:.2f}" font-size="12" '
            f'text-anchor="end">{t:.1f}</text>')
    parts.append(
        f'<text x="{(x0 + x1) / 2:.2f}" y="{y1 + 38:.2f}" font-size="13" '
        f'text-anchor="middle">forecast probability</text>')
    parts.append(
        f'<text x="{x0 - 52:.2f}" y="{(y0 + y1) / 2:.2f}" font-size="13" '
        f'text-anchor="middle" transform="rotate(-90 {x0 - 52:.2f} '
        f'{(y0 + y1) / 2:.2f})">conditional event probability</text>')

    if data.band_grid.size:
        coords = [f"{_px(g):.2f},{_py(u):.2f}"
                  for g, u in zip(data.band_grid, data.band_upper)]
        coords += [f"{_px(g):.2f},{_py(l):.2f}"
                   for g, l in zip(data.band_grid[::-1], data.band_lower[::-1])]
        parts.append(
            f'<polygon points="{" ".join(coords)}" fill="#9ecae1" '
            f'fill-opacity="0.55" stroke="none"/>')

    parts.append(
        f'<line x1="{_px(0):.2f}" y1="{_py(0):.2f}" x2="{_px(1):.2f}" '
        f'y2="{_py(1):.2f}" stroke="#888888" stroke-width="1" '
        f'stroke-dasharray="5,4"/>')

    if data.point_forecasts.size:
        path = " ".join(
            f"{'M' if i == 0 else 'L'}{_px(p):.2f},{_py(v):.2f}"
            for i, (p, v) in enumerate(zip(data.point_forecasts,
                                           data.point_frequencies)))
        parts.append(
            f'<path d="{path}" fill="none" stroke="#d62728" stroke-width="1.5"/>')
        max_count = int(data.point_counts.max())
        for p, v, n in zip(data.point_forecasts, data.point_frequencies,
                           data.point_counts):
            radius = 2.5 + 5.0 * (float(n) / max_count) ** 0.5
            parts.append(
                f'<circle cx="{_px(p):.2f}" cy="{_py(v):.2f}" r="{radius:.2f}" '
                f'fill="#d62728" fill-opacity="0.8"/>')

    sx0, sy0, sx1, sy1 = _STRIP
    parts.append(
        f'<rect x="{sx0:.2f}" y="{sy0:.2f}" width="{sx1 - sx0:.2f}" '
        f'height="{sy1 - sy0:.2f}" fill="none" stroke="black" stroke-width="1"/>')
    max_hist = int(data.histogram.max()) if data.histogram.size else 0
    if max_hist > 0:
        cell_w = (sx1 - sx0) / HISTOGRAM_CELLS
        for i, count in enumerate(data.histogram):
            bar_h = (sy1 - sy0) * (float(count) / max_hist)
            parts.append(
                f'<rect x="{sx0 + i * cell_w:.2f}" y="{sy1 - bar_h:.2f}" '
                f'width="{cell_w:.2f}" height="{bar_h:.2f}" fill="#555555"/>')
    parts.append(
        f'<text x="{(sx0 + sx1) / 2:.2f}" y="{sy1 + 24:.2f}" font-size="13" '
        f'text-anchor="middle">forecast counts</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

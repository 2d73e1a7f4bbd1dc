"""Core validated value types: forecast series, bin partitions, and
score decompositions.

All types are immutable after construction (frozen dataclasses holding
read-only arrays), so they can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import fsum
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadProbability,
    BadOutcomeLabel,
    EmptySeries,
    LengthMismatch,
    NonBinaryOutcome,
    OutOfRangeProbability,
)

#: Ordered outcome categories for three-way match results.
CATEGORIES = ("H", "D", "A")

#: Decomposition method tags.
CR = "CR"
LB = "LB"
YATES = "YATES"

#: Probabilities may stray outside [0, 1] by at most this much before
#: construction fails; smaller violations are treated as float noise.
PROBABILITY_CLAMP = 1e-9

#: Multiclass rows whose probabilities sum within this tolerance of 1
#: are renormalized; larger deviations are rejected.
ROW_SUM_TOLERANCE = 1e-6

#: Slack added to the row-sum comparison: probabilities printed with six
#: decimals can sum exactly one tolerance unit away from 1, and the
#: comparison must not flip on representation noise.
_ROW_SUM_SLACK = 1e-9


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def _clamp_probabilities(values: np.ndarray, what: str) -> np.ndarray:
    bad = (values < -PROBABILITY_CLAMP) | (values > 1.0 + PROBABILITY_CLAMP)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise OutOfRangeProbability(f"{what}[{i}] = {values[i]!r} is outside [0, 1]")
    return np.clip(values, 0.0, 1.0)


@dataclass(frozen=True)
class BinaryForecastSeries:
    """Index-aligned pairs of forecast probabilities and binary outcomes."""

    forecasts: np.ndarray
    outcomes: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.forecasts, dtype=float).reshape(-1).copy()
        x = np.asarray(self.outcomes, dtype=float).reshape(-1).copy()
        if p.size == 0 or x.size == 0:
            raise EmptySeries("a series needs at least one observation")
        if p.size != x.size:
            raise LengthMismatch(f"{p.size} forecasts vs {x.size} outcomes")
        p = _clamp_probabilities(p, "forecasts")
        if not np.all((x == 0.0) | (x == 1.0)):
            i = int(np.argmax((x != 0.0) & (x != 1.0)))
            raise NonBinaryOutcome(f"outcomes[{i}] = {x[i]!r} is not 0 or 1")
        object.__setattr__(self, "forecasts", _readonly(p))
        object.__setattr__(self, "outcomes", _readonly(x))

    @property
    def n(self) -> int:
        return self.forecasts.size

    def __len__(self) -> int:
        return self.forecasts.size

    @property
    def base_rate(self) -> float:
        """Event frequency x-bar."""
        return fsum(self.outcomes) / self.n


def validate_series(forecasts, outcomes) -> BinaryForecastSeries:
    """Validate raw sequences into an immutable BinaryForecastSeries.

    Probabilities outside [0, 1] by at most 1e-9 are clamped, larger
    violations raise OutOfRangeProbability.
    """
    return BinaryForecastSeries(np.asarray(forecasts, dtype=float),
                                np.asarray(outcomes, dtype=float))


@dataclass(frozen=True)
class MulticlassForecastSeries:
    """Per-match (H, D, A) probability vectors plus the realized category.

    Rows whose probabilities sum within 1e-6 of one are renormalized on
    construction; larger deviations raise BadProbability.
    """

    match_ids: tuple[str, ...]
    probabilities: np.ndarray
    outcomes: np.ndarray  # category indices into CATEGORIES

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float).copy()
        outs = np.asarray(self.outcomes)
        ids = tuple(str(m) for m in self.match_ids)
        if probs.ndim != 2 or probs.shape[1] != 3:
            raise BadProbability("probabilities must be an (N, 3) array")
        if probs.shape[0] == 0:
            raise EmptySeries("a series needs at least one row")
        if len(ids) != probs.shape[0] or outs.shape[0] != probs.shape[0]:
            raise LengthMismatch("match_ids, probabilities and outcomes differ in length")
        probs = _clamp_probabilities(probs, "probabilities")
        sums = probs.sum(axis=1)
        off = np.abs(sums - 1.0)
        if np.any(off > ROW_SUM_TOLERANCE + _ROW_SUM_SLACK):
            i = int(np.argmax(off > ROW_SUM_TOLERANCE + _ROW_SUM_SLACK))
            raise BadProbability(
                f"row {ids[i]!r}: probabilities sum to {sums[i]:.8f}, not 1")
        probs = probs / sums[:, None]
        outs = outs.astype(np.int8)
        if not np.all((outs >= 0) & (outs <= 2)):
            raise BadOutcomeLabel("outcome index must be 0 (H), 1 (D) or 2 (A)")
        object.__setattr__(self, "match_ids", ids)
        object.__setattr__(self, "probabilities", _readonly(probs))
        object.__setattr__(self, "outcomes", _readonly(outs))

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, Sequence[float], str]]) -> "MulticlassForecastSeries":
        """Build a series from (match_id, (pH, pD, pA), outcome-label) rows."""
        ids, probs, outs = [], [], []
        for match_id, vector, label in rows:
            ids.append(match_id)
            probs.append(tuple(vector))
            outs.append(outcome_index(label))
        if not ids:
            raise EmptySeries("no rows supplied")
        return cls(tuple(ids), np.asarray(probs, dtype=float),
                   np.asarray(outs, dtype=np.int8))

    @property
    def n(self) -> int:
        return self.probabilities.shape[0]

    def __len__(self) -> int:
        return self.n

    @property
    def outcome_labels(self) -> tuple[str, ...]:
        return tuple(CATEGORIES[i] for i in self.outcomes)


def outcome_index(label: str) -> int:
    """Map an H/D/A label (case-insensitive) to its category index."""
    norm = str(label).strip().upper()
    if norm not in CATEGORIES:
        raise BadOutcomeLabel(f"outcome label {label!r} is not one of H, D, A")
    return CATEGORIES.index(norm)


@dataclass(frozen=True)
class BinnedForecasts:
    """A bin partition of [0, 1] with per-bin statistics and the
    recalibrated vector aligned to the original observations.

    Bins tile [0, 1]: half-open [lower, upper) except the last, which is
    closed at 1. Empty bins have been dropped and their ranges absorbed
    into the preceding retained bin.
    """

    lower_bounds: np.ndarray
    upper_bounds: np.ndarray
    mean_forecasts: np.ndarray
    event_frequencies: np.ndarray
    counts: np.ndarray
    recalibrated: np.ndarray
    method: str  # "fixed" | "quantile" | "pav"

    def __post_init__(self):
        lo = np.asarray(self.lower_bounds, dtype=float).copy()
        hi = np.asarray(self.upper_bounds, dtype=float).copy()
        pd = np.asarray(self.mean_forecasts, dtype=float).copy()
        xd = np.asarray(self.event_frequencies, dtype=float).copy()
        nd = np.asarray(self.counts, dtype=np.int64).copy()
        rec = np.asarray(self.recalibrated, dtype=float).copy()
        d = lo.size
        if not (hi.size == pd.size == xd.size == nd.size == d) or d == 0:
            raise LengthMismatch("bin arrays must be non-empty and equal length")
        if np.any(nd < 1):
            raise ValueError("retained bins must be non-empty")
        if int(nd.sum()) != rec.size:
            raise LengthMismatch("bin counts do not add up to the series length")
        if lo[0] != 0.0 or hi[-1] != 1.0 or np.any(lo[1:] != hi[:-1]) or np.any(lo > hi):
            raise ValueError("bins must be ordered, non-overlapping and cover [0, 1]")
        if np.any((xd < 0.0) | (xd > 1.0)):
            raise ValueError("event frequencies must lie in [0, 1]")
        if self.method not in ("fixed", "quantile", "pav"):
            raise ValueError(f"unknown binning method {self.method!r}")
        if self.method == "pav" and d > 1 and not np.all(np.diff(xd) > 0.0):
            raise ValueError("pav bin values must be strictly increasing")
        for name, arr in (("lower_bounds", lo), ("upper_bounds", hi),
                          ("mean_forecasts", pd), ("event_frequencies", xd),
                          ("counts", nd), ("recalibrated", rec)):
            object.__setattr__(self, name, _readonly(arr))

    @property
    def n(self) -> int:
        return self.recalibrated.size

    @property
    def bin_count(self) -> int:
        return self.counts.size

    @property
    def bins(self) -> list[tuple[float, float, float, float, int]]:
        """(lower, upper, mean forecast, event frequency, count) per bin."""
        return [
            (float(l), float(u), float(p), float(x), int(n))
            for l, u, p, x, n in zip(self.lower_bounds, self.upper_bounds,
                                     self.mean_forecasts, self.event_frequencies,
                                     self.counts)
        ]


@dataclass(frozen=True)
class ScoreDecomposition:
    """Named components of one mean-score decomposition.

    ``components`` holds the canonical nonnegative component values; the
    method-specific signs live in :meth:`reconstructed_score` and in the
    signed :meth:`contributions` view used for reporting.
    """

    method: str  # CR | LB | YATES
    components: dict[str, float]
    mean_score: float
    uncertainty: float
    skill: float | None = None
    flags: tuple[str, ...] = ()
    extras: dict[str, float] = field(default_factory=dict)

    _KEYS = {
        CR: ("REL", "RES", "UNC"),
        LB: ("REF", "DIS", "CB2"),
        YATES: ("UNC", "COV", "VPB", "VPW", "RIL"),
    }

    def __post_init__(self):
        if self.method not in self._KEYS:
            raise ValueError(f"unknown decomposition method {self.method!r}")
        missing = [k for k in self._KEYS[self.method] if k not in self.components]
        if missing:
            raise ValueError(f"{self.method} decomposition lacks components {missing}")
        object.__setattr__(self, "components", dict(self.components))
        object.__setattr__(self, "extras", dict(self.extras))
        object.__setattr__(self, "flags", tuple(self.flags))

    def reconstructed_score(self) -> float:
        """Recombine the components into the mean score they decompose."""
        c = self.components
        if self.method == CR:
            return c["REL"] - c["RES"] + c["UNC"]
        if self.method == LB:
            return c["REF"] - c["DIS"] + c["CB2"]
        return c["UNC"] - 2.0 * c["COV"] + c["VPB"] + c["VPW"] + c["RIL"]

    def reconstruction_gap(self) -> float:
        return abs(self.reconstructed_score() - self.mean_score)

    def contributions(self) -> dict[str, float]:
        """Signed rows as they appear in a report table."""
        c = self.components
        if self.method == CR:
            return {"REL": c["REL"], "RES": c["RES"], "UNC": c["UNC"]}
        if self.method == LB:
            return {"REF": c["REF"], "-DIS": -c["DIS"], "CB2": c["CB2"]}
        return {
            "UNC": c["UNC"],
            "(-2)COV": -2.0 * c["COV"],
            "VPB": c["VPB"],
            "VPW": c["VPW"],
            "RIL": c["RIL"],
        }

    def percent_of_uncertainty(self) -> dict[str, float]:
        """Contributions expressed as percent of the series uncertainty."""
        if self.uncertainty <= 0.0:
            return {}
        return {k: 100.0 * v / self.uncertainty for k, v in self.contributions().items()}

"""Parse forecast and odds CSV files, convert decimal odds to implied
probabilities, and expand three-way series into one-vs-all binary series.

CSV dialect: comma separator, "." decimal point, mandatory header on the
first line, no quoting of numeric fields. Unknown extra columns are
ignored. Outcome labels are case-insensitive and normalized to upper
case. Errors are reported with 1-based line numbers (the header is
line 1).

Schemas:

    forecasts:  match_id,p_home,p_draw,p_away,outcome
    odds:       match_id,odds_home,odds_draw,odds_away,outcome
    binary:     p,x
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from math import fsum

import numpy as np

from .domain import (
    BinaryForecastSeries,
    MulticlassForecastSeries,
    CATEGORIES,
    outcome_index,
)
from .errors import (
    BadOutcomeLabel,
    BadProbability,
    DuplicateMatchIdWarning,
    EmptySeries,
    MissingColumn,
    NonBinaryOutcome,
    OddsNotAboveOne,
)

FORECAST_COLUMNS = ("match_id", "p_home", "p_draw", "p_away", "outcome")
ODDS_COLUMNS = ("match_id", "odds_home", "odds_draw", "odds_away", "outcome")
BINARY_COLUMNS = ("p", "x")


@dataclass(frozen=True)
class OddsTriple:
    """Decimal betting odds for (home, draw, away), each above 1.0.

    The overround sum(1/o) >= 1 is typical but not enforced; exchange
    odds may sum below one.
    """

    o_home: float
    o_draw: float
    o_away: float

    def __post_init__(self):
        for name, value in (("home", self.o_home), ("draw", self.o_draw),
                            ("away", self.o_away)):
            if not float(value) > 1.0:
                raise OddsNotAboveOne(f"{name} odd {value!r} is not above 1.0")


def odds_to_probabilities(odds: OddsTriple) -> np.ndarray:
    """Normalized inverse odds as a probability vector summing to 1 exactly.

    The away component is computed by complement so the unit sum holds
    without tolerance.
    """
    inv = (1.0 / odds.o_home, 1.0 / odds.o_draw, 1.0 / odds.o_away)
    total = fsum(inv)
    p_home = inv[0] / total
    p_draw = inv[1] / total
    return np.array([p_home, p_draw, 1.0 - p_home - p_draw])


def _read_rows(text: str, required: tuple[str, ...]):
    """Yield (line_number, row-dict) for each data line of a CSV text."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise EmptySeries("input has no header line") from None
    names = [h.strip().lower() for h in header]
    index = {}
    for col in required:
        if col not in names:
            raise MissingColumn(f"required column {col!r} missing from header {names}")
        index[col] = names.index(col)
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(names):
            raise MissingColumn(f"line {line_no}: expected {len(names)} fields, got {len(row)}")
        yield line_no, {col: row[index[col]].strip() for col in required}


def _parse_float(value: str, line_no: int, col: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise BadProbability(f"line {line_no}: {col} value {value!r} is not a number") from None


def _warn_duplicates(ids: list[str]) -> None:
    seen: set[str] = set()
    for match_id in ids:
        if match_id in seen:
            warnings.warn(f"duplicate match id {match_id!r}", DuplicateMatchIdWarning,
                          stacklevel=3)
        seen.add(match_id)


def parse_forecast_csv(text: str) -> MulticlassForecastSeries:
    """Parse the ``match_id,p_home,p_draw,p_away,outcome`` schema."""
    rows = []
    for line_no, row in _read_rows(text, FORECAST_COLUMNS):
        probs = tuple(_parse_float(row[c], line_no, c)
                      for c in ("p_home", "p_draw", "p_away"))
        # slack on top of the tolerance: six-decimal files can sit exactly
        # one tolerance unit off and must survive the round trip
        if abs(fsum(probs) - 1.0) > 1e-6 + 1e-9:
            raise BadProbability(
                f"line {line_no}: probabilities sum to {fsum(probs):.8f}, not 1")
        try:
            outcome = outcome_index(row["outcome"])
        except BadOutcomeLabel as exc:
            raise BadOutcomeLabel(f"line {line_no}: {exc}") from None
        rows.append((row["match_id"], probs, CATEGORIES[outcome]))
    if not rows:
        raise EmptySeries("input has no data rows")
    _warn_duplicates([r[0] for r in rows])
    return MulticlassForecastSeries.from_rows(rows)


def parse_odds_csv(text: str) -> MulticlassForecastSeries:
    """Parse the odds schema and convert each row to implied probabilities."""
    rows = []
    for line_no, row in _read_rows(text, ODDS_COLUMNS):
        odds_values = tuple(_parse_float(row[c], line_no, c)
                            for c in ("odds_home", "odds_draw", "odds_away"))
        try:
            triple = OddsTriple(*odds_values)
        except OddsNotAboveOne as exc:
            raise OddsNotAboveOne(f"line {line_no}: {exc}") from None
        try:
            outcome = outcome_index(row["outcome"])
        except BadOutcomeLabel as exc:
            raise BadOutcomeLabel(f"line {line_no}: {exc}") from None
        rows.append((row["match_id"], tuple(odds_to_probabilities(triple)),
                     CATEGORIES[outcome]))
    if not rows:
        raise EmptySeries("input has no data rows")
    _warn_duplicates([r[0] for r in rows])
    return MulticlassForecastSeries.from_rows(rows)


def parse_binary_csv(text: str) -> BinaryForecastSeries:
    """Parse the ``p,x`` schema emitted by the simulator."""
    forecasts = []
    outcomes = []
    for line_no, row in _read_rows(text, BINARY_COLUMNS):
        forecasts.append(_parse_float(row["p"], line_no, "p"))
        x = _parse_float(row["x"], line_no, "x")
        if x not in (0.0, 1.0):
            raise NonBinaryOutcome(f"line {line_no}: x value {row['x']!r} is not 0 or 1")
        outcomes.append(x)
    if not forecasts:
        raise EmptySeries("input has no data rows")
    return BinaryForecastSeries(np.asarray(forecasts), np.asarray(outcomes))


def one_vs_all(series: MulticlassForecastSeries, category: str) -> BinaryForecastSeries:
    """Reduce a three-way series to the binary problem of one category.

    The forecast is that category's probability and the outcome indicates
    whether the category was realized; row order is preserved.
    """
    j = outcome_index(category)
    return BinaryForecastSeries(
        series.probabilities[:, j].copy(),
        (series.outcomes == j).astype(float),
    )

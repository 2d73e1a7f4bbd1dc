"""Synthetic forecast-outcome generator with known miscalibration.

Forecasts are drawn from a configurable law on (0, 1); outcomes are
Bernoulli with success probability logistic(alpha + beta logit(p)), so
(alpha, beta) = (0, 1) produces perfectly calibrated data and the
generator doubles as the ground-truth oracle for every estimator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numeric import expit, logit
from .domain import BinaryForecastSeries
from .errors import BadLaw, EmptySeries


@dataclass(frozen=True)
class ForecastLaw:
    """Distribution of the forecast probabilities.

    Supported kinds: "uniform" with (lo, hi) inside [0, 1], and
    "beta_shape" with positive shape parameters.
    """

    kind: str
    params: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(float(v) for v in self.params))
        if self.kind == "uniform":
            if len(self.params) != 2:
                raise BadLaw("uniform law takes (lo, hi)")
            lo, hi = self.params
            if not (0.0 <= lo <= hi <= 1.0):
                raise BadLaw(f"uniform bounds ({lo}, {hi}) must satisfy 0 <= lo <= hi <= 1")
            if lo == hi and lo in (0.0, 1.0):
                raise BadLaw("a point mass on the boundary is not a forecast law")
        elif self.kind == "beta_shape":
            if len(self.params) != 2:
                raise BadLaw("beta_shape law takes (a, b)")
            a, b = self.params
            if not (a > 0.0 and b > 0.0):
                raise BadLaw(f"beta shapes ({a}, {b}) must be positive")
        else:
            raise BadLaw(f"unknown forecast law {self.kind!r}")

    @classmethod
    def uniform(cls, lo: float = 0.0, hi: float = 1.0) -> "ForecastLaw":
        return cls("uniform", (lo, hi))

    @classmethod
    def beta_shape(cls, a: float = 2.0, b: float = 2.0) -> "ForecastLaw":
        return cls("beta_shape", (a, b))

    @classmethod
    def parse(cls, text: str) -> "ForecastLaw":
        """Parse command-line grammar like "beta:2,2" or "uniform:0.05,0.95"."""
        name, _, rest = text.partition(":")
        name = name.strip().lower()
        try:
            params = tuple(float(v) for v in rest.split(",")) if rest else ()
        except ValueError:
            raise BadLaw(f"cannot parse law parameters from {text!r}") from None
        if name in ("beta", "beta_shape"):
            return cls("beta_shape", params or (2.0, 2.0))
        if name == "uniform":
            return cls("uniform", params or (0.0, 1.0))
        raise BadLaw(f"unknown forecast law {name!r}")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "uniform":
            lo, hi = self.params
            return rng.uniform(lo, hi, n)
        a, b = self.params
        return rng.beta(a, b, n)


DEFAULT_LAW = ForecastLaw.beta_shape(2.0, 2.0)


def generate(n: int, alpha: float, beta: float, law: ForecastLaw | None = None,
             seed=0) -> BinaryForecastSeries:
    """Draw a series of n forecast-outcome pairs, deterministic per seed.

    ``seed`` may be an int or a numpy SeedSequence (handy for derived
    replicate streams).
    """
    if n < 1:
        raise EmptySeries(f"need at least one observation, got n={n}")
    law = law or DEFAULT_LAW
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    rng = np.random.default_rng(seed)
    p = law.sample(rng, n)
    if beta == 0.0:
        # avoid 0 * inf at boundary forecasts; the model ignores p anyway
        eta = np.full(n, float(alpha))
    else:
        eta = alpha + beta * logit(p)
    x = (rng.random(n) < expit(eta)).astype(float)
    return BinaryForecastSeries(p, x)

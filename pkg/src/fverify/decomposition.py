"""The three mean-Brier-score decompositions and the skill score.

Calibration-Refinement (via the binned recalibration vector):

    REL = S(p) - S(xhat),  RES = S(clim) - S(xhat),  UNC = S(clim)

where S is the mean half-Brier score and clim is the constant base-rate
forecast. Likelihood-Base:

    REF = Var(p),  DIS = between-class variance of mean forecasts,
    CB2 = (n0/N) m0^2 + (n1/N) (m1 - 1)^2

and the Yates partition

    S(p) = UNC - 2 COV + VPB + VPW + RIL

with COV the forecast-outcome covariance, VPB = b^2 UNC the between-class
variance (b = m1 - m0), VPW the mean within-class variance, and RIL the
squared marginal bias. All moments are population-style (divide by N);
the identities are exact only in that convention.
"""

from __future__ import annotations

from math import fsum

import numpy as np

from ._numeric import class_means, fmean, population_covariance, population_variance
from .domain import (
    CATEGORIES,
    CR,
    LB,
    YATES,
    BinaryForecastSeries,
    BinnedForecasts,
    MulticlassForecastSeries,
    ScoreDecomposition,
)
from .errors import DegenerateUncertainty, SeriesMismatch
from .ingest import one_vs_all


def _mean_brier(predictions: np.ndarray, outcomes: np.ndarray) -> float:
    return fsum((predictions - outcomes) ** 2) / outcomes.size


def cr_decompose(series: BinaryForecastSeries,
                 binned: BinnedForecasts) -> ScoreDecomposition:
    """Calibration-Refinement decomposition against a bin recalibration.

    The identity REL - RES + UNC = S(p) holds by construction. The skill
    score (RES - REL) / UNC is attached when UNC > 0; otherwise the
    result carries a "degenerate_uncertainty" flag and no skill.
    """
    if binned.n != series.n:
        raise SeriesMismatch(f"binning covers {binned.n} observations, series has {series.n}")
    x = series.outcomes
    sp = _mean_brier(series.forecasts, x)
    sx = _mean_brier(binned.recalibrated, x)
    unc = _mean_brier(np.full(series.n, series.base_rate), x)
    rel = sp - sx
    res = unc - sx
    flags: tuple[str, ...] = ()
    skill = None
    if unc > 0.0:
        skill = (res - rel) / unc
    else:
        flags = ("degenerate_uncertainty",)
    return ScoreDecomposition(
        method=CR,
        components={"REL": rel, "RES": res, "UNC": unc},
        mean_score=sp,
        uncertainty=unc,
        skill=skill,
        flags=flags,
    )


def skill_score(decomposition: ScoreDecomposition) -> float:
    """Brier skill score (RES - REL) / UNC of a CR decomposition."""
    if decomposition.method != CR:
        raise ValueError("skill_score needs a CR decomposition")
    unc = decomposition.components["UNC"]
    if unc <= 0.0:
        raise DegenerateUncertainty("all outcomes are equal, skill is undefined")
    return (decomposition.components["RES"] - decomposition.components["REL"]) / unc


def lb_decompose(series: BinaryForecastSeries) -> ScoreDecomposition:
    """Likelihood-Base decomposition REF - DIS + CB2 = S(p).

    With a single outcome class present DIS is 0 and the result carries a
    "degenerate_class" flag.
    """
    p = series.forecasts
    x = series.outcomes
    n = series.n
    sp = _mean_brier(p, x)
    ref = population_variance(p)
    n0, n1, m0, m1 = class_means(p, x)
    pbar = fmean(p)
    flags: tuple[str, ...] = ()
    dis = 0.0
    cb2 = 0.0
    if n0:
        cb2 += (n0 / n) * m0 * m0
    if n1:
        cb2 += (n1 / n) * (m1 - 1.0) * (m1 - 1.0)
    if n0 and n1:
        dis = (n0 / n) * (m0 - pbar) ** 2 + (n1 / n) * (m1 - pbar) ** 2
    else:
        flags = ("degenerate_class",)
    xbar = series.base_rate
    return ScoreDecomposition(
        method=LB,
        components={"REF": ref, "DIS": dis, "CB2": cb2},
        mean_score=sp,
        uncertainty=xbar * (1.0 - xbar),
        flags=flags,
    )


def yates_decompose(series: BinaryForecastSeries) -> ScoreDecomposition:
    """Five-component covariance partition of the mean Brier score.

    Exposes the forecast-on-outcome regression coefficient b = m1 - m0
    under ``extras["b"]``; COV = b UNC and VPB = b^2 UNC.
    """
    p = series.forecasts
    x = series.outcomes
    n = series.n
    sp = _mean_brier(p, x)
    xbar = series.base_rate
    unc = xbar * (1.0 - xbar)
    cov = population_covariance(p, x)
    n0, n1, m0, m1 = class_means(p, x)
    pbar = fmean(p)
    ril = (pbar - xbar) ** 2
    flags: tuple[str, ...] = ()
    if n0 and n1:
        b = m1 - m0
        vpb = b * b * unc
        vpw = (n0 / n) * population_variance(p[x == 0.0]) \
            + (n1 / n) * population_variance(p[x == 1.0])
        extras = {"b": b}
    else:
        # b is undefined with one class empty; UNC = 0 forces COV = VPB = 0
        vpb = 0.0
        cov = 0.0
        vpw = population_variance(p)
        extras = {}
        flags = ("degenerate_class",)
    return ScoreDecomposition(
        method=YATES,
        components={"UNC": unc, "COV": cov, "VPB": vpb, "VPW": vpw, "RIL": ril},
        mean_score=sp,
        uncertainty=unc,
        flags=flags,
        extras=extras,
    )


def aggregate_decompositions(parts: list[ScoreDecomposition]) -> ScoreDecomposition:
    """Component-wise sum of same-method decompositions (the "All" record).

    For CR records the aggregate skill is recomputed from the summed
    components.
    """
    methods = {d.method for d in parts}
    if len(methods) != 1:
        raise ValueError(f"cannot aggregate mixed methods {sorted(methods)}")
    method = parts[0].method
    keys = parts[0].components.keys()
    components = {k: fsum(d.components[k] for d in parts) for k in keys}
    mean = fsum(d.mean_score for d in parts)
    unc = fsum(d.uncertainty for d in parts)
    flags = tuple(sorted({f for d in parts for f in d.flags}))
    skill = None
    if method == CR and unc > 0.0:
        skill = (components["RES"] - components["REL"]) / unc
    return ScoreDecomposition(
        method=method,
        components=components,
        mean_score=mean,
        uncertainty=unc,
        skill=skill,
        flags=flags,
    )


def decompose_multiclass(series: MulticlassForecastSeries, method: str,
                         binner=None) -> dict[str, ScoreDecomposition]:
    """One-vs-all decomposition per category plus the component-summed All.

    ``method`` is "cr", "lb" or "yates" (any case). ``binner`` maps a
    binary series to a BinnedForecasts and is only consulted for the CR
    method; it defaults to isotonic-regression binning.
    """
    tag = method.strip().upper()
    if tag not in (CR, LB, YATES):
        raise ValueError(f"unknown decomposition method {method!r}")
    if binner is None and tag == CR:
        from .binning import pav_calibrate
        binner = pav_calibrate
    out: dict[str, ScoreDecomposition] = {}
    for category in CATEGORIES:
        binary = one_vs_all(series, category)
        if tag == CR:
            out[category] = cr_decompose(binary, binner(binary))
        elif tag == LB:
            out[category] = lb_decompose(binary)
        else:
            out[category] = yates_decompose(binary)
    out["All"] = aggregate_decompositions([out[c] for c in CATEGORIES])
    return out

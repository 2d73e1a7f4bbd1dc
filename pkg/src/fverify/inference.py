"""Statistical tests of reliability: the Brier-score departure test, a
two-parameter logistic recalibration fit with Wald and deviance tests,
and the equivalent ignorance-score likelihood-ratio test.

The recalibration model regresses the binary outcome on the logit of its
forecast, logit Pr(x = 1) = alpha + beta logit(p); (alpha, beta) = (0, 1)
is perfect reliability, and the constrained deviance at (0, 1) serves as
the null for the likelihood-ratio tests. Two-sided p-values throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import fsum

import numpy as np

from ._numeric import chi2_sf, expit, log_expit, logit
from .domain import BinaryForecastSeries
from .errors import DegenerateInput, DegenerateVariance, NotConverged

#: Forecasts are clamped this far from {0, 1} before taking logits;
#: tighter than the scoring clamp because the logit magnifies boundary noise.
LOGIT_CLAMP = 1e-6

#: Linear predictors beyond this magnitude during the fit flag separation.
SEPARATION_LIMIT = 30.0


@dataclass(frozen=True)
class TestResult:
    """A scalar test statistic with its reference distribution tail."""

    statistic: float
    df: int | None
    p_value: float
    sided: str
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p-value {self.p_value!r} outside [0, 1]")


@dataclass(frozen=True)
class CalibrationFit:
    """Logistic recalibration estimates with their deviances.

    deviance_null is evaluated at the perfect-reliability parameters
    (0, 1), deviance_fitted at the maximum-likelihood estimates.
    """

    alpha: float
    beta: float
    se_alpha: float
    se_beta: float
    deviance_null: float
    deviance_fitted: float
    converged: bool
    iterations: int
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.converged:
            if not self.deviance_fitted <= self.deviance_null + 1e-8:
                raise ValueError("fitted deviance exceeds the constrained null deviance")
            if not (self.se_alpha > 0.0 and self.se_beta > 0.0):
                raise ValueError("standard errors must be positive for a converged fit")
        object.__setattr__(self, "flags", tuple(self.flags))


def spiegelhalter_z(series: BinaryForecastSeries) -> float:
    """Signed standardized departure of the Brier score from its null mean.

    Z = sum (x - p)(1 - 2p) / sqrt(sum (1 - 2p)^2 p (1 - p)); positive
    values indicate outcomes running above the forecasts on the
    informative observations.
    """
    p = series.forecasts
    x = series.outcomes
    numerator = fsum((x - p) * (1.0 - 2.0 * p))
    variance = fsum((1.0 - 2.0 * p) ** 2 * p * (1.0 - p))
    if variance <= 0.0:
        raise DegenerateVariance("null variance is zero (all forecasts at 0.5 or the boundary)")
    return numerator / math.sqrt(variance)


def spiegelhalter_test(series: BinaryForecastSeries) -> TestResult:
    """Two-sided calibration departure test, statistic Z^2 against chi2(1)."""
    z = spiegelhalter_z(series)
    stat = z * z
    return TestResult(statistic=stat, df=1, p_value=chi2_sf(stat, 1), sided="two-sided")


def _clamped_logit(series: BinaryForecastSeries) -> np.ndarray:
    return logit(np.clip(series.forecasts, LOGIT_CLAMP, 1.0 - LOGIT_CLAMP))


def _deviance(eta: np.ndarray, x: np.ndarray) -> float:
    """-2 log-likelihood of a logistic model with linear predictor eta."""
    loglik = x * log_expit(eta) + (1.0 - x) * log_expit(-eta)
    return -2.0 * fsum(loglik)


def fit_cox_calibration(series: BinaryForecastSeries, max_iter: int = 50,
                        tol: float = 1e-10) -> CalibrationFit:
    """Maximum-likelihood logistic recalibration fit via Newton steps.

    Starts at (0, 1) and stops when the deviance changes by less than
    ``tol``. Perfectly separable data is reported with converged=False
    and a separation flag instead of a meaningless estimate; standard
    errors are NaN in that case.
    """
    x = series.outcomes
    if np.all(x == x[0]):
        raise DegenerateInput("all outcomes are equal")
    eta0 = _clamped_logit(series)
    if np.all(eta0 == eta0[0]):
        raise DegenerateInput("all forecasts are equal")

    alpha, beta = 0.0, 1.0
    deviance = _deviance(alpha + beta * eta0, x)
    deviance_null = deviance
    h = np.zeros((2, 2))
    flags: tuple[str, ...] = ()
    converged = False
    iterations = 0

    for iterations in range(1, max_iter + 1):
        eta = alpha + beta * eta0
        if np.max(np.abs(eta)) > SEPARATION_LIMIT:
            direction = "positive" if beta >= 1.0 else "negative"
            flags = (f"separation_detected_{direction}",)
            break
        mu = expit(eta)
        w = mu * (1.0 - mu)
        grad = np.array([fsum(x - mu), fsum((x - mu) * eta0)])
        h = np.array([
            [fsum(w), fsum(w * eta0)],
            [fsum(w * eta0), fsum(w * eta0 * eta0)],
        ])
        det = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
        if not det > 0.0:
            flags = ("singular_information",)
            break
        step_a = (h[1, 1] * grad[0] - h[0, 1] * grad[1]) / det
        step_b = (h[0, 0] * grad[1] - h[0, 1] * grad[0]) / det
        # step-halving keeps the deviance non-increasing
        scale = 1.0
        for _ in range(10):
            new_dev = _deviance((alpha + scale * step_a) + (beta + scale * step_b) * eta0, x)
            if new_dev <= deviance + 1e-12:
                break
            scale *= 0.5
        alpha += scale * step_a
        beta += scale * step_b
        improvement = deviance - new_dev
        deviance = new_dev
        if abs(improvement) < tol:
            converged = True
            break

    if converged:
        det = h[0, 0] * h[1, 1] - h[0, 1] * h[1, 0]
        se_alpha = math.sqrt(h[1, 1] / det)
        se_beta = math.sqrt(h[0, 0] / det)
    else:
        se_alpha = se_beta = math.nan
        if not flags:
            flags = ("max_iterations",)
    return CalibrationFit(
        alpha=alpha,
        beta=beta,
        se_alpha=se_alpha,
        se_beta=se_beta,
        deviance_null=deviance_null,
        deviance_fitted=deviance,
        converged=converged,
        iterations=iterations,
        flags=flags,
    )


def wald_tests(fit: CalibrationFit) -> tuple[TestResult, TestResult]:
    """Wald tests of intercept = 0 and slope = 1, each against chi2(1)."""
    if not fit.converged:
        raise NotConverged("wald tests need a converged fit")
    stat_a = ((fit.alpha - 0.0) / fit.se_alpha) ** 2
    stat_b = ((fit.beta - 1.0) / fit.se_beta) ** 2
    return (
        TestResult(stat_a, 1, chi2_sf(stat_a, 1), "two-sided"),
        TestResult(stat_b, 1, chi2_sf(stat_b, 1), "two-sided"),
    )


def deviance_test(fit: CalibrationFit) -> TestResult:
    """Likelihood-ratio test of (0, 1) against the fitted pair, chi2(2)."""
    if not fit.converged:
        raise NotConverged("deviance test needs a converged fit")
    stat = fit.deviance_null - fit.deviance_fitted
    return TestResult(stat, 2, chi2_sf(stat, 2), "two-sided")


def ignorance_lr_test(series: BinaryForecastSeries, fit: CalibrationFit) -> TestResult:
    """Likelihood-ratio test expressed through the ignorance score.

    2N times the drop in mean ignorance from the raw forecasts to the
    recalibrated ones; identical to the deviance difference of the same
    model, and floored at 0 (with a flag) against numerical noise.
    """
    if not fit.converged:
        raise NotConverged("ignorance LR test needs a converged fit")
    x = series.outcomes
    eta0 = _clamped_logit(series)
    stat = _deviance(eta0, x) - _deviance(fit.alpha + fit.beta * eta0, x)
    flags: tuple[str, ...] = ()
    if stat < 0.0:
        stat = 0.0
        flags = ("floored_to_zero",)
    return TestResult(stat, 2, chi2_sf(stat, 2), "two-sided", flags)


def classify_reliability_profile(fit: CalibrationFit, level: float = 0.05) -> str:
    """Heuristic reliability-diagram profile label from the Wald tests.

    Maps significant departures of (alpha, beta) from (0, 1) onto the
    classic diagram shapes: a positive intercept is under-forecasting, a
    negative one over-forecasting, a slope above one a sigmoid shape and
    below one an inverse sigmoid. "mixed" when both reject, "calibrated"
    when neither does. The cut at ``level`` is a convenience, not a
    statement about the data-generating process.
    """
    wald_a, wald_b = wald_tests(fit)
    sig_a = wald_a.p_value < level
    sig_b = wald_b.p_value < level
    if sig_a and sig_b:
        return "mixed"
    if sig_a:
        return "under-forecasting" if fit.alpha > 0 else "over-forecasting"
    if sig_b:
        return "sigmoid" if fit.beta > 1 else "inverse-sigmoid"
    return "calibrated"

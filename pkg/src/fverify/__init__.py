"""fverify: verification toolkit for probabilistic forecasts of binary
and three-way (home/draw/away) outcomes.

Scores forecasts with proper scoring rules, decomposes the mean Brier
score three ways, diagnoses reliability and discrimination with
statistical tests and reliability-diagram data, and ships a synthetic
generator with known miscalibration for validating every estimator.
"""

from .errors import *  # noqa: F401,F403
from .domain import (  # noqa: F401
    CATEGORIES,
    CR,
    LB,
    YATES,
    BinaryForecastSeries,
    BinnedForecasts,
    MulticlassForecastSeries,
    ScoreDecomposition,
    outcome_index,
    validate_series,
)
from .scoring import (  # noqa: F401
    HALF_BRIER,
    IGNORANCE,
    RPS,
    ZERO_ONE,
    ScoringRule,
    half_brier,
    ignorance,
    mean_rps,
    mean_score,
    rps,
    zero_one,
)
from .binning import (  # noqa: F401
    PRESETS,
    bin_fixed,
    bin_preset,
    bin_quantile,
    pav_calibrate,
    pav_fit,
    preset_thresholds,
)
from .decomposition import (  # noqa: F401
    aggregate_decompositions,
    cr_decompose,
    decompose_multiclass,
    lb_decompose,
    skill_score,
    yates_decompose,
)
from .ingest import (  # noqa: F401
    OddsTriple,
    odds_to_probabilities,
    one_vs_all,
    parse_binary_csv,
    parse_forecast_csv,
    parse_odds_csv,
)
from .inference import (  # noqa: F401
    CalibrationFit,
    TestResult,
    classify_reliability_profile,
    deviance_test,
    fit_cox_calibration,
    ignorance_lr_test,
    spiegelhalter_test,
    spiegelhalter_z,
    wald_tests,
)
from .discrimination import (  # noqa: F401
    DiscriminationSummary,
    c_statistic,
    discrimination_summary,
    five_number_summary,
    ks_test,
    wilcoxon_exact_test,
    wilcoxon_test,
)
from .diagram import DiagramData, diagram_data, export_csv, render_svg  # noqa: F401
from .simulate import ForecastLaw, generate  # noqa: F401

__version__ = "0.1.0"

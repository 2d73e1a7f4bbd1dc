import math

import numpy as np
import pytest

from fverify import (
    ForecastLaw,
    c_statistic,
    fit_cox_calibration,
    generate,
    lb_decompose,
)
from fverify.errors import BadLaw, EmptySeries


class TestForecastLaw:
    def test_parse(self):
        law = ForecastLaw.parse("beta:2,5")
        assert law.kind == "beta_shape" and law.params == (2.0, 5.0)
        law = ForecastLaw.parse("uniform:0.05,0.95")
        assert law.kind == "uniform" and law.params == (0.05, 0.95)
        assert ForecastLaw.parse("beta").params == (2.0, 2.0)

    def test_parse_rejects_garbage(self):
        with pytest.raises(BadLaw):
            ForecastLaw.parse("triangular:1,2")
        with pytest.raises(BadLaw):
            ForecastLaw.parse("beta:a,b")

    def test_bad_supports(self):
        with pytest.raises(BadLaw):
            ForecastLaw.uniform(-0.1, 0.5)
        with pytest.raises(BadLaw):
            ForecastLaw.uniform(0.2, 1.2)
        with pytest.raises(BadLaw):
            ForecastLaw.uniform(1.0, 1.0)  # point mass on the boundary
        with pytest.raises(BadLaw):
            ForecastLaw.beta_shape(-1.0, 2.0)

    def test_interior_point_mass_allowed(self):
        law = ForecastLaw.uniform(0.3, 0.3)
        rng = np.random.default_rng(0)
        assert np.all(law.sample(rng, 5) == 0.3)


class TestGenerate:
    def test_deterministic(self):
        a = generate(100, -0.2, 1.1, seed=7)
        b = generate(100, -0.2, 1.1, seed=7)
        assert np.array_equal(a.forecasts, b.forecasts)
        assert np.array_equal(a.outcomes, b.outcomes)
        c = generate(100, -0.2, 1.1, seed=8)
        assert not np.array_equal(a.outcomes, c.outcomes)

    def test_empty_rejected(self):
        with pytest.raises(EmptySeries):
            generate(0, 0.0, 1.0)

    def test_calibrated_base_rate_matches_mean_forecast(self):
        n = 10000
        s = generate(n, 0.0, 1.0, ForecastLaw.beta_shape(2, 2), seed=11)
        assert abs(s.base_rate - s.forecasts.mean()) < 3 * math.sqrt(0.25 / n)

    def test_flat_slope_removes_discrimination(self):
        s = generate(8000, 0.0, 0.0, ForecastLaw.beta_shape(2, 2), seed=12)
        assert abs(c_statistic(s) - 0.5) < 0.03
        assert lb_decompose(s).components["DIS"] < 1e-3

    def test_parameter_recovery(self):
        # mirrors a home-win-like over-forecasting pattern
        alphas = []
        betas = []
        for r in range(200):
            s = generate(10000, -0.26, 1.11, ForecastLaw.uniform(0.05, 0.95),
                         seed=np.random.SeedSequence(entropy=900, spawn_key=(r,)))
            fit = fit_cox_calibration(s)
            assert fit.converged
            alphas.append(fit.alpha)
            betas.append(fit.beta)
        assert abs(np.mean(alphas) - (-0.26)) < 0.05
        assert abs(np.mean(betas) - 1.11) < 0.05

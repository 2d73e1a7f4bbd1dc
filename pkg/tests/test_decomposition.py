import numpy as np
import pytest
from math import fsum

from fverify import (
    CR,
    HALF_BRIER,
    MulticlassForecastSeries,
    ScoreDecomposition,
    YATES,
    aggregate_decompositions,
    bin_fixed,
    cr_decompose,
    decompose_multiclass,
    lb_decompose,
    mean_score,
    pav_calibrate,
    skill_score,
    validate_series,
    yates_decompose,
)
from fverify.errors import DegenerateUncertainty, SeriesMismatch

from _oracles import lb_class_conditional_cb2, per_value_components


def _random_series(rng, n=None, max_n=200):
    n = n or int(rng.integers(2, max_n + 1))
    return validate_series(rng.random(n), rng.integers(0, 2, n))


class TestCrDecompose:
    def test_worked_instance(self):
        # oracle-computed by hand: S(p) = (0.64 + 0.16 + 0.16)/3 = 0.32,
        # PAV gives xhat = (0.5, 0.5, 1), S(xhat) = 1/6, UNC = 2/9
        s = validate_series([0.2, 0.4, 0.6], [1, 0, 1])
        d = cr_decompose(s, pav_calibrate(s))
        assert d.mean_score == pytest.approx(0.32, abs=1e-12)
        assert d.components["REL"] == pytest.approx(0.32 - 1 / 6, abs=1e-12)
        assert d.components["RES"] == pytest.approx(1 / 18, abs=1e-12)
        assert d.components["UNC"] == pytest.approx(2 / 9, abs=1e-12)
        assert d.skill == pytest.approx((1 / 18 - (0.32 - 1 / 6)) / (2 / 9), abs=1e-9)

    def test_climatological(self):
        x = [1, 0, 0, 1, 1, 0, 0, 0]
        s = validate_series([sum(x) / len(x)] * len(x), x)
        d = cr_decompose(s, pav_calibrate(s))
        assert d.components["REL"] == 0.0
        assert d.components["RES"] == 0.0
        xbar = s.base_rate
        assert d.components["UNC"] == pytest.approx(xbar * (1 - xbar), abs=1e-15)
        assert skill_score(d) == 0.0

    def test_calibrated_within_bins(self):
        # forecasts constant within each bin and equal to the bin frequency
        p = [0.25] * 4 + [0.75] * 4
        x = [1, 0, 0, 0, 1, 1, 1, 0]
        s = validate_series(p, x)
        d = cr_decompose(s, bin_fixed(s, (0.5,)))
        assert d.components["REL"] == 0.0

    def test_perfect_forecast_has_unit_skill(self):
        s = validate_series([1.0, 0.0, 1.0, 0.0], [1, 0, 1, 0])
        d = cr_decompose(s, pav_calibrate(s))
        assert d.mean_score == 0.0
        assert skill_score(d) == 1.0

    def test_series_mismatch(self):
        s = validate_series([0.2, 0.4, 0.6], [1, 0, 1])
        other = validate_series([0.2, 0.4], [1, 0])
        with pytest.raises(SeriesMismatch):
            cr_decompose(s, pav_calibrate(other))

    def test_degenerate_uncertainty(self):
        s = validate_series([0.2, 0.4], [1, 1])
        d = cr_decompose(s, pav_calibrate(s))
        assert "degenerate_uncertainty" in d.flags
        assert d.skill is None
        with pytest.raises(DegenerateUncertainty):
            skill_score(d)

    def test_identity_on_random_series(self):
        rng = np.random.default_rng(31)
        for _ in range(60):
            s = _random_series(rng)
            d = cr_decompose(s, pav_calibrate(s))
            assert d.reconstruction_gap() <= 1e-12
            # PAV binning guarantees nonnegative components
            assert d.components["REL"] >= -1e-15
            assert d.components["RES"] >= -1e-15

    def test_per_value_binning_equivalence(self):
        # each unique forecast value in its own bin reduces the simple
        # procedure to the per-value component sums
        rng = np.random.default_rng(32)
        for _ in range(30):
            n = int(rng.integers(3, 40))
            p = np.round(rng.random(n), 1)
            s = validate_series(p, rng.integers(0, 2, n))
            unique = np.unique(s.forecasts)
            mids = (unique[:-1] + unique[1:]) / 2
            mids = mids[(mids > 0) & (mids < 1)]
            binned = bin_fixed(s, mids) if mids.size else None
            if binned is None:
                continue
            d = cr_decompose(s, binned)
            rel, res = per_value_components(s)
            assert d.components["REL"] == pytest.approx(rel, abs=1e-12)
            assert d.components["RES"] == pytest.approx(res, abs=1e-12)

    def test_coarsening_cannot_increase_resolution(self):
        rng = np.random.default_rng(33)
        fine = tuple(k / 10 for k in range(1, 10))
        coarse = tuple(k / 5 for k in range(1, 5))  # nested in the deciles
        for _ in range(30):
            s = _random_series(rng, n=120)
            res_fine = cr_decompose(s, bin_fixed(s, fine)).components["RES"]
            res_coarse = cr_decompose(s, bin_fixed(s, coarse)).components["RES"]
            assert res_coarse <= res_fine + 1e-12


class TestSkillFixture:
    def test_published_skill_reconstruction(self):
        d = ScoreDecomposition(CR, {"REL": 0.0035, "RES": 0.0644, "UNC": 0.2458},
                               mean_score=0.1849, uncertainty=0.2458)
        assert 100 * skill_score(d) == pytest.approx(24.8, abs=0.1)


class TestLbDecompose:
    def test_worked_instance(self):
        # m0 = m1 = 0.4 so DIS = 0; REF = Var(p) = 2/75;
        # CB2 = (1/3) 0.4^2 + (2/3) 0.6^2 = 0.293333; REF - DIS + CB2 = 0.32
        s = validate_series([0.2, 0.4, 0.6], [1, 0, 1])
        d = lb_decompose(s)
        assert d.components["REF"] == pytest.approx(2 / 75, abs=1e-12)
        assert d.components["DIS"] == pytest.approx(0.0, abs=1e-12)
        assert d.components["CB2"] == pytest.approx(0.29333333333333333, abs=1e-12)
        assert d.reconstruction_gap() <= 1e-12

    def test_constant_forecast(self):
        s = validate_series([0.3] * 6, [1, 0, 1, 0, 0, 1])
        d = lb_decompose(s)
        assert d.components["REF"] == pytest.approx(0.0, abs=1e-15)
        assert d.components["DIS"] == pytest.approx(0.0, abs=1e-15)
        assert d.components["CB2"] == pytest.approx(d.mean_score, abs=1e-12)

    def test_published_identity_fixture(self):
        d = ScoreDecomposition("LB", {"REF": 0.0556, "DIS": 0.0144, "CB2": 0.1436},
                               mean_score=0.1849, uncertainty=0.2458)
        assert d.reconstructed_score() == pytest.approx(0.1848, abs=1e-9)
        assert abs(d.reconstructed_score() - 0.1849) <= 5e-4

    def test_class_conditional_form_matches_identity(self):
        # the class-conditional expansion must agree with the
        # identity-derived value CB2 = S(p) - REF + DIS
        rng = np.random.default_rng(41)
        for _ in range(60):
            s = _random_series(rng)
            d = lb_decompose(s)
            by_identity = mean_score(s, HALF_BRIER) - d.components["REF"] + d.components["DIS"]
            assert d.components["CB2"] == pytest.approx(by_identity, abs=1e-12)
            assert d.components["CB2"] == pytest.approx(
                lb_class_conditional_cb2(s), abs=1e-12)

    def test_degenerate_class_flag(self):
        s = validate_series([0.2, 0.6], [1, 1])
        d = lb_decompose(s)
        assert "degenerate_class" in d.flags
        assert d.components["DIS"] == 0.0
        assert d.reconstruction_gap() <= 1e-12


class TestYatesDecompose:
    def test_published_sum_fixture(self):
        d = ScoreDecomposition(
            YATES,
            {"UNC": 0.2458, "COV": 0.0595, "VPB": 0.0144, "VPW": 0.0413,
             "RIL": 0.0024},
            mean_score=0.1849, uncertainty=0.2458)
        assert d.reconstructed_score() == pytest.approx(0.1849, abs=5e-4)

    def test_constant_climatological_forecast(self):
        x = [1, 1, 0, 0]
        s = validate_series([0.5] * 4, x)
        d = yates_decompose(s)
        assert d.components["COV"] == 0.0
        assert d.components["VPB"] == 0.0
        assert d.components["VPW"] == 0.0
        assert d.components["RIL"] == 0.0
        assert d.mean_score == d.components["UNC"]

    def test_cross_identities(self):
        rng = np.random.default_rng(42)
        for _ in range(60):
            s = _random_series(rng)
            y = yates_decompose(s)
            l = lb_decompose(s)
            assert y.reconstruction_gap() <= 1e-12
            if "degenerate_class" not in y.flags:
                b = y.extras["b"]
                unc = y.components["UNC"]
                assert y.components["COV"] == pytest.approx(b * unc, abs=1e-12)
                assert y.components["VPB"] == pytest.approx(b * b * unc, abs=1e-12)
            assert l.components["REF"] == pytest.approx(
                y.components["VPB"] + y.components["VPW"], abs=1e-12)
            assert l.components["DIS"] == pytest.approx(y.components["VPB"], abs=1e-12)
            # eliminate S(p) between the two identities:
            # CB2 = UNC - 2 COV + VPB + RIL
            cb2 = y.components["UNC"] - 2 * y.components["COV"] \
                + y.components["VPB"] + y.components["RIL"]
            assert l.components["CB2"] == pytest.approx(cb2, abs=1e-12)

    def test_degenerate_class(self):
        s = validate_series([0.2, 0.6], [0, 0])
        d = yates_decompose(s)
        assert "degenerate_class" in d.flags
        assert d.components["VPB"] == 0.0
        assert d.components["COV"] == 0.0
        assert d.reconstruction_gap() <= 1e-12


class TestMulticlass:
    def test_single_row_all_score(self):
        s = MulticlassForecastSeries.from_rows([("m1", (0.5, 0.3, 0.2), "H")])
        out = decompose_multiclass(s, "yates")
        assert out["All"].mean_score == pytest.approx(0.25 + 0.09 + 0.04, abs=1e-12)

    def test_all_is_component_sum(self):
        rng = np.random.default_rng(43)
        rows = []
        for i in range(40):
            v = rng.dirichlet((2, 2, 2))
            rows.append((f"m{i}", tuple(v), "HDA"[int(rng.integers(0, 3))]))
        s = MulticlassForecastSeries.from_rows(rows)
        for method in ("cr", "lb", "yates"):
            out = decompose_multiclass(s, method)
            for key in out["H"].components:
                total = fsum(out[c].components[key] for c in "HDA")
                assert out["All"].components[key] == pytest.approx(total, abs=1e-12)
            assert out["All"].mean_score == pytest.approx(
                fsum(out[c].mean_score for c in "HDA"), abs=1e-12)

    def test_aggregate_rejects_mixed_methods(self):
        s = validate_series([0.2, 0.4, 0.6], [1, 0, 1])
        with pytest.raises(ValueError):
            aggregate_decompositions([lb_decompose(s), yates_decompose(s)])

    def test_unknown_method(self):
        s = MulticlassForecastSeries.from_rows([("m1", (0.5, 0.3, 0.2), "H")])
        with pytest.raises(ValueError):
            decompose_multiclass(s, "nope")

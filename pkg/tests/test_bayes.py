"""Tests for likelihood ratios, diagnostic odds, and predictive values
under both reporting conventions."""

import math

import numpy as np
import pytest

from mapbayes import (
    AgreementRates,
    Convention,
    LikelihoodRatios,
    diagnostic_odds_ratio,
    likelihood_ratios,
    predictive_values,
    prevalence_sweep,
)


def rates(sens, tn_rate, prevalence=0.5, pcm=0.5):
    return AgreementRates(
        sensitivity=sens, tn_rate=tn_rate, prevalence_observed=prevalence, pcm=pcm
    )


class TestConvention:
    def test_parse_is_case_insensitive(self):
        assert Convention.parse("PAPER") is Convention.PAPER
        assert Convention.parse("standard") is Convention.STANDARD

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError, match="unknown convention"):
            Convention.parse("bayes")


class TestLikelihoodRatios:
    def test_standard_fixture(self):
        lr = likelihood_ratios(rates(0.8, 0.9), Convention.STANDARD)
        assert lr.lr_pos == pytest.approx(8.0, abs=1e-12)
        assert lr.lr_neg == pytest.approx(0.2 / 0.9, abs=1e-12)

    def test_paper_fixture(self):
        lr = likelihood_ratios(rates(0.8, 0.9), Convention.PAPER)
        assert lr.lr_pos == pytest.approx(0.8 / 0.9, abs=1e-12)
        assert lr.lr_neg == pytest.approx(2.0, abs=1e-12)

    def test_default_convention_is_paper(self):
        assert likelihood_ratios(rates(0.8, 0.9)).convention is Convention.PAPER

    def test_conventions_coincide_at_half_half(self):
        a = likelihood_ratios(rates(0.5, 0.5), Convention.PAPER)
        b = likelihood_ratios(rates(0.5, 0.5), Convention.STANDARD)
        assert (a.lr_pos, a.lr_neg) == (b.lr_pos, b.lr_neg) == (1.0, 1.0)

    def test_zero_denominator_gives_infinity(self):
        # Standard positive ratio blows up when the false-positive rate is 0.
        lr = likelihood_ratios(rates(1.0, 1.0), Convention.STANDARD)
        assert math.isinf(lr.lr_pos)
        assert lr.lr_neg == 0.0
        # Paper positive ratio blows up when the true-negative rate is 0.
        lr2 = likelihood_ratios(rates(1.0, 0.0), Convention.PAPER)
        assert math.isinf(lr2.lr_pos)

    def test_requires_both_rates(self):
        with pytest.raises(ValueError, match="both be defined"):
            likelihood_ratios(rates(None, 0.9))
        with pytest.raises(ValueError, match="both be defined"):
            likelihood_ratios(rates(0.8, None))


class TestDiagnosticOddsRatio:
    def test_standard_fixture_is_36(self):
        lr = likelihood_ratios(rates(0.8, 0.9), Convention.STANDARD)
        assert diagnostic_odds_ratio(lr) == pytest.approx(36.0, abs=1e-12)

    def test_random_classifier_is_exactly_one(self):
        for conv in (Convention.PAPER, Convention.STANDARD):
            lr = likelihood_ratios(rates(0.5, 0.5), conv)
            assert diagnostic_odds_ratio(lr) == 1.0

    def test_perfect_classifier_standard_is_positive_infinity(self):
        lr = likelihood_ratios(rates(1.0, 1.0), Convention.STANDARD)
        dor = diagnostic_odds_ratio(lr)
        assert math.isinf(dor) and dor > 0

    def test_both_ratios_infinite_is_flagged_nan(self):
        lr = LikelihoodRatios(math.inf, math.inf, Convention.STANDARD)
        assert math.isnan(diagnostic_odds_ratio(lr))

    def test_zero_negative_ratio_gives_infinity(self):
        lr = LikelihoodRatios(2.0, 0.0, Convention.STANDARD)
        assert math.isinf(diagnostic_odds_ratio(lr))


class TestPredictiveValues:
    def test_paper_ppv_at_half_prevalence_equals_sensitivity_exactly(self):
        # The `paper` convention's update at prevalence 1/2 collapses to
        # the sensitivity itself; this holds to the last bit for these
        # inputs.
        for s in [i / 20 for i in range(1, 20)]:
            pv = predictive_values(rates(s, 0.42), 0.5, Convention.PAPER)
            assert pv.ppv == s

    def test_standard_fixture(self):
        pv = predictive_values(rates(0.8, 0.9), 0.5, Convention.STANDARD)
        assert pv.ppv == pytest.approx(8.0 / 9.0, abs=1e-12)
        assert pv.npv == pytest.approx(0.9 / 1.1, abs=1e-12)

    def test_paper_fixture(self):
        pv = predictive_values(rates(0.8, 0.9), 0.5, Convention.PAPER)
        assert pv.ppv == pytest.approx(0.8, abs=1e-12)
        # npv = t(1-p) / (t(1-p) + s p) = 0.45 / (0.45 + 0.40)
        assert pv.npv == pytest.approx(0.45 / 0.85, abs=1e-12)

    def test_conventions_agree_when_rates_are_half(self):
        for p in np.linspace(0.0, 1.0, 21):
            a = predictive_values(rates(0.5, 0.5), float(p), Convention.PAPER)
            b = predictive_values(rates(0.5, 0.5), float(p), Convention.STANDARD)
            assert a.ppv == b.ppv
            assert a.npv == b.npv

    def test_extreme_prevalences(self):
        pv0 = predictive_values(rates(0.8, 0.9), 0.0, Convention.STANDARD)
        assert pv0.ppv == 0.0
        assert pv0.npv == 1.0
        pv1 = predictive_values(rates(0.8, 0.9), 1.0, Convention.STANDARD)
        assert pv1.ppv == 1.0
        assert pv1.npv == 0.0

    def test_zero_over_zero_is_none(self):
        # Perfect sensitivity at zero prevalence: no predicted positives at
        # all under the `paper` convention, so PPV is undefined, not 0.
        pv = predictive_values(rates(1.0, 0.9), 0.0, Convention.PAPER)
        assert pv.ppv is None
        # Standard NPV at prevalence 1 with perfect sensitivity: no negative
        # mass on either branch.
        pv2 = predictive_values(rates(1.0, 0.0), 1.0, Convention.STANDARD)
        assert pv2.npv is None

    def test_values_stay_in_unit_interval(self):
        rng = np.random.default_rng(17)
        for _ in range(500):
            s, t, p = rng.uniform(size=3)
            for conv in (Convention.PAPER, Convention.STANDARD):
                pv = predictive_values(rates(float(s), float(t)), float(p), conv)
                for v in (pv.ppv, pv.npv):
                    assert v is None or 0.0 <= v <= 1.0

    def test_standard_ppv_monotone_in_prevalence(self):
        rng = np.random.default_rng(23)
        grid = np.linspace(0.0, 1.0, 51)
        for _ in range(50):
            s = float(rng.uniform(0.05, 0.95))
            t = float(rng.uniform(0.05, 0.95))
            sweep = prevalence_sweep(rates(s, t), grid, Convention.STANDARD)
            ppvs = [pv.ppv for pv in sweep]
            npvs = [pv.npv for pv in sweep]
            assert all(a <= b + 1e-12 for a, b in zip(ppvs, ppvs[1:]))
            assert all(a >= b - 1e-12 for a, b in zip(npvs, npvs[1:]))

    def test_prevalence_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="prevalence"):
            predictive_values(rates(0.8, 0.9), 1.5)
        with pytest.raises(ValueError, match="prevalence"):
            predictive_values(rates(0.8, 0.9), -0.1)


class TestPrevalenceSweep:
    def test_preserves_order_and_length(self):
        ps = [0.9, 0.1, 0.5]
        sweep = prevalence_sweep(rates(0.8, 0.9), ps)
        assert [pv.prevalence for pv in sweep] == ps

    def test_every_entry_records_convention(self):
        sweep = prevalence_sweep(rates(0.8, 0.9), [0.2, 0.4], Convention.STANDARD)
        assert all(pv.convention is Convention.STANDARD for pv in sweep)

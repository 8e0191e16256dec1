"""Kaplan-Meier curve, Anderson-Darling statistic, bootstrap p-values."""

import numpy as np
import pytest

import reference_values as rv
from warranty2d import DataError, FitError, NumericsError
from warranty2d.gof import StepFunction, ad_pvalue, anderson_darling_stat, kaplan_meier
from warranty2d.marginal import WeibullParams, fit_weibull_mle, weibull_quantile

EXP1 = WeibullParams(1.0, 1.0)


# -- Kaplan-Meier -----------------------------------------------------------


def test_km_three_points():
    km = kaplan_meier([1.0, 2.0, 3.0])
    assert km.breakpoints.tolist() == [1.0, 2.0, 3.0]
    np.testing.assert_allclose(km.values, [2 / 3, 1 / 3, 0.0], atol=1e-15)
    assert km(0.5) == 1.0
    assert km(1.0) == pytest.approx(2 / 3)
    assert km(2.5) == pytest.approx(1 / 3)
    assert km(9.0) == 0.0


def test_km_single_point():
    km = kaplan_meier([5.0])
    assert km(4.999) == 1.0
    assert km(5.0) == 0.0


def test_km_ties_are_grouped():
    km = kaplan_meier([2.0, 1.0, 2.0, 4.0])
    assert km.breakpoints.tolist() == [1.0, 2.0, 4.0]
    np.testing.assert_allclose(km.values, [0.75, 0.25, 0.0], atol=1e-15)


def test_km_counting_oracle_on_bundled_age(dataset):
    km = kaplan_meier(dataset.age)
    want = 1.0 - np.sum(dataset.age <= 1.66) / len(dataset)
    assert km(1.66) == pytest.approx(want, abs=1e-12)


def test_km_curve_invariants(dataset):
    km = kaplan_meier(dataset.usage)
    assert np.all(np.diff(km.breakpoints) > 0)
    assert np.all(np.diff(km.values) <= 0)
    assert km(km.breakpoints[0] * 0.5) == 1.0
    assert km(km.breakpoints[-1]) == 0.0


def test_km_vectorized_call(dataset):
    km = kaplan_meier(dataset.age)
    x = np.array([0.0, 1.66, 100.0])
    out = km(x)
    assert out.shape == (3,)
    assert out[0] == 1.0 and out[-1] == 0.0


def test_km_empty():
    with pytest.raises(DataError, match="empty"):
        kaplan_meier([])


def test_step_function_validation():
    with pytest.raises(DataError, match="strictly increasing"):
        StepFunction(np.array([1.0, 1.0]), np.array([0.5, 0.0]))


# -- Anderson-Darling statistic ----------------------------------------------


def test_ad_double_evaluation_on_uniform_grid():
    n = 10
    z = (np.arange(1, n + 1) - 0.5) / n
    data = weibull_quantile(z, EXP1)  # maps back to exactly these z under EXP1
    got = anderson_darling_stat(data, EXP1)

    i = np.arange(1, n + 1)
    direct = -n - np.mean((2 * i - 1) * (np.log(z) + np.log(1 - z[::-1])))
    reverse = -n - np.mean(
        ((2 * i - 1) * (np.log(z) + np.log(1 - z[::-1])))[::-1]
    )
    assert direct == pytest.approx(reverse, abs=1e-12)
    assert got == pytest.approx(direct, abs=1e-12)


def test_ad_invariant_to_input_order():
    rng = np.random.default_rng(0)
    data = weibull_quantile(rng.uniform(size=100), EXP1)
    a = anderson_darling_stat(data, EXP1)
    b = anderson_darling_stat(rng.permutation(data), EXP1)
    assert a == b


def test_ad_small_under_fitted_null():
    # A2 with parameters refitted to each sample stays far below 2.5
    below = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        x = weibull_quantile(rng.uniform(size=10**5), WeibullParams(1.5, 2.0))
        fit = fit_weibull_mle(x)
        below += anderson_darling_stat(x, fit.params) < 2.5
    assert below >= 99


def test_ad_detects_gross_shift():
    rng = np.random.default_rng(1)
    x = weibull_quantile(rng.uniform(size=500), EXP1)
    base = anderson_darling_stat(x, EXP1)
    shifted = anderson_darling_stat(x + 10.0, EXP1)
    assert shifted >= 10.0 * base


def test_ad_degenerate_z_rejected():
    # far-off params push the largest cdf value to exactly 1
    with pytest.raises(NumericsError, match="degenerate"):
        anderson_darling_stat(np.array([1.0, 2.0, 1e6]), WeibullParams(5.0, 0.01))


def test_ad_empty():
    with pytest.raises(DataError):
        anderson_darling_stat(np.array([]), EXP1)


# -- bootstrap p-value -------------------------------------------------------


def test_ad_pvalue_age(dataset):
    res = ad_pvalue(dataset.age, b=500, seed=0)
    assert res.statistic == pytest.approx(rv.AD_AGE_STAT, rel=1e-12)
    assert res.pvalue == pytest.approx(0.8762475049900199, rel=1e-12)
    assert res.replicates == 500
    assert res.failures == 0


def test_ad_pvalue_usage(dataset):
    res = ad_pvalue(dataset.usage, b=500, seed=1)
    assert res.statistic == pytest.approx(rv.AD_USAGE_STAT, rel=1e-12)
    assert res.pvalue == pytest.approx(0.7844311377245509, rel=1e-12)


def test_ad_pvalue_deterministic(dataset):
    a = ad_pvalue(dataset.age, b=300, seed=7)
    b = ad_pvalue(dataset.age, b=300, seed=7)
    c = ad_pvalue(dataset.age, b=300, seed=8)
    assert a == b
    assert a.statistic == c.statistic  # statistic does not depend on the seed


def test_ad_pvalue_in_unit_interval(dataset):
    res = ad_pvalue(dataset.age, b=200, seed=3)
    assert 0.0 < res.pvalue <= 1.0


def test_ad_pvalue_monotone_in_misfit(dataset):
    good = ad_pvalue(dataset.age, b=300, seed=0)
    bad = ad_pvalue(np.concatenate([dataset.age, [90.0, 95.0, 99.0]]), b=300, seed=0)
    assert bad.statistic > good.statistic
    assert bad.pvalue <= good.pvalue


def test_ad_pvalue_power_against_wrong_model():
    rng = np.random.default_rng(42)
    res = ad_pvalue(rng.uniform(0.05, 1.0, size=500), b=1000, seed=0)
    assert res.pvalue < 0.05


def test_ad_pvalue_refit_mode(dataset):
    res = ad_pvalue(dataset.age, b=500, seed=0, refit=True)
    assert res.pvalue == pytest.approx(0.48303393213572854, rel=1e-12)
    # refitting each replicate shrinks the null statistics, so p drops
    assert res.pvalue < ad_pvalue(dataset.age, b=500, seed=0).pvalue


def test_ad_pvalue_validation(dataset):
    with pytest.raises(DataError, match=">= 200"):
        ad_pvalue(dataset.age, b=199)
    with pytest.raises(FitError):
        # constant data cannot be fitted at all
        ad_pvalue(np.full(20, 2.0), b=200)

"""Student-t kernel accuracy.

Oracles: scipy.stats.t (a separate code path from the incomplete-beta CDF and
bracketed inversion used by the implementation), the closed forms for 1 and 2
degrees of freedom, and standard table constants.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps

from wsint import (
    DegeneratePosteriorError,
    ScaledTPosterior,
    hdi,
    normal_quantile,
    t_cdf,
    t_pdf,
    t_quantile,
    t_sample,
)

DF_GRID = (1, 2, 5, 18, 27, 100, 1000)
P_GRID = (0.005, 0.025, 0.05, 0.5, 0.95, 0.975, 0.995)


class TestCdf:
    def test_zero_is_half(self):
        for df in DF_GRID:
            assert t_cdf(df, 0.0) == 0.5

    def test_cauchy_quartile(self):
        assert t_cdf(1, 1.0) == pytest.approx(0.75, abs=1e-12)

    def test_frozen_criterion_value(self):
        assert t_cdf(18, 2.1009) == pytest.approx(0.975, abs=5e-4)

    def test_against_scipy(self):
        for df in DF_GRID:
            for x in (-30.0, -4.2, -1.0, -0.3, 0.7, 2.5, 8.0, 50.0):
                assert t_cdf(df, x) == pytest.approx(float(sps.t.cdf(x, df)), abs=1e-13)

    @given(st.sampled_from(DF_GRID), st.floats(-50.0, 50.0, allow_nan=False))
    def test_symmetry(self, df, x):
        assert abs(t_cdf(df, -x) - (1.0 - t_cdf(df, x))) <= 1e-12

    @given(st.sampled_from(DF_GRID), st.floats(-20.0, 20.0), st.floats(0.001, 20.0))
    def test_monotone(self, df, x, step):
        assert t_cdf(df, x + step) >= t_cdf(df, x)

    def test_infinite_arguments(self):
        assert t_cdf(5, math.inf) == 1.0
        assert t_cdf(5, -math.inf) == 0.0

    def test_rejects_bad_df(self):
        with pytest.raises(ValueError):
            t_cdf(0, 1.0)


class TestQuantile:
    def test_median_exact_zero(self):
        for df in DF_GRID:
            assert t_quantile(df, 0.5) == 0.0

    def test_cauchy_quartile(self):
        assert t_quantile(1, 0.75) == pytest.approx(1.0, abs=1e-10)

    def test_cauchy_closed_form(self):
        for p in (0.6, 0.9, 0.975, 0.99):
            assert t_quantile(1, p) == pytest.approx(math.tan(math.pi * (p - 0.5)), rel=1e-10)

    def test_df2_closed_form(self):
        # For df=2 the quantile is c * sqrt(2 / (1 - c^2)) with c = 2p - 1.
        for p in (0.6, 0.8, 0.975, 0.999):
            c = 2.0 * p - 1.0
            expected = c * math.sqrt(2.0 / (1.0 - c * c))
            assert t_quantile(2, p) == pytest.approx(expected, rel=1e-10)

    def test_frozen_table_constants(self):
        assert t_quantile(18, 0.975) == pytest.approx(2.1009, abs=5e-4)
        assert t_quantile(27, 0.975) == pytest.approx(2.0518, abs=5e-4)

    def test_round_trip_grid(self):
        for df in DF_GRID:
            for p in P_GRID:
                assert abs(t_cdf(df, t_quantile(df, p)) - p) < 1e-10

    def test_against_scipy_grid(self):
        for df in DF_GRID:
            for p in P_GRID:
                assert t_quantile(df, p) == pytest.approx(float(sps.t.ppf(p, df)), rel=1e-9, abs=1e-12)

    def test_antisymmetric_exactly(self):
        for df in DF_GRID:
            for p in (0.005, 0.3, 0.45, 0.975):
                assert t_quantile(df, 1.0 - p) == -t_quantile(df, p)

    def test_large_df_matches_normal(self):
        assert abs(t_quantile(10**6, 0.975) - 1.959964) < 1e-3

    def test_strictly_decreasing_in_df(self):
        previous = t_quantile(1, 0.975)
        for df in range(2, 1001):
            current = t_quantile(df, 0.975)
            assert current < previous
            previous = current

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            t_quantile(18, 0.0)
        with pytest.raises(ValueError):
            t_quantile(18, 1.0)
        with pytest.raises(ValueError):
            t_quantile(-3, 0.9)


class TestNormalQuantile:
    def test_value(self):
        assert normal_quantile(0.975) == pytest.approx(1.959964, abs=1e-6)

    def test_rejects_bounds(self):
        with pytest.raises(ValueError):
            normal_quantile(1.0)


class TestScaledTPosterior:
    def test_rejects_zero_scale(self):
        with pytest.raises(DegeneratePosteriorError):
            ScaledTPosterior(location=5.0, scale_sq=0.0, df=10)

    def test_rejects_bad_df(self):
        with pytest.raises(ValueError):
            ScaledTPosterior(location=0.0, scale_sq=1.0, df=0)

    def test_density_symmetric_unimodal(self):
        dist = ScaledTPosterior(location=2.0, scale_sq=4.0, df=7)
        peak = dist.pdf(2.0)
        for dx in (0.5, 1.0, 3.0):
            assert dist.pdf(2.0 - dx) == pytest.approx(dist.pdf(2.0 + dx), rel=1e-12)
            assert dist.pdf(2.0 + dx) < peak

    def test_sd(self):
        dist = ScaledTPosterior(location=0.0, scale_sq=4.0, df=10)
        assert dist.sd() == pytest.approx(2.0 * math.sqrt(10 / 8), rel=1e-12)
        assert ScaledTPosterior(0.0, 1.0, 2).sd() == math.inf


class TestSampling:
    def test_deterministic_per_seed(self):
        dist = ScaledTPosterior(location=1.0, scale_sq=2.0, df=9)
        a = t_sample(dist, 1000, seed=7)
        b = t_sample(dist, 1000, seed=7)
        assert np.array_equal(a, b)
        c = t_sample(dist, 1000, seed=8)
        assert not np.array_equal(a, c)

    def test_mean_near_location(self):
        dist = ScaledTPosterior(location=0.0, scale_sq=1.0, df=1000)
        draws = t_sample(dist, 100_000, seed=11)
        assert abs(draws.mean()) < 0.02

    def test_median_fraction(self):
        dist = ScaledTPosterior(location=4.0, scale_sq=9.0, df=6)
        n = 100_000
        draws = t_sample(dist, n, seed=3)
        frac = float(np.mean(draws <= dist.location))
        assert abs(frac - 0.5) <= 3.0 * math.sqrt(0.25 / n)

    def test_rejects_zero_draws(self):
        dist = ScaledTPosterior(location=0.0, scale_sq=1.0, df=3)
        with pytest.raises(ValueError):
            t_sample(dist, 0, seed=1)


class TestHdi:
    def test_standard_case(self):
        dist = ScaledTPosterior(location=0.0, scale_sq=1.0, df=18)
        est = hdi(dist, 0.95)
        assert est.center == 0.0
        assert est.half_width == t_quantile(18, 0.975)

    def test_canonical_interval(self):
        # location 13.0 and the interaction-based scale for 10 x 3 data.
        dist = ScaledTPosterior(location=13.0, scale_sq=11.066666666666666 / 270.0, df=27)
        est = hdi(dist, 0.95)
        assert est.half_width == pytest.approx(0.42, abs=0.005)
        assert est.lower == pytest.approx(13.0 - 0.4154, abs=5e-4)

    def test_mass_equals_level(self):
        for df in (2, 18, 200):
            dist = ScaledTPosterior(location=-3.0, scale_sq=5.0, df=df)
            for level in (0.5, 0.9, 0.95, 0.99):
                est = hdi(dist, level)
                mass = dist.cdf(est.upper) - dist.cdf(est.lower)
                assert abs(mass - level) < 1e-10

    def test_tiny_level_degenerates(self):
        dist = ScaledTPosterior(location=5.0, scale_sq=2.0, df=9)
        est = hdi(dist, 1e-9)
        assert est.center == 5.0
        assert est.half_width < 1e-6

    def test_rejects_bad_level(self):
        dist = ScaledTPosterior(location=0.0, scale_sq=1.0, df=9)
        with pytest.raises(ValueError):
            hdi(dist, 1.0)

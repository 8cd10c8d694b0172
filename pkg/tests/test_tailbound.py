"""Computable tail bound: level search, both sides, calibrated constant."""

import numpy as np
import pytest

from sqgsim import (
    ConfigError,
    SpectralField,
    find_r_eps,
    grid_for,
    power,
    quadratic,
    single_mode,
    smoothed_four_thirds,
    tail_bound_report,
)
from sqgsim.tailbound import (
    SOBOLEV_EMBED_CONSTANT,
    _calibration_values,
    calibrate_sobolev_constant,
    sobolev_embed_ratio,
)
from conftest import random_smooth_field


class TestLevelSearch:
    def test_quadratic_weight_scales_like_inverse_epsilon(self):
        r = find_r_eps(quadratic(), 0.1)
        assert 10.0 <= r <= 10.5  # next grid point after 1/epsilon

    def test_monotone_in_epsilon(self):
        w = smoothed_four_thirds()
        r1 = find_r_eps(w, 0.2)
        r2 = find_r_eps(w, 0.1)
        assert r2 >= r1

    def test_linear_weight_rejected(self):
        with pytest.raises(ConfigError):
            find_r_eps(power(1.0), 1e-3)

    def test_bad_epsilon(self):
        with pytest.raises(ConfigError):
            find_r_eps(quadratic(), 0.0)


class TestReport:
    def test_band_limited_field_has_zero_tail(self):
        rep = tail_bound_report(single_mode(grid_for(32)), quadratic(), 2.0, 0.1)
        assert rep.lhs == 0.0
        assert rep.satisfied

    def test_power_spectrum_field(self):
        f = random_smooth_field(64, 21, seed=1, decay=2.0)
        rep = tail_bound_report(f, quadratic(), 4.0, 0.1)
        assert rep.satisfied
        assert rep.lhs > 0.0
        assert rep.beta_mass > 0.0

    def test_r_eps_floor_keeps_bound_valid(self):
        # large epsilon pushes the raw level below 1; the split floors it
        f = 0.1 * random_smooth_field(64, 20, seed=2)
        rep = tail_bound_report(f, quadratic(), 8.0, epsilon=5.0)
        assert rep.satisfied

    def test_statement_form_recorded(self):
        f = random_smooth_field(64, 20, seed=3)
        rep = tail_bound_report(f, quadratic(), 8.0, 0.1)
        assert rep.rhs_statement_form > 0.0

    def test_mixed_corpus_always_satisfied(self):
        g = grid_for(128)
        rng = np.random.default_rng(42)
        betas = [quadratic(), smoothed_four_thirds()]
        checked = 0
        for i in range(50):
            vals = _calibration_values(rng, g, i)
            vals = vals - vals.mean()
            if not vals.any():
                continue
            from sqgsim import from_physical

            f = from_physical(vals, g)
            beta = betas[i % 2]
            for eps in (0.3, 0.03):
                for cut in (4.0, 16.0, 40.0):
                    rep = tail_bound_report(f, beta, cut, eps)
                    assert rep.satisfied, (i, eps, cut)
                    checked += 1
        assert checked >= 250


class TestCalibration:
    def test_stored_constant_dominates_fresh_measurement(self):
        fresh = calibrate_sobolev_constant(n=128, samples=120, seed=7)
        assert SOBOLEV_EMBED_CONSTANT >= 1.4 * fresh

    def test_spike_ratio_matches_known_value(self):
        v = np.zeros((128, 128))
        v[5, 9] = 2.0
        assert abs(sobolev_embed_ratio(v) - 1.8695) < 1e-3

    def test_ratio_of_zero_field(self):
        assert sobolev_embed_ratio(np.zeros((32, 32))) == 0.0

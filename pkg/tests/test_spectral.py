"""Transform pair, spectral multipliers, norms and their exact identities."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqgsim import (
    ConfigError,
    SpectralField,
    cutoff,
    fractional_laplacian,
    from_physical,
    grid_for,
    inner_hs,
    lp_norm,
    riesz_perp,
    single_mode,
    sobolev_norm,
    to_physical,
)
from conftest import random_smooth_field

# frozen oracle: 1-D lattice quadrature of |sin|^(4/3) on 256 points, ^(3/4)
LP_43_SIN_AT_256 = 0.6644385480136801


class TestTransformPair:
    def test_single_cosine_mode(self, grid32):
        c = np.zeros((32, 32), dtype=complex)
        c[1, 0] = 0.5
        c[-1, 0] = 0.5
        f = SpectralField(grid32, c)
        x1, _ = grid32.lattice()
        assert np.allclose(to_physical(f), np.cos(x1), atol=1e-13)

    def test_zero_field(self, grid32):
        assert np.all(to_physical(SpectralField.zeros(grid32)) == 0.0)

    def test_round_trip_and_direct_evaluation(self):
        n = 32
        g = grid_for(n)
        f = random_smooth_field(n, band=14, seed=5)
        vals = to_physical(f)
        back = from_physical(vals, g)
        num = np.sqrt(np.sum(np.abs(back.coeffs - f.coeffs) ** 2))
        den = np.sqrt(np.sum(np.abs(f.coeffs) ** 2))
        assert num / den < 1e-12

        # oracle: evaluate the truncated Fourier sum directly at lattice points
        rng = np.random.default_rng(0)
        for _ in range(10):
            i, j = rng.integers(0, n, 2)
            x = 2 * np.pi * np.array([i, j]) / n
            direct = np.sum(f.coeffs * np.exp(1j * (g.k1 * x[0] + g.k2 * x[1])))
            assert abs(direct.imag) < 1e-12
            assert abs(direct.real - vals[i, j]) < 1e-12

    def test_from_physical_subtracts_mean_and_symmetrizes(self, grid32):
        rng = np.random.default_rng(1)
        v = rng.standard_normal((32, 32)) + 3.7
        f = from_physical(v, grid32)
        assert f.coeffs[0, 0] == 0.0
        assert f.hermitian_defect() < 1e-15

    def test_size_mismatch_rejected(self, grid32):
        with pytest.raises(ConfigError):
            from_physical(np.zeros((16, 16)), grid32)
        with pytest.raises(ConfigError):
            SpectralField(grid32, np.zeros((16, 16), dtype=complex))

    def test_non_finite_rejected(self, grid32):
        v = np.zeros((32, 32))
        v[3, 3] = np.nan
        with pytest.raises(ValueError):
            from_physical(v, grid32)
        c = np.zeros((32, 32), dtype=complex)
        c[1, 2] = np.inf
        with pytest.raises(ValueError):
            SpectralField(grid32, c)


class TestFractionalLaplacian:
    def test_unit_mode_eigenfield(self, grid32):
        f = single_mode(grid32)  # sin x1
        out = fractional_laplacian(f, 0.5)
        assert np.allclose(out.coeffs, f.coeffs, atol=1e-15)

    def test_mode_two_eigenvalue(self, grid32):
        f = single_mode(grid32, 0, 2)  # sin(2 x2)
        out = fractional_laplacian(f, 0.5)
        assert np.allclose(out.coeffs, 2.0 * f.coeffs, atol=1e-14)

    def test_composition_identity(self, grid32):
        f = single_mode(grid32)
        g = fractional_laplacian(fractional_laplacian(f, -0.25), -0.25)
        g = fractional_laplacian(g, 0.5)
        assert np.allclose(g.coeffs, f.coeffs, atol=1e-14)

    def test_zero_mode_stays_zero_for_negative_alpha(self):
        f = random_smooth_field(32, 10, seed=3)
        out = fractional_laplacian(f, -1.0)
        assert out.coeffs[0, 0] == 0.0
        assert np.all(np.isfinite(out.coeffs.view(np.float64)))

    def test_non_finite_alpha_rejected(self, grid32):
        with pytest.raises(ConfigError):
            fractional_laplacian(single_mode(grid32), np.nan)

    def test_symmetry_in_l2_pairing(self):
        f = random_smooth_field(64, 20, seed=8)
        g = random_smooth_field(64, 20, seed=9)
        for alpha in (-0.5, 0.25, 1.0):
            a = inner_hs(fractional_laplacian(f, alpha), g, 0.0)
            b = inner_hs(f, fractional_laplacian(g, alpha), 0.0)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


class TestRieszPerp:
    def test_sin_x1(self, grid32):
        u1, u2 = riesz_perp(single_mode(grid32))
        x1, _ = grid32.lattice()
        assert np.allclose(to_physical(u1), 0.0, atol=1e-14)
        assert np.allclose(to_physical(u2), np.cos(x1), atol=1e-13)

    def test_sin_x2(self, grid32):
        u1, u2 = riesz_perp(single_mode(grid32, 0, 1))
        _, x2 = grid32.lattice()
        assert np.allclose(to_physical(u1), -np.cos(x2), atol=1e-13)
        assert np.allclose(to_physical(u2), 0.0, atol=1e-14)

    def test_divergence_free(self):
        g = grid_for(64)
        th = random_smooth_field(64, 30, seed=11)
        u1, u2 = riesz_perp(th)
        div = g.k1 * u1.coeffs + g.k2 * u2.coeffs
        assert np.max(np.abs(div)) < 1e-14

    def test_components_hermitian_zero_mean(self):
        th = random_smooth_field(32, 12, seed=12)
        for u in riesz_perp(th):
            assert u.coeffs[0, 0] == 0.0
            assert u.hermitian_defect() < 1e-14


class TestNorms:
    def test_sobolev_hand_values(self, grid32):
        assert abs(sobolev_norm(single_mode(grid32), -0.5) - np.sqrt(0.5)) < 1e-14
        assert abs(sobolev_norm(single_mode(grid32, 2, 0), 1.0) - 2 * np.sqrt(0.5)) < 1e-14

    def test_norm_matches_inner_product(self):
        f = random_smooth_field(32, 12, seed=13)
        for s in (-0.5, 0.0, 1.0):
            assert abs(sobolev_norm(f, s) - np.sqrt(inner_hs(f, f, s))) < 1e-13

    def test_inner_hand_values(self, grid32):
        f = single_mode(grid32)
        assert abs(inner_hs(f, f, -0.5) - 0.5) < 1e-14
        g = single_mode(grid32, 0, 1)
        for s in (-0.5, 0.0, 0.7):
            assert inner_hs(f, g, s) == 0.0

    def test_cauchy_schwarz(self):
        for seed in range(5):
            f = random_smooth_field(32, 12, seed=20 + seed)
            g = random_smooth_field(32, 12, seed=40 + seed)
            for s in (-0.5, 0.0):
                lhs = abs(inner_hs(f, g, s))
                assert lhs <= sobolev_norm(f, s) * sobolev_norm(g, s) + 1e-12

    def test_inner_grid_mismatch(self):
        with pytest.raises(ConfigError):
            inner_hs(single_mode(grid_for(32)), single_mode(grid_for(64)), 0.0)

    def test_lp_hand_values(self, grid32):
        assert abs(lp_norm(single_mode(grid32), 2.0) - np.sqrt(0.5)) < 1e-13
        assert lp_norm(SpectralField.zeros(grid32), 4.0) == 0.0
        assert abs(lp_norm(single_mode(grid32), np.inf) - 1.0) < 1e-12

    def test_lp_four_thirds_oracle(self):
        f = single_mode(grid_for(256))
        assert abs(lp_norm(f, 4.0 / 3.0) - LP_43_SIN_AT_256) < 1e-10

    def test_lp_rejects_p_below_one(self, grid32):
        with pytest.raises(ConfigError):
            lp_norm(single_mode(grid32), 0.5)

    @given(seed=st.integers(0, 10_000), band=st.sampled_from([4, 8, 12]))
    @settings(max_examples=25, deadline=None)
    def test_parseval(self, seed, band):
        f = random_smooth_field(32, band, seed=seed)
        l2 = lp_norm(f, 2.0) ** 2
        s0 = sobolev_norm(f, 0.0) ** 2
        assert abs(l2 - s0) <= 1e-12 * max(1.0, abs(l2))


class TestCutoff:
    def test_hand_examples(self, grid32):
        f = single_mode(grid32)
        assert np.allclose(cutoff(f, 1, "low").coeffs, f.coeffs)
        assert np.all(cutoff(f, 1, "high").coeffs == 0.0)
        h = single_mode(grid32) + single_mode(grid32, 0, 3)
        high = cutoff(h, 2, "high")
        assert np.allclose(high.coeffs, single_mode(grid32, 0, 3).coeffs, atol=1e-15)

    def test_low_high_reconstruct(self):
        f = random_smooth_field(32, 15, seed=31)
        lo = cutoff(f, 7.3, "low")
        hi = cutoff(f, 7.3, "high")
        assert np.array_equal(lo.coeffs + hi.coeffs, f.coeffs)

    @given(seed=st.integers(0, 10_000), ncut=st.floats(0.0, 16.0))
    @settings(max_examples=25, deadline=None)
    def test_pythagoras(self, seed, ncut):
        f = random_smooth_field(32, 15, seed=seed)
        for s in (-0.5, 0.5):
            whole = sobolev_norm(f, s) ** 2
            parts = sobolev_norm(cutoff(f, ncut, "low"), s) ** 2 + \
                sobolev_norm(cutoff(f, ncut, "high"), s) ** 2
            assert abs(whole - parts) <= 1e-12 * max(1.0, whole)

    def test_bad_args(self, grid32):
        with pytest.raises(ConfigError):
            cutoff(single_mode(grid32), -1.0)
        with pytest.raises(ConfigError):
            cutoff(single_mode(grid32), 1.0, side="middle")


def test_concurrent_matches_serial():
    from concurrent.futures import ThreadPoolExecutor

    from sqgsim import nonlinear_term

    fields = [random_smooth_field(64, 16, seed=s) for s in range(8)]
    serial = [nonlinear_term(f).coeffs for f in fields]
    with ThreadPoolExecutor(max_workers=4) as pool:
        parallel = list(pool.map(lambda f: nonlinear_term(f).coeffs, fields))
    for a, b in zip(serial, parallel):
        assert np.array_equal(a, b)

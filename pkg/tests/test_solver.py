"""Stepper contracts: linear exactness, conservation, CFL and run bookkeeping."""

import numpy as np
import pytest

from sqgsim import (
    CFLViolationError,
    ConfigError,
    SolverConfig,
    grid_for,
    hamiltonian,
    lp_norm,
    nonlinear_term,
    run,
    single_mode,
    sobolev_sq,
    step,
    to_physical,
    u_max,
)
from sqgsim.errors import BlowUpError
from sqgsim.solver import _nonlinear_raw, n_steps
from conftest import random_smooth_field


def cfg(**kw):
    base = dict(nu=0.1, grid_n=32, dt=1e-2, t_end=0.1)
    base.update(kw)
    return SolverConfig(**base)


class TestConfigValidation:
    @pytest.mark.parametrize("bad", [
        dict(nu=-0.1), dict(nu=np.nan),
        dict(grid_n=33), dict(grid_n=4),
        dict(dt=0.0), dict(dt=-1e-3),
        dict(t_end=-1.0),
        dict(integrator="euler"),
        dict(dealias="3/2"),
        dict(record_every=0),
        dict(cfl_safety=0.0), dict(cfl_safety=1.5),
        dict(dt=0.03, t_end=0.1),  # not an integer multiple
    ])
    def test_rejects(self, bad):
        with pytest.raises(ConfigError):
            cfg(**bad).validate()

    def test_steps_divisibility(self):
        assert n_steps(1.0, 1e-3) == 1000
        assert n_steps(0.0, 1e-3) == 0
        with pytest.raises(ConfigError):
            n_steps(1.0, 0.0003)


class TestNonlinearTerm:
    def test_one_dimensional_profile_is_steady(self, grid64):
        out = nonlinear_term(single_mode(grid64))
        assert np.max(np.abs(out.coeffs)) < 1e-15

    def test_two_mode_cancellation(self, grid64):
        theta = single_mode(grid64) + single_mode(grid64, 0, 1)
        out = nonlinear_term(theta)
        assert np.max(np.abs(out.coeffs)) < 1e-15

    def test_matches_symbolic_expansion(self):
        # theta = sin x1 + cos(x1 + x2); oracle built symbolically, no FFTs
        import sympy as sp

        x1s, x2s = sp.symbols("x1 x2", real=True)
        theta_s = sp.sin(x1s) + sp.cos(x1s + x2s)
        # velocity from the mode formula u(n) = i(-n2, n1)/|n| theta(n):
        # sin x1 -> (0, cos x1); cos(x1+x2) -> (sin(x1+x2), -sin(x1+x2))/sqrt(2)
        u1_s = sp.sin(x1s + x2s) / sp.sqrt(2)
        u2_s = sp.cos(x1s) - sp.sin(x1s + x2s) / sp.sqrt(2)
        adv_s = sp.expand_trig(sp.simplify(
            u1_s * sp.diff(theta_s, x1s) + u2_s * sp.diff(theta_s, x2s)
        ))
        fn = sp.lambdify((x1s, x2s), -adv_s, "numpy")

        from sqgsim import SpectralField

        g = grid_for(64)
        x1, x2 = g.lattice()
        c = np.zeros((64, 64), dtype=complex)
        c[1, 0] = 1 / 2j
        c[-1, 0] = -1 / 2j
        c[1, 1] = 0.5
        c[-1, -1] = 0.5
        theta = SpectralField(g, c)
        out = to_physical(nonlinear_term(theta))
        assert np.max(np.abs(out - fn(x1, x2))) < 1e-11

    def test_blow_up_guard(self):
        g = grid_for(32)
        c = np.ones((32, 32), dtype=complex)
        c[3, 3] = np.nan
        with pytest.raises(BlowUpError):
            _nonlinear_raw(c, g, t_hint=1.0)


class TestStepExactness:
    @pytest.mark.parametrize("integrator", ["etdrk4", "ifrk4"])
    def test_linear_mode_single_step_exact(self, integrator):
        g = grid_for(32)
        theta = single_mode(g)
        c = cfg(grid_n=32, nu=0.1, dt=0.5, t_end=0.5, nonlinearity=False,
                integrator=integrator)
        out = step(theta, c)
        assert np.allclose(out.coeffs, np.exp(-0.05) * theta.coeffs, rtol=1e-15, atol=1e-18)

    @pytest.mark.parametrize("integrator", ["etdrk4", "ifrk4"])
    def test_linear_mode_multimode_exact(self, integrator):
        g = grid_for(64)
        theta = random_smooth_field(64, 20, seed=2)
        c = cfg(grid_n=64, nu=0.3, dt=0.25, t_end=0.25, nonlinearity=False,
                integrator=integrator)
        out = step(theta, c)
        exact = np.exp(-0.3 * g.kmod * 0.25) * theta.coeffs
        num = np.max(np.abs(out.coeffs - exact))
        assert num <= 1e-13 * np.max(np.abs(theta.coeffs))

    @pytest.mark.parametrize("integrator", ["etdrk4", "ifrk4"])
    def test_inviscid_steady_state_drift(self, integrator):
        g = grid_for(32)
        theta = single_mode(g)
        c = cfg(grid_n=32, nu=0.0, dt=1e-2, t_end=1e-2, integrator=integrator)
        out = step(theta, c)
        assert np.max(np.abs(out.coeffs - theta.coeffs)) < 1e-13

    def test_footnote_decay_with_nonlinearity_on(self):
        # u . grad theta vanishes along sin x1, so the viscous decay is exact
        g = grid_for(32)
        theta = single_mode(g)
        c = cfg(grid_n=32, nu=0.1, dt=0.01, t_end=0.2, record_every=20)
        traj = run(theta, c)
        final = traj.states[-1]
        exact = np.exp(-0.1 * 0.2) * theta.coeffs
        rel = np.max(np.abs(final.coeffs - exact)) / np.max(np.abs(exact))
        assert rel < 1e-12


class TestRunBookkeeping:
    def test_zero_horizon(self):
        theta = single_mode(grid_for(32))
        traj = run(theta, cfg(t_end=0.0))
        assert traj.times == (0.0,)
        assert np.array_equal(traj.states[0].coeffs, theta.coeffs)

    def test_recording_cadence_and_final(self):
        theta = single_mode(grid_for(32))
        traj = run(theta, cfg(dt=0.01, t_end=0.05, record_every=2))
        assert traj.times == (0.0, 0.02, 0.04, 0.05)

    def test_grid_mismatch(self):
        theta = single_mode(grid_for(64))
        with pytest.raises(ConfigError):
            run(theta, cfg(grid_n=32))

    def test_zero_mean_propagates_exactly(self):
        theta = random_smooth_field(32, 8, seed=3)
        traj = run(theta, cfg(nu=0.05, dt=0.01, t_end=0.1, record_every=2))
        for s in traj.states:
            assert s.coeffs[0, 0] == 0.0

    def test_deterministic_bitwise(self):
        theta = random_smooth_field(32, 8, seed=4)
        c = cfg(nu=0.02, dt=0.01, t_end=0.1)
        a = run(theta, c).states[-1].coeffs
        b = run(theta, c).states[-1].coeffs
        assert np.array_equal(a, b)

    def test_cfl_violation_aborts_with_time(self):
        theta = random_smooth_field(64, 16, seed=5, norm=20.0)  # fast flow
        with pytest.raises(CFLViolationError) as exc:
            run(theta, cfg(grid_n=64, nu=0.0, dt=0.05, t_end=0.5))
        assert exc.value.t == 0.0
        assert exc.value.category == "cfl_violation"

    def test_u_max_hand_value(self):
        assert abs(u_max(single_mode(grid_for(32))) - 1.0) < 1e-12


class TestConservation:
    def test_inviscid_hamiltonian_drift_small(self):
        theta = random_smooth_field(64, 8, seed=6)
        c = cfg(grid_n=64, nu=0.0, dt=0.01, t_end=0.5, record_every=10)
        traj = run(theta, c)
        h0 = hamiltonian(traj.states[0])
        drift = abs(hamiltonian(traj.states[-1]) - h0) / h0
        assert drift < 1e-6

    def test_integrators_agree_to_high_order(self):
        theta = random_smooth_field(32, 8, seed=7)
        base = dict(grid_n=32, nu=0.05, dt=0.005, t_end=0.25, record_every=50)
        a = run(theta, cfg(integrator="etdrk4", **base)).states[-1]
        b = run(theta, cfg(integrator="ifrk4", **base)).states[-1]
        diff = np.max(np.abs(a.coeffs - b.coeffs))
        assert diff < 1e-9

    def test_viscous_lp_monotone(self):
        theta = random_smooth_field(32, 8, seed=8)
        traj = run(theta, cfg(grid_n=32, nu=0.1, dt=0.005, t_end=0.5, record_every=20))
        for p in (4.0 / 3.0, 2.0, 3.0):
            vals = [lp_norm(s, p) for s in traj.states]
            for a, b in zip(vals, vals[1:]):
                assert b <= a * (1.0 + 1e-6)

    def test_viscous_energy_balance(self):
        theta = random_smooth_field(32, 8, seed=9)
        nu = 0.05
        traj = run(theta, cfg(grid_n=32, nu=nu, dt=0.002, t_end=0.5, record_every=5))
        h = [hamiltonian(s) for s in traj.states]
        l2 = [sobolev_sq(s, 0.0) for s in traj.states]
        diss = 2 * nu * np.concatenate([[0.0], np.cumsum(
            0.5 * np.diff(traj.times) * (np.array(l2[:-1]) + np.array(l2[1:]))
        )])
        resid = np.max(np.abs(np.array(h) + diss - h[0])) / h[0]
        assert resid < 1e-5

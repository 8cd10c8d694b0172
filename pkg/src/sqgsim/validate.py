"""Self-contained invariant suites behind the ``validate`` subcommand.

Each suite re-derives its expectations from closed forms or structural
identities, so a fresh checkout can be smoke-verified without any external
fixture data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagnostics import cordoba_check, energy_balance_residual, higher_bound_check
from .fields import SpectralField, grid_for, single_mode
from .grid import hermitian_project
from .norms import lp_norm, sobolev_norm, sobolev_sq
from .operators import cutoff, riesz_perp
from .commutator import weak_nonlinearity_both_sides
from .solver import SolverConfig, run
from .tailbound import _calibration_values, tail_bound_report
from .weights import quadratic, smoothed_four_thirds


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _random_field(n: int, band: float, seed: int, decay: float = 0.0) -> SpectralField:
    g = grid_for(n)
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    c *= (g.kmod > 0) & (g.kmod <= band)
    if decay:
        c = c * g.kmod_safe ** (-decay)
    f = SpectralField.from_coeffs(g, hermitian_project(c))
    return f * (1.0 / np.sqrt(np.sum(np.abs(f.coeffs) ** 2)))


def parseval_suite(samples: int = 30) -> SuiteResult:
    worst = 0.0
    for s in range(samples):
        f = _random_field(64, 20, seed=s)
        err = abs(lp_norm(f, 2.0) ** 2 - sobolev_norm(f, 0.0) ** 2)
        worst = max(worst, err)
        lo = cutoff(f, 7.0, "low")
        hi = cutoff(f, 7.0, "high")
        pyth = abs(sobolev_sq(f, -0.5) - sobolev_sq(lo, -0.5) - sobolev_sq(hi, -0.5))
        worst = max(worst, pyth)
        u1, u2 = riesz_perp(f)
        g = f.grid
        div = float(np.max(np.abs(g.k1 * u1.coeffs + g.k2 * u2.coeffs)))
        worst = max(worst, div * 1e2)  # divergence tolerance is 1e-14
    return SuiteResult("parseval", worst < 1e-12, f"worst defect {worst:.2e}")


def commutator_suite(samples: int = 20) -> SuiteResult:
    worst = 0.0
    for s in range(samples):
        theta = _random_field(64, 16, seed=100 + s)
        phi = _random_field(64, 16, seed=200 + s)
        lhs, rhs = weak_nonlinearity_both_sides(theta, phi)
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(lhs)))
    return SuiteResult("commutator", worst < 1e-10, f"worst relative gap {worst:.2e}")


def positivity_suite(samples: int = 10) -> SuiteResult:
    worst = 0.0
    for s in range(samples):
        f = _random_field(64, 12, seed=300 + s, decay=0.5)
        for beta in (quadratic(), smoothed_four_thirds()):
            for alpha in (0.25, 0.5, 1.0):
                val = cordoba_check(f, beta, alpha)
                scale = sobolev_sq(f, alpha)
                worst = min(worst, val / scale)
    return SuiteResult("positivity", worst >= -1e-10, f"most negative ratio {worst:.2e}")


def balance_suite() -> SuiteResult:
    g = grid_for(32)
    cfg = SolverConfig(nu=0.1, grid_n=32, dt=1e-3, t_end=0.5, record_every=10)
    traj = run(single_mode(g), cfg)
    resid = energy_balance_residual(traj, 0.1)
    _, _, higher_ok = higher_bound_check(traj, 0.1)
    final = traj.states[-1]
    exact = np.exp(-0.1 * 0.5)
    drift = abs(sobolev_norm(final, -0.5) - exact * np.sqrt(0.5)) / (exact * np.sqrt(0.5))
    ok = resid < 1e-6 and higher_ok and drift < 1e-10
    return SuiteResult("balance", ok, f"residual {resid:.2e}, decay error {drift:.2e}")


def tailbound_suite(samples: int = 30) -> SuiteResult:
    g = grid_for(128)
    rng = np.random.default_rng(7)
    betas = (quadratic(), smoothed_four_thirds())
    from .fields import from_physical

    failures = 0
    checked = 0
    for i in range(samples):
        vals = _calibration_values(rng, g, i)
        vals = vals - vals.mean()
        if not vals.any():
            continue
        f = from_physical(vals, g)
        for eps in (0.3, 0.03):
            rep = tail_bound_report(f, betas[i % 2], n_cutoff=16.0, epsilon=eps)
            checked += 1
            failures += 0 if rep.satisfied else 1
    return SuiteResult("tailbound", failures == 0, f"{checked - failures}/{checked} satisfied")


ALL_SUITES = (parseval_suite, commutator_suite, positivity_suite, balance_suite, tailbound_suite)


def run_all() -> list[SuiteResult]:
    return [suite() for suite in ALL_SUITES]

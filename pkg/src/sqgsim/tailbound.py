"""Quantitative tail decay from superlinear integrability.

For a field f with finite superlinear mass M = int beta(|f|^(4/3)) dx the
high-frequency energy in the H^(-1/2) norm obeys a computable two-term bound:
split f at the level R where r/beta(r) drops below a chosen epsilon; the
bounded part contributes at most R^2/N to the tail, the excess part is small
in L^(4/3) and enters through the embedding L^(4/3) -> H^(-1/2).

The embedding constant is not pinned down analytically here; it is measured
once over a mixed corpus of lattice fields (including spikes, which are the
extremizers of this scale-critical embedding) and frozen with a 1.5x safety
factor. ``calibrate_sobolev_constant`` reproduces the measurement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .fields import SpectralField, from_physical, grid_for, to_physical
from .norms import sobolev_sq
from .weights import ConvexWeight

# max ratio ||g||_{H^-1/2} / ||g||_{L^4/3} measured by calibrate_sobolev_constant
# (N=128, 500 mixed-spectrum samples, seed 2024: 1.8695, attained by a lattice
# spike) times a 1.5 safety factor. A fixed-point ascent to the discrete
# extremizer gives 1.907 at N=256, so the margin is real, not sampling luck.
SOBOLEV_EMBED_CONSTANT = 2.8042


def sobolev_embed_ratio(values: np.ndarray) -> float:
    """Discrete ratio ||g||_{H^(-1/2)} / ||g||_{L^(4/3)} for lattice values.

    The numerator excludes the mean mode (homogeneous norm); the denominator
    is the normalized-measure lattice norm of the raw values.
    """
    n = values.shape[0]
    g = grid_for(n)
    f = from_physical(values - values.mean(), g)
    num = np.sqrt(sobolev_sq(f, -0.5))
    den = float(np.mean(np.abs(values) ** (4.0 / 3.0)) ** 0.75)
    if den == 0.0:
        return 0.0
    return float(num) / den


def _calibration_values(rng: np.random.Generator, g, kind: int) -> np.ndarray:
    """One corpus member: spikes, power-law spectra, bumps, level-truncations."""
    n = g.n
    kind = kind % 5
    if kind == 0:  # white noise
        return rng.standard_normal((n, n))
    if kind == 1:  # random-phase power-law spectrum
        sigma = rng.uniform(0.2, 2.5)
        c = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        c *= g.kmod_safe ** (-sigma)
        c[0, 0] = 0.0
        f = SpectralField.from_coeffs(g, c)
        return to_physical(f)
    if kind == 2:  # narrow gaussian bump (near-extremal concentration)
        x1, x2 = g.lattice()
        w = rng.uniform(2.0 * np.pi / n, 0.5)
        cx, cy = rng.uniform(0, 2 * np.pi, 2)
        d1 = np.minimum(np.abs(x1 - cx), 2 * np.pi - np.abs(x1 - cx))
        d2 = np.minimum(np.abs(x2 - cy), 2 * np.pi - np.abs(x2 - cy))
        return np.exp(-(d1**2 + d2**2) / (2 * w * w))
    if kind == 3:  # lattice spikes
        v = np.zeros((n, n))
        for _ in range(rng.integers(1, 4)):
            v[rng.integers(n), rng.integers(n)] = rng.uniform(0.5, 2.0)
        return v
    # kind 4: level-set truncation of a rough field (shape of the excess part)
    v = _calibration_values(rng, g, int(rng.integers(0, 3)))
    q = np.quantile(np.abs(v), rng.uniform(0.7, 0.99))
    return np.where(np.abs(v) > q, v, 0.0)


def calibrate_sobolev_constant(n: int = 128, samples: int = 500, seed: int = 2024) -> float:
    """Max embedding ratio over the calibration corpus (without safety factor)."""
    g = grid_for(n)
    rng = np.random.default_rng(seed)
    best = 0.0
    for i in range(samples):
        v = _calibration_values(rng, g, i)
        best = max(best, sobolev_embed_ratio(v))
    return best


def find_r_eps(beta: ConvexWeight, epsilon: float,
               r_lo: float = 1e-6, r_hi: float = 1e12, points: int = 2048) -> float:
    """Smallest grid point R with r/beta(r) < epsilon for all sampled r >= R."""
    if epsilon <= 0:
        raise ConfigError("epsilon must be positive")
    r = np.logspace(np.log10(r_lo), np.log10(r_hi), points)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = r / beta(r)
    ok = ratio < epsilon
    # suffix scan: last index where the condition fails
    bad = np.nonzero(~ok)[0]
    if bad.size == 0:
        return float(r[0])
    if bad[-1] == points - 1:
        raise ConfigError(
            f"weight {beta.label!r} not superlinear enough: r/beta(r) >= {epsilon} "
            f"up to r={r_hi:g}"
        )
    return float(r[bad[-1] + 1])


@dataclass(frozen=True)
class TailBoundReport:
    """Both sides of the computable tail bound for one field."""

    cutoff_n: float
    epsilon: float
    r_eps: float
    beta_mass: float        # int beta(|f|^(4/3))
    lhs: float              # ||f_{>N}||^2_{H^(-1/2)}
    rhs: float              # proof-form bound 2(R^2/N + C^2 (eps M)^(3/2))
    rhs_statement_form: float  # statement-shaped value 2(R/N + C^2 (eps M)^(3/2))
    satisfied: bool


def tail_bound_report(
    f: SpectralField,
    beta: ConvexWeight,
    n_cutoff: float,
    epsilon: float,
    embed_constant: float = SOBOLEV_EMBED_CONSTANT,
) -> TailBoundReport:
    """Evaluate the two-term tail bound and check it.

    The level split uses threshold max(R_eps, 1) so that the epsilon*M control
    of the excess applies to |f|^(4/3) on the complement; the excess term is
    additionally clipped by the full |f|^(4/3) mass, which always dominates it.
    The torus volume factor is 1 under the normalized measure.
    """
    if n_cutoff <= 0:
        raise ConfigError("tail cutoff must be positive")
    r_eps = find_r_eps(beta, epsilon)
    level = max(r_eps, 1.0)

    vals = to_physical(f)
    mass_43 = np.abs(vals) ** (4.0 / 3.0)
    beta_mass = float(np.mean(beta(mass_43)))

    from .operators import cutoff as freq_cutoff

    lhs = sobolev_sq(freq_cutoff(f, n_cutoff, side="high"), -0.5)

    excess_mass = min(epsilon * beta_mass, float(np.mean(mass_43)))
    torus_volume = 1.0
    rhs = 2.0 * (torus_volume * level * level / n_cutoff
                 + embed_constant**2 * excess_mass**1.5)
    rhs_statement = 2.0 * (level / n_cutoff + embed_constant**2 * excess_mass**1.5)
    return TailBoundReport(
        cutoff_n=float(n_cutoff),
        epsilon=float(epsilon),
        r_eps=r_eps,
        beta_mass=beta_mass,
        lhs=lhs,
        rhs=rhs,
        rhs_statement_form=rhs_statement,
        satisfied=bool(lhs <= rhs * (1.0 + 1e-12)),
    )

"""Norms and pairings: homogeneous Sobolev sums, Lebesgue lattice quadrature.

Conventions (fixed package-wide): Sobolev norms are plain coefficient sums
``sum |n|^(2s) |f(n)|^2`` over n != 0; Lebesgue norms use the normalized
measure dx/(2*pi)^2, i.e. the lattice mean. Under these conventions the
L2 norm and the s=0 Sobolev norm agree coefficient-for-coefficient.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import ConfigError
from .fields import SpectralField, to_physical


def sobolev_norm(f: SpectralField, s: float) -> float:
    """Homogeneous Sobolev norm ``(sum_{n != 0} |n|^{2s} |f(n)|^2)^(1/2)``."""
    g = f.grid
    w = g.kmod_safe ** (2.0 * s)
    return float(np.sqrt(np.sum(w * (f.coeffs.real**2 + f.coeffs.imag**2))))


def sobolev_sq(f: SpectralField, s: float) -> float:
    """Squared Sobolev norm; avoids the sqrt/square round trip in balances."""
    g = f.grid
    w = g.kmod_safe ** (2.0 * s)
    return float(np.sum(w * (f.coeffs.real**2 + f.coeffs.imag**2)))


def inner_hs(f: SpectralField, g: SpectralField, s: float) -> float:
    """Real bilinear pairing ``sum |n|^{2s} f(n) conj(g(n))``.

    For real fields the Hermitian pairing has vanishing imaginary part
    (below 1e-13 in floating point); it is discarded.
    """
    if f.grid != g.grid:
        raise ConfigError("inner_hs requires both fields on the same grid")
    w = f.grid.kmod_safe ** (2.0 * s)
    return float(np.real(np.sum(w * f.coeffs * np.conj(g.coeffs))))


def lp_norm(f: SpectralField, p: float) -> float:
    """L^p norm under the normalized measure; p = inf gives the lattice max."""
    if p == np.inf:
        return float(np.max(np.abs(to_physical(f))))
    if p < 1:
        raise ConfigError(f"lp_norm requires p >= 1, got {p}")
    v = np.abs(to_physical(f))
    return float(np.mean(v**p) ** (1.0 / p))


def hamiltonian(f: SpectralField) -> float:
    """Squared H^(-1/2) norm, the conserved quantity of the inviscid flow."""
    return sobolev_sq(f, -0.5)


def c3_lattice_norm(phi: SpectralField) -> float:
    """Lattice sup of all spectral derivatives of order <= 3.

    A quadrature stand-in for the C^3 norm, sufficient for boundedness-ratio
    probes of the weak-form pairing.
    """
    from .operators import derivative  # local import to avoid a cycle

    best = 0.0
    for a, b in itertools.product(range(4), repeat=2):
        if a + b > 3:
            continue
        best = max(best, float(np.max(np.abs(to_physical(derivative(phi, (a, b)))))))
    return best

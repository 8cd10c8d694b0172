"""Linear spectral operators: fractional Laplacian, Riesz transforms, cutoffs.

All multipliers act diagonally on coefficients, use the Euclidean modulus
|n| = sqrt(n1^2 + n2^2), and leave the (0,0) mode at zero, which keeps every
operator (including negative fractional powers) well defined on zero-mean
fields.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .fields import SpectralField


def fractional_laplacian(f: SpectralField, alpha: float) -> SpectralField:
    """Apply (-Laplace)^alpha, i.e. multiply coefficients by |n|^(2*alpha)."""
    if not np.isfinite(alpha):
        raise ConfigError("alpha must be finite")
    g = f.grid
    mult = g.kmod_safe ** (2.0 * alpha)
    out = f.coeffs * mult
    out[0, 0] = 0.0
    return SpectralField(g, out, _owned=True)


def riesz_perp(theta: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Divergence-free velocity u = grad_perp (-Laplace)^(-1/2) theta.

    Component coefficients are ``i*(-n2, n1)/|n| * theta(n)``, so
    ``n . u(n) = 0`` holds mode by mode.
    """
    g = theta.grid
    base = 1j * theta.coeffs / g.kmod_safe
    u1 = -g.k2 * base
    u2 = g.k1 * base
    u1[0, 0] = 0.0
    u2[0, 0] = 0.0
    return (
        SpectralField(g, u1, _owned=True),
        SpectralField(g, u2, _owned=True),
    )


def gradient(f: SpectralField) -> tuple[SpectralField, SpectralField]:
    """Spectral gradient (d/dx1, d/dx2)."""
    g = f.grid
    return (
        SpectralField(g, 1j * g.k1 * f.coeffs, _owned=True),
        SpectralField(g, 1j * g.k2 * f.coeffs, _owned=True),
    )


def derivative(f: SpectralField, orders: tuple[int, int]) -> SpectralField:
    """Mixed derivative d^(a+b) f / dx1^a dx2^b, spectrally."""
    a, b = orders
    g = f.grid
    mult = (1j * g.k1) ** a * (1j * g.k2) ** b
    return SpectralField(g, mult * f.coeffs, _owned=True)


def cutoff(f: SpectralField, n_cut: float, side: str = "low") -> SpectralField:
    """Sharp Fourier cutoff at Euclidean modulus ``n_cut``.

    ``low`` keeps |n| <= n_cut, ``high`` keeps |n| > n_cut; the two parts
    reconstruct the field exactly.
    """
    if n_cut < 0:
        raise ConfigError("cutoff wavenumber must be nonnegative")
    g = f.grid
    low = g.kmod <= n_cut
    if side == "low":
        keep = low
    elif side == "high":
        keep = ~low
    else:
        raise ConfigError(f"cutoff side must be 'low' or 'high', got {side!r}")
    return SpectralField(g, np.where(keep, f.coeffs, 0.0), _owned=True)


def dealias(f: SpectralField) -> SpectralField:
    """Zero every mode at or beyond the 2/3-rule band |n| >= N/3."""
    g = f.grid
    return SpectralField(g, np.where(g.dealias_keep, f.coeffs, 0.0), _owned=True)

"""Fourier grid for real scalar fields on the 2-torus [0, 2*pi)^2.

Coefficients are stored on the full fft2 layout: entry ``[i, j]`` holds the
amplitude of ``exp(i*(n1*x1 + n2*x2))`` with integer wavenumbers
``n1 = freq(i)``, ``n2 = freq(j)`` ranging over ``[-N/2, N/2)`` per axis.
Physical values live on the uniform N x N lattice ``x_k = 2*pi*k/N``.

Transforms are unitary in the "analyst" normalization: a single mode with
coefficient 1 has physical amplitude 1, and the lattice mean of ``|f|^2``
equals the plain sum of squared coefficient moduli (Parseval without 2*pi
factors; all integrals use the normalized measure ``dx/(2*pi)^2``).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.fft as sfft

from .errors import ConfigError

MIN_GRID = 8


class Grid:
    """Square N x N spectral grid, N even and >= 8. Immutable after init."""

    __slots__ = ("n", "k1", "k2", "kmod", "kmod_safe", "dealias_keep", "x")

    def __init__(self, n: int):
        if n < MIN_GRID or n % 2 != 0:
            raise ConfigError(f"grid size must be even and >= {MIN_GRID}, got {n}")
        self.n = int(n)
        k = np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)
        k1, k2 = np.meshgrid(k, k, indexing="ij")
        self.k1 = k1
        self.k2 = k2
        self.kmod = np.sqrt((k1 * k1 + k2 * k2).astype(np.float64))
        kmod_safe = self.kmod.copy()
        kmod_safe[0, 0] = 1.0  # safe division; the (0,0) mode is always zero
        self.kmod_safe = kmod_safe
        # 2/3-rule keep mask, Euclidean modulus, strict so alias images of
        # quadratic products land outside the retained band for every even N.
        self.dealias_keep = self.kmod < (n / 3.0)
        self.x = 2.0 * np.pi * np.arange(n) / n
        for a in (self.k1, self.k2, self.kmod, self.kmod_safe, self.dealias_keep, self.x):
            a.setflags(write=False)

    def __repr__(self) -> str:
        return f"Grid(n={self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Grid) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("Grid", self.n))

    @property
    def dealias_band(self) -> float:
        """Largest Euclidean wavenumber kept by the 2/3-rule mask."""
        return self.n / 3.0

    def lattice(self):
        """Meshgrid (X1, X2) of physical lattice coordinates, 'ij' indexed."""
        return np.meshgrid(self.x, self.x, indexing="ij")

    # Raw-array transform pair used by the hot loops; SpectralField wraps these.
    def to_physical_raw(self, coeffs: np.ndarray) -> np.ndarray:
        return np.real(sfft.ifft2(coeffs)) * (self.n * self.n)

    def from_physical_raw(self, values: np.ndarray) -> np.ndarray:
        return sfft.fft2(values) / (self.n * self.n)


@lru_cache(maxsize=None)
def grid_for(n: int) -> Grid:
    """Shared Grid instances; safe because grids are immutable."""
    return Grid(n)


def hermitian_project(coeffs: np.ndarray) -> np.ndarray:
    """Project onto the Hermitian subspace f(-n) = conj(f(n)).

    For even N the Nyquist rows map onto themselves and come out real.
    No-op (up to roundoff cleanup) for coefficients of a real field.
    """
    flipped = np.conj(np.roll(coeffs[::-1, ::-1], 1, axis=(0, 1)))
    return 0.5 * (coeffs + flipped)


def next_even_fast_len(target: int) -> int:
    """Smallest even FFT-friendly length >= target (and >= MIN_GRID)."""
    m = sfft.next_fast_len(max(int(target), MIN_GRID))
    while m % 2 != 0:
        m = sfft.next_fast_len(m + 1)
    return m

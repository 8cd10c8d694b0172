"""Zero-mean real scalar fields on the torus, stored spectrally.

A ``SpectralField`` is an immutable value: the coefficient array is copied in
and frozen, the (0,0) mode is forced to zero exactly, and constructors coming
from physical data re-symmetrize so the represented field is real. All
operations in this package are pure functions of such values, so fields can
be shared freely between threads.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .grid import Grid, grid_for, hermitian_project


class SpectralField:
    """Fourier coefficients of a zero-mean real field on a :class:`Grid`."""

    __slots__ = ("grid", "coeffs")

    def __init__(self, grid: Grid, coeffs: np.ndarray, *, _owned: bool = False):
        if coeffs.shape != (grid.n, grid.n):
            raise ConfigError(
                f"coefficient array shape {coeffs.shape} does not match grid n={grid.n}"
            )
        if not _owned:
            coeffs = np.array(coeffs, dtype=np.complex128, copy=True)
        if not np.all(np.isfinite(coeffs.view(np.float64))):
            raise ValueError("non-finite coefficients")
        coeffs[0, 0] = 0.0
        coeffs.setflags(write=False)
        self.grid = grid
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zeros(grid: Grid) -> "SpectralField":
        return SpectralField(grid, np.zeros((grid.n, grid.n), dtype=np.complex128), _owned=True)

    @staticmethod
    def from_coeffs(grid: Grid, coeffs: np.ndarray, symmetrize: bool = True) -> "SpectralField":
        """Build a field from raw coefficients, projecting onto real fields."""
        c = np.asarray(coeffs, dtype=np.complex128)
        if symmetrize:
            c = hermitian_project(c)
        return SpectralField(grid, c)

    # -- basics --------------------------------------------------------------

    def band(self) -> float:
        """Largest Euclidean |n| carrying a nonzero coefficient (0.0 if none)."""
        nz = self.coeffs != 0
        if not nz.any():
            return 0.0
        return float(self.grid.kmod[nz].max())

    def hermitian_defect(self) -> float:
        """Max |f(-n) - conj(f(n))| over the grid; 0 for real fields."""
        flipped = np.conj(np.roll(self.coeffs[::-1, ::-1], 1, axis=(0, 1)))
        return float(np.max(np.abs(self.coeffs - flipped)))

    # -- arithmetic (convenience; returns new fields) -------------------------

    def _binary(self, other: "SpectralField", op) -> "SpectralField":
        if other.grid != self.grid:
            raise ConfigError("grid mismatch in field arithmetic")
        return SpectralField(self.grid, op(self.coeffs, other.coeffs), _owned=True)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        return self._binary(other, np.add)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return self._binary(other, np.subtract)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * float(scalar), _owned=True)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(self.grid, -self.coeffs, _owned=True)

    def __repr__(self) -> str:
        return f"SpectralField(n={self.grid.n}, band={self.band():.1f})"


def to_physical(f: SpectralField) -> np.ndarray:
    """Evaluate the truncated Fourier sum on the N x N lattice."""
    return f.grid.to_physical_raw(f.coeffs)


def from_physical(values: np.ndarray, grid: Grid) -> SpectralField:
    """Transform lattice values to a zero-mean Hermitian coefficient field.

    The lattice mean is subtracted (via the (0,0) mode) and roundoff
    asymmetry is projected away so the result represents a real field.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.shape != (grid.n, grid.n):
        raise ConfigError(f"value array shape {v.shape} does not match grid n={grid.n}")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite physical values")
    return SpectralField.from_coeffs(grid, grid.from_physical_raw(v))


def from_function(grid: Grid, fn) -> SpectralField:
    """Sample ``fn(X1, X2)`` on the lattice and transform."""
    x1, x2 = grid.lattice()
    return from_physical(fn(x1, x2), grid)


def single_mode(grid: Grid, n1: int = 1, n2: int = 0, amplitude: float = 1.0) -> SpectralField:
    """The field ``amplitude * sin(n1*x1 + n2*x2)``."""
    c = np.zeros((grid.n, grid.n), dtype=np.complex128)
    c[n1 % grid.n, n2 % grid.n] = amplitude / 2j
    c[-n1 % grid.n, -n2 % grid.n] = np.conj(amplitude / 2j)
    return SpectralField(grid, c, _owned=True)


def resample(f: SpectralField, grid: Grid) -> SpectralField:
    """Move a field to another grid by zero-padding or truncating coefficients."""
    if grid == f.grid:
        return f
    src, dst = f.grid.n, grid.n
    h = min(src, dst) // 2
    out = np.zeros((dst, dst), dtype=np.complex128)
    take = np.r_[0:h, src - h:src]
    put = np.r_[0:h, dst - h:dst]
    out[np.ix_(put, put)] = f.coeffs[np.ix_(take, take)]
    # A shared Nyquist row on the source has no Hermitian partner on a larger
    # destination; the projection below keeps the result a real field.
    return SpectralField.from_coeffs(grid, out)


__all__ = [
    "SpectralField",
    "to_physical",
    "from_physical",
    "from_function",
    "single_mode",
    "resample",
    "Grid",
    "grid_for",
]

"""Initial datum families for the vanishing-viscosity experiments.

Random kinds draw from a counter-based generator keyed per (seed, kind) and
consume one value per wavenumber in a canonical enumeration (sorted by
|n|^2, then lexicographically, one representative per conjugate pair). A
datum on a finer grid therefore extends the same underlying field instead of
resampling it, which keeps sweeps with growing grids comparable across
viscosities.

Kinds:
  single_mode        sin(x1)
  random_band        Gaussian coefficients supported in 0 < |n| <= band
  mollified_rough    fixed random-phase power-law spectrum |n|^(-3/2-delta),
                     convolved with a Gaussian mollifier of width eps0 * nu
  scaling_bump       amplitude * nu^(-2/p) * b((x - center)/nu), b Gaussian
  concentrating_bump the same rescaling at the critical integrability p = 4/3
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .fields import SpectralField, from_physical, single_mode
from .grid import Grid

KINDS = ("single_mode", "random_band", "mollified_rough", "scaling_bump", "concentrating_bump")
_STREAM_CODE = {"random_band": 1, "mollified_rough": 2}


@dataclass(frozen=True)
class InitialDatumSpec:
    kind: str
    seed: int | None = None
    band: float | None = None      # random_band support radius in wavenumber
    moll_scale: float = 1.0        # eps0; mollifier width is eps0 * nu
    rough_decay: float = 0.05      # delta in the |n|^(-3/2-delta) spectrum
    p_target: float = 4.0 / 3.0    # integrability class of the rescaling family
    width: float = 1.0             # bump scale (Gaussian sigma) before rescaling
    amplitude: float = 1.0

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown datum kind {self.kind!r}; expected one of {KINDS}")
        if self.kind in _STREAM_CODE and self.seed is None:
            raise ConfigError(f"datum kind {self.kind!r} requires a seed")
        if self.kind == "random_band" and (self.band is None or self.band <= 0):
            raise ConfigError("random_band requires a positive band")
        if self.kind in ("scaling_bump", "concentrating_bump"):
            if not (1.0 <= self.p_target):
                raise ConfigError(f"p_target must be >= 1, got {self.p_target}")
            if self.width <= 0:
                raise ConfigError("bump width must be positive")
        if self.moll_scale <= 0:
            raise ConfigError("moll_scale must be positive")


def _mode_stream(seed: int, kind: str) -> np.random.Generator:
    key = np.array([np.uint64(seed), np.uint64(_STREAM_CODE[kind])], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def canonical_modes(band: float) -> tuple[np.ndarray, np.ndarray]:
    """Conjugate-pair representatives with 0 < |n| <= band, canonically ordered.

    Representatives satisfy n2 > 0 or (n2 == 0 and n1 > 0); order is by
    (|n|^2, n1, n2) so the mode list for a smaller band is a prefix of the
    list for any larger band.
    """
    m = int(np.floor(band))
    if m < 1:
        raise ConfigError(f"band {band} retains no modes")
    rng1, rng2 = np.meshgrid(np.arange(-m, m + 1), np.arange(0, m + 1), indexing="ij")
    sel = (rng1**2 + rng2**2 <= band * band) & ((rng2 > 0) | ((rng2 == 0) & (rng1 > 0)))
    n1 = rng1[sel]
    n2 = rng2[sel]
    order = np.lexsort((n2, n1, n1 * n1 + n2 * n2))
    return n1[order], n2[order]


def _assemble(grid: Grid, n1: np.ndarray, n2: np.ndarray, z: np.ndarray) -> np.ndarray:
    c = np.zeros((grid.n, grid.n), dtype=np.complex128)
    c[n1 % grid.n, n2 % grid.n] = z
    c[(-n1) % grid.n, (-n2) % grid.n] = np.conj(z)
    return c


def _random_band(spec: InitialDatumSpec, grid: Grid) -> SpectralField:
    if spec.band > grid.n / 3.0:
        raise ConfigError(
            f"random_band band {spec.band} exceeds the dealiased band of grid {grid.n}"
        )
    n1, n2 = canonical_modes(spec.band)
    rng = _mode_stream(spec.seed, "random_band")
    draws = rng.standard_normal((n1.size, 2))
    z = (draws[:, 0] + 1j * draws[:, 1]) / np.sqrt(2.0)
    c = _assemble(grid, n1, n2, z)
    f = SpectralField(grid, c, _owned=True)
    norm = np.sqrt(np.sum(np.abs(f.coeffs) ** 2))
    return f * (spec.amplitude / norm)


def _mollified_rough(spec: InitialDatumSpec, nu: float, grid: Grid) -> SpectralField:
    band = grid.dealias_band
    n1, n2 = canonical_modes(band)
    rng = _mode_stream(spec.seed, "mollified_rough")
    phases = rng.uniform(0.0, 2.0 * np.pi, n1.size)
    kmod = np.sqrt((n1 * n1 + n2 * n2).astype(np.float64))
    amp = spec.amplitude * kmod ** (-1.5 - spec.rough_decay)
    z = amp * np.exp(1j * phases)
    eps = spec.moll_scale * nu
    if eps > 0:
        z = z * np.exp(-(eps * eps) * kmod * kmod)
    return SpectralField(grid, _assemble(grid, n1, n2, z), _owned=True)


def _bump(spec: InitialDatumSpec, nu: float, grid: Grid) -> SpectralField:
    if not (np.isfinite(nu) and nu > 0):
        raise ConfigError("rescaled bump data need nu > 0")
    sigma = spec.width * nu
    # support radius taken as six standard deviations; it must fit in a
    # half-period or the periodization stops approximating the plane
    if 6.0 * sigma >= np.pi:
        raise ConfigError(
            f"bump support violation: 6*width*nu = {6 * sigma:g} must be < pi"
        )
    scale = spec.amplitude * nu ** (-2.0 / spec.p_target)
    x1, x2 = grid.lattice()
    d1 = np.minimum(np.abs(x1 - np.pi), 2 * np.pi - np.abs(x1 - np.pi))
    d2 = np.minimum(np.abs(x2 - np.pi), 2 * np.pi - np.abs(x2 - np.pi))
    # zero-integral radial profile (1 - r^2/2) exp(-r^2/2): torus zero-mean
    # projection is then a no-op, so the plane-scaling identities survive
    # periodization without a nu-dependent offset
    r2 = (d1 * d1 + d2 * d2) / (sigma * sigma)
    values = scale * (1.0 - 0.5 * r2) * np.exp(-0.5 * r2)
    return from_physical(values, grid)


def make_datum(spec: InitialDatumSpec, nu: float, grid: Grid) -> SpectralField:
    """Build the datum of ``spec`` at viscosity ``nu`` on ``grid``."""
    spec.validate()
    if spec.kind == "single_mode":
        return single_mode(grid, amplitude=spec.amplitude)
    if spec.kind == "random_band":
        return _random_band(spec, grid)
    if spec.kind == "mollified_rough":
        return _mollified_rough(spec, nu, grid)
    return _bump(spec, nu, grid)

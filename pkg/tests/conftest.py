import numpy as np
import pytest

from sqgsim import SpectralField, grid_for
from sqgsim.grid import hermitian_project


def random_smooth_field(n: int, band: float, seed: int, decay: float = 0.0,
                        norm: float = 1.0) -> SpectralField:
    """Band-limited random field with optional power-law envelope, unit L2."""
    g = grid_for(n)
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    c *= (g.kmod > 0) & (g.kmod <= band)
    if decay:
        c = c * g.kmod_safe ** (-decay)
    c = hermitian_project(c)
    f = SpectralField.from_coeffs(g, c)
    scale = np.sqrt(np.sum(np.abs(f.coeffs) ** 2))
    return f * (norm / scale)


@pytest.fixture
def grid64():
    return grid_for(64)


@pytest.fixture
def grid32():
    return grid_for(32)

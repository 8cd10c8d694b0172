"""Alias-free products and the commutator of the weak formulation.

Pointwise products of band-limited fields are evaluated on a padded grid
large enough to represent the full product band exactly (Nyquist for the sum
of the factor bands), so every retained coefficient is the true coefficient
of the continuum product. On top of that this module builds

    commutator(phi, i): g  ->  (-L)^(1/2)(d_i phi * g) - d_i phi * (-L)^(1/2) g

with L the Laplacian, and the two-sided evaluation of the weak-form
nonlinearity pairing that the identity tests and probes exercise.
"""

from __future__ import annotations

import math
import os

import numpy as np

from .errors import PaddingError
from .fields import SpectralField, from_physical, resample, to_physical
from .grid import Grid, grid_for, next_even_fast_len
from .norms import inner_hs
from .operators import fractional_laplacian, gradient

# Padded working grids beyond this size are refused rather than silently
# aliased; override with SQG_MAX_GRID for unusually wide bands.
_DEFAULT_MAX_PADDED = 4096


def _max_padded() -> int:
    return int(os.environ.get("SQG_MAX_GRID", _DEFAULT_MAX_PADDED))


def product_grid(*bands: float, min_n: int = 0) -> Grid:
    """Grid that represents a product of the given bands with no aliasing."""
    need = 2 * int(math.ceil(sum(bands))) + 2
    m = next_even_fast_len(max(need, min_n))
    if m > _max_padded():
        raise PaddingError(
            f"alias-free product needs grid {m} > cap {_max_padded()} "
            f"for bands {tuple(round(b, 1) for b in bands)}"
        )
    return grid_for(m)


def exact_product(f: SpectralField, g: SpectralField, out_grid: Grid | None = None) -> SpectralField:
    """Pointwise product with every coefficient exact (band-limited inputs)."""
    work = out_grid if out_grid is not None else product_grid(f.band(), g.band())
    fv = to_physical(resample(f, work))
    gv = to_physical(resample(g, work))
    return from_physical(fv * gv, work)


def commutator_apply(phi: SpectralField, axis: int, f: SpectralField) -> SpectralField:
    """Apply [(-L)^(1/2), d_axis phi] to f; result truncated to f's grid.

    Both terms are evaluated with alias-free products, so the returned
    coefficients are exact wherever the grid retains them. Linear in f and
    in phi.
    """
    if axis not in (0, 1):
        raise ValueError("axis must be 0 or 1")
    dphi = gradient(phi)[axis]
    work = product_grid(phi.band(), f.band(), min_n=f.grid.n)
    dphi_w = resample(dphi, work)
    f_w = resample(f, work)
    term1 = fractional_laplacian(exact_product(dphi_w, f_w, work), 0.5)
    term2 = exact_product(dphi_w, fractional_laplacian(f_w, 0.5), work)
    return resample(term1 - term2, f.grid)


def weak_nonlinearity_both_sides(theta: SpectralField, phi: SpectralField) -> tuple[float, float]:
    """Evaluate the weak-form nonlinearity two ways: (direct, commutator).

    Direct side: the integral of ``theta * (u . grad phi)`` with
    ``u = riesz_perp(theta)``. Commutator side:
    ``-1/2 sum_i <u_i, [(-L)^(1/2), d_i phi] (-L)^(-1/2) theta>``.
    Both sides are computed with alias-free products and coefficient-space
    pairings, so for band-limited inputs they agree to roundoff.
    """
    from .operators import riesz_perp  # local import to keep module deps one-way

    work = product_grid(theta.band(), phi.band(), min_n=max(theta.grid.n, phi.grid.n))
    th = resample(theta, work)
    ph = resample(phi, work)
    u1, u2 = riesz_perp(th)
    dphi1, dphi2 = gradient(ph)

    advected = exact_product(u1, dphi1, work) + exact_product(u2, dphi2, work)
    lhs = inner_hs(th, advected, 0.0)

    stream = fractional_laplacian(th, -0.5)
    rhs = 0.0
    for ui, dphii in ((u1, dphi1), (u2, dphi2)):
        comm = (
            fractional_laplacian(exact_product(dphii, stream, work), 0.5)
            - exact_product(dphii, th, work)  # (-L)^(1/2) stream = theta
        )
        rhs += -0.5 * inner_hs(ui, comm, 0.0)
    return lhs, rhs

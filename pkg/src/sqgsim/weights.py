"""Convex C^1 weights used by positivity checks and equi-integrability bounds.

A :class:`ConvexWeight` bundles a convex function and its derivative. The
derivative must be the true derivative (checked against centered differences
in the test suite); convexity is what makes the fractional-diffusion
positivity argument and the superlinear tail bounds work.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class ConvexWeight:
    fn: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    label: str

    def __call__(self, r):
        return self.fn(r)


def quadratic() -> ConvexWeight:
    """beta(r) = r^2; the Plancherel case of the positivity lemma."""
    return ConvexWeight(fn=lambda r: np.square(r), deriv=lambda r: 2.0 * r, label="r^2")


def smoothed_four_thirds(delta: float = 1e-6) -> ConvexWeight:
    """C^1 smoothing of |r|^(4/3): (r^2 + delta^2)^(2/3) - delta^(4/3).

    The subtraction pins beta(0) = 0; delta regularizes the derivative at the
    origin so the C^1 hypothesis holds.
    """
    d2 = delta * delta

    def fn(r):
        return (np.square(r) + d2) ** (2.0 / 3.0) - d2 ** (2.0 / 3.0)

    def deriv(r):
        return (4.0 / 3.0) * r * (np.square(r) + d2) ** (-1.0 / 3.0)

    return ConvexWeight(fn=fn, deriv=deriv, label=f"|r|^(4/3) smoothed d={delta:g}")


def power(q: float) -> ConvexWeight:
    """beta(r) = |r|^q for q >= 1 (superlinear for q > 1); C^1 for q > 1."""
    if q < 1:
        raise ValueError("power weight needs q >= 1")

    def fn(r):
        return np.abs(r) ** q

    def deriv(r):
        return q * np.sign(r) * np.abs(r) ** (q - 1.0)

    return ConvexWeight(fn=fn, deriv=deriv, label=f"r^{q:g}")


def convexity_defect(w: ConvexWeight, lo: float = -10.0, hi: float = 10.0, samples: int = 64,
                     seed: int = 0) -> float:
    """Worst violation of the midpoint-style convexity inequality over samples."""
    rng = np.random.default_rng(seed)
    a = rng.uniform(lo, hi, samples)
    b = rng.uniform(lo, hi, samples)
    lam = rng.uniform(0.0, 1.0, samples)
    lhs = w(lam * a + (1 - lam) * b)
    rhs = lam * w(a) + (1 - lam) * w(b)
    return float(np.max(lhs - rhs))


def derivative_defect(w: ConvexWeight, lo: float = -10.0, hi: float = 10.0, samples: int = 64,
                      h: float = 1e-5, seed: int = 0) -> float:
    """Max mismatch between ``deriv`` and a centered difference of ``fn``."""
    rng = np.random.default_rng(seed)
    r = rng.uniform(lo, hi, samples)
    approx = (w(r + h) - w(r - h)) / (2.0 * h)
    return float(np.max(np.abs(approx - w.deriv(r))))

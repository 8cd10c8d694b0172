"""Scalar functionals tracked along runs: energy balances, tails, positivity.

Conventions: ``hamiltonian`` is the squared H^(-1/2) norm; ``dissipation_to_t``
is the balance-form integral ``2 nu int_0^t ||theta||_L2^2``, accumulated by
the trapezoid rule on the recording cadence, so that
``hamiltonian + dissipation_to_t`` is conserved for smooth viscous runs;
``weighted_h_half_to_t`` is ``4 nu^2 int_0^t tau ||theta||_{H^(1/2)}^2``;
``tail[c]`` is the instantaneous dissipation-scale sum
``sum_{|n| > c/nu} |n|^(-1) |theta(n)|^2`` (zero for nu = 0, where the
threshold is infinite).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .fields import SpectralField, to_physical
from .norms import hamiltonian, lp_norm, sobolev_sq
from .operators import fractional_laplacian
from .solver import Trajectory
from .weights import ConvexWeight

DEFAULT_P_LIST = (4.0 / 3.0, 2.0, 3.0)
DEFAULT_C_LIST = (0.5, 1.0, 2.0)


def _num_label(v: float) -> str:
    if abs(v - 4.0 / 3.0) < 1e-12:
        return "4_3"
    if v == int(v):
        return str(int(v))
    return ("%g" % v).replace(".", "_").replace("-", "m")


def p_label(p: float) -> str:
    return "lp_" + _num_label(p)


def c_label(c: float) -> str:
    return "tail_c" + _num_label(c)


@dataclass(frozen=True)
class DiagnosticsRecord:
    """Every tracked functional at one recorded time."""

    t: float
    hamiltonian: float
    l2_sq: float
    lp: dict[float, float]
    dissipation_to_t: float
    weighted_h_half_to_t: float
    tail: dict[float, float]
    h_half_sq: float  # retained for the weighted trapezoid increment


def tail_sum(theta: SpectralField, threshold: float) -> float:
    """Sum of |n|^(-1) |theta(n)|^2 over |n| > threshold."""
    g = theta.grid
    mask = g.kmod > threshold
    if not mask.any():
        return 0.0
    a2 = theta.coeffs.real**2 + theta.coeffs.imag**2
    return float(np.sum((a2 / g.kmod_safe)[mask]))


def record(
    theta: SpectralField,
    t: float,
    nu: float,
    history: Sequence[DiagnosticsRecord],
    p_list: Sequence[float] = DEFAULT_P_LIST,
    c_list: Sequence[float] = DEFAULT_C_LIST,
) -> DiagnosticsRecord:
    """Assemble the record at time t, extending the running time integrals."""
    if history and t <= history[-1].t:
        raise ConfigError(f"out-of-order record time {t} after {history[-1].t}")
    ham = hamiltonian(theta)
    l2_sq = sobolev_sq(theta, 0.0)
    h_half_sq = sobolev_sq(theta, 0.5)
    lp = {p: lp_norm(theta, p) for p in p_list}
    tails = {
        c: tail_sum(theta, (c / nu) if nu > 0 else math.inf) for c in c_list
    }
    if history:
        prev = history[-1]
        dt = t - prev.t
        diss = prev.dissipation_to_t + 2.0 * nu * 0.5 * dt * (prev.l2_sq + l2_sq)
        weighted = prev.weighted_h_half_to_t + 4.0 * nu * nu * 0.5 * dt * (
            prev.t * prev.h_half_sq + t * h_half_sq
        )
    else:
        diss = 0.0
        weighted = 0.0
    return DiagnosticsRecord(
        t=t,
        hamiltonian=ham,
        l2_sq=l2_sq,
        lp=lp,
        dissipation_to_t=diss,
        weighted_h_half_to_t=weighted,
        tail=tails,
        h_half_sq=h_half_sq,
    )


def records_for_trajectory(
    traj: Trajectory,
    nu: float,
    p_list: Sequence[float] = DEFAULT_P_LIST,
    c_list: Sequence[float] = DEFAULT_C_LIST,
) -> list[DiagnosticsRecord]:
    out: list[DiagnosticsRecord] = []
    for t, state in zip(traj.times, traj.states):
        out.append(record(state, t, nu, out, p_list, c_list))
    return out


def energy_balance_residual(traj: Trajectory, nu: float) -> float:
    """Max over recorded times of |H(t) + D(t) - H(0)| / H(0)."""
    recs = records_for_trajectory(traj, nu, p_list=(), c_list=())
    return energy_balance_residual_from_records(recs)


def energy_balance_residual_from_records(recs: Sequence[DiagnosticsRecord]) -> float:
    h0 = recs[0].hamiltonian
    if h0 == 0.0:
        raise ConfigError("energy balance residual undefined for a zero datum")
    return max(abs(r.hamiltonian + r.dissipation_to_t - h0) / h0 for r in recs)


def higher_bound_check(traj: Trajectory, nu: float) -> tuple[float, float, bool]:
    """Weighted dissipation bound: (lhs at t_end, rhs = H(0), lhs <= rhs)."""
    recs = records_for_trajectory(traj, nu, p_list=(), c_list=())
    return higher_bound_from_records(recs)


def higher_bound_from_records(recs: Sequence[DiagnosticsRecord]) -> tuple[float, float, bool]:
    lhs = recs[-1].weighted_h_half_to_t
    rhs = recs[0].hamiltonian
    return lhs, rhs, lhs <= rhs * (1.0 + 1e-6)


def cordoba_check(f: SpectralField, beta: ConvexWeight, alpha: float) -> float:
    """Quadrature of beta'(f) * (-Laplace)^alpha f; nonnegative for convex beta."""
    if not (0.0 < alpha <= 1.0):
        raise ConfigError(f"alpha must lie in (0, 1], got {alpha}")
    vals = to_physical(f)
    lap = to_physical(fractional_laplacian(f, alpha))
    return float(np.mean(beta.deriv(vals) * lap))


def equiintegrability_functional(theta: SpectralField, beta: ConvexWeight) -> float:
    """The superlinear mass ``int beta(|theta|^(4/3)) dx`` (normalized measure)."""
    vals = np.abs(to_physical(theta)) ** (4.0 / 3.0)
    return float(np.mean(beta(vals)))


def dissipation_scale_pair(
    traj: Trajectory, nu: float, c: float, t_end: float | None = None
) -> tuple[float, float]:
    """Tail time integral beyond |n| > c/nu paired with nu * int ||theta||^2.

    Returns ``(sum_{|n| > c/nu} |n|^(-1) int_0^T |theta(n)|^2,
    nu * int_0^T ||theta||_L2^2)``; the first is bounded by the second
    divided by c.
    """
    if nu <= 0:
        raise ConfigError("dissipation scale pair requires nu > 0")
    n = traj.states[0].grid.n
    if c / nu > n / 3.0:
        raise ConfigError(
            f"dissipation scale c/nu = {c / nu:g} unresolved on grid {n} (needs <= n/3)"
        )
    horizon = traj.times[-1] if t_end is None else t_end
    times: list[float] = []
    tails: list[float] = []
    l2s: list[float] = []
    for t, state in zip(traj.times, traj.states):
        if t > horizon + 1e-12:
            break
        times.append(t)
        tails.append(tail_sum(state, c / nu))
        l2s.append(sobolev_sq(state, 0.0))
    tail_integral = float(np.trapezoid(tails, times))
    dissipation = nu * float(np.trapezoid(l2s, times))
    return tail_integral, dissipation


# -- CSV serialization -------------------------------------------------------


def csv_columns(
    p_list: Sequence[float] = DEFAULT_P_LIST, c_list: Sequence[float] = DEFAULT_C_LIST
) -> list[str]:
    return (
        ["t", "hamiltonian", "l2_sq"]
        + [p_label(p) for p in p_list]
        + ["dissipation_to_t", "weighted_h_half_to_t"]
        + [c_label(c) for c in c_list]
    )


def record_row(
    r: DiagnosticsRecord,
    p_list: Sequence[float] = DEFAULT_P_LIST,
    c_list: Sequence[float] = DEFAULT_C_LIST,
) -> list[str]:
    vals = (
        [r.t, r.hamiltonian, r.l2_sq]
        + [r.lp[p] for p in p_list]
        + [r.dissipation_to_t, r.weighted_h_half_to_t]
        + [r.tail[c] for c in c_list]
    )
    return [repr(float(v)) for v in vals]


def write_diagnostics_csv(
    path: str | Path,
    records: Iterable[DiagnosticsRecord],
    p_list: Sequence[float] = DEFAULT_P_LIST,
    c_list: Sequence[float] = DEFAULT_C_LIST,
) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(csv_columns(p_list, c_list))
        for r in records:
            w.writerow(record_row(r, p_list, c_list))

"""Vanishing-viscosity sweeps, dissipation-rate fits and their verdicts.

A sweep runs one datum family over a decreasing viscosity grid, growing the
spatial resolution like 1/nu so the dissipation scale stays resolved, and
aggregates per-viscosity diagnostics into trend verdicts: total dissipation
D(nu, T) (balance convention, = 2 nu int_0^T ||theta||^2), the tail/dissipation
pairs at each requested scale constant, a log-log rate fit, and the small-time
dissipation profile.

Viscosity grids are finite, so every "limit" statement here is reported as a
trend over the resolved grid, never as an extrapolation.
"""

from __future__ import annotations

import math
from concurrent.futures import FIRST_EXCEPTION, ProcessPoolExecutor, wait
from dataclasses import dataclass, replace

import numpy as np

from .diagnostics import (
    DEFAULT_C_LIST,
    DEFAULT_P_LIST,
    DiagnosticsRecord,
    record as make_record,
)
from .errors import ConfigError, SQGError
from .fields import grid_for
from .initial_data import InitialDatumSpec, make_datum
from .solver import SolverConfig, run_recorded, u_max

COUPLINGS = ("fixed", "mollified_by_nu", "rescaled_by_nu")
DEFAULT_GRID_CAP = 512


@dataclass(frozen=True)
class SweepSpec:
    """A family of (nu, datum) runs sharing one horizon and recording setup."""

    nus: tuple[float, ...]
    datum: InitialDatumSpec
    datum_coupling: str
    t_end: float
    c_list: tuple[float, ...] = DEFAULT_C_LIST
    p_list: tuple[float, ...] = DEFAULT_P_LIST
    integrator: str = "etdrk4"
    nonlinearity: bool = True
    cfl_safety: float = 0.8
    dt: float | None = None           # None: derived from the initial CFL bound
    record_cadence: float = 0.01      # target time between diagnostics records
    grid_cap: int = DEFAULT_GRID_CAP

    def validate(self) -> None:
        if len(self.nus) == 0:
            raise ConfigError("sweep needs at least one viscosity")
        if any(nu <= 0 or not np.isfinite(nu) for nu in self.nus):
            raise ConfigError("sweep viscosities must be positive finite reals")
        if list(self.nus) != sorted(self.nus, reverse=True):
            raise ConfigError("sweep viscosities must be strictly decreasing")
        if len(set(self.nus)) != len(self.nus):
            raise ConfigError("sweep viscosities must be distinct")
        if self.datum_coupling not in COUPLINGS:
            raise ConfigError(f"datum_coupling must be one of {COUPLINGS}")
        if self.datum_coupling == "rescaled_by_nu" and self.datum.kind not in (
            "scaling_bump", "concentrating_bump",
        ):
            raise ConfigError("rescaled_by_nu coupling needs a bump datum kind")
        if self.datum_coupling == "mollified_by_nu" and self.datum.kind != "mollified_rough":
            raise ConfigError("mollified_by_nu coupling needs the mollified_rough kind")
        if self.t_end <= 0:
            raise ConfigError("sweep horizon must be positive")
        if not self.c_list:
            raise ConfigError("sweep needs at least one tail scale constant")
        self.datum.validate()
        for nu in self.nus:
            grid_n_for_nu(nu, self.c_list, self.grid_cap)


def grid_n_for_nu(nu: float, c_list: tuple[float, ...], cap: int = DEFAULT_GRID_CAP) -> int:
    """Resolution growth rule: next power of two >= 6 * max(c) / nu, capped."""
    target = 6.0 * max(c_list) / nu
    n = max(8, 2 ** int(math.ceil(math.log2(max(target, 8)))))
    if n > cap:
        raise ConfigError(
            f"nu={nu:g} needs grid {n} > cap {cap}; drop it or raise the cap"
        )
    return n


def _coupling_nu(spec: SweepSpec, nu: float) -> float:
    return 1.0 if spec.datum_coupling == "fixed" else nu


@dataclass(frozen=True)
class PerNuResult:
    """Everything retained from one viscosity's run."""

    nu: float
    grid_n: int
    dt: float
    records: tuple[DiagnosticsRecord, ...]
    d_total: float                       # 2 nu int_0^T ||theta||^2 (balance form)
    h0: float
    ht: float
    tail_pairs: dict[float, tuple[float, float]]  # c -> (tail time integral, nu int ||theta||^2)
    reverse_inequality_ok: bool

    @property
    def final(self) -> DiagnosticsRecord:
        return self.records[-1]


def run_one_nu(spec: SweepSpec, nu: float) -> PerNuResult:
    """Run one viscosity of the sweep with streaming diagnostics."""
    n = grid_n_for_nu(nu, spec.c_list, spec.grid_cap)
    if max(spec.c_list) / nu > n / 3.0:
        raise ConfigError(f"dissipation scale unresolved at nu={nu:g}")  # pragma: no cover
    grid = grid_for(n)
    theta0 = make_datum(spec.datum, _coupling_nu(spec, nu), grid)

    if spec.dt is not None:
        dt = spec.dt
    else:
        bound = spec.cfl_safety * (2.0 * np.pi / n) / max(1.0, u_max(theta0))
        # the cadence also caps dt so trapezoid time integrals stay accurate
        dt = spec.t_end / max(1, math.ceil(spec.t_end / min(bound, spec.record_cadence)))
    record_every = max(1, round(spec.record_cadence / dt))
    config = SolverConfig(
        nu=nu,
        grid_n=n,
        dt=dt,
        t_end=spec.t_end,
        integrator=spec.integrator,
        nonlinearity=spec.nonlinearity,
        record_every=record_every,
        cfl_safety=spec.cfl_safety,
    )

    records: list[DiagnosticsRecord] = []
    tail_integrals = {c: 0.0 for c in spec.c_list}
    l2_integral = 0.0
    prev = {"t": None, "tails": None, "l2": None}

    def on_record(t: float, state) -> None:
        nonlocal l2_integral
        rec = make_record(state, t, nu, records, spec.p_list, spec.c_list)
        records.append(rec)
        if prev["t"] is not None:
            h = t - prev["t"]
            for c in spec.c_list:
                tail_integrals[c] += 0.5 * h * (prev["tails"][c] + rec.tail[c])
            l2_integral += 0.5 * h * (prev["l2"] + rec.l2_sq)
        prev["t"] = t
        prev["tails"] = rec.tail
        prev["l2"] = rec.l2_sq

    run_recorded(theta0, config, on_record)

    diss_half = nu * l2_integral
    pairs = {c: (tail_integrals[c], diss_half) for c in spec.c_list}
    reverse_ok = all(
        tail <= diss / c + 1e-12 for c, (tail, diss) in pairs.items()
    )
    return PerNuResult(
        nu=nu,
        grid_n=n,
        dt=dt,
        records=tuple(records),
        d_total=records[-1].dissipation_to_t,
        h0=records[0].hamiltonian,
        ht=records[-1].hamiltonian,
        tail_pairs=pairs,
        reverse_inequality_ok=reverse_ok,
    )


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    residual: float  # rms residual of the log-log fit


def fit_loglog(nus, values) -> RateFit:
    x = np.log(np.asarray(nus, dtype=float))
    y = np.log(np.asarray(values, dtype=float))
    a = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    resid = float(np.sqrt(np.mean((y - a @ coef) ** 2)))
    return RateFit(slope=float(coef[0]), intercept=float(coef[1]), residual=resid)


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    per_nu: tuple[PerNuResult, ...]          # sorted by decreasing nu
    rate_fit: RateFit | None                 # only with >= 4 viscosities
    no_ad_verdict: bool                      # dissipation decreasing toward small nu
    failures: tuple[tuple[float, str, str], ...] = ()  # (nu, category, message)

    def d_values(self) -> list[float]:
        return [r.d_total for r in self.per_nu]


def _aggregate(spec: SweepSpec, results: list[PerNuResult],
               failures: list[tuple[float, str, str]]) -> SweepResult:
    results = sorted(results, key=lambda r: -r.nu)
    ds = [r.d_total for r in results]
    fit = fit_loglog([r.nu for r in results], ds) if len(results) >= 4 else None
    # decreasing nu (left to right) must give decreasing dissipation
    verdict = len(results) >= 2 and all(b < a for a, b in zip(ds, ds[1:]))
    return SweepResult(
        spec=spec,
        per_nu=tuple(results),
        rate_fit=fit,
        no_ad_verdict=verdict,
        failures=tuple(failures),
    )


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Run every viscosity (optionally in parallel processes) and aggregate.

    A failing run aborts the sweep; runs already finished are preserved in
    the result together with the failure category and message.
    """
    spec.validate()
    results: list[PerNuResult] = []
    failures: list[tuple[float, str, str]] = []
    if jobs <= 1 or len(spec.nus) == 1:
        for nu in spec.nus:
            try:
                results.append(run_one_nu(spec, nu))
            except SQGError as exc:
                failures.append((nu, exc.category, str(exc)))
                break
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(spec.nus))) as pool:
            futures = {pool.submit(run_one_nu, spec, nu): nu for nu in spec.nus}
            done, not_done = wait(futures, return_when=FIRST_EXCEPTION)
            for fut in done:
                nu = futures[fut]
                exc = fut.exception()
                if exc is None:
                    results.append(fut.result())
                elif isinstance(exc, SQGError):
                    failures.append((nu, exc.category, str(exc)))
                else:
                    raise exc
            for fut in not_done:
                fut.cancel()
    return _aggregate(spec, results, failures)


# -- derived experiments ------------------------------------------------------


@dataclass(frozen=True)
class RateResult:
    p: float
    fitted_slope: float
    predicted_slope: float
    residual: float
    nus: tuple[float, ...]
    d_values: tuple[float, ...]
    sweep: SweepResult


def predicted_rate(p: float) -> float:
    """Dissipation decay exponent for L^p-bounded rescaling data.

    (3p - 4)/p on the interpolation range 4/3 <= p < 2 (zero at the critical
    p = 4/3), linear in nu from p = 2 on.
    """
    if p < 4.0 / 3.0:
        raise ConfigError(f"rate prediction needs p >= 4/3, got {p}")
    return (3.0 * p - 4.0) / p if p < 2.0 else 1.0


def rate_experiment(
    p: float,
    nus: tuple[float, ...],
    linear_mode: bool = True,
    t_end: float = 1.0,
    seed: int = 0,
    grid_cap: int = DEFAULT_GRID_CAP,
    record_cadence: float = 0.01,
) -> RateResult:
    """Fit the dissipation rate of the rescaling family against prediction."""
    if len(nus) < 4:
        raise ConfigError("rate fit needs at least 4 viscosities")
    kind = "concentrating_bump" if abs(p - 4.0 / 3.0) < 1e-9 else "scaling_bump"
    spec = SweepSpec(
        nus=tuple(nus),
        datum=InitialDatumSpec(kind=kind, p_target=p, seed=seed),
        datum_coupling="rescaled_by_nu",
        t_end=t_end,
        c_list=(1.0,),
        nonlinearity=not linear_mode,
        record_cadence=record_cadence,
        grid_cap=grid_cap,
    )
    result = run_sweep(spec)
    if result.failures:
        nu, cat, msg = result.failures[0]
        raise ConfigError(f"rate sweep failed at nu={nu:g} ({cat}): {msg}")
    fit = result.rate_fit
    return RateResult(
        p=p,
        fitted_slope=fit.slope,
        predicted_slope=predicted_rate(p),
        residual=fit.residual,
        nus=tuple(nus),
        d_values=tuple(result.d_values()),
        sweep=result,
    )


def gronwall_decay_check(traj, nu: float, p: float, t_start: float) -> float:
    """Sup over recorded t >= t_start of ||theta(t)||^2 * (nu t)^((1-a)/a).

    ``a = p/(4-p)`` is the interpolation exponent; at p = 2 the compensation
    degenerates and the quantity is just the L2 energy.
    """
    from .norms import sobolev_sq

    alpha = p / (4.0 - p)
    expo = (1.0 - alpha) / alpha
    best = 0.0
    for t, state in zip(traj.times, traj.states):
        if t < t_start:
            continue
        best = max(best, sobolev_sq(state, 0.0) * (nu * t) ** expo)
    return best


def dissipation_at(res: PerNuResult, delta: float) -> float:
    """nu * int_0^delta ||theta||^2, interpolated on the recording cadence."""
    ts = [r.t for r in res.records]
    if delta < 0 or delta > ts[-1] + 1e-12:
        raise ConfigError(f"delta {delta} outside recorded horizon {ts[-1]}")
    # dissipation_to_t is piecewise linear between records by construction
    halves = [0.5 * r.dissipation_to_t for r in res.records]
    return float(np.interp(delta, ts, halves))


def small_time_dissipation_profile(
    sweep: SweepResult, deltas: tuple[float, ...]
) -> list[tuple[float, float]]:
    """Table delta -> sup over the viscosity grid of nu int_0^delta ||theta||^2.

    The sup over a finite grid under-approximates the sup over nu in (0, 1);
    the table is a trend witness, not a bound.
    """
    out = []
    for d in deltas:
        out.append((d, max(dissipation_at(r, d) for r in sweep.per_nu)))
    return out

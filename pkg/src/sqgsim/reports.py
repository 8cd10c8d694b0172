"""Durable JSON/CSV serializations of sweep and rate results.

These are the documented interfaces consumed by the plotting scripts; column
orders are fixed and float formatting uses shortest round-trip repr so
re-running a command reproduces outputs byte for byte.
"""

from __future__ import annotations

import csv
import io
import json

from .diagnostics import c_label, csv_columns, record_row
from .sweeps import RateResult, SweepResult, small_time_dissipation_profile

SWEEP_SCHEMA = "sqgsim-sweep-result/1"
RATES_SCHEMA = "sqgsim-rates/1"

# the mollifier length scale must vanish with nu for the datum family to
# converge; recorded in output metadata because the convention is a choice
MOLLIFICATION_NOTE = "mollifier length scale = moll_scale * nu (vanishes with nu)"


def _fmt(x: float) -> str:
    return repr(float(x))


def sweep_result_dict(res: SweepResult, profile_deltas: int = 5) -> dict:
    spec = res.spec
    deltas = tuple(spec.t_end * k / profile_deltas for k in range(profile_deltas + 1))
    profile = (
        small_time_dissipation_profile(res, deltas) if res.per_nu else []
    )
    per_nu = []
    for r in res.per_nu:
        final = dict(zip(csv_columns(spec.p_list, spec.c_list),
                         (float(v) for v in record_row(r.final, spec.p_list, spec.c_list))))
        per_nu.append({
            "nu": r.nu,
            "grid_n": r.grid_n,
            "dt": r.dt,
            "H0": r.h0,
            "HT": r.ht,
            "D": r.d_total,
            "tails": {
                _fmt(c): {
                    "time_integral": pair[0],
                    "nu_l2_time_integral": pair[1],
                    "reverse_bound_ok": pair[0] <= pair[1] / c + 1e-12,
                }
                for c, pair in r.tail_pairs.items()
            },
            "final_record": final,
        })
    return {
        "schema": SWEEP_SCHEMA,
        "datum": {
            "kind": spec.datum.kind,
            "seed": spec.datum.seed,
            "band": spec.datum.band,
            "moll_scale": spec.datum.moll_scale,
            "rough_decay": spec.datum.rough_decay,
            "p_target": spec.datum.p_target,
            "width": spec.datum.width,
            "amplitude": spec.datum.amplitude,
        },
        "datum_coupling": spec.datum_coupling,
        "t_end": spec.t_end,
        "c_list": list(spec.c_list),
        "nonlinearity": "on" if spec.nonlinearity else "off",
        "metadata": {"mollification_convention": MOLLIFICATION_NOTE},
        "per_nu": per_nu,
        "rate_fit": (
            None
            if res.rate_fit is None
            else {
                "slope": res.rate_fit.slope,
                "intercept": res.rate_fit.intercept,
                "residual": res.rate_fit.residual,
            }
        ),
        "no_ad_verdict": res.no_ad_verdict,
        "small_time_profile": {
            "deltas": [d for d, _ in profile],
            "sup_nu_dissipation": [v for _, v in profile],
        },
        "failures": [
            {"nu": nu, "category": cat, "message": msg} for nu, cat, msg in res.failures
        ],
    }


def sweep_json_text(res: SweepResult) -> str:
    return json.dumps(sweep_result_dict(res), sort_keys=True, indent=2) + "\n"


def sweep_csv_text(res: SweepResult) -> str:
    spec = res.spec
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["nu", "grid_n", "D"] + [c_label(c) for c in spec.c_list] + ["H0", "HT"])
    for r in res.per_nu:
        w.writerow(
            [_fmt(r.nu), r.grid_n, _fmt(r.d_total)]
            + [_fmt(r.tail_pairs[c][0]) for c in spec.c_list]
            + [_fmt(r.h0), _fmt(r.ht)]
        )
    return buf.getvalue()


def rates_json_text(rows: list[RateResult], t_end: float, linear_mode: bool) -> str:
    payload = {
        "schema": RATES_SCHEMA,
        "t_end": t_end,
        "linear_mode": linear_mode,
        "rows": [
            {
                "p": r.p,
                "predicted_slope": r.predicted_slope,
                "fitted_slope": r.fitted_slope,
                "residual": r.residual,
                "nus": list(r.nus),
                "d_values": list(r.d_values),
            }
            for r in rows
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def rates_csv_text(rows: list[RateResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["p", "predicted_slope", "fitted_slope", "residual"])
    for r in rows:
        w.writerow([_fmt(r.p), _fmt(r.predicted_slope), _fmt(r.fitted_slope), _fmt(r.residual)])
    return buf.getvalue()

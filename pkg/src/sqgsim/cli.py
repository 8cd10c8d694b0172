"""Command-line entry points: run, sweep, rates, validate.

Configs are flat JSON documents with a mandatory ``schema`` field; unknown
keys are errors (fail-fast reproducibility). Every failure exits nonzero with
a machine-readable category on stderr:

    config_error (2) | cfl_violation (3) | blow_up (4) | io_error (5)

and validation failures exit 1. Outputs are written atomically; re-running a
command with the same config and seed reproduces CSV/JSON outputs byte for
byte (wall-clock time lives only in the manifest).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

from .checkpoint import write_checkpoint
from .diagnostics import DEFAULT_C_LIST, DEFAULT_P_LIST, record as make_record, \
    record_row, csv_columns
from .errors import BlowUpError, CFLViolationError, ConfigError, SQGError
from .fields import grid_for
from .initial_data import InitialDatumSpec, make_datum
from .manifest import build_manifest, write_manifest, write_text_atomic
from .reports import rates_csv_text, rates_json_text, sweep_csv_text, sweep_json_text
from .solver import SolverConfig, run_recorded
from .sweeps import DEFAULT_GRID_CAP, SweepSpec, rate_experiment, run_sweep
from .validate import run_all

EXIT_CODES = {
    "config_error": 2,
    "cfl_violation": 3,
    "blow_up": 4,
    "io_error": 5,
}


def _fail(category: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": category, "message": message}) + "\n")
    return EXIT_CODES.get(category, 1)


def _grid_cap(configured: int | None = None) -> int:
    cap = configured if configured is not None else DEFAULT_GRID_CAP
    env = os.environ.get("SQG_MAX_GRID")
    if env is not None:
        try:
            cap = min(cap, int(env))
        except ValueError:
            raise ConfigError(f"SQG_MAX_GRID must be an integer, got {env!r}")
    return cap


# -- strict config parsing ----------------------------------------------------


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ConfigError(f"missing required key {key!r} in {where}")
    return obj[key]


def _on_off(value, where: str) -> bool:
    if value not in ("on", "off"):
        raise ConfigError(f"{where} must be 'on' or 'off', got {value!r}")
    return value == "on"


_DATUM_KEYS = {
    "kind", "band", "moll_scale", "rough_decay", "p_target", "width", "amplitude",
}


def _parse_datum(obj, seed: int | None) -> InitialDatumSpec:
    if not isinstance(obj, dict):
        raise ConfigError("datum must be a JSON object")
    _check_keys(obj, _DATUM_KEYS, "datum")
    kind = _require(obj, "kind", "datum")
    fields = {k: obj[k] for k in _DATUM_KEYS - {"kind"} if k in obj}
    spec = InitialDatumSpec(kind=kind, seed=seed, **fields)
    spec.validate()
    return spec


def _parse_run_config(cfg: dict, seed_override: int | None):
    _check_keys(cfg, {
        "schema", "seed", "nu", "grid_n", "dt", "t_end", "integrator",
        "nonlinearity", "dealias", "record_every", "cfl_safety", "datum",
        "p_list", "c_list",
    }, "run config")
    if _require(cfg, "schema", "run config") != "sqgsim-run/1":
        raise ConfigError(f"unsupported run config schema {cfg['schema']!r}")
    seed = seed_override if seed_override is not None else cfg.get("seed")
    solver = SolverConfig(
        nu=float(_require(cfg, "nu", "run config")),
        grid_n=int(_require(cfg, "grid_n", "run config")),
        dt=float(_require(cfg, "dt", "run config")),
        t_end=float(_require(cfg, "t_end", "run config")),
        integrator=cfg.get("integrator", "etdrk4"),
        nonlinearity=_on_off(cfg.get("nonlinearity", "on"), "nonlinearity"),
        dealias=cfg.get("dealias", "two_thirds"),
        record_every=int(cfg.get("record_every", 1)),
        cfl_safety=float(cfg.get("cfl_safety", 0.8)),
    )
    solver.validate()
    if solver.grid_n > _grid_cap():
        raise ConfigError(f"grid_n {solver.grid_n} exceeds grid cap {_grid_cap()}")
    datum = _parse_datum(_require(cfg, "datum", "run config"), seed)
    p_list = tuple(float(p) for p in cfg.get("p_list", DEFAULT_P_LIST))
    c_list = tuple(float(c) for c in cfg.get("c_list", DEFAULT_C_LIST))
    return solver, datum, p_list, c_list


def _parse_sweep_config(cfg: dict, seed_override: int | None) -> SweepSpec:
    _check_keys(cfg, {
        "schema", "seed", "nus", "datum", "datum_coupling", "t_end", "c_list",
        "p_list", "integrator", "nonlinearity", "cfl_safety", "dt",
        "record_cadence", "grid_cap",
    }, "sweep config")
    if _require(cfg, "schema", "sweep config") != "sqgsim-sweep/1":
        raise ConfigError(f"unsupported sweep config schema {cfg['schema']!r}")
    seed = seed_override if seed_override is not None else cfg.get("seed")
    datum = _parse_datum(_require(cfg, "datum", "sweep config"), seed)
    spec = SweepSpec(
        nus=tuple(float(v) for v in _require(cfg, "nus", "sweep config")),
        datum=datum,
        datum_coupling=_require(cfg, "datum_coupling", "sweep config"),
        t_end=float(_require(cfg, "t_end", "sweep config")),
        c_list=tuple(float(c) for c in cfg.get("c_list", DEFAULT_C_LIST)),
        p_list=tuple(float(p) for p in cfg.get("p_list", DEFAULT_P_LIST)),
        integrator=cfg.get("integrator", "etdrk4"),
        nonlinearity=_on_off(cfg.get("nonlinearity", "on"), "nonlinearity"),
        cfl_safety=float(cfg.get("cfl_safety", 0.8)),
        dt=None if cfg.get("dt") is None else float(cfg["dt"]),
        record_cadence=float(cfg.get("record_cadence", 0.01)),
        grid_cap=_grid_cap(cfg.get("grid_cap")),
    )
    spec.validate()
    return spec


def _parse_rates_config(cfg: dict, seed_override: int | None):
    _check_keys(cfg, {
        "schema", "seed", "p_values", "nus", "t_end", "linear_mode",
        "grid_cap", "record_cadence",
    }, "rates config")
    if _require(cfg, "schema", "rates config") != "sqgsim-rates/1":
        raise ConfigError(f"unsupported rates config schema {cfg['schema']!r}")
    seed = seed_override if seed_override is not None else cfg.get("seed", 0)
    ps = [float(p) for p in _require(cfg, "p_values", "rates config")]
    nus = tuple(float(v) for v in _require(cfg, "nus", "rates config"))
    t_end = float(cfg.get("t_end", 1.0))
    linear = bool(cfg.get("linear_mode", True))
    cap = _grid_cap(cfg.get("grid_cap"))
    cadence = float(cfg.get("record_cadence", 0.01))
    return ps, nus, t_end, linear, int(seed), cap, cadence


# -- subcommands ---------------------------------------------------------------


def _cmd_run(args) -> int:
    t_start = time.monotonic()
    cfg = _load_config(args.config)
    solver, datum, p_list, c_list = _parse_run_config(cfg, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "diagnostics_csv": str(out / "diagnostics.csv"),
        "checkpoint": str(out / "final.sqgf"),
        "manifest": str(out / "manifest.json"),
    }

    grid = grid_for(solver.grid_n)
    theta0 = make_datum(datum, solver.nu, grid)
    records = []
    final = {"state": None, "t": 0.0}

    def on_record(t, state):
        records.append(make_record(state, t, solver.nu, records, p_list, c_list))
        final["state"], final["t"] = state, t

    try:
        run_recorded(theta0, solver, on_record)
    except (CFLViolationError, BlowUpError) as exc:
        manifest = build_manifest(
            "run", cfg, paths, time.monotonic() - t_start, f"failed:{exc.category}"
        )
        write_manifest(paths["manifest"], manifest)
        return _fail(exc.category, str(exc))

    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(csv_columns(p_list, c_list))
    for r in records:
        w.writerow(record_row(r, p_list, c_list))
    write_text_atomic(paths["diagnostics_csv"], buf.getvalue())
    write_checkpoint(paths["checkpoint"], final["state"], final["t"])
    manifest = build_manifest(
        "run", cfg, paths, time.monotonic() - t_start, "completed"
    )
    write_manifest(paths["manifest"], manifest)
    print(f"run completed: {len(records)} records -> {out}")
    return 0


def _cmd_sweep(args) -> int:
    t_start = time.monotonic()
    cfg = _load_config(args.config)
    spec = _parse_sweep_config(cfg, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    res = run_sweep(spec, jobs=args.jobs)
    paths = {
        "sweep_json": str(out / "sweep.json"),
        "sweep_csv": str(out / "sweep.csv"),
        "manifest": str(out / "manifest.json"),
    }
    write_text_atomic(paths["sweep_json"], sweep_json_text(res))
    write_text_atomic(paths["sweep_csv"], sweep_csv_text(res))
    status = "completed" if not res.failures else f"failed:{res.failures[0][1]}"
    write_manifest(paths["manifest"], build_manifest(
        "sweep", cfg, paths, time.monotonic() - t_start, status
    ))
    if res.failures:
        nu, cat, msg = res.failures[0]
        return _fail(cat, f"sweep aborted at nu={nu:g}: {msg} (partial results written)")
    print(f"sweep completed: {len(res.per_nu)} viscosities -> {out}")
    return 0


def _cmd_rates(args) -> int:
    t_start = time.monotonic()
    cfg = _load_config(args.config)
    ps, nus, t_end, linear, seed, cap, cadence = _parse_rates_config(cfg, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    paths = {"manifest": str(out / "manifest.json")}
    for p in ps:
        r = rate_experiment(p, nus, linear_mode=linear, t_end=t_end, seed=seed,
                            grid_cap=cap, record_cadence=cadence)
        rows.append(r)
        label = ("%g" % p).replace(".", "_")
        sweep_path = out / f"sweep_p{label}.csv"
        write_text_atomic(sweep_path, sweep_csv_text(r.sweep))
        paths[f"sweep_p{label}"] = str(sweep_path)
        print(f"p={p:g}: fitted {r.fitted_slope:+.4f} predicted {r.predicted_slope:+.4f} "
              f"(residual {r.residual:.2e})")
    paths["rates_json"] = str(out / "rates.json")
    paths["rates_csv"] = str(out / "rates.csv")
    write_text_atomic(paths["rates_json"], rates_json_text(rows, t_end, linear))
    write_text_atomic(paths["rates_csv"], rates_csv_text(rows))
    write_manifest(paths["manifest"], build_manifest(
        "rates", cfg, paths, time.monotonic() - t_start, "completed"
    ))
    return 0


def _cmd_validate(args) -> int:
    results = run_all()
    width = max(len(r.name) for r in results)
    failed = 0
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        failed += 0 if r.passed else 1
        print(f"{r.name:<{width}}  {mark}  {r.detail}")
    if failed:
        print(f"{failed} suite(s) failed")
        return 1
    print("all suites passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqgsim",
        description="Critically dissipative SQG simulation and vanishing-viscosity experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, jobs=False):
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="override config seed (u64)")
        if jobs:
            p.add_argument("--jobs", type=int, default=1, help="parallel runs")

    common(sub.add_parser("run", help="integrate one configuration"))
    common(sub.add_parser("sweep", help="run a vanishing-viscosity sweep"), jobs=True)
    common(sub.add_parser("rates", help="fit dissipation rates for scaling data"), jobs=True)
    sub.add_parser("validate", help="run the built-in invariant suites")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "run": _cmd_run,
        "sweep": _cmd_sweep,
        "rates": _cmd_rates,
        "validate": _cmd_validate,
    }[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        return _fail("config_error", str(exc))
    except CFLViolationError as exc:
        return _fail("cfl_violation", str(exc))
    except BlowUpError as exc:
        return _fail("blow_up", str(exc))
    except SQGError as exc:
        return _fail(exc.category, str(exc))
    except OSError as exc:
        return _fail("io_error", str(exc))


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit codes: 0 success, 2 usage or configuration error, 3 domain error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import ChaosProfile, load_catalog, get_body
from .collapse import CollapseModelParams, FluctuationModel, ModelKind, diffusion_coefficient
from .constants import CGS, SECONDS_PER_YEAR
from .errors import (CatalogParseError, DomainError, NumericalError, StabilityError,
                     ValidationError)
from .scenario import (REVIVAL_TOLERANCE, RunManifest, config_hash, harmonic_period,
                       hilltop_rate, jsonable, load_scenario, write_series_csv,
                       write_snapshot_csv)
from .timescales import classicality_verdict
from .wigner.compare import BREAKDOWN_THRESHOLD, classical_quantum_distance, log_slope
from .wigner.diagnostics import l1_distance
from .wigner.engine import evolve

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERICAL = 0, 2, 3, 4

# order-of-magnitude estimates for Jupiter, erg*g/s
TABLE2_TARGETS = {"jupiter": {"env": 1e-10, "grw": 1e-8, "gpr": 1e-11, "ggr": 1e-4}}
TABLE2_TOLERANCE_DECADES = 1.0


class UsageError(Exception):
    pass


def _emit(text):
    sys.stdout.write(text.rstrip("\n") + "\n")


def _out_dir(args, default=None):
    out = getattr(args, "out", None) or default
    if out is None:
        return None
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {path}: {exc}") from None
    return path


def _catalog(args):
    return load_catalog(getattr(args, "catalog", None))


def _model(args, kind):
    params = CollapseModelParams(
        lambda_grw=args.lambda_grw if args.lambda_grw is not None else 1e-16,
        a=args.a if args.a is not None else 1e-5,
        gamma_gpr=args.gamma_gpr if args.gamma_gpr is not None else 1e-30)
    return FluctuationModel(kind, params, temperature=args.temp, env_rate=args.gamma_env)


def cmd_timescales(args):
    body = get_body(_catalog(args), args.body)
    model = _model(args, args.model)
    chaos = None
    if args.q is not None or args.lambda_q is not None or args.m0 is not None or args.dims != 1:
        q = 1.0 if args.q is None else args.q
        if q != 1.0 and args.lambda_q is None:
            raise UsageError("--q below 1 needs --lambda-q")
        chaos = ChaosProfile(q=q,
                             lambda_q=body.lyapunov if args.lambda_q is None else args.lambda_q,
                             dims=args.dims,
                             m0=(body.nonlinearity_scale * body.sigma_p0) ** args.dims
                             if args.m0 is None else args.m0)
    report = classicality_verdict(body, model, chaos)
    out = _out_dir(args)
    if args.json:
        _emit(json.dumps(jsonable(report.to_dict()), indent=2))
    else:
        _emit(report.to_text())
    if out is not None:
        path = out / f"timescales_{body.name}_{report.model}.json"
        path.write_text(json.dumps(jsonable(report.to_dict()), indent=2) + "\n")
    return EXIT_OK


def table2_rows(body, model_args=None, constants=CGS):
    """Diffusion coefficients of the four models with targets where known."""
    targets = TABLE2_TARGETS.get(body.name, {})
    rows = []
    for kind in ModelKind:
        model = _model(model_args, kind) if model_args is not None else FluctuationModel(kind)
        D = diffusion_coefficient(model, body, constants)
        target = targets.get(kind.value)
        row = {"model": kind.value, "D_erg_g_per_s": D, "target_erg_g_per_s": target,
               "log10_ratio": None, "status": None}
        if target is not None:
            ratio = math.log10(D / target)
            row["log10_ratio"] = ratio
            row["status"] = "PASS" if abs(ratio) <= TABLE2_TOLERANCE_DECADES else "FAIL"
        rows.append(row)
    return rows


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def cmd_table2(args):
    body = get_body(_catalog(args), args.body)
    rows = table2_rows(body, args)
    columns = ["model", "D_erg_g_per_s", "target_erg_g_per_s", "log10_ratio", "status"]
    csv_lines = [",".join(columns)]
    csv_lines += [",".join(_fmt(r[c]) for c in columns) for r in rows]
    provenance = {"body": body.to_record(),
                  "catalog": getattr(args, "catalog", None) or "built-in",
                  "constants": {"hbar": CGS.hbar, "G": CGS.G, "k_B": CGS.k_B,
                                "proton_mass": CGS.proton_mass},
                  "params": {"lambda_grw": _model(args, "grw").params.lambda_grw,
                             "a": _model(args, "grw").params.a,
                             "gamma_gpr": _model(args, "grw").params.gamma_gpr},
                  "tolerance_decades": TABLE2_TOLERANCE_DECADES,
                  "version": __version__}
    if args.json:
        _emit(json.dumps(jsonable({"rows": rows, "provenance": provenance}), indent=2))
    else:
        _emit("\n".join(csv_lines))
    out = _out_dir(args)
    if out is not None:
        (out / f"table2_{body.name}.csv").write_text("\n".join(csv_lines) + "\n")
        (out / f"table2_{body.name}.json").write_text(
            json.dumps(jsonable({"rows": rows, "provenance": provenance}), indent=2) + "\n")
    return EXIT_OK


def cmd_catalog_list(args):
    bodies = _catalog(args)
    if args.json:
        _emit(json.dumps([b.to_record() for b in bodies], indent=2))
        return EXIT_OK
    _emit("name,mass_g,volume_cm3,particle_count,temperature_K,lyapunov_per_s,"
          "sigma_p0_g_cm_per_s,chi_cm")
    for b in bodies:
        _emit(",".join([b.name] + [f"{v:.6g}" for v in (
            b.mass, b.volume, b.particle_count, b.temperature, b.lyapunov, b.sigma_p0,
            b.nonlinearity_scale)]))
    return EXIT_OK


def _numerical_failure(exc, out):
    path = None
    if exc.snapshot is not None and out is not None:
        path = write_snapshot_csv(exc.snapshot, out / "last_good.csv")
    sys.stderr.write(f"error: {exc}\n")
    if path is not None:
        sys.stderr.write(f"last good snapshot: {path}\n")
    return EXIT_NUMERICAL


def _revival_check(scenario, result, spec):
    period = harmonic_period(scenario.potential, spec.mass)
    if period is None or spec.gamma or spec.diffusion:
        return None
    initial = result.snapshots[0]
    errors = []
    for snap in result.snapshots[1:]:
        cycles = snap.time / period
        if round(cycles) >= 1 and abs(cycles - round(cycles)) * period <= 0.5 * spec.dt:
            errors.append({"time": snap.time, "l1_error": l1_distance(snap, initial)})
    if not errors:
        return {"period": period, "checked": False}
    worst = max(e["l1_error"] for e in errors)
    return {"period": period, "checked": True, "samples": errors, "l1_error": worst,
            "tolerance": REVIVAL_TOLERANCE, "passed": worst <= REVIVAL_TOLERANCE}


def cmd_evolve(args):
    started = time.perf_counter()
    scenario = load_scenario(args.scenario)
    spec = scenario.spec()
    out = _out_dir(args, default=f"run_{scenario.name}")
    initial = scenario.initial_state()
    try:
        result = evolve(initial, spec, coarse_box=scenario.coarse_box(),
                        husimi_sigma_x=scenario.diagnostics.get("husimi_sigma_x"))
    except NumericalError as exc:
        return _numerical_failure(exc, out)
    outputs = []
    for i, snap in enumerate(result.snapshots):
        outputs.append(str(write_snapshot_csv(snap, out / f"snapshot_{i:05d}.csv")))
    outputs.append(str(write_series_csv(out / "diagnostics.csv", result.diagnostics)))
    resolved = scenario.resolved()
    results = {"times": result.times, "diagnostics": result.diagnostics,
               "max_norm_drift": float(np.max(np.abs(result.diagnostics["norm"] - 1.0)))}
    revival = _revival_check(scenario, result, spec)
    if revival is not None:
        results["revival"] = revival
    manifest_path = out / "manifest.json"
    outputs.append(str(manifest_path))
    manifest = RunManifest("evolve", config_hash(resolved), resolved, outputs,
                           time.perf_counter() - started, results)
    manifest.write(manifest_path)
    summary = {"snapshots": len(result.snapshots), "steps": spec.n_steps, "dt": spec.dt,
               "max_norm_drift": results["max_norm_drift"], "manifest": str(manifest_path)}
    if revival is not None and revival.get("checked"):
        summary["revival_l1_error"] = revival["l1_error"]
        summary["revival_passed"] = revival["passed"]
    _emit(json.dumps(jsonable(summary), indent=2) if args.json else
          "\n".join(f"{k} = {_fmt(v)}" for k, v in summary.items()))
    return EXIT_OK


def _compare_once(scenario, hbar, threshold, stop):
    spec = scenario.spec(hbar)
    initial = scenario.initial_state(hbar)
    series = classical_quantum_distance(initial, spec, stop_above=threshold if stop else None)
    return spec, series, series.breakdown_time(threshold)


def cmd_compare(args):
    started = time.perf_counter()
    scenario = load_scenario(args.scenario)
    out = _out_dir(args, default=f"compare_{scenario.name}")
    threshold = args.threshold
    n_runs = args.hbar_sweep
    if n_runs is not None and n_runs < 2:
        raise UsageError("--hbar-sweep needs at least 2 runs")
    hbars = [scenario.hbar] if n_runs is None else [
        scenario.hbar / args.sweep_factor**k for k in range(n_runs)]
    outputs, runs = [], []
    try:
        for k, hbar in enumerate(hbars):
            spec, series, t_break = _compare_once(scenario, hbar, threshold, n_runs is not None)
            tag = "" if n_runs is None else f"_{k}"
            outputs.append(str(write_series_csv(out / f"distance{tag}.csv", {
                "time": series.times, "l1_distance": series.distances})))
            outputs.append(str(write_snapshot_csv(series.quantum, out / f"quantum_final{tag}.csv")))
            outputs.append(str(write_snapshot_csv(series.classical,
                                                  out / f"classical_final{tag}.csv")))
            runs.append({"hbar": hbar, "dt": spec.dt, "breakdown_time": t_break,
                         "final_distance": float(series.distances[-1]),
                         "max_distance": float(series.distances.max()),
                         "times": series.times, "distances": series.distances})
    except NumericalError as exc:
        return _numerical_failure(exc, out)
    results = {"threshold": threshold, "runs": runs}
    summary = {"threshold": threshold}
    for run in runs:
        summary[f"breakdown_time[hbar={run['hbar']:.6g}]"] = run["breakdown_time"]
        summary[f"max_distance[hbar={run['hbar']:.6g}]"] = run["max_distance"]
    if n_runs is not None:
        valid = [(r["hbar"], r["breakdown_time"]) for r in runs if r["breakdown_time"] is not None]
        slope = log_slope(*zip(*valid)) if len(valid) >= 2 else math.nan
        rate = hilltop_rate(scenario.potential, scenario.evolution["mass"])
        sweep = {"hbars": hbars, "breakdown_times": [r["breakdown_time"] for r in runs],
                 "sweep_factor": args.sweep_factor, "slope": slope,
                 "per_decade": slope * math.log(10.0), "reference_rate": rate,
                 "slope_times_rate": slope * rate if rate else None}
        results["sweep"] = sweep
        outputs.append(str(write_series_csv(out / "sweep.csv", {
            "hbar": hbars, "breakdown_time": [math.nan if t is None else t
                                              for t in sweep["breakdown_times"]]})))
        summary.update({"slope": slope, "per_decade": sweep["per_decade"],
                        "reference_rate": rate, "slope_times_rate": sweep["slope_times_rate"]})
    resolved = scenario.resolved()
    resolved["compare"] = {"threshold": threshold, "hbars": hbars}
    manifest_path = out / "manifest.json"
    outputs.append(str(manifest_path))
    RunManifest("compare", config_hash(resolved), resolved, outputs,
                time.perf_counter() - started, results).write(manifest_path)
    summary["manifest"] = str(manifest_path)
    _emit(json.dumps(jsonable(summary), indent=2) if args.json else
          "\n".join(f"{k} = {_fmt(v)}" for k, v in summary.items()))
    return EXIT_OK


def _global_flags(suppress):
    parser = argparse.ArgumentParser(add_help=False)
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--catalog", default=default, help="catalog YAML overriding the built-in one")
    parser.add_argument("--json", action="store_true",
                        default=argparse.SUPPRESS if suppress else False,
                        help="machine-readable output")
    parser.add_argument("--out", default=default, help="output directory")
    return parser


def _model_flags(parser):
    parser.add_argument("--lambda-grw", type=float, help="GRW collapse rate, 1/s")
    parser.add_argument("--a", type=float, help="collapse localization length, cm")
    parser.add_argument("--gamma-gpr", type=float, help="GPR rate, cm^-3 s^-1")
    parser.add_argument("--gamma-env", type=float, help="environmental relaxation rate, 1/s")
    parser.add_argument("--temp", type=float, help="environment temperature, K")


def build_parser():
    parser = argparse.ArgumentParser(prog="decoherence-lab", parents=[_global_flags(False)],
                                     description="Correspondence-breakdown timescales and "
                                                 "Wigner-function evolution.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = _global_flags(True)

    p = sub.add_parser("timescales", parents=[common], help="t_Q versus t_CG for one body")
    p.add_argument("--body", required=True)
    p.add_argument("--model", required=True, choices=[k.value for k in ModelKind])
    p.add_argument("--q", type=float, help="entropic index (1 = strong chaos)")
    p.add_argument("--lambda-q", type=float, help="generalized Lyapunov rate, 1/s")
    p.add_argument("--m0", type=float, help="initial unexplored area, (erg s)^dims")
    p.add_argument("--dims", type=int, default=1)
    _model_flags(p)
    p.set_defaults(func=cmd_timescales)

    p = sub.add_parser("table2", parents=[common], help="diffusion coefficients of all models")
    p.add_argument("--body", default="jupiter")
    _model_flags(p)
    p.set_defaults(func=cmd_table2)

    p = sub.add_parser("evolve", parents=[common], help="run a Wigner scenario")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("compare", parents=[common], help="Moyal-on versus Moyal-off runs")
    p.add_argument("--scenario", required=True)
    p.add_argument("--threshold", type=float, default=BREAKDOWN_THRESHOLD,
                   help="L1 distance defining the breakdown time")
    p.add_argument("--hbar-sweep", type=int, metavar="N",
                   help="repeat with hbar divided by --sweep-factor, N runs in total")
    p.add_argument("--sweep-factor", type=float, default=10.0)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("catalog", parents=[common], help="catalog operations")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    c = csub.add_parser("list", parents=[common], help="list bodies")
    c.set_defaults(func=cmd_catalog_list)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValidationError, CatalogParseError, StabilityError, KeyError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"error: {message}\n")
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except NumericalError as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

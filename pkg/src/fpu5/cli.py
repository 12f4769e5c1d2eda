"""Command-line surface: simulate, exact, validate, recurrence, painleve,
velocity-curve, and the canned experiments.

Every successful invocation writes its outputs plus a JSON manifest under
--out; snapshot files are bit-reproducible for identical configurations.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import BlowUpError, ConfigError, DomainError, PoleError
from .experiments import (EXPERIMENTS, InitialCondition, SimulationConfig,
                          Snapshot, gardner_soliton_experiment,
                          kink_validation, mass_drift, recurrence_scan,
                          recurrence_table, run, soliton_perturbation,
                          zabusky_kruskal)
from .params import EquationKind, ModelParams, velocity_curve
from .painleve import fuchs_indices, leading_balance
from .snapio import (RunManifest, config_to_dict, parse_config, read_snapshot,
                     write_snapshots)
from .solutions import (EllipticSolution, GardnerSoliton, KdV5Soliton,
                        KinkSolution, elliptic_eval, elliptic_g3_for_speed,
                        gardner_soliton, kdv5_soliton, kink_eval)
from .spectral import Grid


def _write_manifest(out_dir: Path, config: dict, files: list[str],
                    checks: dict, started: float) -> None:
    manifest = RunManifest(config=config, version=__version__,
                           wall_time=time.monotonic() - started,
                           files=[str(f) for f in files], checks=checks)
    path = out_dir / "manifest.json"
    path.write_text(manifest.to_json() + "\n")


def _write_table(path: Path, header: str, rows) -> None:
    with open(path, "w") as fh:
        fh.write(f"# {header}\n")
        for row in rows:
            fh.write("\t".join("%.16e" % v for v in row) + "\n")


def _cmd_simulate(args) -> int:
    started = time.monotonic()
    config = parse_config(Path(args.config).read_text())
    snapshots = run(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    checks = {"mass_drift": mass_drift(snapshots)}
    manifest = write_snapshots(snapshots, config.grid, str(out / "snap"),
                               config_echo=config_to_dict(config),
                               checks=checks, started=started)
    _write_manifest(out, config_to_dict(config), manifest.files, checks, started)
    print(f"wrote {len(manifest.files)} snapshots to {out} "
          f"(mass drift {checks['mass_drift']:.3e})")
    return 0


def _exact_profile(args, grid: Grid):
    params = ModelParams(delta=args.delta, mu=args.mu)
    x = grid.x
    if args.family == "kink":
        s = KinkSolution(params, branch=args.branch, z0=args.z0)
        return kink_eval(s, x - args.t * s.speed), {"speed": s.speed}
    if args.family == "elliptic":
        g3 = args.g3
        if g3 is None:
            if args.c0 is None:
                raise DomainError("elliptic needs --g3 or --c0")
            g3 = elliptic_g3_for_speed(params, args.c0)
        s = EllipticSolution(params, g3=g3, z0=args.z0)
        u = elliptic_eval(s, x - args.t * s.c0, on_pole="nan")
        return np.asarray(u), {"g3": g3, "speed": s.c0,
                               "poles_masked": int(np.sum(~np.isfinite(u)))}
    if args.family == "gardner":
        if args.c0 is None:
            raise DomainError("gardner needs --c0")
        s = GardnerSoliton(params, c0=args.c0)
        return gardner_soliton(s, x - 0.5 * grid.length, args.t), {"speed": s.c0}
    if args.family == "kdv5":
        s = KdV5Soliton(k=args.k, delta=args.delta)
        return kdv5_soliton(s, x - 0.5 * grid.length, args.t), \
            {"speed": -s.speed, "crest": s.crest}
    raise DomainError(f"unknown family {args.family!r}")


def _cmd_exact(args) -> int:
    started = time.monotonic()
    grid = Grid(args.length, args.n)
    u, info = _exact_profile(args, grid)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    snap = Snapshot(t=args.t, u=np.asarray(u, dtype=float))
    echo = {k: v for k, v in vars(args).items() if k != "func"}
    manifest = write_snapshots([snap], grid, str(out / f"exact_{args.family}"),
                               config_echo=echo, checks=info, started=started)
    _write_manifest(out, echo, manifest.files, info, started)
    print(f"wrote {manifest.files[0]}")
    return 0


def _cmd_validate(args) -> int:
    started = time.monotonic()
    config = parse_config(Path(args.config).read_text())
    report = kink_validation(config.params, config.grid, config.dt,
                             config.t_end, config.snapshot_interval)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = out / "err_vs_t.dat"
    _write_table(table, "t\terr", zip(report.times, report.errs))
    rep_path = out / "report.json"
    rep_path.write_text(json.dumps(
        {"times": report.times.tolist(), "errs": report.errs.tolist(),
         "max_err": report.max_err}, indent=2) + "\n")
    _write_manifest(out, config_to_dict(config), [str(table), str(rep_path)],
                    {"max_err": report.max_err}, started)
    print(f"max err {report.max_err:.3e}")
    return 0


def _cmd_recurrence(args) -> int:
    started = time.monotonic()
    manifest = json.loads(Path(args.manifest).read_text())
    snapshots = []
    geometry = None
    for path in manifest["files"]:
        if path.endswith("manifest.json"):
            continue
        snap, geom = read_snapshot(path)
        snapshots.append(snap)
        geometry = geom
    snapshots.sort(key=lambda s: s.t)
    report = recurrence_scan(snapshots, t_fix=args.t_fix, skip=args.skip)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = out / "difference_vs_t.dat"
    _write_table(table, "t\td_min_shift\td_plain",
                 zip(report.times, report.differences, report.plain_differences))
    rows, period_rows = recurrence_table(
        snapshots, [args.t_fix], skip=max(args.skip, 1e-9))
    rep_path = out / "report.json"
    rep_path.write_text(json.dumps(
        {"t_fix": report.t_fix, "minima_times": report.minima_times,
         "period": report.period, "fixed_time_rows": rows,
         "fixed_time_period": period_rows,
         "grid": {"N": geometry[0], "L": geometry[1]}}, indent=2) + "\n")
    checks = {"period": report.period, "fixed_time_period": period_rows}
    _write_manifest(out, {"manifest": args.manifest, "t_fix": args.t_fix,
                          "skip": args.skip}, [str(table), str(rep_path)],
                    checks, started)
    print(f"scan minima: {report.minima_times}")
    print(f"mean-gap period: {report.period}")
    print(f"fixed-time rows: {rows} -> period {period_rows}")
    return 0


def _cmd_painleve(args) -> int:
    started = time.monotonic()
    params = ModelParams(delta=args.delta, mu=args.mu)
    balance = leading_balance(params)
    result = fuchs_indices(params)
    coeffs = [str(c) for c in result.indicial_coefficients]
    print(f"pole order p = {balance.pole_order}")
    print(f"branch coefficients a0 = {balance.coefficients[0]:.6f}, "
          f"{balance.coefficients[1]:.6f}")
    print(f"indicial polynomial (monic, j^3..1): {', '.join(coeffs)}")
    roots = ", ".join(f"{r.real:g}{r.imag:+g}i" if r.imag else f"{r.real:g}"
                      for r in result.indices)
    print(f"fuchs indices: {roots}")
    verdict = "passes" if result.passes else "does not pass"
    print(f"verdict: {verdict} ({result.reason})")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rep = out / "painleve.json"
    rep.write_text(json.dumps(
        {"pole_order": balance.pole_order,
         "branch_coefficients": list(balance.coefficients),
         "indicial_polynomial": coeffs,
         "indices": [[r.real, r.imag] for r in result.indices],
         "passes": result.passes, "reason": result.reason}, indent=2) + "\n")
    _write_manifest(out, {"mu": args.mu, "delta": args.delta}, [str(rep)],
                    {"passes": result.passes}, started)
    return 0


def _cmd_velocity_curve(args) -> int:
    started = time.monotonic()
    table = velocity_curve(args.mu_min, args.mu_max, args.n)
    for mu, speed in table:
        print(f"{mu:.6f}\t{speed:.6f}")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "velocity_curve.dat"
    _write_table(path, "mu\tC0", table)
    _write_manifest(out, {"mu_min": args.mu_min, "mu_max": args.mu_max,
                          "n": args.n}, [str(path)],
                    {"rows": len(table)}, started)
    return 0


def _experiment_kink_validation(fx, out: Path) -> dict:
    grid = Grid(fx["length"], fx["n"])
    params = ModelParams(delta=fx["delta"], mu=fx["mu"])
    report = kink_validation(params, grid, fx["dt"], fx["t_end"],
                             fx["snapshot_interval"])
    _write_table(out / "err_vs_t.dat", "t\terr", zip(report.times, report.errs))
    return {"max_err": report.max_err,
            "err_bound": fx["err_bound"],
            "pass": report.max_err < fx["err_bound"]}


def _experiment_soliton_perturbation(fx, out: Path) -> dict:
    grid = Grid(fx["length"], fx["n"])
    results = soliton_perturbation(delta=fx["delta"], k=fx["k"], mus=fx["mus"],
                                   grid=grid, dt=fx["dt"], t_end=fx["t_end"],
                                   snapshot_interval=fx["snapshot_interval"])
    checks: dict = {}
    for mu, res in results.items():
        tag = f"mu_{mu:g}"
        _write_table(out / f"score_vs_t_{tag}.dat", "t\tscore",
                     zip(res["times"], res["scores"]))
        write_snapshots(res["snapshots"][::4], grid, str(out / f"snap_{tag}"))
        checks[f"{tag}_max_score"] = float(res["scores"].max())
        checks[f"{tag}_mass_drift"] = res["mass_drift"]
    unperturbed = results[fx["mus"][0]]["scores"].max()
    perturbed = results[fx["mus"][1]]
    i_late = int(np.argmin(np.abs(perturbed["times"] - fx["destruction_by"])))
    checks["pass"] = bool(
        unperturbed < fx["invariance_bound"]
        and perturbed["scores"][i_late] > fx["destruction_threshold"])
    return checks


def _experiment_gardner(fx, out: Path) -> dict:
    grid = Grid(fx["length"], fx["n"])
    results = gardner_soliton_experiment(
        delta=fx["delta"], mu=fx["mu"], c0=fx["c0"], grid=grid,
        t_end=fx["t_end"], snapshot_interval=fx["snapshot_interval"],
        dts={EquationKind.GARDNER: fx["dt_gardner"],
             EquationKind.FPU5: fx["dt_fpu5"]})
    checks: dict = {}
    for kind, res in results.items():
        _write_table(out / f"score_vs_t_{kind.value}.dat", "t\tscore",
                     zip(res["times"], res["scores"]))
        checks[f"{kind.value}_max_score"] = float(res["scores"].max())
        checks[f"{kind.value}_mass_drift"] = res["mass_drift"]
    fpu5_scores = results[EquationKind.FPU5]["scores"]
    fpu5_times = results[EquationKind.FPU5]["times"]
    i_deform = int(np.argmin(np.abs(fpu5_times - fx["deform_by"])))
    checks["pass"] = bool(
        checks["gardner_max_score"] < fx["hold_bound"]
        and fpu5_scores[i_deform] > fx["deform_threshold"])
    return checks


def _experiment_zabusky_kruskal(fx, out: Path) -> dict:
    grid = Grid(fx["length"], fx["n"])
    results = zabusky_kruskal(
        delta=fx["delta"], mu=fx["mu"], grid=grid, t_end=fx["t_end"],
        snapshot_interval=fx["snapshot_interval"],
        figure_times=fx["figure_times"],
        recurrence_window=fx["recurrence_window"],
        dts={EquationKind.KDV: fx["dt_kdv"], EquationKind.FPU5: fx["dt_fpu5"]})
    checks: dict = {}
    for kind, res in results.items():
        checks[f"{kind.value}_recurrence_score"] = res["recurrence_score"]
        checks[f"{kind.value}_figure_pair_score"] = res["figure_pair_score"]
        checks[f"{kind.value}_mass_drift"] = res["mass_drift"]
        times = res["times"]
        keep = [int(np.argmin(np.abs(times - tv))) for tv in fx["figure_times"]]
        write_snapshots([res["snapshots"][i] for i in keep], grid,
                        str(out / f"snap_{kind.value}"))
    kdv = checks["kdv_recurrence_score"]
    fpu = checks["fpu5_recurrence_score"]
    checks["contrast"] = fpu / kdv
    checks["pass"] = bool(kdv < fx["kdv_recurrence_bound"]
                          and fpu >= fx["contrast_factor"] * kdv)
    return checks


def _experiment_recurrence(fx, out: Path) -> dict:
    grid = Grid(fx["length"], fx["n"])
    params = ModelParams(delta=fx["delta"], mu=fx["mu"])
    config = SimulationConfig(
        kind=EquationKind.FPU5, params=params, grid=grid, t_end=fx["t_end"],
        dt=fx["dt"], snapshot_interval=fx["snapshot_interval"],
        initial_condition=InitialCondition("kdv5_soliton", k=fx["k"]))
    snapshots = run(config)
    report = recurrence_scan(snapshots, t_fix=fx["t_fix"], skip=fx["scan_skip"])
    _write_table(out / "difference_vs_t.dat", "t\td_min_shift\td_plain",
                 zip(report.times, report.differences, report.plain_differences))
    rows, period = recurrence_table(snapshots, [fx["t_fix"]],
                                    skip=fx["table_skip"])
    checks = {
        "mass_drift": mass_drift(snapshots),
        "scan_period": report.period,
        "fixed_time_rows": rows,
        "fixed_time_period": period,
        "expected_first_minimum": fx["expected_first_minimum"],
        "expected_period": fx["expected_period"],
    }
    tol = fx["tolerance"]
    checks["pass"] = bool(
        rows and abs(rows[0][1] - fx["expected_first_minimum"]) <= tol
        and abs(period - fx["expected_period"]) <= tol)
    return checks


_EXPERIMENT_RUNNERS = {
    "kink-validation": _experiment_kink_validation,
    "soliton-perturbation": _experiment_soliton_perturbation,
    "gardner": _experiment_gardner,
    "zabusky-kruskal": _experiment_zabusky_kruskal,
    "recurrence": _experiment_recurrence,
}


def _cmd_experiment(args) -> int:
    started = time.monotonic()
    fx = EXPERIMENTS[args.name]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    checks = _EXPERIMENT_RUNNERS[args.name](fx, out)
    files = sorted(str(p) for p in out.iterdir() if p.name != "manifest.json")
    _write_manifest(out, {"experiment": args.name, **{
        k: (list(v) if isinstance(v, tuple) else v) for k, v in fx.items()}},
        files, checks, started)
    for key, value in checks.items():
        print(f"{key}: {value}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpu5",
        description="Spectral laboratory for the fifth-order continuum "
                    "equations of the alpha+beta FPU chain")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="integrate a run configuration")
    p.add_argument("config")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("exact", help="tabulate a closed-form solution")
    p.add_argument("family", choices=["kink", "elliptic", "gardner", "kdv5"])
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--g3", type=float, default=None)
    p.add_argument("--c0", type=float, default=None)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--branch", type=int, choices=[1, -1], default=1)
    p.add_argument("--z0", type=float, default=0.0)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--length", type=float, default=40.0)
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("validate", help="kink validation for a configuration")
    p.add_argument("config")
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("recurrence", help="recurrence scan over stored snapshots")
    p.add_argument("manifest")
    p.add_argument("--t-fix", type=float, required=True, dest="t_fix")
    p.add_argument("--skip", type=float, default=0.0)
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_recurrence)

    p = sub.add_parser("painleve", help="pole balance and Fuchs indices")
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_painleve)

    p = sub.add_parser("velocity-curve", help="kink speed as a function of mu")
    p.add_argument("--mu-min", type=float, required=True, dest="mu_min")
    p.add_argument("--mu-max", type=float, required=True, dest="mu_max")
    p.add_argument("-n", type=int, default=50)
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_velocity_curve)

    p = sub.add_parser("experiment", help="run a canned study")
    p.add_argument("name", choices=sorted(EXPERIMENTS))
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError, PoleError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (BlowUpError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: synth, kernel, schedule, arcs, estimate, sweep, bounds,
hausdorff.  Structured configuration and reports are JSON; bulk numeric
data is CSV.  Exit codes: 0 success, 2 configuration error (bad flags,
malformed files, incompatible schemes), 3 precondition or degenerate-
localization error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from . import plots
from .arcs import DiscreteArc, hausdorff_distance, two_threshold_family
from .errors import (
    ConfigurationError,
    DegenerateLocalizationError,
    InputLengthError,
    ParameterError,
    PeriodikError,
)
from .estimators import estimate
from .kernels import SummationMatrix, check_kernel_bounds, evaluate_grid, kernel_at_one
from .schedules import ThresholdSchedule, schedule_at, validate_schedule
from .signal_model import (
    NoiseSpec,
    SignalModel,
    read_signal_csv,
    synthesize,
    write_signal_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECONDITION = 3


def _matrix_from_args(args) -> SummationMatrix:
    scheme = "truncated-poisson" if args.scheme == "poisson" else args.scheme
    return SummationMatrix(scheme, getattr(args, "C", 1.0))


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: malformed JSON ({exc})")


def _workers(args) -> int | None:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("PERIODIK_THREADS")
    return int(env) if env else None


def _schedule_from_args(args, mode=None) -> ThresholdSchedule:
    kwargs = {"scheme": args.schedule_scheme, "delta": args.delta}
    for name in ("c0", "c1", "c3", "c4", "c5", "c6"):
        val = getattr(args, name, None)
        if val is not None:
            kwargs[name] = val
    if mode is not None:
        kwargs["mode"] = mode
    return ThresholdSchedule(**kwargs)


# ---------------------------------------------------------------------------
# subcommands

def cmd_synth(args) -> int:
    cfg = _load_json(args.config)
    try:
        model = SignalModel.from_dict(cfg)
        noise = NoiseSpec.from_dict(cfg.get("noise", {"family": "none"}))
    except (ParameterError, TypeError) as exc:
        raise ConfigurationError(f"{args.config}: {exc}")
    if args.seed is not None:
        noise = noise.with_seed(args.seed)
    signal = synthesize(model, noise, args.m)
    write_signal_csv(args.out, signal)
    print(f"wrote {args.m} samples to {args.out}")
    return EXIT_OK


def cmd_kernel(args) -> int:
    matrix = _matrix_from_args(args)
    grid = evaluate_grid(None, matrix, args.m, args.J, workers=_workers(args))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["j", "theta", "re", "im", "abs"])
            thetas = grid.thetas()
            for j, (th, v) in enumerate(zip(thetas, grid.values)):
                writer.writerow([j, repr(float(th)), repr(float(v.real)),
                                 repr(float(v.imag)), repr(float(abs(v)))])
        print(f"wrote grid values to {args.out}")
        if args.plot:
            fig_path = Path(args.out).with_suffix(".png")
            plots.render_kernel_figure(grid, fig_path,
                                       levels={"S(1)": kernel_at_one(matrix, args.m)})
            print(f"wrote figure to {fig_path}")
    if args.check_bounds:
        thetas = np.linspace(-np.pi, np.pi, 1001)
        checks = check_kernel_bounds(matrix, args.m, thetas)
        print(json.dumps([c.to_dict() for c in checks], indent=2))
        if not all(c.satisfied for c in checks):
            return EXIT_PRECONDITION
    elif not args.out:
        print(json.dumps({"m": args.m, "J": args.J,
                          "kernel_at_one": kernel_at_one(matrix, args.m)}))
    return EXIT_OK


def cmd_schedule(args) -> int:
    schedule = _schedule_from_args(args, mode=args.mode)
    if args.validate_to:
        matrix = SummationMatrix(schedule.matrix_scheme)
        result = validate_schedule(schedule, matrix, (max(3, args.m), args.validate_to))
        print(json.dumps(result.to_dict(), indent=2))
        return EXIT_OK if result.passed else EXIT_PRECONDITION
    H, h, h_prime, J = schedule_at(schedule, args.m)
    print(json.dumps({"m": args.m, "H": H, "h": h, "h_prime": h_prime, "J": J}))
    return EXIT_OK


def cmd_arcs(args) -> int:
    with open(args.grid, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or "abs" not in header:
            raise ConfigurationError(f"{args.grid}: expected kernel CSV with an 'abs' column")
        k = header.index("abs")
        try:
            mags = np.array([float(row[k]) for row in reader if row])
        except (ValueError, IndexError) as exc:
            raise ConfigurationError(f"{args.grid}: malformed 'abs' column ({exc})")
    if mags.size == 0:
        raise ConfigurationError(f"{args.grid}: no rows")
    family, n_hat = two_threshold_family(mags, args.h, args.hprime)
    out = {"arcs": [a.to_dict() for a in family],
           "N_hat": n_hat, "full_circle": family.is_full_circle}
    print(json.dumps(out, indent=2))
    return EXIT_OK


def cmd_estimate(args) -> int:
    signal = read_signal_csv(args.signal)
    matrix = _matrix_from_args(args)
    schedule = _schedule_from_args(args, mode="estimate")
    mode = "two-stage" if args.mode == "two-stage" else "single-grid"
    report = estimate(signal, matrix, schedule, args.m, mode=mode,
                      z_rule=args.z_rule, workers=_workers(args))
    payload = report.to_dict()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
        print(f"wrote report to {args.out}")
    else:
        print(json.dumps(payload, indent=2))
    return EXIT_OK


def _plan_from_json(cfg) -> bounds_mod.SweepPlan:
    try:
        model = SignalModel.from_dict(cfg["model"])
        noise = NoiseSpec.from_dict(cfg["noise"])
        matrix = SummationMatrix(cfg.get("matrix", {}).get("scheme", "truncated-poisson"),
                                 cfg.get("matrix", {}).get("C", 1.0))
        schedule = ThresholdSchedule.from_dict(cfg.get("schedule", {"mode": "estimate"}))
        return bounds_mod.SweepPlan(
            model=model, noise=noise,
            m_grid=tuple(cfg["m_grid"]), trials=int(cfg["trials"]),
            matrix=matrix, schedule=schedule,
            mode=cfg.get("mode", "single-grid"),
            z_rule=cfg.get("z_rule", "midpoint"),
            z_angle_tol=cfg.get("z_angle_tol"),
            amp_rel_tol=cfg.get("amp_rel_tol", 0.25),
            seed=int(cfg.get("seed", 0)),
        )
    except KeyError as exc:
        raise ConfigurationError(f"sweep plan is missing field {exc}")
    except (ParameterError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"bad sweep plan: {exc}")


def cmd_sweep(args) -> int:
    plan = _plan_from_json(_load_json(args.plan))
    report = bounds_mod.consistency_sweep(plan)
    bounds_mod.write_sweep_csv(args.out, report)
    summary_path = Path(args.out).with_name(Path(args.out).stem + "_summary.csv")
    bounds_mod.write_summary_csv(summary_path, report)
    print(f"wrote {len(report.records)} trial rows to {args.out}")
    print(f"wrote per-m summary to {summary_path}")
    if args.plot:
        fig_path = Path(args.out).with_suffix(".png")
        plots.render_sweep_figure(report, fig_path)
        print(f"wrote figure to {fig_path}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    if args.kind == "poly":
        q = bounds_mod.TailBoundQuery(C=args.C, r=args.r, n=args.n)
        value = bounds_mod.subgaussian_poly_tail_bound(q)
        print(json.dumps({"kind": "poly", "C": args.C, "r": args.r, "n": args.n,
                          "bound": value, "clamped": min(1.0, value)}))
    elif args.kind == "sup":
        matrix = SummationMatrix("truncated-poisson", args.C_matrix)
        value = bounds_mod.poisson_noise_sup_tail_bound(args.m, matrix, args.b1, args.C)
        print(json.dumps({"kind": "sup", "m": args.m, "b1": args.b1, "C": args.C,
                          "bound": value, "clamped": min(1.0, value)}))
    else:
        cfg = _load_json(args.config)
        try:
            model = SignalModel.from_dict(cfg["model"])
            schedule = ThresholdSchedule.from_dict(cfg["schedule"])
        except KeyError as exc:
            raise ConfigurationError(f"bounds config is missing field {exc}")
        matrix = SummationMatrix("truncated-poisson",
                                 cfg.get("matrix", {}).get("C", 1.0))
        lb = bounds_mod.localization_failure_bounds(
            model, matrix, schedule, args.m, args.Delta, args.n, b1=args.b1)
        print(json.dumps({"kind": "localization", "m": args.m, **lb.to_dict()}, indent=2))
    return EXIT_OK


def _set_from_json(obj) -> list:
    """A circle set from {'arcs': [[theta1, theta2], ...], 'points': [angle, ...]}."""
    out = []
    for th1, th2 in obj.get("arcs", []):
        J = 1 << 20
        j1 = round(th1 / (2 * np.pi) * J)
        j2 = round(th2 / (2 * np.pi) * J)
        if j2 < j1:
            raise ConfigurationError("arc must have theta1 <= theta2")
        out.append(DiscreteArc(j1, min(j2, j1 + J - 1), J, full_circle=(j2 - j1 >= J)))
    for angle in obj.get("points", []):
        out.append(complex(np.exp(1j * float(angle))))
    return out


def cmd_hausdorff(args) -> int:
    def load(spec):
        if os.path.exists(spec):
            return _set_from_json(_load_json(spec))
        try:
            return _set_from_json(json.loads(spec))
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"inline set is not valid JSON: {exc}")

    d = hausdorff_distance(load(args.a), load(args.b))
    print(json.dumps({"distance": d if np.isfinite(d) else "inf"}))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="periodik",
        description="Recovery of periodicities hidden in heavy-tailed noise.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_schedule_opts(p, default_scheme="poisson-standard", flag="--schedule-scheme"):
        p.add_argument(flag, dest="schedule_scheme", default=default_scheme,
                       choices=["dirichlet-example", "poisson-standard", "poisson-corollary"])
        p.add_argument("--delta", type=float, default=0.5)
        for name in ("c0", "c1", "c3", "c4", "c5", "c6"):
            p.add_argument(f"--{name}", type=float, default=None)

    p = sub.add_parser("synth", help="sample a model+noise config to CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("kernel", help="evaluate the kernel on a grid")
    p.add_argument("--scheme", default="poisson", choices=["dirichlet", "poisson"])
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--J", type=int, required=True)
    p.add_argument("--check-bounds", action="store_true")
    p.add_argument("--out")
    p.add_argument("--plot", action="store_true")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("schedule", help="print (H, h, h', J) at m")
    add_schedule_opts(p, "poisson-standard", flag="--scheme")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--mode", default="detect", choices=["detect", "estimate"])
    p.add_argument("--validate-to", type=int, default=None,
                   help="validate the schedule over m..this bound")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("arcs", help="extract the two-threshold arc family from a grid CSV")
    p.add_argument("--grid", required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--hprime", type=float, required=True)
    p.set_defaults(func=cmd_arcs)

    p = sub.add_parser("estimate", help="run the full estimator on a signal CSV")
    p.add_argument("--signal", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--scheme", default="poisson", choices=["dirichlet", "poisson"])
    p.add_argument("--C", type=float, default=1.0)
    add_schedule_opts(p)
    p.add_argument("--mode", default="single", choices=["single", "two-stage"])
    p.add_argument("--z-rule", default="midpoint", choices=["midpoint", "maximizer"])
    p.add_argument("--out")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("sweep", help="run a Monte-Carlo consistency sweep")
    p.add_argument("--plan", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bounds", help="evaluate tail/localization bounds")
    p.add_argument("--kind", required=True, choices=["poly", "sup", "localization"])
    p.add_argument("--C", type=float, default=10.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--m", type=int, default=256)
    p.add_argument("--b1", type=float, default=1.0)
    p.add_argument("--C-matrix", type=float, default=1.0)
    p.add_argument("--Delta", type=float, default=0.5)
    p.add_argument("--config", help="JSON with model/schedule for --kind localization")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("hausdorff", help="distance between two circle sets")
    p.add_argument("--a", required=True, help="JSON file or inline JSON")
    p.add_argument("--b", required=True, help="JSON file or inline JSON")
    p.set_defaults(func=cmd_hausdorff)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad flags, which matches the configuration code
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateLocalizationError as exc:
        print(f"degenerate localization: {exc} (arc covers the whole circle)",
              file=sys.stderr)
        return EXIT_PRECONDITION
    except (ParameterError, InputLengthError) as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except PeriodikError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def main() -> None:
    sys.exit(run())

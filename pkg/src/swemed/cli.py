"""Command line: ``swemed run``, ``swemed spectral-sweep`` and ``swemed compare``.

Exit codes: 0 success, 2 invalid input, 3 solver abort.
"""

import argparse
import csv
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import scenarios, spectral
from .scenarios import ConfigError
from .sediment import MATERIALS
from .system import MatrixKind, Model, MomentSystem

EXIT_OK, EXIT_INVALID, EXIT_ABORT = 0, 2, 3


def _orders(text):
    try:
        if "-" in text:
            lo, hi = (int(v) for v in text.split("-"))
            return list(range(lo, hi + 1))
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad order list {text!r} (use e.g. 1-6 or 1,2,3)") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="swemed", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate a builtin scenario or a config/manifest file")
    run.add_argument("scenario", help=f"builtin name ({', '.join(scenarios.scenario_names())}) "
                                      "or path to a JSON config or manifest.json")
    run.add_argument("--material", choices=sorted(MATERIALS))
    run.add_argument("--model", choices=[m.value for m in Model])
    run.add_argument("--order", type=int, help="number of velocity moments N")
    run.add_argument("--nx", type=int, help="number of cells")
    run.add_argument("--t-end", type=float)
    step = run.add_mutually_exclusive_group()
    step.add_argument("--dt", type=float)
    step.add_argument("--cfl", type=float)
    run.add_argument("--matrix", choices=[k.value for k in MatrixKind])
    run.add_argument("--out", default=None, help="output directory (default runs/<name>)")
    run.add_argument("--seed-sweep", action="store_true",
                     help="check the spectrum of every cell of every snapshot (spectral_check.csv)")

    sweep = sub.add_parser("spectral-sweep", help="random-state hyperbolicity check and maps")
    sweep.add_argument("--material", choices=sorted(MATERIALS) + ["all"], default="all")
    sweep.add_argument("--orders", type=_orders, default=list(range(1, 7)))
    sweep.add_argument("--states", type=int, default=10_000, help="states per material")
    sweep.add_argument("--matrix", choices=[k.value for k in MatrixKind], default="regularized")
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--out", default="spectral_sweep.csv", help="counterexample CSV")
    sweep.add_argument("--map", default=None,
                       help="also write imag-ratio maps over (alpha_1, alpha_2) to this CSV")
    sweep.add_argument("--map-points", type=int, default=41)

    cmp = sub.add_parser("compare", help="error norms of a run snapshot against a reference CSV")
    cmp.add_argument("run_dir")
    cmp.add_argument("reference")
    cmp.add_argument("--field", default=None, help="snapshot column to compare (e.g. h, h_b)")
    cmp.add_argument("--time", type=float, default=None, help="snapshot time (default: last)")
    return parser


def _scenario(args):
    path = Path(args.scenario)
    if path.suffix == ".json" or path.is_file():
        if not path.is_file():
            raise ConfigError(f"{path}: no such file")
        s = scenarios.load_config(path)
        if args.material and args.material != s.material:
            raise ConfigError("--material only applies to builtin scenarios")
    else:
        s = scenarios.builtin(args.scenario, args.material)
    changes = {}
    if args.model:
        changes["model"] = args.model
    if args.order is not None:
        if args.order < 0:
            raise ConfigError("--order must be >= 0")
        changes["order"] = args.order
    if args.nx is not None:
        if args.nx < 1:
            raise ConfigError("--nx must be positive")
        changes["n_cells"] = args.nx
    if args.t_end is not None:
        if not args.t_end > 0:
            raise ConfigError("--t-end must be positive")
        changes["end_time"] = args.t_end
        for key in ("snapshot_times", "profile_times"):
            times = getattr(s, key)
            if times is not None:
                changes[key] = tuple(t for t in times if t <= args.t_end)
    solver = dict(s.solver)
    if args.dt is not None:
        solver.pop("cfl", None)
        solver["dt"] = args.dt
    if args.cfl is not None:
        solver.pop("dt", None)
        solver["cfl"] = args.cfl
    if changes.get("n_cells") and args.dt is None and args.cfl is None:
        solver.pop("dt", None)  # a pinned step belongs to the old mesh
    if args.matrix:
        solver["matrix"] = args.matrix
    changes["solver"] = solver
    if args.seed_sweep:
        changes["spectral_check"] = True
    # revalidate through the config path so overrides get the same checks
    return scenarios.scenario_from_dict(scenarios.scenario_to_config(dataclasses.replace(s, **changes)))


def cmd_run(args):
    s = _scenario(args)
    out = Path(args.out) if args.out else Path("runs") / s.name
    result = scenarios.run(s, out)
    m = result.manifest
    print(f"{s.name}: {m['status']} after {m['stats']['steps']} steps -> {out}")
    rep = m["report"]
    if "front_position" in rep:
        print(f"  front x = {rep['front_position']:.4f}, min h_b = {rep['min_h_b']:.5f} "
              f"at x = {rep['x_min_h_b']:.4f}")
    if "speed_probe" in rep:
        vals = ", ".join(f"{v:.4f}" for v in rep["speed_probe"]["eigenvalues"])
        print(f"  eigenvalues at x = {rep['speed_probe']['x']:.3f}: {vals}")
    if not result.ok:
        print(f"  abort: {m['abort']['message']}", file=sys.stderr)
        return EXIT_ABORT
    return EXIT_OK


def cmd_sweep(args):
    if args.states < 1 or any(n < 0 for n in args.orders):
        raise ConfigError("--states must be positive and orders nonnegative")
    names = sorted(MATERIALS) if args.material == "all" else [args.material]
    params = {n: MATERIALS[n] for n in names}
    report = spectral.hyperbolicity_sweep(params, args.states, args.orders, args.matrix, args.seed)
    report.write_csv(args.out)
    print(f"{report.kind}: {report.n_checked} states, max imag ratio {report.max_ratio:.3e}, "
          f"{len(report.counterexamples)} complex spectra -> {args.out}")
    if args.map:
        with open(args.map, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["material", "order", "alpha_1", "alpha_2", "imag_ratio"])
            for name in names:
                for order in args.orders:
                    if order < 1:
                        continue
                    system = MomentSystem(order, MATERIALS[name])
                    a1, a2, r = spectral.hyperbolicity_map(system, args.matrix, n=args.map_points)
                    for i, j in np.ndindex(r.shape):
                        w.writerow([name, order, format(a1[i], ".12g"), format(a2[j], ".12g"),
                                    format(r[i, j], ".12g")])
        print(f"maps -> {args.map}")
    return EXIT_OK


def cmd_compare(args):
    table = scenarios.compare(args.run_dir, args.reference, args.field, args.time)
    print(json.dumps(table, indent=2))
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    handler = {"run": cmd_run, "spectral-sweep": cmd_sweep, "compare": cmd_compare}[args.command]
    try:
        return handler(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"swemed: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

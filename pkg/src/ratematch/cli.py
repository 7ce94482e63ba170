"""Command-line front end: Monte Carlo runs, sweeps, convergence traces."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import geometry, harness
from .baselines import SchemeId
from .config import SystemConfig, load_config, load_users
from .quadforms import DemandProfile, QuadFormSet
from .solver import SmoothingParams, solve

SCHEME_CHOICES = [s.value for s in SchemeId]


def _add_common(p):
    p.add_argument("--config", type=Path, default=None,
                   help="YAML system config (defaults are the reference setup)")
    p.add_argument("--scheme", nargs="+", choices=SCHEME_CHOICES,
                   default=SCHEME_CHOICES)
    p.add_argument("--csit", choices=["statistical", "perfect"],
                   default="statistical")
    p.add_argument("--realizations", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--users", type=int, default=8)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", type=Path, default=Path("."),
                   help="output directory for results.csv / summary.json")
    p.add_argument("--trace", action="store_true",
                   help="also write a trace.csv for the first realization")


def _plan(args) -> harness.ExperimentPlan:
    config = load_config(args.config) if args.config else SystemConfig()
    return harness.ExperimentPlan(
        schemes=[SchemeId(s) for s in args.scheme],
        csit=args.csit, realizations=args.realizations,
        base_seed=args.seed, config=config, n_users=args.users,
        n_jobs=args.jobs)


def cmd_run(args):
    plan = _plan(args)
    records, summary = harness.run_experiment(plan)
    args.out.mkdir(parents=True, exist_ok=True)
    harness.write_csv(records, args.out / "results.csv")
    harness.write_summary(summary, args.out / "summary.json")
    if args.trace:
        _write_trace(plan, 0, args.out)
    for scheme, stats in summary.items():
        print(f"{scheme}: amae={stats['amae']:.4f} p95={stats['p95']:.4f} "
              f"failed={stats['failed']}")
    return 0


def cmd_sweep(args):
    plan = _plan(args)
    if args.axis == "mc-demand":
        values = args.values or list(np.arange(0.5, 2.5 + 1e-9, 0.25))
        result = harness.sweep_mc_demand(plan, values)
    else:
        values = args.values or [0.0, 6.0, 12.0, 18.0]
        result = harness.sweep_rician_k(plan, values)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "sweep.json"
    path.write_text(json.dumps(
        {"axis": args.axis, "csit": args.csit, "amae": result},
        indent=2, sort_keys=True) + "\n")
    for v, per_scheme in result.items():
        line = " ".join(f"{s}={a:.4f}" for s, a in sorted(per_scheme.items()))
        print(f"{args.axis}={v:g}: {line}")
    return 0


def _write_trace(plan, index, out: Path):
    _, stats, gains = harness._realization_channel(plan, index)
    q = QuadFormSet.from_stats(stats, plan.config)
    if plan.csit == "perfect":
        q = q.with_gains(np.abs(gains) ** 2)
    report = solve(q, plan.demands, params=SmoothingParams(),
                   collect_trace=True)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["iter,residual_f,residual_v,objective,eigenvalue"]
    for it, rf, rv, obj, lam in report.trace:
        lines.append(f"{it},{rf:.12g},{rv:.12g},{obj:.12g},{lam:.12g}")
    (out / "trace.csv").write_text("\n".join(lines) + "\n")
    return report


def cmd_convergence(args):
    report = _write_trace(_plan(args), args.index, args.out)
    print(f"converged={report.converged} iters={report.iterations} "
          f"objective={report.final_objective:.6g} "
          f"kkt_residual={report.kkt_residual:.3g}")
    return 0


def cmd_validate(args):
    config = load_config(args.config) if args.config else SystemConfig()
    users = load_users(args.config) if args.config else None
    print(f"n_t={config.n_t} ({config.nt_x}x{config.nt_y}) "
          f"altitude={config.altitude:g} m radius={config.coverage_radius:g} m")
    print(f"carrier={config.carrier_freq:g} Hz bandwidth={config.bandwidth:g} Hz "
          f"power={config.tx_power:g} W rician_k={config.rician_k:g}")
    if users:
        print(f"{len(users)} fixed user positions")
    rng = np.random.default_rng(0)
    geoms = users or geometry.place_users(config, 3, rng)
    stats = geometry.channel_stats(geoms, config)
    print("link-budget gammas:",
          " ".join(f"{s.gamma:.4g}" for s in stats))
    print("config ok")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ratematch",
        description="Rate-matching precoder design for joint unicast+"
                    "multicast transmission")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="Monte Carlo evaluation")
    _add_common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="AMAE across a demand or fading axis")
    _add_common(p)
    p.add_argument("--axis", choices=["mc-demand", "rician-k"],
                   default="mc-demand")
    p.add_argument("--values", type=float, nargs="+", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("convergence", help="per-iteration residual trace")
    _add_common(p)
    p.add_argument("--index", type=int, default=0,
                   help="realization index within the seeded stream")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("validate", help="check a config file and print "
                                        "derived quantities")
    p.add_argument("--config", type=Path, default=None)
    p.set_defaults(func=cmd_validate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

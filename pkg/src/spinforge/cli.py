"""Command line entry point: ``spinforge {synth,verify,sweep,scaling}``."""

import argparse
import sys

import numpy as np

from . import formats
from .dynamics import sample_evolution
from .pipeline import synthesize, verify_schedule
from .sensitivity import (default_eps_max, fidelity_curve, make_grid, scaling_analysis,
                          tolerance_threshold)
from .states import custom_profile_from_file, gaussian_state_profile, w_state_profile
from .synthesis import coupling_bounds_check

VERIFY_TOL = 1e-9


class UsageError(Exception):
    pass


def _add_state_flags(p, required=True):
    p.add_argument("--state", choices=("w", "gaussian", "file"), required=required)
    p.add_argument("--n", type=int, help="number of virtual chains N (2N sites)")
    p.add_argument("--sigma", type=float, help="Gaussian width (gaussian only)")
    p.add_argument("--profile", help="profile CSV/JSON (file only)")


def _profile_for(state, n, sigma, path):
    if state == "w":
        if n is None:
            raise UsageError("--n is required for --state w")
        return w_state_profile(n)
    if state == "gaussian":
        if n is None or sigma is None:
            raise UsageError("--n and --sigma are required for --state gaussian")
        return gaussian_state_profile(n, sigma)
    if state == "file":
        if path is None:
            raise UsageError("--profile is required for --state file")
        return custom_profile_from_file(path)
    raise UsageError(f"unknown state {state!r}")


def _family(args):
    if args.state == "file":
        raise UsageError("scaling needs a family over N; use --state w or gaussian")
    return lambda n: _profile_for(args.state, n, args.sigma, None)


def _emit(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        formats.atomic_write(path, text)


def cmd_synth(args):
    P = _profile_for(args.state, args.n, args.sigma, args.profile)
    schedule = synthesize(P, args.j1)
    bounds = coupling_bounds_check(schedule)
    predicted = verify_schedule(schedule)["probabilities"]

    formats.write_schedule(args.out, schedule)
    if args.emit:
        formats.atomic_write(args.emit, formats.schedule_table_csv(schedule))

    print(f"N = {schedule.n}, J1 = {schedule.j1!r}, total time = {schedule.total_time!r}")
    print("k,J_k,t_k")
    for k, (J, t) in enumerate(zip(schedule.couplings.tolist(), schedule.intervals.tolist()), start=1):
        print(f"{k},{J!r},{t!r}")
    verdict = "pass" if bounds["pass"] else "FAIL"
    print(f"coupling bounds: {verdict} (J_k/J1 in [{bounds['ratios'].min():.6f}, "
          f"{bounds['ratios'].max():.6f}])")
    print("predicted probabilities: " + ",".join(f"{p:.12g}" for p in predicted))
    return 0 if bounds["pass"] else 1


def cmd_verify(args):
    schedule = formats.read_schedule(args.schedule)
    target = None
    if args.target:
        P = _profile_for(args.target, schedule.n, args.sigma, args.profile)
        if P.size != 2 * schedule.n:
            raise UsageError(f"target has {P.size} sites, schedule has {2 * schedule.n}")
        target = np.sqrt(P) + 0j
    report = verify_schedule(schedule, target)
    if args.emit:
        formats.atomic_write(args.emit, formats.probability_table_csv(report["probabilities"],
                                                                      report["target_probabilities"]))
    if args.trace:
        times, probs = sample_evolution(schedule.couplings, schedule.intervals, args.samples)
        formats.atomic_write(args.trace, formats.trace_csv(times, probs))
    ok = report["engine_deviation"] <= VERIFY_TOL and report["fidelity"] >= 1 - VERIFY_TOL
    print(f"engine deviation: {report['engine_deviation']:.3e}")
    print(f"fidelity to target: {float(report['fidelity'])!r} (infidelity {1 - report['fidelity']:.3e})")
    print("verdict: " + ("pass" if ok else "FAIL"))
    return 0 if ok else 1


def cmd_sweep(args):
    P = _profile_for(args.state, args.n, args.sigma, args.profile)
    n = P.size // 2
    eps_max = args.eps_max if args.eps_max is not None else default_eps_max(n)
    curve = fidelity_curve(P, args.j1, make_grid(eps_max, args.steps), label=args.state)
    threshold = tolerance_threshold(curve, args.fidelity)
    _emit(args.out, formats.curve_csv(curve, threshold, args.fidelity))
    if args.out not in (None, "-"):
        flag = " (unbounded on this grid)" if threshold.unbounded else ""
        print(f"threshold J1*eps at F*={args.fidelity}: {float(threshold.eps_scaled)!r}{flag}")
    return 0


def cmd_scaling(args):
    try:
        n_list = [int(x) for x in args.n.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--n must be a comma-separated list of integers, got {args.n!r}") from None
    report = scaling_analysis(_family(args), n_list, args.j1, args.fidelity, steps=args.steps)
    _emit(args.out, formats.scaling_csv(report))
    if args.out not in (None, "-"):
        print(f"max/min of N*eps*: {float(report.spread)!r}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="spinforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize couplings and pulse times")
    _add_state_flags(p)
    p.add_argument("--j1", type=float, default=1.0)
    p.add_argument("--out", required=True, help="schedule JSON path")
    p.add_argument("--emit", help="optional per-chain CSV (k, J_k, t_k, tau_k)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="check a schedule with both engines")
    p.add_argument("--schedule", required=True)
    p.add_argument("--target", choices=("w", "gaussian", "file"))
    p.add_argument("--sigma", type=float)
    p.add_argument("--profile")
    p.add_argument("--emit", help="per-site probability CSV")
    p.add_argument("--trace", help="probability trace CSV along the protocol")
    p.add_argument("--samples", type=int, default=20, help="trace samples per interval")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="fidelity against accumulated timing error")
    _add_state_flags(p)
    p.add_argument("--j1", type=float, default=1.0)
    p.add_argument("--eps-max", type=float, help="largest J1*eps (default 0.4/N)")
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--fidelity", type=float, default=0.99)
    p.add_argument("--out", help="curve CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("scaling", help="tolerance eps* versus chain length")
    p.add_argument("--state", choices=("w", "gaussian"), required=True)
    p.add_argument("--n", required=True, help="comma-separated chain lengths")
    p.add_argument("--sigma", type=float)
    p.add_argument("--j1", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--fidelity", type=float, default=0.99)
    p.add_argument("--out", help="scaling CSV path (default stdout)")
    p.set_defaults(func=cmd_scaling)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ValueError, OSError) as exc:
        print(f"spinforge {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end.

Subcommands: gen-trace, prune, run, oracle, bounds, replay, witness.
All emitted numbers carry 12 significant digits and every output is a
pure function of the flags, so reruns are byte-identical. Exit codes:
0 success, 1 validation error, 2 infeasibility.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .accuracy import load_model, save_model
from .analysis import bounds_report
from .engine import (
    Trace,
    nonconvexity_witness,
    offline_optimal,
    read_trace_csv,
    run_policy,
    write_run_csv,
    write_trace_csv,
)
from .errors import CapExceededError, InfeasibleError
from .policies import KNOWLEDGE_DISTILLATION, POLICIES, compute_weights
from .profiles import load_profiles, prune_dominated, read_menus, save_profiles
from .scenario import ReplaySpec, TraceSpec, build_replay, generate_trace, load_replay_spec

_SIG = ".12g"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for infeasibility here
    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return format(x, _SIG)


def _sig(x: float) -> float:
    return float(format(x, _SIG))


def _rounded(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return _sig(obj)
    if isinstance(obj, dict):
        return {key: _rounded(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(value) for value in obj]
    return obj


def _write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _write_json(path: Path, payload) -> None:
    _write_text(path, json.dumps(_rounded(payload), indent=2, sort_keys=True) + "\n")


def _write_schedule_csv(path: Path, trace, model, profiles) -> None:
    lines = ["t,v,w,lambda"]
    for t in range(1, trace.horizon + 1):
        weights = compute_weights(t, trace.horizon, model, trace.d_min, trace.d_max, profiles.min_profit)
        lines.append(f"{t},{_fmt(weights.v)},{_fmt(weights.w)},{_fmt(weights.lam)}")
    _write_text(path, "\n".join(lines) + "\n")


def _parse_policies(text: str) -> list[str]:
    names = [name.strip() for name in text.split(",") if name.strip()]
    if not names:
        raise ValueError("empty policy list")
    for name in names:
        if name not in POLICIES:
            raise ValueError(f"unknown policy {name!r}; known: {list(POLICIES)}")
    return names


def _execute_run(out_dir: Path, profiles, model, trace, policies, oracle_cap: int, inputs: dict) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    summary: dict = {"inputs": inputs, "policies": {}}
    totals: dict[str, float] = {}
    for name in policies:
        result = run_policy(name, trace, profiles, model)
        csv_name = f"{name}.csv"
        write_run_csv(out_dir / csv_name, result, trace)
        entry: dict = {"total": result.total, "csv": csv_name}
        if name == KNOWLEDGE_DISTILLATION:
            entry["degraded_slot_count"] = len(result.meta.get("degraded_slots", ()))
        summary["policies"][name] = entry
        totals[name] = result.total

    if oracle_cap > 0 and profiles.m**trace.horizon <= oracle_cap:
        oracle = offline_optimal(trace, profiles, model, cap=oracle_cap)
        write_run_csv(out_dir / "oracle.csv", oracle, trace)
        summary["oracle"] = {
            "total": oracle.total,
            "csv": "oracle.csv",
            "enumerated_sequences": oracle.meta["enumerated_sequences"],
        }
        # ratios of the emitted (rounded) totals, so the report is self-consistent
        summary["ratios_vs_oracle"] = {
            name: _sig(total) / _sig(oracle.total) for name, total in totals.items()
        }
    else:
        reason = (
            "oracle disabled (cap 0)"
            if oracle_cap <= 0
            else f"{profiles.m}^{trace.horizon} retraining sequences exceed the cap {oracle_cap}"
        )
        summary["oracle"] = {"skipped": reason}

    _write_schedule_csv(out_dir / "schedule.csv", trace, model, profiles)
    summary["schedule_csv"] = "schedule.csv"
    try:
        summary["bounds"] = bounds_report(model, profiles, trace.d_min, trace.d_max, trace.horizon)
    except ValueError as exc:
        summary["bounds"] = {"skipped": str(exc)}
    _write_json(out_dir / "summary.json", summary)
    return summary


def _trace_spec_from_args(args) -> TraceSpec:
    if args.T is None:
        raise ValueError("need --T to generate a trace")
    c_lo = args.c
    if args.law == "constant" and c_lo is None:
        c_lo = args.d  # unit per-sample budget placeholder
    return TraceSpec(
        horizon=args.T,
        d_law=args.d_law,
        d_lo=args.d,
        d_hi=args.d_hi,
        c_law=args.law,
        c_lo=c_lo,
        c_hi=args.c_hi,
        seed=args.seed,
    )


def _add_trace_law_flags(parser) -> None:
    parser.add_argument("--T", type=int, default=None, help="number of slots")
    parser.add_argument("--d-law", choices=("constant", "uniform"), default="constant",
                        help="data volume law (default constant)")
    parser.add_argument("--d", type=float, default=1000.0, help="data volume, or its lower bound under the uniform law")
    parser.add_argument("--d-hi", type=float, default=None, help="upper volume bound for the uniform law")
    parser.add_argument("--law", choices=("constant", "uniform", "sufficient", "scarce"),
                        default="sufficient", help="capacity law (default sufficient)")
    parser.add_argument("--c", type=float, default=None,
                        help="capacity, or its lower bound under the uniform law (constant law default: the --d value)")
    parser.add_argument("--c-hi", type=float, default=None, help="upper capacity bound for the uniform law")
    parser.add_argument("--seed", type=int, default=0, help="trace seed (default 0)")


def cmd_gen_trace(args) -> int:
    spec = _trace_spec_from_args(args)
    profiles = load_profiles(args.profiles) if args.profiles else None
    if profiles is None and spec.c_law in ("sufficient", "scarce"):
        raise ValueError(f"capacity law {spec.c_law!r} needs --profiles")
    trace = generate_trace(spec, profiles)
    write_trace_csv(args.out, trace)
    print(f"wrote {args.out} ({trace.horizon} slots)")
    return 0


def cmd_prune(args) -> int:
    retrain, infer = read_menus(args.profiles)
    profiles = prune_dominated(retrain, infer, auto_insert_zero=not args.no_auto_zero)
    save_profiles(args.out, profiles)
    inserted = 0 if any(e.gain == 0.0 and e.cost == 0.0 for e in retrain) else 1
    removed = len(retrain) + inserted + len(infer) - (profiles.m + profiles.n)
    print(f"wrote {args.out} ({profiles.m} retrain, {profiles.n} infer; {removed} dominated entries removed)")
    return 0


def _replay_inputs(args, corruption: str):
    overrides = {"horizon": args.T, "seed": args.seed}
    if getattr(args, "kappa", None) is not None:
        overrides["train_cost_multiplier"] = args.kappa
    if getattr(args, "f_at_max", None) is not None:
        overrides["f_at_max"] = args.f_at_max
    spec = ReplaySpec(corruption=corruption, **{k: v for k, v in overrides.items() if v is not None})
    profiles, model, trace_spec = build_replay(spec)
    trace = generate_trace(trace_spec, profiles)
    return spec, profiles, model, trace


def _write_replay_artifacts(out_dir: Path, profiles, model, trace) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    save_profiles(out_dir / "profiles.json", profiles)
    save_model(out_dir / "model.json", model)
    write_trace_csv(out_dir / "trace.csv", trace)


def cmd_run(args) -> int:
    policies = _parse_policies(args.policies)
    out_dir = Path(args.out)
    if args.replay is not None:
        spec, profiles, model, trace = _replay_inputs(args, args.replay)
        _write_replay_artifacts(out_dir, profiles, model, trace)
        inputs = {"replay": dataclasses.asdict(spec), "policies": policies, "oracle_cap": args.oracle_cap}
    else:
        if not args.profiles or not args.model:
            raise ValueError("need --profiles and --model (or --replay)")
        profiles = load_profiles(args.profiles)
        model = load_model(args.model)
        if args.trace is not None:
            trace = read_trace_csv(args.trace, d_min=args.d_min, d_max=args.d_max)
            trace_input = {"trace": args.trace}
        else:
            spec = _trace_spec_from_args(args)
            trace = generate_trace(spec, profiles)
            out_dir.mkdir(parents=True, exist_ok=True)
            write_trace_csv(out_dir / "trace.csv", trace)
            trace_input = {"trace_spec": dataclasses.asdict(spec)}
        inputs = {
            "profiles": str(args.profiles),
            "model": str(args.model),
            "policies": policies,
            "oracle_cap": args.oracle_cap,
            **trace_input,
        }
    summary = _execute_run(out_dir, profiles, model, trace, policies, args.oracle_cap, inputs)
    for name in policies:
        print(f"{name}: {_fmt(summary['policies'][name]['total'])}")
    oracle = summary["oracle"]
    if "total" in oracle:
        print(f"oracle: {_fmt(oracle['total'])}")
    else:
        print(f"oracle skipped: {oracle['skipped']}")
    return 0


def cmd_oracle(args) -> int:
    profiles = load_profiles(args.profiles)
    model = load_model(args.model)
    trace = read_trace_csv(args.trace, d_min=args.d_min, d_max=args.d_max)
    result = offline_optimal(trace, profiles, model, cap=args.cap)
    if args.out:
        write_run_csv(args.out, result, trace)
    print(f"oracle: {_fmt(result.total)}")
    return 0


def cmd_bounds(args) -> int:
    profiles = load_profiles(args.profiles)
    model = load_model(args.model)
    report = bounds_report(model, profiles, args.d_min, args.d_max, args.T)
    if report["crossover_horizon"] is None:
        report["crossover_horizon"] = "undefined"
    text = json.dumps(_rounded(report), indent=2, sort_keys=True)
    if args.out:
        _write_text(Path(args.out), text + "\n")
    print(text)
    return 0


def cmd_replay(args) -> int:
    if args.spec is not None:
        spec = load_replay_spec(args.spec)
        if args.T is not None:
            spec = dataclasses.replace(spec, horizon=args.T)
        if args.seed is not None:
            spec = dataclasses.replace(spec, seed=args.seed)
        profiles, model, trace_spec = build_replay(spec)
        trace = generate_trace(trace_spec, profiles)
    else:
        if args.corruption is None:
            raise ValueError("need a corruption name or --spec")
        spec, profiles, model, trace = _replay_inputs(args, args.corruption)
    policies = _parse_policies(args.policies)
    out_dir = Path(args.out)
    _write_replay_artifacts(out_dir, profiles, model, trace)
    inputs = {"replay": dataclasses.asdict(spec), "policies": policies, "oracle_cap": args.oracle_cap}
    summary = _execute_run(out_dir, profiles, model, trace, policies, args.oracle_cap, inputs)
    for name in policies:
        print(f"{name}: {_fmt(summary['policies'][name]['total'])}")
    oracle = summary["oracle"]
    if "total" in oracle:
        print(f"oracle: {_fmt(oracle['total'])}")
    else:
        print(f"oracle skipped: {oracle['skipped']}")
    return 0


def cmd_witness(args) -> int:
    model = load_model(args.model)
    report = nonconvexity_witness(model, args.y_lo, args.y_hi, grid_points=args.grid)
    payload = {
        "positive": None if report.positive is None else dataclasses.asdict(report.positive),
        "negative": None if report.negative is None else dataclasses.asdict(report.negative),
    }
    text = json.dumps(_rounded(payload), indent=2, sort_keys=True)
    if args.out:
        _write_text(Path(args.out), text + "\n")
    print(text)
    if not report.complete:
        print("note: no witness for at least one sign (gap may be identically zero)", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="orric", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-trace", help="draw a trace from a law and write it as CSV")
    _add_trace_law_flags(p)
    p.add_argument("--profiles", default=None, help="profile file, needed for menu-derived capacity laws")
    p.add_argument("--out", required=True, help="output trace CSV")
    p.set_defaults(func=cmd_gen_trace)

    p = sub.add_parser("prune", help="dominance-prune a profile file")
    p.add_argument("--profiles", required=True)
    p.add_argument("--out", required=True, help="output profile JSON")
    p.add_argument("--no-auto-zero", action="store_true",
                   help="fail instead of inserting the free no-op retraining entry")
    p.set_defaults(func=cmd_prune)

    p = sub.add_parser("run", help="run policies over a trace and write per-slot CSVs plus a summary")
    p.add_argument("--profiles", default=None)
    p.add_argument("--model", default=None)
    p.add_argument("--trace", default=None, help="trace CSV (alternative to law flags or --replay)")
    p.add_argument("--d-min", type=float, default=None, help="declared volume lower bound for a loaded trace")
    p.add_argument("--d-max", type=float, default=None, help="declared volume upper bound for a loaded trace")
    _add_trace_law_flags(p)
    p.add_argument("--replay", default=None, metavar="CORRUPTION",
                   help="build the replay scenario instead of loading inputs")
    p.add_argument("--kappa", type=float, default=None, help="replay train cost multiplier")
    p.add_argument("--f-at-max", type=float, default=None, help="replay curve ceiling override")
    p.add_argument("--policies", default=",".join(POLICIES), help="comma-separated policy names")
    p.add_argument("--oracle-cap", type=int, default=10_000_000,
                   help="max retraining sequences to enumerate; 0 disables the oracle")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="exact offline optimum for a trace")
    p.add_argument("--profiles", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--trace", required=True)
    p.add_argument("--d-min", type=float, default=None)
    p.add_argument("--d-max", type=float, default=None)
    p.add_argument("--cap", type=int, default=10_000_000)
    p.add_argument("--out", default=None, help="optional per-slot CSV")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bounds", help="closed-form worst-case ratio report")
    p.add_argument("--profiles", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--d-min", type=float, required=True)
    p.add_argument("--d-max", type=float, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("replay", help="build the replay scenario, run all policies, write a summary")
    p.add_argument("corruption", nargs="?", default=None, help="corruption label from the shipped table")
    p.add_argument("--spec", default=None, help="replay spec JSON (alternative to the label)")
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--f-at-max", type=float, default=None)
    p.add_argument("--policies", default=",".join(POLICIES))
    p.add_argument("--oracle-cap", type=int, default=10_000_000)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("witness", help="search for curvature witnesses of both signs")
    p.add_argument("--model", required=True)
    p.add_argument("--y-lo", type=float, required=True)
    p.add_argument("--y-hi", type=float, required=True)
    p.add_argument("--grid", type=int, default=32)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_witness)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return int(args.func(args) or 0)
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

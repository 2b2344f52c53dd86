"""Command-line entry point: ``gen``, ``run`` and ``sweep``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import simulator as sim
from .baselines import PoolSpec
from .model import DEFAULT_PRECISION, ValidationError
from .tracegen import PRESETS, Constant, FixedSet, LogUniform, TraceFormatError, generate, read_trace, write_trace


class UsageError(Exception):
    pass


def parse_model(text):
    """``fixed:1,100,10000`` | ``const:1`` | ``loguniform:64,65536``."""
    kind, _, args = text.partition(":")
    try:
        nums = [int(x) for x in args.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad model {text!r}") from None
    if kind == "fixed" and nums:
        return FixedSet(tuple(nums))
    if kind == "const" and len(nums) == 1:
        return Constant(nums[0])
    if kind == "loguniform" and len(nums) == 2:
        return LogUniform(*nums)
    raise UsageError(f"bad model {text!r}; use fixed:a,b,..., const:v or loguniform:lo,hi")


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad number list {text!r}") from None


def _load_pool_spec(path):
    if path is None:
        return None
    with open(path, encoding="utf-8") as f:
        cfg = json.load(f)
    return PoolSpec.from_dict(cfg.get("pool_spec", cfg))


def _echo(config):
    print("# config: " + json.dumps(config, sort_keys=True), file=sys.stderr)


def cmd_gen(args):
    spec = PRESETS[args.spec].with_(
        seed=args.seed, key_count=args.keys, request_count=args.requests, phases=args.phases,
        hot_fraction=args.hot_fraction, hot_request_fraction=args.hot_request_fraction,
        cost_model=parse_model(args.cost_model) if args.cost_model else None,
        size_model=parse_model(args.size_model) if args.size_model else None,
    )
    _echo({"subcommand": "gen", "preset": args.spec, "out": str(args.out), **{
        k: (repr(v) if k.endswith("model") else v) for k, v in spec.__dict__.items()}})
    write_trace(generate(spec), args.out)


def _check_policy_flags(policies, args):
    if args.precision is not None and "camp" not in policies:
        raise UsageError("--precision only applies to the camp policy")
    if args.pool_config is not None and not any(p.startswith("pooled-lru") for p in policies):
        raise UsageError("--pool-config only applies to pooled-lru policies")
    for p in policies:
        if p not in sim.POLICY_NAMES:
            raise UsageError(f"unknown policy {p!r}; choose from {', '.join(sim.POLICY_NAMES)}")


def cmd_run(args):
    _check_policy_flags([args.policy], args)
    precision = sim.parse_precision(args.precision) if args.precision is not None else DEFAULT_PRECISION
    pool_spec = _load_pool_spec(args.pool_config)
    trace = read_trace(args.trace)
    cell = sim.Cell(Path(args.trace).stem, args.policy, args.cache_ratio,
                    precision if args.policy == "camp" else None)
    capacity = sim.cache_size_from_ratio(trace, args.cache_ratio, args.ratio_phase)
    _echo({"subcommand": "run", "trace": str(args.trace), "policy": args.policy,
           "precision": sim.format_precision(cell.precision), "cache_ratio": args.cache_ratio,
           "capacity": capacity, "ratio_phase": args.ratio_phase,
           "pool_spec": pool_spec.to_dict() if pool_spec else None,
           "sample_interval": args.sample_interval, "out": args.out, "occupancy_out": args.occupancy_out})
    rep = sim.run_cell(cell, trace, pool_spec, args.sample_interval, args.ratio_phase)
    _write(args.out, lambda f: sim.write_results([(cell, rep)], f))
    if args.occupancy_out:
        with open(args.occupancy_out, "w", encoding="utf-8", newline="") as f:
            f.write(",".join(sim.OCCUPANCY_COLUMNS) + "\n")
            sim.write_occupancy(rep, f)


def cmd_sweep(args):
    policies = [p.strip() for p in args.policies.split(",") if p.strip()]
    _check_policy_flags(policies, args)
    ratios = _floats(args.ratios)
    if not ratios:
        raise UsageError("--ratios must list at least one cache ratio")
    precisions = ([sim.parse_precision(p) for p in args.precision.split(",")]
                  if args.precision is not None else [DEFAULT_PRECISION])
    pool_spec = _load_pool_spec(args.pool_config)
    traces = {}
    for path in args.trace:
        name = Path(path).stem
        if name in traces:
            raise UsageError(f"two traces share the name {name!r}")
        traces[name] = read_trace(path)
    _echo({"subcommand": "sweep", "traces": [str(t) for t in args.trace], "policies": policies,
           "ratios": ratios, "precisions": [sim.format_precision(p) for p in precisions],
           "pool_spec": pool_spec.to_dict() if pool_spec else None, "jobs": args.jobs,
           "ratio_phase": args.ratio_phase, "sample_interval": args.sample_interval, "out": args.out,
           "occupancy_out": args.occupancy_out, "emit_plots": args.emit_plots})
    results = sim.sweep(traces, policies, ratios, precisions, pool_spec, args.jobs,
                        args.sample_interval, args.ratio_phase)
    _write(args.out, lambda f: sim.write_results(results, f))
    if args.occupancy_out:
        with open(args.occupancy_out, "w", encoding="utf-8", newline="") as f:
            f.write("trace,policy,precision,cache_ratio," + ",".join(sim.OCCUPANCY_COLUMNS) + "\n")
            for cell, rep in results:
                sim.write_occupancy(rep, f, cell)
    if args.emit_plots:
        from .plots import emit_plots

        emit_plots(results, args.emit_plots)


def _write(path, fn):
    if path in (None, "-"):
        fn(sys.stdout)
    else:
        with open(path, "w", encoding="utf-8", newline="") as f:
            fn(f)


def build_parser():
    p = argparse.ArgumentParser(prog="campcache", description=__doc__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    g = sub.add_parser("gen", help="generate a synthetic trace CSV")
    g.add_argument("--spec", choices=sorted(PRESETS), default="three-cost")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--keys", type=int, help="keys per phase")
    g.add_argument("--requests", type=int, help="requests per phase")
    g.add_argument("--phases", type=int)
    g.add_argument("--hot-fraction", type=float)
    g.add_argument("--hot-request-fraction", type=float)
    g.add_argument("--cost-model", help="fixed:1,100,10000 | const:1 | loguniform:lo,hi")
    g.add_argument("--size-model", help="const:1024 | loguniform:lo,hi")
    g.set_defaults(func=cmd_gen)

    def common(sp):
        sp.add_argument("--pool-config", help="JSON file with a pool_spec object")
        sp.add_argument("--sample-interval", type=int, default=10_000)
        sp.add_argument("--ratio-phase", type=int, default=None,
                        help="size caches relative to this phase's distinct bytes")
        sp.add_argument("--out", default="-")
        sp.add_argument("--occupancy-out")

    r = sub.add_parser("run", help="replay one trace through one policy")
    r.add_argument("--trace", required=True)
    r.add_argument("--policy", default="camp")
    r.add_argument("--precision", help="integer >= 1 or 'inf' (camp only)")
    r.add_argument("--cache-ratio", type=float, required=True)
    common(r)
    r.set_defaults(func=cmd_run)

    s = sub.add_parser("sweep", help="run a traces x policies x ratios x precisions grid")
    s.add_argument("--trace", required=True, action="append")
    s.add_argument("--policies", default="lru,camp,gds")
    s.add_argument("--ratios", default="0.05,0.1,0.25,0.5,0.75")
    s.add_argument("--precision", help="comma-separated precisions for camp, e.g. 1,2,5,inf")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--emit-plots", metavar="DIR", help="render PNG figures from the results")
    common(s)
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, ValidationError, TraceFormatError, sim.SweepError, OSError) as exc:
        print(f"campcache: error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, UsageError) else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

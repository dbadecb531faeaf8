"""Command line: curve-search, solve, experiment, census, bench.

Exit codes: 0 success, 1 usage or config error, 2 budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import harness, search
from .curve import BudgetError, curve_search
from .kernelgen import ResampleExhausted, build_instance, derive_seed, dump_instance

EXIT_OK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2


def _cmd_curve_search(args) -> int:
    lo, hi = harness.parse_range(args.bits)
    for m in range(lo, hi + 1):
        rng = np.random.default_rng(derive_seed(args.seed, m))
        min_bits = args.min_prime_bits if args.min_prime_bits is not None else m - 2
        try:
            curve, N, p = curve_search(m, rng, min_bits)
        except BudgetError as exc:
            print(f"m={m}: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        print(f"field_degree={m} reduction_poly={curve.F.poly:x} a={curve.a:x} b={curve.b:x} "
              f"group_order={N} subgroup_prime={p}")
    return EXIT_OK


def _load(args) -> harness.AttackConfig:
    cfg = harness.load_config(args.config)
    if getattr(args, "strategy", None):
        cfg = replace(cfg, strategies=tuple(args.strategy.split(",")))
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, master_seed=args.seed)
    return cfg


def _cmd_solve(args) -> int:
    cfg = _load(args)
    ctx, _ = harness.setup_challenge(cfg)
    dump = None
    if args.dump_matrices:
        out_dir = Path(args.dump_matrices)
        out_dir.mkdir(parents=True, exist_ok=True)
        counter = iter(range(1, 10**9))

        def dump(inst):
            (out_dir / f"kernel_{next(counter):04d}.txt").write_text(dump_instance(inst))

    print(f"curve {ctx.curve}  p={ctx.p}  P={ctx.P}  Q={ctx.Q}")
    try:
        res = harness.solve_dlp(ctx, cfg, on_instance=dump)
    except harness.BudgetExhausted as exc:
        print(f"budget exhausted after {len(exc.telemetry)} kernels", file=sys.stderr)
        return EXIT_BUDGET
    f = res.final
    print(f"secret={res.m} kernels={res.kernels_used} deviation={f['deviation']} "
          f"position={f['position']} minors_tested={f['minors_tested']} verified={res.verified}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    cfg = _load(args)

    def progress(r):
        state = r.kernels_used if r.solved else "budget"
        print(f"{r.strategy} m={r.field_bits} attempt {r.attempt}: {state}", file=sys.stderr)

    records = harness.run_experiment(cfg, args.attempts, progress=progress)
    Path(args.out).write_text(harness.records_to_csv(records, include_timing=args.timing))
    for s in cfg.strategies:
        print(f"[{s}] kernels used")
        print(harness.table_by_attempt(records, "kernels_used", s))
    if args.plot:
        harness.plot_comparison(records, args.plot)
    return EXIT_OK if all(r.solved for r in records) else EXIT_BUDGET


def _cmd_census(args) -> int:
    cfg = _load(args)
    sched = search.ApmSchedule(cfg.schedule.principal_size, harness.parse_int_list(args.deviations),
                               harness.parse_range(args.window) if args.window else None)
    inst = harness.census_instance(cfg, args.instance)
    try:
        census = search.zero_minor_census(inst.F, inst.A, sched, budget=args.budget)
    except search.CensusBudgetExceeded as exc:
        Path(args.out).write_text(exc.partial.to_csv())
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    Path(args.out).write_text(census.to_csv())
    for n, s in census.summary().items():
        print(f"deviation {n}: total={s['total']} mean={s['mean']:.2f} std={s['std']:.2f}")
    if census.singular_positions:
        print(f"singular principal blocks at {census.singular_positions}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = harness.AttackConfig(field_degrees=(args.bits,), nprime_multiplier=args.c,
                               master_seed=args.seed)
    t = time.perf_counter()
    ctx, _ = harness.setup_challenge(cfg)
    print(f"curve search      {time.perf_counter() - t:8.3f} s  (p={ctx.p})")
    t = time.perf_counter()
    inst = build_instance(ctx, cfg.nprime(args.bits), args.seed)
    print(f"kernel l={inst.l:<5}    {time.perf_counter() - t:8.3f} s")
    for name in harness.STRATEGIES:
        out = harness.run_strategy(inst.F, inst.A, cfg, name)
        print(f"search {name:<5}      {out.elapsed:8.3f} s  minors_tested={out.minors_tested} "
              f"found={out.found is not None}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zerominor", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve-search", help="find curves with a large prime subgroup")
    p.add_argument("--bits", required=True, help="field degree M or range A..B")
    p.add_argument("--min-prime-bits", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_curve_search)

    p = sub.add_parser("solve", help="run the attack on one challenge")
    p.add_argument("--config", required=True)
    p.add_argument("--strategy", choices=harness.STRATEGIES)
    p.add_argument("--seed", type=int)
    p.add_argument("--dump-matrices", metavar="DIR")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("experiment", help="repeated solves per field size, written as CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--attempts", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--plot", metavar="FIG")
    p.add_argument("--strategy")
    p.add_argument("--seed", type=int)
    p.add_argument("--timing", action="store_true", help="add a wall_time column (breaks replay identity)")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("census", help="count every zero APM per position and deviation")
    p.add_argument("--config", required=True)
    p.add_argument("--deviations", default="2,3")
    p.add_argument("--window", help="1-based principal positions A..B")
    p.add_argument("--out", required=True)
    p.add_argument("--instance", type=int, default=0)
    p.add_argument("--budget", type=int, default=10**11)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=_cmd_census)

    p = sub.add_parser("bench", help="time the pipeline stages once")
    p.add_argument("--bits", type=int, default=16)
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (harness.ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetError, ResampleExhausted) as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())

"""Las Vegas attack loop, secret recovery, ground-truth oracle and experiment tables."""

from __future__ import annotations

import configparser
import csv
import io
import time
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from math import isqrt
from typing import Callable

import numpy as np

from . import linalg, search
from .curve import (BudgetError, Curve, Point, SubgroupCtx, curve_search,
                    enumerate_points, find_prime_subgroup)
from .field import gf2m, sc_inv
from .kernelgen import Instance, build_instance, derive_seed
from .linalg import MinorIndex

EXPERIMENT_SCHEMA = "zerominor-experiment/1"
STRATEGIES = ("all2", "gesc", "apm")


class ConfigError(ValueError):
    pass


class BudgetExhausted(RuntimeError):
    """The kernel budget ran out before a verified secret was found."""

    def __init__(self, message: str, telemetry: list[dict]):
        super().__init__(message)
        self.telemetry = telemetry


# -- configuration ----------------------------------------------------------------

@dataclass(frozen=True)
class AttackConfig:
    field_degrees: tuple[int, ...] = (13,)
    reduction_poly: int | None = None
    a: int | None = None
    b: int | None = None
    group_order: int | None = None
    subgroup_prime: int | None = None
    generator: tuple[int, int] | None = None
    secret_m: int | None = None
    min_prime_bits: int | None = None
    nprime_multiplier: int = 3
    strategies: tuple[str, ...] = ("apm",)
    block_size: int = 2
    schedule: search.ApmSchedule = search.ApmSchedule()
    max_kernels: int = 50
    master_seed: int = 0
    attempts: int = 10

    def __post_init__(self):
        if self.max_kernels < 1 or self.attempts < 1:
            raise ConfigError("max_kernels and attempts must be >= 1")
        if self.nprime_multiplier < 1:
            raise ConfigError("nprime_multiplier must be >= 1")
        bad = [s for s in self.strategies if s not in STRATEGIES]
        if bad or not self.strategies:
            raise ConfigError(f"unknown strategy {bad}; choose from {STRATEGIES}")
        if self.a is not None and len(self.field_degrees) != 1:
            raise ConfigError("an explicit curve fixes a single field degree")
        if (self.a is None) != (self.b is None):
            raise ConfigError("give both a and b, or neither")

    @property
    def strategy(self) -> str:
        return self.strategies[0]

    def nprime(self, m: int) -> int:
        return self.nprime_multiplier * m


def _int(v: str) -> int:
    return int(v, 0)


def _hex(v: str) -> int:
    return int(v, 16)


def parse_range(text: str) -> tuple[int, int]:
    """``"A..B"`` (inclusive) or a single integer."""
    lo, sep, hi = text.partition("..")
    return (int(lo), int(hi)) if sep else (int(lo), int(lo))


def parse_int_list(text: str) -> tuple[int, ...]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = parse_range(part)
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


def parse_config(text: str) -> AttackConfig:
    """Flat ``key = value`` text; ``#`` starts a comment. Hex keys take bare hex digits."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        cp.read_string("[attack]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    raw = dict(cp["attack"])
    kw: dict = {}
    sched: dict = {}
    try:
        for key, val in raw.items():
            if key == "field_degree":
                kw["field_degrees"] = parse_int_list(val)
            elif key in ("reduction_poly", "a", "b"):
                kw[key] = _hex(val)
            elif key in ("group_order", "subgroup_prime", "secret_m", "min_prime_bits",
                         "nprime_multiplier", "block_size", "max_kernels", "master_seed", "attempts"):
                kw[key] = _int(val)
            elif key == "enumerate":
                if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    raise ConfigError(f"enumerate must be a boolean, got {val!r}")
            elif key == "generator":
                x, y = (v.strip() for v in val.split(","))
                kw["generator"] = (_hex(x), _hex(y))
            elif key == "strategy":
                kw["strategies"] = tuple(s.strip() for s in val.split(",") if s.strip())
            elif key == "principal_size":
                sched["principal_size"] = _int(val)
            elif key == "deviations":
                sched["deviations"] = parse_int_list(val)
            elif key == "position_range":
                sched["position_range"] = parse_range(val)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        if sched:
            kw["schedule"] = search.ApmSchedule(**sched)
        return AttackConfig(**kw)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc


def load_config(path) -> AttackConfig:
    with open(path) as fh:
        return parse_config(fh.read())


# -- challenge setup ------------------------------------------------------------

def setup_challenge(cfg: AttackConfig, m: int | None = None) -> tuple[SubgroupCtx, int]:
    """Curve, generator and challenge for field degree m; returns ``(ctx, secret)``.

    Without explicit ``a``/``b`` a curve is searched with a seed derived from
    the master seed, so the same config always yields the same challenge.
    """
    m = cfg.field_degrees[0] if m is None else m
    rng = np.random.default_rng(derive_seed(cfg.master_seed, m))
    if cfg.a is None:
        curve, N, p = curve_search(m, rng, cfg.min_prime_bits, cfg.reduction_poly)
    else:
        curve = Curve(gf2m(m, cfg.reduction_poly), cfg.a, cfg.b)
        N = cfg.group_order if cfg.group_order is not None else enumerate_points(curve)[0]
        p = cfg.subgroup_prime
    if cfg.generator is not None:
        if p is None:
            raise ConfigError("an explicit generator needs subgroup_prime")
        P = Point(*cfg.generator)
        secret = cfg.secret_m if cfg.secret_m is not None else int(rng.integers(2, p))
        return SubgroupCtx(curve, p, P, curve.mul(secret, P)), secret % p
    res = find_prime_subgroup(curve, N, rng, cfg.secret_m, p=p)
    if res is None:
        raise ConfigError(f"curve order {N} has no usable prime factor")
    return res


# -- secret recovery ----------------------------------------------------------------

def maximal_minor_columns(l: int, zm: MinorIndex) -> tuple[int, ...]:
    """Columns of ``[A | J]`` (J the reverse identity) forming the maximal zero minor.

    The zero minor's own columns, plus the J-column of every row outside it;
    row i of J has its one in column ``l + (l - 1 - i)``.
    """
    rows = set(zm.alpha)
    sparse = [l + (l - 1 - i) for i in range(l) if i not in rows]
    return tuple(sorted(list(zm.beta) + sparse))


@dataclass(frozen=True)
class Recovery:
    m: int | None
    reason: str  # "ok", "all_q", "no_p", "sq_zero", "zero_count"
    zeros: int
    support_p: int
    support_q: int


def recover_secret_detailed(inst: Instance, zm: MinorIndex) -> Recovery:
    F, l, p = inst.F, inst.l, inst.ctx.p
    sub = linalg.submatrix(inst.A, zm)
    w_sub = linalg.left_kernel(F, sub)
    if w_sub.shape[0] == 0:
        raise ValueError(f"minor {zm.alpha} x {zm.beta} of A is not zero")
    w = np.zeros((1, l), dtype=np.int64)
    w[0, list(zm.alpha)] = w_sub[0]
    v = linalg.matmul(F, w, inst.K)[0]
    support = np.flatnonzero(v)
    zeros = 2 * l - support.size
    n_p = int(np.count_nonzero(support < l - 1))
    n_q = support.size - n_p
    if zeros != l:
        return Recovery(None, "zero_count", zeros, n_p, n_q)
    if n_p == 0:
        return Recovery(None, "all_q", zeros, n_p, n_q)
    if n_q == 0:
        return Recovery(None, "no_q", zeros, n_p, n_q)
    s_p = sum(inst.multiplier(int(c))[1] for c in support if c < l - 1) % p
    s_q = sum(inst.multiplier(int(c))[1] for c in support if c >= l - 1) % p
    if s_q == 0:
        return Recovery(None, "sq_zero", zeros, n_p, n_q)
    # support points sum to O:  s_p * P - s_q * Q = O  =>  m = s_p / s_q
    return Recovery(s_p * sc_inv(s_q, p) % p, "ok", zeros, n_p, n_q)


def recover_secret(inst: Instance, zm: MinorIndex) -> int | None:
    return recover_secret_detailed(inst, zm).m


# -- attack loop ---------------------------------------------------------------------

@dataclass
class AttackResult:
    m: int | None
    kernels_used: int
    telemetry: list[dict] = field(default_factory=list)
    verified: bool = False

    @property
    def final(self) -> dict:
        return self.telemetry[-1] if self.telemetry else {}


def run_strategy(F, A, cfg: AttackConfig, strategy: str | None = None) -> search.SearchOutcome:
    strategy = strategy or cfg.strategy
    if strategy == "all2":
        return search.all_two_minor_search(F, A)
    if strategy == "gesc":
        return search.gesc_search(F, A, cfg.block_size)
    return search.apm_search(F, A, cfg.schedule)


def solve_dlp(ctx: SubgroupCtx, cfg: AttackConfig, seed: int | None = None,
              strategy: str | None = None,
              on_instance: Callable[[Instance], None] | None = None) -> AttackResult:
    """Fresh kernel, fixed minor set, recover, verify; repeat until solved or out of budget.

    Every failed kernel (no zero minor, unusable support, failed check)
    counts against ``cfg.max_kernels``. Raises :class:`BudgetExhausted`.
    """
    seed = cfg.master_seed if seed is None else seed
    E, F = ctx.curve, ctx.curve.F
    m_field = F.m
    telemetry: list[dict] = []
    for t in range(cfg.max_kernels):
        t0 = time.perf_counter()
        inst = build_instance(ctx, cfg.nprime(m_field), derive_seed(seed, t))
        if on_instance is not None:
            on_instance(inst)
        out = run_strategy(F, inst.A, cfg, strategy)
        rec = {"kernel": t + 1, "seed": inst.rng_seed, "minors_tested": out.minors_tested,
               "found": out.found is not None, "deviation": None, "position": None,
               "outcome": "no_zero_minor"}
        if out.found is not None:
            meta = out.found.meta or {}
            rec["deviation"] = meta.get("deviation", meta.get("size"))
            rec["position"] = meta.get("position")
            r = recover_secret_detailed(inst, out.found)
            rec["outcome"] = r.reason
            if r.m is not None:
                if E.mul(r.m, ctx.P) == ctx.Q:
                    rec["elapsed"] = time.perf_counter() - t0
                    telemetry.append(rec)
                    return AttackResult(r.m, t + 1, telemetry, True)
                rec["outcome"] = "verify_failed"
        rec["elapsed"] = time.perf_counter() - t0
        telemetry.append(rec)
    raise BudgetExhausted(f"no verified solution within {cfg.max_kernels} kernels", telemetry)


def bsgs_oracle(ctx: SubgroupCtx, max_bits: int = 40) -> int:
    """Baby-step giant-step discrete log of Q to base P."""
    E, P, Q, p = ctx.curve, ctx.P, ctx.Q, ctx.p
    if p.bit_length() > max_bits:
        raise BudgetError(f"p has {p.bit_length()} bits, oracle budget is {max_bits}")
    if Q.infinity:
        raise ValueError("Q = O is not a valid challenge")
    n = isqrt(p) + 1
    table = {}
    R = Point(infinity=True)
    for j in range(n):
        table.setdefault(R, j)
        R = E.add(R, P)
    step = E.neg(E.mul(n, P))
    G = Q
    for i in range(n + 1):
        if G in table:
            return (i * n + table[G]) % p
        G = E.add(G, step)
    raise ValueError("Q is not in <P>")


# -- experiments ----------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentRecord:
    strategy: str
    field_bits: int
    attempt: int
    solved: bool
    kernels_used: int
    deviation_at_solve: int | None
    principal_position: int | None
    seed: int
    wall_time: float = field(default=0.0, compare=False)


def run_experiment(cfg: AttackConfig, attempts: int | None = None,
                   progress: Callable[[ExperimentRecord], None] | None = None) -> list[ExperimentRecord]:
    """``attempts`` independent solves per (strategy, field degree).

    Budget failures become unsolved records with ``kernels_used =
    max_kernels`` instead of aborting the batch.
    """
    attempts = cfg.attempts if attempts is None else attempts
    records = []
    for m in cfg.field_degrees:
        ctx, _ = setup_challenge(cfg, m)
        for strategy in cfg.strategies:
            for k in range(attempts):
                seed = derive_seed(cfg.master_seed, m, k)
                t0 = time.perf_counter()
                try:
                    res = solve_dlp(ctx, cfg, seed, strategy)
                    rec = ExperimentRecord(strategy, m, k + 1, True, res.kernels_used,
                                           res.final.get("deviation"), res.final.get("position"),
                                           seed, time.perf_counter() - t0)
                except BudgetExhausted:
                    rec = ExperimentRecord(strategy, m, k + 1, False, cfg.max_kernels, None, None,
                                           seed, time.perf_counter() - t0)
                records.append(rec)
                if progress is not None:
                    progress(rec)
    return records


def mean_one_decimal(values) -> str:
    """Exact mean rendered with one decimal (half-up); integers stay bare as in the tables."""
    mean = Fraction(sum(values), len(values))
    if mean.denominator == 1:
        return str(mean.numerator)
    d = Decimal(mean.numerator) / Decimal(mean.denominator)
    return str(d.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def summarize(records: list[ExperimentRecord]) -> list[dict]:
    """One summary row (average kernel count) per (strategy, field size)."""
    groups: dict[tuple[str, int], list[int]] = {}
    for r in records:
        groups.setdefault((r.strategy, r.field_bits), []).append(r.kernels_used)
    return [{"strategy": s, "field_bits": m, "attempts": len(v), "avg_kernels": mean_one_decimal(v),
             "mean": Fraction(sum(v), len(v))}
            for (s, m), v in groups.items()]


def records_to_csv(records: list[ExperimentRecord], include_timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    buf.write(f"# schema: {EXPERIMENT_SCHEMA}\n")
    header = ["row", "strategy", "field_bits", "attempt", "solved", "kernels_used",
              "deviation_at_solve", "principal_position", "seed"]
    if include_timing:
        header.append("wall_time")
    w.writerow(header)
    for r in records:
        row = ["attempt", r.strategy, r.field_bits, r.attempt, int(r.solved), r.kernels_used,
               "" if r.deviation_at_solve is None else r.deviation_at_solve,
               "" if r.principal_position is None else r.principal_position, r.seed]
        if include_timing:
            row.append(f"{r.wall_time:.3f}")
        w.writerow(row)
    for s in summarize(records):
        row = ["summary", s["strategy"], s["field_bits"], "AVG", "", s["avg_kernels"], "", "", ""]
        if include_timing:
            row.append("")
        w.writerow(row)
    return buf.getvalue()


def table_by_attempt(records: list[ExperimentRecord], column: str, strategy: str | None = None) -> str:
    """Attempts x field sizes grid of one record column, with an AVG row for kernel counts."""
    recs = [r for r in records if strategy is None or r.strategy == strategy]
    bits = sorted({r.field_bits for r in recs})
    n = max((r.attempt for r in recs), default=0)
    cell = {(r.attempt, r.field_bits): getattr(r, column) for r in recs}
    lines = ["attempt " + " ".join(f"{m:>5}" for m in bits)]
    for k in range(1, n + 1):
        vals = [cell.get((k, m)) for m in bits]
        lines.append(f"{k:>7} " + " ".join(f"{'-' if v is None else v:>5}" for v in vals))
    if column == "kernels_used":
        avg = {s["field_bits"]: s["avg_kernels"] for s in summarize(recs)}
        lines.append("    AVG " + " ".join(f"{avg[m]:>5}" for m in bits))
    return "\n".join(lines)


def plot_comparison(records: list[ExperimentRecord], path) -> None:
    """Average kernel count per field size, one line per strategy, log scale."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4))
    summary = summarize(records)
    for strategy in sorted({s["strategy"] for s in summary}):
        rows = sorted((s["field_bits"], float(s["mean"])) for s in summary if s["strategy"] == strategy)
        ax.plot([r[0] for r in rows], [r[1] for r in rows], marker="o", label=strategy.upper())
    ax.set_yscale("log")
    ax.set_xlabel("field size (bits)")
    ax.set_ylabel("average kernel count")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, metadata={"Date": None} if str(path).endswith(".svg") else None)
    plt.close(fig)


def census_instance(cfg: AttackConfig, instance_index: int = 0) -> Instance:
    """The dense part to census: instance ``instance_index`` of the first field degree."""
    m = cfg.field_degrees[0]
    ctx, _ = setup_challenge(cfg, m)
    return build_instance(ctx, cfg.nprime(m), derive_seed(cfg.master_seed, m, 0, instance_index))


def with_strategy(cfg: AttackConfig, strategy: str) -> AttackConfig:
    return replace(cfg, strategies=(strategy,))

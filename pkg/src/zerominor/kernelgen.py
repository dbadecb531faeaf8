"""One randomized attack instance: points -> monomial matrix M -> kernel K -> dense part A."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import linalg
from .curve import Point, SubgroupCtx
from .field import GF2m


class ResampleExhausted(RuntimeError):
    """Point or kernel sampling kept failing (degenerate tiny group?)."""


def derive_seed(*keys: int) -> int:
    """64-bit seed derived from a master seed and an index path."""
    ss = np.random.SeedSequence(entropy=int(keys[0]), spawn_key=tuple(int(k) for k in keys[1:]))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class MonomialBasis:
    degree: int
    monomials: tuple[tuple[int, int, int], ...]

    def __len__(self):
        return len(self.monomials)


def enumerate_monomials(nprime: int) -> MonomialBasis:
    """All x^a y^b z^c with a + b + c = nprime, descending lexicographic in (a, b, c)."""
    if nprime < 1:
        raise ValueError("monomial degree must be >= 1")
    mons = tuple((a, b, nprime - a - b)
                 for a in range(nprime, -1, -1)
                 for b in range(nprime - a, -1, -1))
    assert len(mons) == comb(nprime + 2, 2)
    return MonomialBasis(nprime, mons)


def build_M(F: GF2m, points: list[Point], basis: MonomialBasis) -> np.ndarray:
    """Row i evaluates every monomial at (x_i, y_i, 1)."""
    if not points:
        raise ValueError("no points")
    if any(P.infinity for P in points):
        raise ValueError("the point at infinity has no affine evaluation")
    n = basis.degree
    xs = np.array([P.x for P in points], dtype=np.int64)
    ys = np.array([P.y for P in points], dtype=np.int64)
    xp = np.ones((len(points), n + 1), dtype=np.int64)
    yp = np.ones((len(points), n + 1), dtype=np.int64)
    for e in range(1, n + 1):
        xp[:, e] = F.vmul(xp[:, e - 1], xs)
        yp[:, e] = F.vmul(yp[:, e - 1], ys)
    ea = np.array([t[0] for t in basis.monomials])
    eb = np.array([t[1] for t in basis.monomials])
    return F.vmul(xp[:, ea], yp[:, eb])


def points_from_multipliers(ctx: SubgroupCtx, p_mults, q_mults) -> list[Point]:
    """``n_i P`` for the P-block, then ``-n_j Q`` for the Q-block."""
    E = ctx.curve
    return ([E.mul(n, ctx.P) for n in p_mults]
            + [E.mul((-n) % ctx.p, ctx.Q) for n in q_mults])


def sample_points(ctx: SubgroupCtx, l: int, rng: np.random.Generator, max_retries: int = 1000):
    """Draw l-1 distinct P-multipliers and l+1 distinct Q-multipliers in [1, p-1].

    Any draw that repeats a point (e.g. ``n_i P = -n_j Q``) is redrawn.
    Returns ``(p_mults, q_mults, points)`` with points in column order.
    """
    p = ctx.p
    if 2 * l >= p:
        raise ValueError(f"2l = {2 * l} leaves no room for distinct multipliers mod {p}")
    E = ctx.curve
    seen: set[Point] = set()
    retries = 0

    def draw(count, base, sign):
        nonlocal retries
        mults, pts, used = [], [], set()
        while len(mults) < count:
            n = int(rng.integers(1, p))
            if n in used:
                continue
            pt = E.mul((sign * n) % p, base)
            if pt.infinity or pt in seen:
                retries += 1
                if retries > max_retries:
                    raise ResampleExhausted(f"{retries} point collisions while sampling")
                continue
            used.add(n)
            seen.add(pt)
            mults.append(n)
            pts.append(pt)
        return mults, pts

    p_mults, p_pts = draw(l - 1, ctx.P, 1)
    q_mults, q_pts = draw(l + 1, ctx.Q, -1)
    return tuple(p_mults), tuple(q_mults), p_pts + q_pts


@dataclass(frozen=True, eq=False)
class Instance:
    ctx: SubgroupCtx
    nprime: int
    d: int
    l: int
    p_mults: tuple[int, ...]
    q_mults: tuple[int, ...]
    points: tuple[Point, ...]
    M: np.ndarray
    K: np.ndarray
    A: np.ndarray
    rng_seed: int

    @property
    def F(self) -> GF2m:
        return self.ctx.curve.F

    def multiplier(self, col: int) -> tuple[str, int]:
        """Block tag ('P' or 'Q') and multiplier behind kernel column ``col``."""
        if col < self.l - 1:
            return "P", self.p_mults[col]
        return "Q", self.q_mults[col - (self.l - 1)]


def build_instance(ctx: SubgroupCtx, nprime: int, rng_seed: int, max_resamples: int = 20) -> Instance:
    """Sample points, build M, take its left kernel and reduce it to ``[A | J]``.

    A kernel whose right block is singular (or whose dimension is off) is
    discarded and the trial resampled from a derived seed; ``rng_seed`` of
    the result is the seed that produced it.
    """
    F = ctx.curve.F
    basis = enumerate_monomials(nprime)
    l = d = 3 * nprime
    seed = rng_seed
    for attempt in range(max_resamples):
        rng = np.random.default_rng(seed)
        p_mults, q_mults, points = sample_points(ctx, l, rng)
        M = build_M(F, points, basis)
        K = linalg.left_kernel(F, M)
        if K.shape[0] == l:
            Kr = linalg.reduce_to_reverse_identity(F, K)
            if Kr is not None:
                return Instance(ctx, nprime, d, l, p_mults, q_mults, tuple(points),
                                M, Kr, Kr[:, :l].copy(), seed)
        seed = derive_seed(rng_seed, attempt + 1)
    raise ResampleExhausted(f"no usable kernel after {max_resamples} resamples")


def dump_instance(inst: Instance) -> str:
    """Header lines (seed, degree, multipliers) followed by M, K and A in hex."""
    out = [f"# seed {inst.rng_seed}",
           f"# nprime {inst.nprime}",
           "# p_mults " + " ".join(map(str, inst.p_mults)),
           "# q_mults " + " ".join(map(str, inst.q_mults))]
    for name in ("M", "K", "A"):
        out.append(f"## {name}")
        out.append(linalg.dump_matrix(getattr(inst, name)).rstrip("\n"))
    return "\n".join(out) + "\n"


def load_instance(text: str) -> dict:
    """Parse :func:`dump_instance` output into a dict of header values and matrices."""
    header: dict = {}
    blocks: dict[str, list[str]] = {}
    current = None
    for line in text.splitlines():
        if line.startswith("## "):
            current = line[3:].strip()
            blocks[current] = []
        elif line.startswith("# "):
            key, _, rest = line[2:].partition(" ")
            vals = [int(v) for v in rest.split()]
            header[key] = vals[0] if key in ("seed", "nprime") else tuple(vals)
        elif current is not None:
            blocks[current].append(line)
    for name, lines in blocks.items():
        header[name] = linalg.load_matrix("\n".join(lines))
    return header

"""Zero-minor search over the dense part A: all 2-minors, GESC, almost principal minors.

Search order is deterministic everywhere: minor sizes ascending, principal
positions ascending, then row sets and column sets lexicographically.
``minors_tested`` counts candidate minors in that order up to and including
the hit (the full candidate set when nothing is found).
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import _scan, linalg
from .field import GF2m
from .linalg import MinorIndex


@dataclass
class SearchOutcome:
    found: MinorIndex | None
    minors_tested: int
    elapsed: float


@dataclass(frozen=True)
class ApmSchedule:
    """Principal block size, deviation counts to try in order, optional window.

    ``position_range`` is an inclusive 1-based window ``(first, last)`` of
    principal start positions.
    """

    principal_size: int = 2
    deviations: tuple[int, ...] = (2, 3)
    position_range: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "deviations", tuple(int(n) for n in self.deviations))
        if self.principal_size < 1:
            raise ValueError("principal_size must be >= 1")
        if not self.deviations or min(self.deviations) < 1:
            raise ValueError("deviation counts must be >= 1")

    def positions(self, l: int) -> range:
        """0-based principal start positions inside ``[0, l - principal_size]``."""
        last = l - self.principal_size
        lo, hi = 0, last
        if self.position_range is not None:
            lo = max(lo, self.position_range[0] - 1)
            hi = min(hi, self.position_range[1] - 1)
        return range(lo, hi + 1)


def _lex_rank(sel: tuple[int, ...], n: int) -> int:
    """Number of k-subsets of range(n) preceding ``sel`` in lexicographic order."""
    k = len(sel)
    rank, prev = 0, -1
    for t, s in enumerate(sel):
        for v in range(prev + 1, s):
            rank += comb(n - 1 - v, k - 1 - t)
        prev = s
    return rank


def find_zero_minor(F: GF2m, S: np.ndarray, n: int):
    """First zero n-minor of S in (row set, column set) lexicographic order.

    Returns ``(rows, cols, tested)``; rows and cols are None when S has no
    zero n-minor, in which case ``tested`` is the full candidate count.
    """
    S = np.ascontiguousarray(S, dtype=np.int64)
    nr, nc = S.shape
    total = comb(nr, n) * comb(nc, n)
    if n > min(nr, nc):
        return None, None, 0
    per_row_set = comb(nc, n)
    if n == 1:
        i, j = _scan.first_zero_entry(S)
        if i < 0:
            return None, None, total
        return (int(i),), (int(j),), int(i) * nc + int(j) + 1
    if n == 2:
        i, j, k, k2, done = _scan.first_zero2(S, F.jit, F.order)
        if i < 0:
            return None, None, total
        rows, cols = (int(i), int(j)), (int(k), int(k2))
    elif n == 3:
        i, j, k, a, b, c, done = _scan.first_zero3(S, F.jit, F.order)
        if i < 0:
            return None, None, total
        rows, cols = (int(i), int(j), int(k)), (int(a), int(b), int(c))
    else:
        idx = np.arange(0, dtype=np.int64)
        ri, ci, done = _scan.first_bordered(S, idx, idx, np.arange(nr), np.arange(nc), n, F.jit)
        if ri[0] < 0:
            return None, None, total
        rows, cols = tuple(int(x) for x in ri), tuple(int(x) for x in ci)
    assert _lex_rank(rows, nr) == done
    return rows, cols, int(done) * per_row_set + _lex_rank(cols, nc) + 1


def count_zero_minors(F: GF2m, S: np.ndarray, n: int) -> int:
    """Exact number of zero n-minors of S."""
    S = np.ascontiguousarray(S, dtype=np.int64)
    nr, nc = S.shape
    if n > min(nr, nc):
        return 0
    if n == 1:
        return int(np.count_nonzero(S == 0))
    if n == 2:
        return int(_scan.count_zero2(S, F.jit, F.order))
    if n == 3:
        return int(_scan.count_zero3(S, F.jit, F.order))
    # group minors by their (min row, min column) pivot and recurse
    total = 0
    empty = np.arange(0, dtype=np.int64)
    for i in range(nr - n + 1):
        for a in range(nc - n + 1):
            if S[i, a] != 0:
                total += count_zero_minors(F, _scan.pivot_schur(S, i, a, F.jit), n - 1)
            else:
                total += int(_scan.count_bordered(
                    S, np.array([i]), np.array([a]),
                    np.arange(i + 1, nr), np.arange(a + 1, nc), n - 1, F.jit))
    return total


def _timed(t0, found, tested):
    return SearchOutcome(found, int(tested), time.perf_counter() - t0)


def all_two_minor_search(F: GF2m, A) -> SearchOutcome:
    """Every entry (row-major), then every 2-minor (row pairs, then column pairs)."""
    t0 = time.perf_counter()
    A = np.ascontiguousarray(A, dtype=np.int64)
    rows, cols, tested = find_zero_minor(F, A, 1)
    if rows is not None:
        return _timed(t0, MinorIndex(rows, cols, {"strategy": "all2", "size": 1}), tested)
    rows, cols, tested2 = find_zero_minor(F, A, 2)
    found = None if rows is None else MinorIndex(rows, cols, {"strategy": "all2", "size": 2})
    return _timed(t0, found, tested + tested2)


def _augment(block: list[int], comp: list[int], sel) -> tuple[int, ...]:
    return tuple(sorted(block + [comp[s] for s in sel]))


def gesc_search(F: GF2m, A, block_size: int) -> SearchOutcome:
    """Zero 2-minors of the Schur complement of the leading block, lifted to A."""
    t0 = time.perf_counter()
    A = np.ascontiguousarray(A, dtype=np.int64)
    l = A.shape[0]
    if not 0 <= block_size < l:
        raise ValueError(f"block size must lie in [0, {l})")
    if block_size == 0:
        out = all_two_minor_search(F, A)
        if out.found is not None:
            out.found = MinorIndex(out.found.alpha, out.found.beta,
                                   {"strategy": "gesc", "block_size": 0, "position": 1,
                                    "deviation": out.found.size})
        out.elapsed = time.perf_counter() - t0
        return out
    block = list(range(block_size))
    meta = {"strategy": "gesc", "block_size": block_size, "position": 1}
    E = MinorIndex(block, block)
    if linalg.minor(F, A, E) == 0:
        return _timed(t0, MinorIndex(block, block, {**meta, "deviation": 0}), 1)
    S = linalg.schur_complement(F, A, E)
    comp = linalg.complement(l, block)
    rows, cols, tested = find_zero_minor(F, S, 2)
    if rows is None:
        return _timed(t0, None, tested + 1)
    found = MinorIndex(_augment(block, comp, rows), _augment(block, comp, cols), {**meta, "deviation": 2})
    return _timed(t0, found, tested + 1)


class _PositionCache:
    """Principal determinant and Schur complement per start position, computed lazily."""

    def __init__(self, F: GF2m, A: np.ndarray, size: int):
        self.F, self.A, self.size = F, A, size
        self.l = A.shape[0]
        self._cache: dict[int, tuple] = {}

    def __call__(self, s: int):
        if s not in self._cache:
            block = list(range(s, s + self.size))
            idx = MinorIndex(block, block)
            singular = linalg.minor(self.F, self.A, idx) == 0
            S = None if singular else linalg.schur_complement(self.F, self.A, idx)
            self._cache[s] = (block, singular, S, linalg.complement(self.l, block))
        return self._cache[s]


def apm_search(F: GF2m, A, sched: ApmSchedule = ApmSchedule()) -> SearchOutcome:
    """Almost principal minors: contiguous principal block plus n row and n column deviations.

    A zero APM with nonsingular block B is exactly a zero n-minor of the
    Schur complement of B, so each position is one Schur complement and one
    n-minor scan. A singular B is returned as soon as it is met.
    """
    t0 = time.perf_counter()
    A = np.ascontiguousarray(A, dtype=np.int64)
    l = A.shape[0]
    positions = sched.positions(l)
    cache = _PositionCache(F, A, sched.principal_size)
    tested = 0
    for n in sched.deviations:
        for s in positions:
            block, singular, S, comp = cache(s)
            tested += 1
            meta = {"strategy": "apm", "position": s + 1, "principal_size": sched.principal_size}
            if singular:
                return _timed(t0, MinorIndex(block, block, {**meta, "deviation": 0}), tested)
            rows, cols, t = find_zero_minor(F, S, n)
            tested += t
            if rows is not None:
                found = MinorIndex(_augment(block, comp, rows), _augment(block, comp, cols),
                                   {**meta, "deviation": n})
                return _timed(t0, found, tested)
    return _timed(t0, None, tested)


# -- census ---------------------------------------------------------------------------

class CensusBudgetExceeded(RuntimeError):
    def __init__(self, message: str, partial: "Census"):
        super().__init__(message)
        self.partial = partial


@dataclass
class Census:
    """Zero APM counts per (1-based principal position, deviation count)."""

    counts: dict[tuple[int, int], int] = field(default_factory=dict)
    singular_positions: list[int] = field(default_factory=list)
    partial: bool = False

    def deviations(self) -> list[int]:
        return sorted({n for _, n in self.counts})

    def positions(self) -> list[int]:
        return sorted({s for s, _ in self.counts})

    def per_deviation(self, n: int) -> np.ndarray:
        return np.array([c for (s, d), c in sorted(self.counts.items()) if d == n], dtype=np.int64)

    def summary(self) -> dict[int, dict[str, float]]:
        """Total, per-position mean and (population) standard deviation per deviation."""
        out = {}
        for n in self.deviations():
            v = self.per_deviation(n)
            out[n] = {"total": int(v.sum()), "mean": float(v.mean()), "std": float(v.std())}
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["position", "deviation", "zero_minor_count"])
        for (s, n), c in sorted(self.counts.items()):
            w.writerow([s, n, c])
        return buf.getvalue()


def zero_minor_census(F: GF2m, A, sched: ApmSchedule, budget: int | None = 10**11) -> Census:
    """Count every zero APM (not just the first) per position and deviation count.

    ``budget`` caps the number of candidate minors covered; when the next
    (position, deviation) cell would exceed it, :class:`CensusBudgetExceeded`
    is raised carrying the cells finished so far.
    """
    A = np.ascontiguousarray(A, dtype=np.int64)
    l = A.shape[0]
    cache = _PositionCache(F, A, sched.principal_size)
    census = Census()
    spent = 0
    for s in sched.positions(l):
        block, singular, S, comp = cache(s)
        if singular:
            census.singular_positions.append(s + 1)
        for n in sched.deviations:
            cell = comb(len(comp), n) ** 2
            if budget is not None and spent + cell > budget:
                census.partial = True
                raise CensusBudgetExceeded(
                    f"census cell (position {s + 1}, deviation {n}) would exceed the budget of {budget}",
                    census)
            spent += cell
            if singular:
                b = np.array(block, dtype=np.int64)
                c = np.array(comp, dtype=np.int64)
                count = int(_scan.count_bordered(A, b, b, c, c, n, F.jit))
            else:
                count = count_zero_minors(F, S, n)
            census.counts[(s + 1, n)] = count
    return census

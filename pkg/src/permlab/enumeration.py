"""Exhaustive counting of permutations by number of pattern occurrences.

The search extends prefixes one position at a time and only counts the
occurrences that end at the new position, so a running total is available at
every node and subtrees can be pooled as soon as the total passes a cap.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from . import _kernels as K
from .errors import BudgetExceeded
from .perm import Permutation, as_permutation

DEFAULT_BUDGET = 10**10


@dataclass(frozen=True)
class Distribution:
    """Histogram of occurrence counts over all permutations of length ``n``.

    ``counts[r]`` is exact for ``r <= r_cap``; permutations with more than
    ``r_cap`` occurrences are pooled in ``overflow``.  Without a cap every
    bucket is exact and ``overflow`` is 0.
    """

    pattern: Permutation
    n: int
    r_cap: int | None
    counts: dict[int, int]
    overflow: int = 0

    def __getitem__(self, r: int) -> int:
        if self.r_cap is not None and r > self.r_cap:
            raise KeyError(f"r={r} lies in the overflow bucket (cap {self.r_cap})")
        return self.counts.get(r, 0)

    @property
    def total(self) -> int:
        return sum(self.counts.values()) + self.overflow

    def capped(self, r_cap: int) -> "Distribution":
        """Re-pool this histogram under a smaller (or equal) cap."""
        if self.r_cap is not None and r_cap > self.r_cap and self.overflow:
            raise ValueError(f"cannot widen cap {self.r_cap} to {r_cap}")
        counts = {r: c for r, c in self.counts.items() if r <= r_cap}
        overflow = self.overflow + sum(c for r, c in self.counts.items() if r > r_cap)
        return Distribution(self.pattern, self.n, r_cap, counts, overflow)


@dataclass(frozen=True)
class RefinedCounts:
    star: int
    intersecting: int

    @property
    def total(self) -> int:
        return self.star + self.intersecting


@dataclass
class _Run:
    hist: np.ndarray
    steps: int
    rows: np.ndarray = field(default_factory=lambda: np.empty((0, 0), dtype=np.int8))
    row_counts: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


def _prefixes(n: int) -> list[np.ndarray]:
    depth = min(2, n)
    return [np.asarray(t, dtype=np.int64) for t in itertools.permutations(range(n), depth)]


def _run(q: Permutation, n: int, cap: int, *, threads: int, budget: int, collect: bool) -> _Run:
    m = len(q)
    lo, hi, above = K.pattern_arrays([v - 1 for v in q])
    fact = np.asarray([math.factorial(i) for i in range(n + 1)], dtype=np.int64)
    tasks = _prefixes(n)
    per_task = max(1, budget // len(tasks))
    hists = np.zeros((len(tasks), cap + 2), dtype=np.int64)
    empty_rows = np.empty((0, max(n, 1)), dtype=np.int8)
    empty_counts = np.empty(0, dtype=np.int64)

    def count_pass(t: int) -> tuple[int, int]:
        return K.dfs_task(n, tasks[t], lo, hi, above, m, cap, per_task, fact, hists[t],
                          empty_rows, empty_counts, 0)

    results = _map(count_pass, range(len(tasks)), threads)
    steps = sum(s for s, _ in results)
    if any(aborted for _, aborted in results):
        raise BudgetExceeded(
            f"enumeration of {q} at n={n} exceeded the node budget of {budget} "
            f"({per_task} steps per prefix task)"
        )
    hist = hists.sum(axis=0)
    run = _Run(hist=hist, steps=steps)
    if collect:
        sizes = hists[:, : cap + 1].sum(axis=1)
        starts = np.concatenate(([0], np.cumsum(sizes)))
        rows = np.zeros((int(starts[-1]), n), dtype=np.int8)
        row_counts = np.zeros(int(starts[-1]), dtype=np.int64)
        scratch = np.zeros((len(tasks), cap + 2), dtype=np.int64)

        def collect_pass(t: int) -> tuple[int, int]:
            return K.dfs_task(n, tasks[t], lo, hi, above, m, cap, per_task, fact, scratch[t],
                              rows, row_counts, int(starts[t]))

        run.steps += sum(s for s, _ in _map(collect_pass, range(len(tasks)), threads))
        run.rows = rows
        run.row_counts = row_counts
    return run


def _map(fn, items, threads: int) -> list:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _check_args(q: Permutation, n: int) -> None:
    if len(q) < 1:
        raise ValueError("pattern must be nonempty")
    if n < 0:
        raise ValueError("n must be nonnegative")


def occurrence_distribution(
    q: Permutation | str,
    n: int,
    r_cap: int | None = None,
    *,
    threads: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> Distribution:
    q = as_permutation(q)
    _check_args(q, n)
    m = len(q)
    if m > n:
        return Distribution(q, n, r_cap, {0: math.factorial(n)}, 0)
    cap = math.comb(n, m) if r_cap is None else r_cap
    hist = _run(q, n, cap, threads=threads, budget=budget, collect=False).hist
    counts = {r: int(c) for r, c in enumerate(hist[: cap + 1]) if c}
    overflow = int(hist[cap + 1]) if r_cap is not None else 0
    return Distribution(q, n, r_cap, counts, overflow)


def count_avoiders(q: Permutation | str, n: int, *, threads: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    """Number of length-``n`` permutations avoiding ``q`` (prefixes containing
    ``q`` are abandoned immediately)."""
    return occurrence_distribution(q, n, 0, threads=threads, budget=budget)[0]


def _collect(q: Permutation, n: int, cap: int, *, threads: int, budget: int) -> tuple[np.ndarray, np.ndarray]:
    if len(q) > n:
        perms = list(itertools.permutations(range(n)))
        rows = np.asarray(perms, dtype=np.int8).reshape(len(perms), n)
        return rows, np.zeros(len(rows), dtype=np.int64)
    run = _run(q, n, cap, threads=threads, budget=budget, collect=True)
    return run.rows, run.row_counts


def members(
    q: Permutation | str, n: int, r: int, *, threads: int = 1, budget: int = DEFAULT_BUDGET
) -> Iterator[Permutation]:
    """Yield the permutations of length ``n`` with exactly ``r`` occurrences of
    ``q``, in lexicographic order."""
    q = as_permutation(q)
    _check_args(q, n)
    rows, counts = _collect(q, n, r, threads=threads, budget=budget)
    for row in rows[counts == r]:
        yield Permutation._trusted(int(v) + 1 for v in row)


def refined_distribution(
    q: Permutation | str, n: int, r_max: int, *, threads: int = 1, budget: int = DEFAULT_BUDGET
) -> dict[int, RefinedCounts]:
    """Split each ``S_{n,r}(q)``, ``r <= r_max``, into pairwise-disjoint
    ("star") and intersecting members."""
    q = as_permutation(q)
    _check_args(q, n)
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    rows, counts = _collect(q, n, r_max, threads=threads, budget=budget)
    lo, hi, above = K.pattern_arrays([v - 1 for v in q])
    flags = K.star_flags(rows.astype(np.int64), lo, hi, above, len(q)) if len(rows) else np.zeros(0, bool)
    out = {}
    for r in range(r_max + 1):
        sel = counts == r
        total = int(sel.sum())
        star = int(flags[sel].sum())
        out[r] = RefinedCounts(star=star, intersecting=total - star)
    return out


def refined_counts(
    q: Permutation | str, n: int, r: int, *, threads: int = 1, budget: int = DEFAULT_BUDGET
) -> RefinedCounts:
    if r < 0:
        raise ValueError("r must be nonnegative")
    return refined_distribution(q, n, r, threads=threads, budget=budget)[r]


def star_members(
    q: Permutation | str, n: int, r: int, *, threads: int = 1, budget: int = DEFAULT_BUDGET
) -> Iterator[Permutation]:
    """Members of ``S_{n,r}(q)`` whose occurrences are pairwise disjoint."""
    q = as_permutation(q)
    rows, counts = _collect(q, n, r, threads=threads, budget=budget)
    rows = rows[counts == r]
    if not len(rows):
        return
    lo, hi, above = K.pattern_arrays([v - 1 for v in q])
    flags = K.star_flags(rows.astype(np.int64), lo, hi, above, len(q))
    for row in rows[flags]:
        yield Permutation._trusted(int(v) + 1 for v in row)


def fast_count(q: Permutation, p: Permutation) -> int:
    """Compiled occurrence count, for hot verification loops."""
    if len(q) > len(p):
        return 0
    lo, hi, above = K.pattern_arrays([v - 1 for v in q])
    vals = np.asarray(p, dtype=np.int64)
    return int(K.count_all(vals, lo, hi, above, len(q), np.empty(len(q), dtype=np.int64)))

"""Compiled inner loops for prefix-extension enumeration.

Values are 0-based inside the kernels.  A pattern is described by four
arrays precomputed in Python (see ``pattern_arrays``): the nearest-smaller
and nearest-larger earlier pattern index for each element, and whether each
element lies above the pattern's last element.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .perm import _constraints


def pattern_arrays(q) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    q = tuple(q)
    lo, hi = _constraints(q)
    last = q[-1]
    above = [1 if v > last else 0 for v in q]
    return (
        np.asarray(lo, dtype=np.int64),
        np.asarray(hi, dtype=np.int64),
        np.asarray(above, dtype=np.int64),
    )


@njit(cache=True, nogil=True)
def count_ending_at(vals, d, lo, hi, above, m, cur):
    """Occurrences whose last element is at index ``d`` of ``vals``."""
    if d < m - 1:
        return 0
    if m == 1:
        return 1
    v = vals[d]
    total = 0
    level = 0
    cur[0] = -1
    while level >= 0:
        cur[level] += 1
        i = cur[level]
        if i > d - (m - 1 - level):
            level -= 1
            continue
        x = vals[i]
        if above[level] == 1:
            if x < v:
                continue
        elif x > v:
            continue
        k = lo[level]
        if k >= 0 and x < vals[cur[k]]:
            continue
        k = hi[level]
        if k >= 0 and x > vals[cur[k]]:
            continue
        if level == m - 2:
            total += 1
            continue
        level += 1
        cur[level] = i
    return total


@njit(cache=True, nogil=True)
def count_all(vals, lo, hi, above, m, cur):
    """Total occurrences of the pattern in ``vals``."""
    total = 0
    for d in range(m - 1, len(vals)):
        total += count_ending_at(vals, d, lo, hi, above, m, cur)
    return total


@njit(cache=True, nogil=True)
def occurrences_disjoint(vals, lo, hi, above, m, cur, marks):
    """True when no two occurrences of the pattern in ``vals`` share an index."""
    n = len(vals)
    for i in range(n):
        marks[i] = 0
    for d in range(m - 1, n):
        v = vals[d]
        if m == 1:
            continue
        level = 0
        cur[0] = -1
        while level >= 0:
            cur[level] += 1
            i = cur[level]
            if i > d - (m - 1 - level):
                level -= 1
                continue
            x = vals[i]
            if above[level] == 1:
                if x < v:
                    continue
            elif x > v:
                continue
            k = lo[level]
            if k >= 0 and x < vals[cur[k]]:
                continue
            k = hi[level]
            if k >= 0 and x > vals[cur[k]]:
                continue
            if level == m - 2:
                for t in range(m - 1):
                    if marks[cur[t]] == 1:
                        return False
                    marks[cur[t]] = 1
                if marks[d] == 1:
                    return False
                marks[d] = 1
                continue
            level += 1
            cur[level] = i
    return True


@njit(cache=True, nogil=True)
def dfs_task(n, prefix, lo, hi, above, m, cap, budget, fact, hist, out, out_counts, out_start):
    """Extend ``prefix`` to all permutations of ``0..n-1``.

    Completed permutations with at most ``cap`` occurrences are tallied in
    ``hist[count]``; prefixes whose running count exceeds ``cap`` add their
    number of completions to ``hist[cap + 1]``.  If ``out`` has rows, every
    tallied permutation is also written there in lexicographic order,
    starting at row ``out_start``.

    Returns ``(steps, aborted)`` where a step is one attempted extension.
    """
    vals = np.empty(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    counts = np.zeros(n + 1, dtype=np.int64)
    choice = np.empty(n, dtype=np.int64)
    cur = np.empty(max(m, 1), dtype=np.int64)
    write = out.shape[0] > 0
    row = out_start
    steps = 0
    depth0 = len(prefix)
    c = 0
    for d in range(depth0):
        v = prefix[d]
        vals[d] = v
        used[v] = True
        steps += 1
        c += count_ending_at(vals, d, lo, hi, above, m, cur)
        if c > cap:
            hist[cap + 1] += fact[n - d - 1]
            return steps, 0
    if depth0 == n:
        hist[c] += 1
        if write:
            for t in range(n):
                out[row, t] = vals[t]
            out_counts[row] = c
        return steps, 0
    counts[depth0] = c
    d = depth0
    choice[d] = -1
    while d >= depth0:
        if choice[d] >= 0:
            used[choice[d]] = False
        v = choice[d] + 1
        while v < n and used[v]:
            v += 1
        if v >= n:
            d -= 1
            continue
        choice[d] = v
        used[v] = True
        vals[d] = v
        steps += 1
        if steps > budget:
            return steps, 1
        c = counts[d] + count_ending_at(vals, d, lo, hi, above, m, cur)
        if c > cap:
            hist[cap + 1] += fact[n - d - 1]
            continue
        if d == n - 1:
            hist[c] += 1
            if write:
                for t in range(n):
                    out[row, t] = vals[t]
                out_counts[row] = c
                row += 1
            continue
        counts[d + 1] = c
        d += 1
        choice[d] = -1
    return steps, 0


@njit(cache=True, nogil=True)
def star_flags(rows, lo, hi, above, m):
    """For each row, whether its pattern occurrences are pairwise disjoint."""
    k, n = rows.shape
    flags = np.zeros(k, dtype=np.bool_)
    cur = np.empty(max(m, 1), dtype=np.int64)
    marks = np.zeros(n, dtype=np.int64)
    vals = np.empty(n, dtype=np.int64)
    for r in range(k):
        for t in range(n):
            vals[t] = rows[r, t]
        flags[r] = occurrences_disjoint(vals, lo, hi, above, m, cur, marks)
    return flags


@njit(cache=True, nogil=True)
def max_value_at(vals, lo, hi, above, m, low, cur):
    """Largest ``vals[i]`` such that some occurrence puts pattern index ``low``
    at ``i``; -1 when the pattern does not occur."""
    best = -1
    for d in range(m - 1, len(vals)):
        v = vals[d]
        if m == 1:
            if v > best:
                best = v
            continue
        level = 0
        cur[0] = -1
        while level >= 0:
            cur[level] += 1
            i = cur[level]
            if i > d - (m - 1 - level):
                level -= 1
                continue
            x = vals[i]
            if above[level] == 1:
                if x < v:
                    continue
            elif x > v:
                continue
            k = lo[level]
            if k >= 0 and x < vals[cur[k]]:
                continue
            k = hi[level]
            if k >= 0 and x > vals[cur[k]]:
                continue
            if level == m - 2:
                hit = v if low == m - 1 else vals[cur[low]]
                if hit > best:
                    best = hit
                continue
            level += 1
            cur[level] = i
    return best

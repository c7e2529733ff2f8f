"""The insertion injection (lower bound), the swap injection (upper bound),
the intersecting-copy reduction, and exhaustive checkers for all three.

Every runtime assertion inside a construction raises ``ProofGapError`` with a
serializable witness.  The verifiers collect those as counterexamples.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import numpy as np

from . import _kernels as K
from .decomp import check_hypotheses, skew_components, sum_components
from .enumeration import count_avoiders, fast_count, members, occurrence_distribution, refined_counts, star_members
from .errors import HypothesisViolation, ProofGapError
from .perm import (
    Permutation,
    as_permutation,
    complement,
    contains,
    count_occurrences,
    delete_entry,
    direct_sum,
    flatten,
    insert_block,
    iter_occurrences,
    occurrences,
    reverse,
    skew_sum,
    standardize,
    swap_positions,
)


@dataclass(frozen=True)
class BlockPlan:
    """Value chunks of ``q`` used by the insertion map.

    ``chunk_value_ranges[i]`` lists the values of chunk ``i + 1`` in
    descending order; chunk 1 holds the top values of ``q``.
    """

    pattern: Permutation
    chunk_sizes: tuple[int, ...]
    chunk_value_ranges: tuple[tuple[int, ...], ...]

    @functools.cached_property
    def chunk_of(self) -> dict[int, int]:
        """Map each value of the pattern to its 0-based chunk index."""
        return {v: i for i, chunk in enumerate(self.chunk_value_ranges) for v in chunk}


@functools.lru_cache(maxsize=256)
def _require_lower(q: Permutation):
    report = check_hypotheses(q)
    if not report.lower_bound_applies:
        raise HypothesisViolation(f"{q} does not satisfy the lower-bound hypotheses")
    return report


def block_plan(q: Permutation) -> BlockPlan:
    return _block_plan(as_permutation(q))


@functools.lru_cache(maxsize=256)
def _block_plan(q: Permutation) -> BlockPlan:
    parts = _require_lower(q).skew_parts.parts
    k, m = len(parts), len(q)
    if k == 2:
        sizes: tuple[int, ...] = (m,)
    else:
        sizes = (
            len(parts[0]) + len(parts[1]) - 1,
            *(len(parts[i]) for i in range(2, k - 1)),
            len(parts[-1]) + 1,
        )
    chunks = []
    top = m
    for b in sizes:
        chunks.append(tuple(range(top, top - b, -1)))
        top -= b
    return BlockPlan(q, sizes, tuple(chunks))


AnchorVector = tuple[int, ...]


@functools.lru_cache(maxsize=256)
def _arrays(q: Permutation):
    return K.pattern_arrays([v - 1 for v in q])


@functools.lru_cache(maxsize=256)
def _first_part(q: Permutation) -> Permutation:
    return skew_components(q).parts[0]


@functools.lru_cache(maxsize=256)
def _partial_skew_sums(q: Permutation) -> tuple[tuple[Permutation, int], ...]:
    """``q_1 (-) ... (-) q_i`` for i < k, with the index of its minimum entry."""
    parts = skew_components(q).parts
    out = []
    for i in range(1, len(parts)):
        partial = skew_sum(*parts[:i])
        out.append((partial, partial.index(1)))
    return tuple(out)


def anchors(w: Permutation, position: int, q: Permutation) -> AnchorVector:
    """Largest value that is the minimum of a ``q_1 (-) ... (-) q_i`` occurrence
    strictly left of ``position`` (1-based), for each ``i < k``; 0 if none."""
    q = as_permutation(q)
    partials = _partial_skew_sums(q)
    if not partials:
        raise HypothesisViolation(f"{q} is skew-indecomposable")
    prefix = np.asarray(w[: position - 1], dtype=np.int64)
    out = []
    for partial, low in partials:
        lo, hi, above = _arrays(partial)
        best = K.max_value_at(prefix, lo, hi, above, len(partial), low, np.empty(len(partial), dtype=np.int64))
        out.append(max(int(best), 0))
    for a, b in zip(out, out[1:]):
        if a < b:
            raise ProofGapError(
                "anchor vector is not nonincreasing",
                {"q": str(q), "w": str(w), "position": position, "anchors": out},
            )
    return tuple(out)


def _insertion_keys(q: Permutation, plan: BlockPlan, a: AnchorVector) -> list[Fraction]:
    chunk = plan.chunk_of
    by_anchor: dict[int, list[int]] = {}
    for v in q:
        by_anchor.setdefault(a[chunk[v]], []).append(v)
    key_of: dict[int, Fraction] = {}
    for anchor, values in by_anchor.items():
        values.sort()
        step = Fraction(1, len(values) + 1)
        for rank, v in enumerate(values, 1):
            key_of[v] = anchor + rank * step
    return [key_of[v] for v in q]


def inject_lower(q: Permutation, S: Iterable[int], p: Permutation, *, check: bool = True) -> Permutation:
    """Insert ``r = |S|`` copies of ``q`` into ``q_1 (+) p`` at the positions in ``S``.

    Each copy goes in as a block of consecutive positions; its values are cut
    into the chunks of ``block_plan(q)`` and chunk ``i`` lands just above the
    anchor ``a_i`` computed at the insertion point.
    """
    q, p = as_permutation(q), as_permutation(p)
    plan = block_plan(q)
    positions = sorted(S)
    r, N = len(positions), len(p)
    if r < 1 or len(set(positions)) != r or positions[0] < 1 or positions[-1] > N + 1:
        raise ValueError(f"S must be a nonempty subset of 1..{N + 1}, got {sorted(S)!r}")
    if contains(p, q):
        raise ValueError(f"{p} does not avoid {q}")
    m = len(q)
    first = _first_part(q)
    ell = len(first)
    w = direct_sum(first, p)
    for j, s in enumerate(positions):
        insert_at = s + ell + j * m
        a = anchors(w, insert_at, q)
        w = insert_block(w, insert_at, _insertion_keys(q, plan, a))
    if check:
        found = fast_count(q, w)
        if found != r:
            raise ProofGapError(
                f"insertion produced {found} occurrences of {q}, expected {r}",
                {"q": str(q), "S": positions, "p": str(p), "result": str(w), "occurrences": found},
            )
    return w


def extract_lower(q: Permutation, w: Permutation, r: int, *, check: bool = True) -> tuple[tuple[int, ...], Permutation]:
    """Recover ``(S, p)`` from an output of ``inject_lower``."""
    q, w = as_permutation(q), as_permutation(w)
    _require_lower(q)
    m = len(q)
    first = _first_part(q)
    ell = len(first)
    found = fast_count(q, w)
    if found != r:
        raise ValueError(f"expected {r} occurrences of {q} in {w}, found {found}")
    # Every occurrence must be a block of consecutive positions, so scanning
    # windows finds them all once the total count agrees.
    starts = [i for i in range(len(w) - m + 1) if standardize(w[i : i + m]) == q]
    if len(starts) != r:
        raise ValueError(f"some occurrence of {q} in {w} is not a consecutive block")
    inserted = {i for s in starts for i in range(s, s + m)}
    if len(inserted) != r * m:
        raise ValueError(f"occurrences of {q} in {w} overlap")
    N = len(w) - r * m - ell
    S = tuple(start + 1 - ell - j * m for j, start in enumerate(starts))
    if N < 0 or S[0] < 1 or S[-1] > N + 1 or any(a >= b for a, b in zip(S, S[1:])):
        raise ValueError(f"recovered insertion positions {S} are inconsistent")
    base = [v for i, v in enumerate(w) if i not in inserted]
    lead = standardize(base[:ell])
    if lead != first or sorted(base[:ell]) != sorted(base)[:ell]:
        raise ValueError(f"{w} does not start with a copy of {first} below the rest")
    p = standardize(base[ell:])
    if check and inject_lower(q, S, p, check=False) != w:
        raise ValueError(f"{w} is not in the image of the insertion map for {q}")
    return S, p


def _require_upper(q: Permutation) -> None:
    if len(q) < 2 or not check_hypotheses(q).upper_bound_applies:
        raise HypothesisViolation(f"{q} is not a separable skew-decomposable pattern of length >= 2")


def _points_above_right(u: Sequence[int], low: Permutation) -> list[int]:
    """0-based positions e of ``u`` having an occurrence of ``low`` entirely
    below and to the left of ``u[e]``."""
    out = []
    for e, x in enumerate(u):
        region = [y for y in u[:e] if y < x]
        if contains(region, low):
            out.append(e)
    return out


def _swap_pair(q: Permutation, p: Permutation, r: int) -> tuple[int, int]:
    """0-based positions exchanged by the swap map for ``q`` on ``p``."""
    if len(q) == 2:
        if q == (1, 2):
            p = complement(p)
        occ = min(iter_occurrences((2, 1), p))
        i, j = occ
        if j != i + 1 or p[i] != p[j] + 1:
            raise ProofGapError(
                "leftmost inversion is not adjacent in position and value",
                {"q": "21", "p": str(p), "pair": [i + 1, j + 1]},
            )
        return i, j
    n = len(p)
    if len(sum_components(q)) >= 2:
        A, u = q, p
    else:
        A, u = complement(q), complement(p)
    parts = sum_components(A).parts
    flipped = len(A) - len(parts[0]) < 2
    if flipped:
        A, u = reverse(complement(A)), reverse(complement(u))
        parts = sum_components(A).parts
    low, high = parts[0], direct_sum(*parts[1:])
    S = _points_above_right(u, low)
    v = standardize([u[e] for e in S])
    occ = occurrences(high, v)
    if len(occ) != r or not occ.is_disjoint():
        raise ProofGapError(
            f"restriction has {len(occ)} occurrences of {high} (expected {r}, pairwise disjoint)",
            {"q": str(q), "p": str(p), "working_pattern": str(A), "u": str(u),
             "S": [e + 1 for e in S], "v": str(v)},
        )
    a, b = _swap_pair(high, v, r)
    i, j = S[a], S[b]
    if flipped:
        i, j = n - 1 - i, n - 1 - j
    return i, j


def swap_upper(q: Permutation, p: Permutation, *, check: bool = True) -> tuple[int, Permutation]:
    """Swap two entries of ``p`` so that exactly one occurrence of ``q`` disappears.

    Returns the 1-based position of the entry whose value decreases and the
    swapped permutation.  ``p`` must have pairwise disjoint occurrences.
    """
    q, p = as_permutation(q), as_permutation(p)
    _require_upper(q)
    occ = occurrences(q, p)
    r = len(occ)
    if r == 0:
        raise ValueError(f"{p} has no occurrence of {q}")
    if not occ.is_disjoint():
        raise ValueError(f"occurrences of {q} in {p} share entries")
    i, j = _swap_pair(q, p, r)
    result = swap_positions(p, i + 1, j + 1)
    decreased = i if result[i] < p[i] else j
    if check:
        after = occurrences(q, result)
        if not after.as_set() <= occ.as_set():
            raise ProofGapError(
                "swap created a new occurrence",
                {"q": str(q), "p": str(p), "result": str(result), "pair": [i + 1, j + 1]},
            )
        if len(after) != r - 1 or not after.is_disjoint():
            raise ProofGapError(
                f"swap left {len(after)} occurrences, expected {r - 1} disjoint",
                {"q": str(q), "p": str(p), "result": str(result), "pair": [i + 1, j + 1]},
            )
    return decreased + 1, result


def reduce_intersecting(q: Permutation, p: Permutation) -> tuple[int, int, Permutation]:
    """Delete the leftmost entry lying in two or more occurrences of ``q``.

    Returns ``(position, value, shortened permutation)``.
    """
    q, p = as_permutation(q), as_permutation(p)
    occ = occurrences(q, p)
    r = len(occ)
    hits = [0] * (len(p) + 1)
    for t in occ:
        for pos in t:
            hits[pos] += 1
    shared = [pos for pos in range(1, len(p) + 1) if hits[pos] >= 2]
    if not shared:
        raise ValueError(f"no entry of {p} lies in two occurrences of {q}")
    i = shared[0]
    result = delete_entry(p, i)
    left = count_occurrences(q, result)
    if left > r - 2:
        raise ProofGapError(
            f"deleting position {i} left {left} occurrences, expected at most {r - 2}",
            {"q": str(q), "p": str(p), "position": i},
        )
    return i, p[i - 1], result


@dataclass
class VerificationReport:
    pattern: Permutation
    n: int
    r: int
    map: str
    domain_size: int = 0
    injective: bool = True
    image_in_codomain: bool = True
    no_new_occurrences: bool | None = None
    round_trip_ok: bool | None = None
    counterexamples: list[dict[str, Any]] = field(default_factory=list)
    bound: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict[str, Any]:
        return {
            "map": self.map,
            "pattern": str(self.pattern),
            "n": self.n,
            "r": self.r,
            "domain_size": self.domain_size,
            "injective": self.injective,
            "image_in_codomain": self.image_in_codomain,
            "no_new_occurrences": self.no_new_occurrences,
            "round_trip_ok": self.round_trip_ok,
            "bound": {k: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v)
                      for k, v in self.bound.items()},
            "passed": self.passed,
            "counterexamples": self.counterexamples,
        }


def lower_domain_length(q: Permutation, n: int, r: int) -> int:
    """Length of the avoider fed to the insertion map for target length ``n``."""
    return n - r * len(q) - len(_first_part(q))


def verify_lower(q: Permutation | str, n: int, r: int, *, exact_codomain_max_n: int = 11) -> VerificationReport:
    """Run the insertion map over its whole domain and check it.

    The domain is every ``r``-subset of ``1..N+1`` paired with every avoider
    of length ``N = n - r|q| - |q_1|``.  The codomain size is enumerated
    exactly when ``n <= exact_codomain_max_n``; otherwise the bound records
    only the number of distinct images.
    """
    q = as_permutation(q)
    _require_lower(q)
    if r < 1:
        raise ValueError("r must be at least 1")
    N = lower_domain_length(q, n, r)
    if N < 0:
        raise HypothesisViolation(f"n={n} is below r*|q| + |q_1| = {n - N}")
    report = VerificationReport(q, n, r, "lower", round_trip_ok=True)
    images: dict[Permutation, tuple[tuple[int, ...], Permutation]] = {}
    for p in members(q, N, 0):
        for S in itertools.combinations(range(1, N + 2), r):
            report.domain_size += 1
            try:
                w = inject_lower(q, S, p, check=False)
            except ProofGapError as exc:
                report.image_in_codomain = False
                report.counterexamples.append(exc.to_dict())
                continue
            found = fast_count(q, w)
            if len(w) != n or found != r:
                report.image_in_codomain = False
                report.counterexamples.append({
                    "error": f"image has length {len(w)} and {found} occurrences",
                    "witness": {"S": list(S), "p": str(p), "image": str(w)},
                })
                continue
            if w in images:
                report.injective = False
                S0, p0 = images[w]
                report.counterexamples.append({
                    "error": "two inputs share an image",
                    "witness": {"image": str(w), "first": [list(S0), str(p0)], "second": [list(S), str(p)]},
                })
                continue
            images[w] = (S, p)
            try:
                back = extract_lower(q, w, r, check=False)
            except ValueError as exc:
                back = (str(exc), None)
            if back != (S, p):
                report.round_trip_ok = False
                report.counterexamples.append({
                    "error": "extraction does not invert insertion",
                    "witness": {"S": list(S), "p": str(p), "image": str(w), "recovered": str(back)},
                })
    domain_bound = math.comb(N + 1, r) * count_avoiders(q, N)
    report.bound = {"inequality": "|S_{n,r}(q)| >= C(N+1, r) * |S_N(q)|", "N": N,
                    "rhs": domain_bound, "distinct_images": len(images)}
    if n <= exact_codomain_max_n:
        lhs = occurrence_distribution(q, n, r)[r]
        report.bound["lhs"] = lhs
        report.bound["holds"] = lhs >= domain_bound
        if lhs < domain_bound:
            report.counterexamples.append({"error": "codomain smaller than domain",
                                           "witness": {"lhs": str(lhs), "rhs": str(domain_bound)}})
    return report


def verify_upper(q: Permutation | str, n: int, r: int) -> VerificationReport:
    """Run the swap map over all of ``S*_{n,r}(q)`` and check it."""
    q = as_permutation(q)
    _require_upper(q)
    if r < 1:
        raise ValueError("r must be at least 1")
    report = VerificationReport(q, n, r, "upper", no_new_occurrences=True)
    seen: dict[tuple[int, Permutation], Permutation] = {}
    for p in star_members(q, n, r):
        report.domain_size += 1
        try:
            pos, result = swap_upper(q, p, check=False)
        except ProofGapError as exc:
            report.image_in_codomain = False
            report.counterexamples.append(exc.to_dict())
            continue
        before = occurrences(q, p).as_set()
        after = occurrences(q, result)
        if not after.as_set() <= before:
            report.no_new_occurrences = False
            report.counterexamples.append({"error": "swap created a new occurrence",
                                           "witness": {"p": str(p), "result": str(result), "position": pos}})
        if len(after) != r - 1 or not after.is_disjoint() or not 1 <= pos <= n:
            report.image_in_codomain = False
            report.counterexamples.append({"error": f"image has {len(after)} occurrences (expected {r - 1} disjoint)",
                                           "witness": {"p": str(p), "result": str(result), "position": pos}})
        key = (pos, result)
        if key in seen:
            report.injective = False
            report.counterexamples.append({"error": "two inputs share an image",
                                           "witness": {"image": [pos, str(result)],
                                                       "first": str(seen[key]), "second": str(p)}})
        else:
            seen[key] = p
    lower = refined_counts(q, n, r - 1).star
    report.bound = {"inequality": "|S*_{n,r}(q)| <= n * |S*_{n,r-1}(q)|",
                    "lhs": report.domain_size, "rhs": n * lower, "holds": report.domain_size <= n * lower}
    if not report.bound["holds"]:
        report.counterexamples.append({"error": "domain larger than n times the codomain",
                                       "witness": {"lhs": str(report.domain_size), "rhs": str(n * lower)}})
    return report

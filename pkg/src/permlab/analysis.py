"""Closed forms, the 1342 generating function, ratio tables, effective Wilf
classes and exact audits of the counting inequalities.

Everything here is exact.  Floats only appear in ``RatioTable.to_rows`` as a
separately labelled convenience column.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import series as ps
from .cache import table_build
from .decomp import check_hypotheses, skew_components
from .enumeration import DEFAULT_BUDGET, Distribution, RefinedCounts, occurrence_distribution, refined_distribution
from .errors import HypothesisViolation
from .perm import Permutation, as_permutation

PRINTED_1342_LINEAR_COEFFICIENT = Fraction(12)

WILF_REPRESENTATIVES_4 = tuple(Permutation(s) for s in ("4321", "4312", "4123", "3412", "4231", "4213", "3142"))


def _exact_div(num: int, den: int) -> int:
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"{num} is not divisible by {den}")
    return q


def closed_form(kind: str, n: int) -> int:
    """``catalan``: C(2n,n)/(n+1); ``noonan321``: 3/n C(2n,n+3);
    ``bona231``: C(2n-3,n-3) (zero below n = 3)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if kind == "catalan":
        return _exact_div(math.comb(2 * n, n), n + 1)
    if kind == "noonan321":
        if n < 1:
            raise ValueError("noonan321 needs n >= 1")
        return _exact_div(3 * math.comb(2 * n, n + 3), n)
    if kind == "bona231":
        return math.comb(2 * n - 3, n - 3) if n >= 3 else 0
    raise ValueError(f"unknown closed form {kind!r}")


class CountSource:
    """Memoized access to occurrence histograms, optionally through the cache."""

    def __init__(self, cache_dir=None, *, threads: int = 1, budget: int = DEFAULT_BUDGET):
        self.cache_dir = cache_dir
        self.threads = threads
        self.budget = budget
        self._rows: dict[tuple[Permutation, int], Distribution] = {}
        self._refined: dict[tuple[Permutation, int], dict[int, RefinedCounts]] = {}

    def row(self, q: Permutation, n: int, r_max: int) -> Distribution:
        key = (q, n)
        row = self._rows.get(key)
        if row is None or (row.overflow and row.r_cap < r_max):
            if self.cache_dir is not None:
                row = table_build(q, n, r_max, self.cache_dir, n_min=n,
                                  threads=self.threads, budget=self.budget).rows[n]
            else:
                row = occurrence_distribution(q, n, r_max, threads=self.threads, budget=self.budget)
            self._rows[key] = row
        return row

    def count(self, q: Permutation, n: int, r: int) -> int:
        return self.row(q, n, r)[r]

    def avoiders(self, q: Permutation, n: int) -> int:
        return self.count(q, n, 0)

    def refined(self, q: Permutation, n: int, r_max: int) -> dict[int, RefinedCounts]:
        key = (q, n)
        got = self._refined.get(key)
        if got is None or max(got) < r_max:
            got = refined_distribution(q, n, r_max, threads=self.threads, budget=self.budget)
            self._refined[key] = got
        return got


@dataclass(frozen=True)
class SeriesExpansion:
    coefficients: tuple[Fraction, ...]
    linear_coefficient: Fraction

    def to_dict(self) -> dict[str, Any]:
        return {"linear_coefficient": str(self.linear_coefficient),
                "coefficients": [str(c) for c in self.coefficients]}


def _sqrt_term(order: int) -> ps.Series:
    return ps.binomial_series(Fraction(3, 2), Fraction(-8), order)


def series_1342(N: int, linear_coefficient: Fraction | int = PRINTED_1342_LINEAR_COEFFICIENT) -> SeriesExpansion:
    """Expand ``32z / (-8z^2 + c z + 1 - (1-8z)^(3/2))`` to order ``N``."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    c = Fraction(linear_coefficient)
    denominator = ps.add([Fraction(1), c, Fraction(-8)], ps.scale(_sqrt_term(N + 1), Fraction(-1)))
    denominator = ps.shift_down(denominator)[: N + 1]
    if denominator[0] == 0:
        raise ZeroDivisionError(f"denominator vanishes to second order for linear coefficient {c}")
    coefficients = ps.scale(ps.reciprocal(denominator, N), Fraction(32))
    return SeriesExpansion(tuple(coefficients), c)


def resolve_1342_linear_coefficient(constant_term: int = 1) -> Fraction:
    """The linear coefficient making the constant term of the expansion equal
    ``constant_term`` (``|S_0| = 1``)."""
    first = _sqrt_term(1)[1]
    return first + Fraction(32, constant_term)


def series_1342_report(n_check: int = 8, terms: int | None = None, source: CountSource | None = None) -> dict[str, Any]:
    """Compare the printed and the resolved expansions against brute force."""
    source = source or CountSource()
    q = Permutation((1, 3, 4, 2))
    terms = max(n_check, terms or 0)
    brute = [source.avoiders(q, n) for n in range(n_check + 1)]
    printed = series_1342(terms, PRINTED_1342_LINEAR_COEFFICIENT)
    resolved_c = resolve_1342_linear_coefficient(brute[0])
    resolved = series_1342(terms, resolved_c)
    return {
        "printed_linear_coefficient": str(PRINTED_1342_LINEAR_COEFFICIENT),
        "printed_constant_term": str(printed.coefficients[0]),
        "printed_matches_brute_force": list(printed.coefficients[: n_check + 1]) == brute,
        "resolved_linear_coefficient": str(resolved_c),
        "resolved_coefficients": [str(c) for c in resolved.coefficients],
        "brute_force": [str(b) for b in brute],
        "resolved_matches_brute_force": list(resolved.coefficients[: n_check + 1]) == brute,
    }


def decreasing(k: int) -> Permutation:
    return Permutation(range(k, 0, -1))


def regev_ratio(k: int, n_max: int, source: CountSource | None = None) -> list[tuple[int, Fraction, str]]:
    """``|S_n(k...1)| n^e / (k-1)^(2n)`` with ``e = (k^2-2k)/2``.

    When ``e`` is half-integral the row holds the square of that quantity and
    is tagged ``"squared"``.  Diagnostic only.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    source = source or CountSource()
    twice_e = k * k - 2 * k
    rows = []
    for n in range(1, n_max + 1):
        if k == 2:
            s = 1
        elif k == 3:
            s = closed_form("catalan", n)
        else:
            s = source.avoiders(decreasing(k), n)
        if twice_e % 2 == 0:
            rows.append((n, Fraction(s * n ** (twice_e // 2), (k - 1) ** (2 * n)), "plain"))
        else:
            rows.append((n, Fraction(s * s * n**twice_e, (k - 1) ** (4 * n)), "squared"))
    return rows


@dataclass
class RatioTable:
    pattern: Permutation
    r: int
    rows: list[tuple[int, int, int, Fraction]] = field(default_factory=list)

    @property
    def positive(self) -> list[Fraction]:
        return [rho for *_, rho in self.rows if rho > 0]

    @property
    def min(self) -> Fraction | None:
        return min(self.positive, default=None)

    @property
    def max(self) -> Fraction | None:
        return max(self.positive, default=None)

    def to_rows(self) -> list[dict[str, str]]:
        return [{"n": str(n), "r": str(self.r), "count": str(c), "avoiders": str(a), "rho": str(rho),
                 "rho_float_approx": f"{float(rho):.6g}"} for n, c, a, rho in self.rows]

    def to_dict(self) -> dict[str, Any]:
        return {"pattern": str(self.pattern), "r": self.r, "rows": self.to_rows(),
                "min": None if self.min is None else str(self.min),
                "max": None if self.max is None else str(self.max)}


def ratio_table(q: Permutation | str, r: int, n_max: int, source: CountSource | None = None,
                n_min: int = 1) -> RatioTable:
    """Rows ``(n, |S_{n,r}|, |S_n|, |S_{n,r}| / (n^r |S_n|))``."""
    q = as_permutation(q)
    source = source or CountSource()
    table = RatioTable(q, r)
    for n in range(max(1, n_min), n_max + 1):
        row = source.row(q, n, r)
        avoiders, count = row[0], row[r]
        if avoiders == 0:
            raise ZeroDivisionError(f"|S_{n}({q})| = 0")
        table.rows.append((n, count, avoiders, Fraction(count, n**r * avoiders)))
    return table


@dataclass
class WilfPartition:
    length: int
    n_max: int
    r_max: int
    blocks: list[tuple[Permutation, ...]]
    signatures: dict[Permutation, tuple]

    def block_of(self, p: Permutation) -> tuple[Permutation, ...]:
        return next(b for b in self.blocks if p in b)

    def to_dict(self) -> dict[str, Any]:
        return {"length": self.length, "n_max": self.n_max, "r_max": self.r_max,
                "blocks": [[str(p) for p in b] for b in self.blocks]}


def wilf_signature(q: Permutation, n_max: int, r_max: int, source: CountSource) -> tuple:
    sig = []
    for n in range(1, n_max + 1):
        row = source.row(q, n, r_max)
        sig.append(tuple(row[r] for r in range(r_max + 1)) + (row.overflow,))
    return tuple(sig)


def wilf_partition(length: int, n_max: int, r_max: int, source: CountSource | None = None) -> WilfPartition:
    """Group all patterns of ``length`` by their count signature over
    ``n <= n_max``, ``r <= r_max`` (plus overflow)."""
    source = source or CountSource()
    signatures = {}
    for p in itertools.permutations(range(1, length + 1)):
        p = Permutation(p)
        signatures[p] = wilf_signature(p, n_max, r_max, source)
    groups: dict[tuple, list[Permutation]] = {}
    for p in sorted(signatures):
        groups.setdefault(signatures[p], []).append(p)
    blocks = sorted((tuple(g) for g in groups.values()), key=lambda b: b[0])
    return WilfPartition(length, n_max, r_max, blocks, signatures)


@dataclass
class AuditReport:
    pattern: Permutation
    n_max: int
    r_max: int
    checks: list[dict[str, Any]] = field(default_factory=list)

    @property
    def failures(self) -> list[dict[str, Any]]:
        return [c for c in self.checks if not c["holds"]]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {"pattern": str(self.pattern), "n_max": self.n_max, "r_max": self.r_max,
                "passed": self.passed, "checks": [
                    {k: (str(v) if isinstance(v, int) and not isinstance(v, bool) and k in ("lhs", "rhs") else v)
                     for k, v in c.items()} for c in self.checks]}


def inequality_audit(q: Permutation | str, n_max: int, r_max: int, source: CountSource | None = None) -> AuditReport:
    """Check the three exact inequality families at every grid point.

    ``lower``: ``|S_{n,r}| >= C(N+1, r) |S_N|`` with ``N = n - r|q| - |q_1|``
    (only when the lower-bound hypotheses hold and ``N >= 0``).
    ``star``: ``|S*_{n,r}| <= n |S*_{n,r-1}|`` (upper-bound hypotheses).
    ``intersecting``: ``|S^int_{n,r}| <= n^2 sum_{i<=r-2} |S_{n-1,i}|``.
    """
    q = as_permutation(q)
    if len(q) < 2:
        raise HypothesisViolation("pattern must have length at least 2")
    source = source or CountSource()
    hyp = check_hypotheses(q)
    m = len(q)
    ell = len(skew_components(q).parts[0])
    report = AuditReport(q, n_max, r_max)

    def add(family: str, n: int, r: int, lhs: int, rhs: int, holds: bool) -> None:
        report.checks.append({"family": family, "n": n, "r": r, "lhs": lhs, "rhs": rhs, "holds": holds})

    for n in range(1, n_max + 1):
        refined = source.refined(q, n, r_max)
        previous = source.row(q, n - 1, r_max) if n > 1 else None
        for r in range(1, r_max + 1):
            if hyp.lower_bound_applies and n - r * m - ell >= 0:
                N = n - r * m - ell
                lhs = refined[r].total
                rhs = math.comb(N + 1, r) * source.avoiders(q, N)
                add("lower", n, r, lhs, rhs, lhs >= rhs)
            if hyp.upper_bound_applies:
                lhs, rhs = refined[r].star, n * refined[r - 1].star
                add("star", n, r, lhs, rhs, lhs <= rhs)
            if previous is not None:
                lhs = refined[r].intersecting
                rhs = n * n * sum(previous[i] for i in range(r - 1))
                add("intersecting", n, r, lhs, rhs, lhs <= rhs)
    return report

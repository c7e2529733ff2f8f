"""Permutations, patterns and their occurrences.

Permutations are in one-line notation over the values ``1..n`` and every
position argument in the public API is 1-based.  Internally the search
routines work with 0-based index tuples.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import NotAPermutationError


class Permutation(tuple):
    """An immutable permutation of ``1..n`` in one-line notation.

    >>> Permutation([2, 3, 1])
    Permutation('231')
    >>> str(Permutation.parse("10,1,2,3,4,5,6,7,8,9"))
    '10,1,2,3,4,5,6,7,8,9'
    """

    __slots__ = ()

    def __new__(cls, values: Iterable[int] | str = ()):
        if isinstance(values, str):
            return cls.parse(values)
        entries = tuple(values)
        n = len(entries)
        seen = [False] * (n + 1)
        for v in entries:
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= n or seen[v]:
                raise NotAPermutationError(f"not a permutation: {list(entries)!r}")
            seen[v] = True
        return tuple.__new__(cls, entries)

    @classmethod
    def _trusted(cls, entries: Iterable[int]) -> "Permutation":
        return tuple.__new__(cls, tuple(entries))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        text = text.strip()
        if not text:
            return cls(())
        if "," in text:
            return cls(int(tok) for tok in text.split(","))
        if not text.isdigit():
            raise NotAPermutationError(f"cannot parse permutation {text!r}")
        return cls(int(ch) for ch in text)

    def __str__(self) -> str:
        if len(self) <= 9:
            return "".join(map(str, self))
        return ",".join(map(str, self))

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"


def make_permutation(values: Sequence[int]) -> Permutation:
    return Permutation(values)


def as_permutation(value: "Permutation | str | Sequence[int]") -> Permutation:
    """Coerce a string (``"231"`` / ``"2,3,1"``) or sequence to a Permutation."""
    if isinstance(value, Permutation):
        return value
    if isinstance(value, str):
        return Permutation.parse(value)
    return Permutation(value)


def standardize(values: Sequence) -> Permutation:
    """Replace distinct comparable values by their ranks ``1..len(values)``."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0] * len(values)
    for rank, i in enumerate(order, 1):
        ranks[i] = rank
    return Permutation._trusted(ranks)


def flatten(p: Permutation, positions: Sequence[int]) -> Permutation:
    """Pattern formed by the entries of ``p`` at the given 1-based positions."""
    prev = 0
    for pos in positions:
        if not isinstance(pos, int) or pos <= prev or pos > len(p):
            raise IndexError(f"positions must be strictly increasing within 1..{len(p)}: {positions!r}")
        prev = pos
    return standardize([p[pos - 1] for pos in positions])


@dataclass(frozen=True)
class OccurrenceSet:
    """All occurrences of a pattern in a host permutation.

    ``tuples`` holds 1-based, strictly increasing position tuples in
    lexicographic order.
    """

    pattern_length: int
    tuples: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.tuples)

    def __contains__(self, item: object) -> bool:
        return item in self.tuples

    @property
    def count(self) -> int:
        return len(self.tuples)

    def as_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.tuples)

    def is_disjoint(self) -> bool:
        """True when no two occurrences share a position."""
        used: set[int] = set()
        for t in self.tuples:
            for pos in t:
                if pos in used:
                    return False
                used.add(pos)
        return True


@functools.lru_cache(maxsize=None)
def _constraints(q: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """For each pattern index j, the earlier index holding the nearest smaller
    and nearest larger pattern value (-1 if none)."""
    lo, hi = [], []
    for j, v in enumerate(q):
        below = [k for k in range(j) if q[k] < v]
        above = [k for k in range(j) if q[k] > v]
        lo.append(max(below, key=q.__getitem__) if below else -1)
        hi.append(min(above, key=q.__getitem__) if above else -1)
    return tuple(lo), tuple(hi)


def iter_occurrences(q: Sequence[int], p: Sequence[int], *, end: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield 0-based occurrence tuples of ``q`` in ``p`` in lexicographic order.

    If ``end`` is given, only occurrences whose last index equals ``end`` are
    produced.  Values of ``p`` may be any distinct comparable numbers.
    """
    q = tuple(q)
    m, n = len(q), len(p)
    if m == 0 or m > n:
        return
    lo, hi = _constraints(q)
    idx = [0] * m

    def rec(j: int, start: int) -> Iterator[tuple[int, ...]]:
        lo_v = p[idx[lo[j]]] if lo[j] >= 0 else None
        hi_v = p[idx[hi[j]]] if hi[j] >= 0 else None
        if j == m - 1 and end is not None:
            candidates: Iterable[int] = (end,) if end >= start else ()
        else:
            candidates = range(start, n - (m - j) + 1)
        for i in candidates:
            x = p[i]
            if (lo_v is None or x > lo_v) and (hi_v is None or x < hi_v):
                idx[j] = i
                if j == m - 1:
                    yield tuple(idx)
                else:
                    yield from rec(j + 1, i + 1)

    yield from rec(0, 0)


def occurrences(q: Permutation, p: Permutation) -> OccurrenceSet:
    if len(q) < 1:
        raise ValueError("pattern must be nonempty")
    tuples = tuple(tuple(i + 1 for i in t) for t in iter_occurrences(q, p))
    return OccurrenceSet(len(q), tuples)


def count_occurrences(q: Sequence[int], p: Sequence[int]) -> int:
    return sum(1 for _ in iter_occurrences(q, p))


def contains(p: Sequence[int], q: Sequence[int]) -> bool:
    return next(iter_occurrences(q, p), None) is not None


def occurrence_count_incremental(q: Permutation, p_prefix: Permutation, new_last_entry: int) -> int:
    """Number of new ``q`` occurrences created by appending a value.

    The new entry takes value ``new_last_entry`` in ``1..len(p_prefix)+1``;
    prefix values at or above it shift up by one.  Only occurrences that end
    at the new last position are counted.
    """
    n = len(p_prefix)
    if not 1 <= new_last_entry <= n + 1:
        raise ValueError(f"insertion value must lie in 1..{n + 1}, got {new_last_entry}")
    if len(q) > n + 1:
        return 0
    extended = [v + 1 if v >= new_last_entry else v for v in p_prefix]
    extended.append(new_last_entry)
    return sum(1 for _ in iter_occurrences(q, extended, end=n))


class Symmetry(str, enum.Enum):
    REVERSE = "reverse"
    COMPLEMENT = "complement"
    INVERSE = "inverse"
    REVERSE_COMPLEMENT = "reverse-complement"


def reverse(p: Permutation) -> Permutation:
    return Permutation._trusted(p[::-1])


def complement(p: Permutation) -> Permutation:
    n = len(p)
    return Permutation._trusted(n + 1 - v for v in p)


def inverse(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, v in enumerate(p, 1):
        inv[v - 1] = i
    return Permutation._trusted(inv)


def apply_symmetry(p: Permutation, s: Symmetry | str) -> Permutation:
    s = Symmetry(s)
    if s is Symmetry.REVERSE:
        return reverse(p)
    if s is Symmetry.COMPLEMENT:
        return complement(p)
    if s is Symmetry.INVERSE:
        return inverse(p)
    return reverse(complement(p))


def symmetry_class(p: Permutation) -> frozenset[Permutation]:
    """The orbit of ``p`` under the eight symmetries of the square."""
    orbit = set()
    for base in (p, inverse(p)):
        for x in (base, reverse(base), complement(base), reverse(complement(base))):
            orbit.add(x)
    return frozenset(orbit)


class SumMode(str, enum.Enum):
    DIRECT = "direct-sum"
    SKEW = "skew-sum"


def compose(a: Permutation, b: Permutation, mode: SumMode | str = SumMode.DIRECT) -> Permutation:
    """Direct sum (``b`` above-right of ``a``) or skew sum (``b`` below-right)."""
    mode = SumMode(mode)
    if mode is SumMode.DIRECT:
        k = len(a)
        return Permutation._trusted(tuple(a) + tuple(v + k for v in b))
    k = len(b)
    return Permutation._trusted(tuple(v + k for v in a) + tuple(b))


def direct_sum(*parts: Permutation) -> Permutation:
    return functools.reduce(lambda x, y: compose(x, y, SumMode.DIRECT), parts, Permutation(()))


def skew_sum(*parts: Permutation) -> Permutation:
    return functools.reduce(lambda x, y: compose(x, y, SumMode.SKEW), parts, Permutation(()))


def insert_block(p: Permutation, position: int, keys: Sequence[Fraction | int]) -> Permutation:
    """Insert entries with exact rational value keys at consecutive positions.

    Old and new entries are re-ranked together, so a key ``1.5`` (as a
    Fraction) lands between the existing values 1 and 2.
    """
    n = len(p)
    if not 1 <= position <= n + 1:
        raise IndexError(f"position must lie in 1..{n + 1}, got {position}")
    keys = [Fraction(k) for k in keys]
    if len(set(keys)) != len(keys):
        raise ValueError(f"duplicate keys: {keys!r}")
    for k in keys:
        if k.denominator == 1 and 1 <= k.numerator <= n:
            raise ValueError(f"key {k} collides with an existing value")
    seq = list(p[: position - 1]) + keys + list(p[position - 1:])
    return standardize(seq)


def delete_entry(p: Permutation, position: int) -> Permutation:
    if not 1 <= position <= len(p):
        raise IndexError(f"position must lie in 1..{len(p)}, got {position}")
    removed = p[position - 1]
    return Permutation._trusted(v - 1 if v > removed else v for i, v in enumerate(p, 1) if i != position)


def swap_positions(p: Permutation, i: int, j: int) -> Permutation:
    """Exchange the entries at 1-based positions ``i`` and ``j``."""
    entries = list(p)
    entries[i - 1], entries[j - 1] = entries[j - 1], entries[i - 1]
    return Permutation._trusted(entries)

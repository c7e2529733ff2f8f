"""Direct/skew sum decompositions and the structural hypothesis gate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import HypothesisViolation
from .perm import Permutation, SumMode, compose, contains

SEPARABILITY_OBSTRUCTIONS = (Permutation((2, 4, 1, 3)), Permutation((3, 1, 4, 2)))


@dataclass(frozen=True)
class ComponentList:
    mode: SumMode
    parts: tuple[Permutation, ...]

    def __len__(self) -> int:
        return len(self.parts)

    def compose(self) -> Permutation:
        result = Permutation(())
        for part in self.parts:
            result = compose(result, part, self.mode)
        return result


def sum_components(p: Permutation) -> ComponentList:
    """Maximal decomposition ``p = c_1 + ... + c_k`` into direct-sum components."""
    if len(p) == 0:
        raise ValueError("the empty permutation has no components")
    parts = []
    start, high = 0, 0
    for j, v in enumerate(p):
        high = max(high, v)
        if high == j + 1:
            parts.append(Permutation._trusted(x - start for x in p[start : j + 1]))
            start = j + 1
    return ComponentList(SumMode.DIRECT, tuple(parts))


def skew_components(p: Permutation) -> ComponentList:
    """Maximal decomposition of ``p`` into skew-sum components, top block first."""
    if len(p) == 0:
        raise ValueError("the empty permutation has no components")
    n = len(p)
    parts = []
    start, low = 0, n + 1
    for j, v in enumerate(p):
        low = min(low, v)
        if low == n - j:
            parts.append(Permutation._trusted(x - low + 1 for x in p[start : j + 1]))
            start = j + 1
    return ComponentList(SumMode.SKEW, tuple(parts))


def is_indecomposable(p: Permutation) -> bool:
    return len(sum_components(p)) == 1


def is_skew_indecomposable(p: Permutation) -> bool:
    return len(skew_components(p)) == 1


def is_separable(p: Permutation) -> bool:
    """True iff ``p`` avoids both 2413 and 3142."""
    return not any(contains(p, obstruction) for obstruction in SEPARABILITY_OBSTRUCTIONS)


@dataclass(frozen=True)
class HypothesisReport:
    pattern: Permutation
    is_indecomposable: bool
    is_skew_decomposable: bool
    skew_parts: ComponentList
    middle_parts_not_one: bool
    is_separable: bool
    lower_bound_applies: bool
    upper_bound_applies: bool
    both_bounds_apply: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "pattern": str(self.pattern),
            "is_indecomposable": self.is_indecomposable,
            "is_skew_decomposable": self.is_skew_decomposable,
            "skew_parts": [str(part) for part in self.skew_parts.parts],
            "middle_parts_not_one": self.middle_parts_not_one,
            "is_separable": self.is_separable,
            "lower_bound_applies": self.lower_bound_applies,
            "upper_bound_applies": self.upper_bound_applies,
            "both_bounds_apply": self.both_bounds_apply,
        }


def check_hypotheses(q: Permutation) -> HypothesisReport:
    """Evaluate which of the lower/upper bound constructions apply to ``q``.

    The lower bound needs ``q`` indecomposable with at least two skew
    components, none of the interior ones equal to ``1``.  The upper bound
    needs ``q`` separable and skew-decomposable.
    """
    if len(q) < 2:
        raise HypothesisViolation(f"pattern must have length at least 2, got {q!s}")
    skew = skew_components(q)
    indecomposable = is_indecomposable(q)
    skew_decomposable = len(skew) >= 2
    middle_ok = all(len(part) != 1 for part in skew.parts[1:-1])
    separable = is_separable(q)
    lower = indecomposable and skew_decomposable and middle_ok
    upper = separable and skew_decomposable
    return HypothesisReport(
        pattern=q,
        is_indecomposable=indecomposable,
        is_skew_decomposable=skew_decomposable,
        skew_parts=skew,
        middle_parts_not_one=middle_ok,
        is_separable=separable,
        lower_bound_applies=lower,
        upper_bound_applies=upper,
        both_bounds_apply=lower and upper,
    )

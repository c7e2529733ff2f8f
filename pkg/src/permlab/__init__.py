"""Permutations with a prescribed number of pattern occurrences.

Core objects, decompositions, explicit injections, exhaustive enumeration with
a persistent cache, and analysis helpers built on top of them.
"""

from __future__ import annotations

from .decomp import (
    ComponentList,
    HypothesisReport,
    check_hypotheses,
    is_indecomposable,
    is_separable,
    is_skew_indecomposable,
    skew_components,
    sum_components,
)
from .enumeration import (
    Distribution,
    RefinedCounts,
    count_avoiders,
    members,
    occurrence_distribution,
    refined_counts,
    refined_distribution,
    star_members,
)
from .errors import BudgetExceeded, HypothesisViolation, NotAPermutationError, PermlabError, ProofGapError
from .injections import (
    BlockPlan,
    VerificationReport,
    anchors,
    block_plan,
    extract_lower,
    inject_lower,
    reduce_intersecting,
    swap_upper,
    verify_lower,
    verify_upper,
)
from .perm import (
    OccurrenceSet,
    Permutation,
    SumMode,
    Symmetry,
    apply_symmetry,
    complement,
    compose,
    contains,
    count_occurrences,
    direct_sum,
    flatten,
    inverse,
    make_permutation,
    occurrence_count_incremental,
    occurrences,
    reverse,
    skew_sum,
    standardize,
    symmetry_class,
)
from .cache import CountTable, table_build

__version__ = "0.1.0"

from __future__ import annotations

import itertools

import pytest

import oracle
from permlab import (
    HypothesisViolation,
    Permutation,
    check_hypotheses,
    complement,
    direct_sum,
    is_separable,
    skew_components,
    skew_sum,
    sum_components,
)

P = Permutation


def names(parts):
    return [str(x) for x in parts.parts]


@pytest.mark.parametrize("p,expected", [("1324", ["1", "21", "1"]), ("231", ["231"]), ("123", ["1", "1", "1"])])
def test_sum_components(p, expected):
    assert names(sum_components(P(p))) == expected


@pytest.mark.parametrize("p,expected", [("4231", ["1", "12", "1"]), ("231", ["12", "1"]), ("3142", ["3142"])])
def test_skew_components(p, expected):
    assert names(skew_components(P(p))) == expected


@pytest.mark.parametrize("n", range(1, 8))
def test_components_round_trip_and_maximality(n):
    for p in map(P, itertools.permutations(range(1, n + 1))):
        for split, glue in ((sum_components, direct_sum), (skew_components, skew_sum)):
            comps = split(p)
            assert comps.compose() == p == glue(*comps.parts)
            assert all(len(split(part)) == 1 for part in comps.parts)


@pytest.mark.parametrize("n", range(1, 7))
def test_complement_conjugates_components(n):
    for p in map(P, itertools.permutations(range(1, n + 1))):
        assert [complement(c) for c in sum_components(p).parts] == list(skew_components(complement(p)).parts)


def test_separable_examples():
    assert not is_separable(P("3142"))
    assert not is_separable(P("2413"))
    assert is_separable(P("4231"))


@pytest.mark.parametrize("n", range(1, 9))
def test_separable_matches_tree_oracle(n):
    perms = itertools.permutations(range(1, n + 1))
    if n == 8:
        perms = itertools.islice(perms, 0, None, 7)
    for p in perms:
        assert is_separable(P(p)) == oracle.separable_by_tree(p)


def test_hypotheses_examples():
    r = check_hypotheses(P("231"))
    assert (r.lower_bound_applies, r.upper_bound_applies, r.both_bounds_apply) == (True, True, True)
    r = check_hypotheses(P("4312"))
    assert names(r.skew_parts) == ["1", "1", "12"]
    assert (r.lower_bound_applies, r.upper_bound_applies, r.both_bounds_apply) == (False, True, False)
    r = check_hypotheses(P("3142"))
    assert (r.lower_bound_applies, r.upper_bound_applies, r.both_bounds_apply) == (False, False, False)


def test_hypotheses_json_shape():
    d = check_hypotheses(P("4231")).to_dict()
    assert d["skew_parts"] == ["1", "12", "1"] and d["both_bounds_apply"] is True


def test_hypotheses_rejects_short():
    with pytest.raises(HypothesisViolation):
        check_hypotheses(P("1"))

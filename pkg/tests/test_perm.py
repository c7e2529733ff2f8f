from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from permlab import (
    NotAPermutationError,
    Permutation,
    Symmetry,
    apply_symmetry,
    complement,
    contains,
    count_occurrences,
    direct_sum,
    flatten,
    inverse,
    occurrence_count_incremental,
    occurrences,
    reverse,
    skew_sum,
    standardize,
    symmetry_class,
)
from permlab.perm import delete_entry, insert_block, swap_positions

P = Permutation


def perms(max_n=7):
    return st.integers(0, max_n).flatmap(lambda n: st.permutations(range(1, n + 1))).map(P)


class TestConstruction:
    def test_from_list(self):
        assert P([2, 3, 1]) == P("231")
        assert str(P([2, 3, 1])) == "231"

    def test_empty(self):
        assert len(P([])) == 0
        assert P.parse("") == P(())

    @pytest.mark.parametrize("bad", [[1, 1, 2], [0, 1], [2, 3], [1, 2, 4]])
    def test_rejects_non_permutations(self, bad):
        with pytest.raises(NotAPermutationError, match="not a permutation"):
            P(bad)

    def test_comma_form_for_long(self):
        p = P([10, 3, 1, 2, 4, 5, 6, 7, 8, 9])
        assert str(p) == "10,3,1,2,4,5,6,7,8,9"
        assert P.parse(str(p)) == p
        assert P.parse("2,3,1") == P("231")


class TestFlatten:
    def test_examples(self):
        assert flatten(P("4231"), (2, 3, 4)) == P("231")
        assert flatten(P("153426"), (3, 4, 5)) == P("231")
        assert flatten(P("312"), ()) == P(())

    def test_rejects_unsorted(self):
        with pytest.raises(IndexError):
            flatten(P("4231"), (3, 2))

    @given(st.permutations(range(1, 8)).map(P), st.data())
    def test_matches_reference(self, p, data):
        pos = sorted(data.draw(st.sets(st.integers(1, len(p)))))
        assert tuple(flatten(p, pos)) == oracle.pattern_of([p[i - 1] for i in pos])


class TestOccurrences:
    def test_examples(self):
        occ = occurrences(P("21"), P("231"))
        assert occ.as_set() == {(1, 3), (2, 3)} and occ.count == 2
        assert list(occurrences(P("231"), P("4231"))) == [(2, 3, 4)]
        assert count_occurrences(P("12"), P("1234")) == 6

    def test_lexicographic_order(self):
        occ = occurrences(P("12"), P("2413"))
        assert list(occ) == sorted(occ)

    @settings(max_examples=150)
    @given(perms(3).filter(len), perms(7))
    def test_matches_brute_force(self, q, p):
        assert list(occurrences(q, p)) == oracle.occurrence_tuples(q, p)
        assert contains(p, q) == bool(oracle.count(q, p))

    def test_incremental_examples(self):
        assert occurrence_count_incremental(P("21"), P("12"), 1) == 2
        assert occurrence_count_incremental(P("21"), P("12"), 3) == 0
        assert occurrence_count_incremental(P("321"), P(()), 1) == 0

    @pytest.mark.parametrize("q", ["21", "231", "3412", "1324"])
    def test_incremental_sum_is_total(self, q):
        q = P(q)
        for n in range(1, 8):
            for p in itertools.permutations(range(1, n + 1)):
                running = 0
                for d in range(1, n + 1):
                    prefix = standardize(p[: d - 1])
                    new = sorted(p[:d]).index(p[d - 1]) + 1
                    running += occurrence_count_incremental(q, prefix, new)
                assert running == count_occurrences(q, p)
            if n >= 6 and len(q) > 2:
                break


class TestSymmetries:
    def test_examples(self):
        assert complement(P("231")) == P("213")
        assert reverse(P("231")) == P("132")
        assert inverse(P("231")) == P("312")

    @given(perms(8))
    def test_involutions(self, p):
        for s in Symmetry:
            assert apply_symmetry(apply_symmetry(p, s), s) == p

    def test_class_size(self):
        assert symmetry_class(P("231")) == {P(x) for x in ("231", "132", "213", "312")}
        assert len(symmetry_class(P("2413"))) == 2

    @pytest.mark.parametrize("q", ["12", "231", "321", "3412", "4213", "2413"])
    def test_equivariance(self, q):
        q = P(q)
        for n in range(len(q), 7):
            for p in map(P, itertools.permutations(range(1, n + 1))):
                c = count_occurrences(q, p)
                for s in Symmetry:
                    assert count_occurrences(apply_symmetry(q, s), apply_symmetry(p, s)) == c
            if n >= 6 - (len(q) == 4):
                break


class TestSums:
    def test_examples(self):
        assert skew_sum(P("12"), P("1")) == P("231")
        assert direct_sum(P("12"), P("1")) == P("123")
        assert skew_sum(P("1"), skew_sum(P("12"), P("1"))) == P("4231")

    @given(perms(4), perms(4), perms(4))
    def test_associative(self, a, b, c):
        assert direct_sum(direct_sum(a, b), c) == direct_sum(a, direct_sum(b, c))
        assert skew_sum(skew_sum(a, b), c) == skew_sum(a, skew_sum(b, c))

    @given(perms(5), perms(5))
    def test_complement_swaps_modes(self, a, b):
        assert complement(direct_sum(a, b)) == skew_sum(complement(a), complement(b))


class TestEditing:
    def test_insert_examples(self):
        keys = [Fraction(3, 2), Fraction(7, 4), Fraction(5, 4)]
        assert insert_block(P("123"), 3, keys) == P("153426")
        assert insert_block(P(()), 1, [Fraction(1, 5), Fraction(1, 10)]) == P("21")
        assert insert_block(P("12"), 2, []) == P("12")

    def test_insert_rejects_collision(self):
        with pytest.raises(ValueError):
            insert_block(P("12"), 1, [2])
        with pytest.raises(ValueError):
            insert_block(P("12"), 1, [Fraction(1, 2), Fraction(1, 2)])

    def test_delete_examples(self):
        assert delete_entry(P("321"), 1) == P("21")
        p = P("153426")
        assert list(occurrences(P("231"), p)) == [(3, 4, 5)]
        for pos in (5, 4, 3):
            p = delete_entry(p, pos)
        assert p == P("123")
        assert delete_entry(P("1"), 1) == P(())

    def test_swap(self):
        assert swap_positions(P("2143"), 1, 2) == P("1243")

from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

import oracle
from permlab import Permutation, count_avoiders, occurrence_distribution
from permlab.analysis import (
    CountSource,
    closed_form,
    inequality_audit,
    ratio_table,
    regev_ratio,
    resolve_1342_linear_coefficient,
    series_1342,
    series_1342_report,
    wilf_partition,
)

P = Permutation


def test_closed_form_examples():
    assert closed_form("catalan", 4) == 14
    assert closed_form("noonan321", 5) == 27
    assert closed_form("bona231", 4) == 5


@pytest.mark.parametrize("n", range(3, 9))
def test_closed_forms_match_brute_force(n):
    assert closed_form("noonan321", n) == oracle.distribution("321", n)[1]
    assert closed_form("bona231", n) == oracle.distribution("231", n)[1]
    assert closed_form("catalan", n) == oracle.distribution("231", n)[0]


def test_unknown_closed_form():
    with pytest.raises(ValueError):
        closed_form("nope", 3)


class TestSeries:
    def test_printed_coefficient_breaks_constant_term(self):
        assert series_1342(3).coefficients[0] == Fraction(4, 3)

    def test_resolved_coefficient(self):
        c = resolve_1342_linear_coefficient()
        assert c == 20
        assert [int(x) for x in series_1342(5, c).coefficients] == [1, 1, 2, 6, 23, 103]

    def test_zero_order(self):
        assert len(series_1342(0, 20).coefficients) == 1

    def test_matches_enumeration(self):
        coeffs = series_1342(7, 20).coefficients
        assert all(c.denominator == 1 for c in coeffs)
        assert [int(c) for c in coeffs] == [count_avoiders("1342", n) for n in range(8)]

    def test_report(self):
        report = series_1342_report(6)
        assert report["printed_constant_term"] == "4/3"
        assert report["resolved_matches_brute_force"] and not report["printed_matches_brute_force"]


class TestRegev:
    def test_examples(self):
        rows = regev_ratio(3, 10)
        assert rows[0][:2] == (1, Fraction(1, 16))
        assert [r[1] for r in regev_ratio(2, 5)] == [1] * 5

    def test_k3_values(self):
        # |S_n(321)|^2 * n^3 / 2^{4n} in squared form, compared exactly.
        for n, value, form in regev_ratio(3, 8):
            assert form == "squared"
            assert value == Fraction(oracle.catalan(n) ** 2 * n**3, 16**n)


class TestRatioTable:
    def test_examples(self):
        assert ratio_table("3412", 1, 4).rows[-1][3] == Fraction(1, 92)
        table = ratio_table("231", 1, 6)
        assert table.rows[-1][3] == Fraction(7, 66)
        assert table.max == Fraction(7, 66)

    def test_min_max_over_positive(self):
        table = ratio_table("3412", 1, 8)
        positive = [row[3] for row in table.rows if row[3] > 0]
        assert (table.min, table.max) == (min(positive), max(positive))
        assert table.to_rows()[0]["rho"] == "0"


class TestWilf:
    def test_length_two(self):
        assert [set(map(str, b)) for b in wilf_partition(2, 6, 2).blocks] == [{"12", "21"}]

    def test_length_three(self):
        blocks = {frozenset(map(str, b)) for b in wilf_partition(3, 6, 2).blocks}
        assert blocks == {frozenset({"123", "321"}), frozenset({"132", "213", "231", "312"})}

    def test_blocks_are_closed_under_symmetry(self):
        part = wilf_partition(4, 6, 2)
        from permlab import symmetry_class
        for block in part.blocks:
            for p in block:
                assert symmetry_class(p) <= set(block)

    def test_signature_agrees_with_brute_force(self):
        part = wilf_partition(4, 6, 1)
        for block in part.blocks:
            sigs = {tuple(oracle.distribution(str(p), 6)[r] for r in range(2)) for p in block}
            assert len(sigs) == 1


class TestAudit:
    def test_examples(self):
        report = inequality_audit("231", 6, 1)
        lower = [c for c in report.checks if c["family"] == "lower" and c["n"] == 6 and c["r"] == 1]
        assert lower and lower[0]["lhs"] == 84 and lower[0]["rhs"] == 2
        report = inequality_audit("21", 3, 2)
        star = [c for c in report.checks if c["family"] == "star" and c["n"] == 3 and c["r"] == 2]
        assert star and star[0]["lhs"] == 0 and star[0]["rhs"] == 6

    def test_3412(self):
        report = inequality_audit("3412", 9, 2)
        assert report.passed and not report.failures


def test_count_source_uses_cache(tmp_path):
    src = CountSource(tmp_path)
    assert src.count(P("231"), 6, 1) == 84
    assert (tmp_path / "231.jsonl").exists()
    assert src.avoiders(P("231"), 6) == 132

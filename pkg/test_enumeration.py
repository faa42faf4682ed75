"""
Tests for brute-force enumeration against the counting recurrences
"""

import io

import pytest

from counting import build_fk_tables, f_trace
from enumeration import (HARD_CAP, EnumerationConfig, FormulaEnumerator, count_by_enumeration,
                         count_by_k, enumerate_formulas, minimum_size)
from errors import CapExceeded
from formula import ARITHMETIC, EXPONENTIAL, Trace, validate


def test_six_formulas_for_four():
    formulas = list(enumerate_formulas(4))
    assert len(formulas) == 6
    assert len({a.key for a in formulas}) == 6
    assert all(validate(a).valid and a.value == 4 for a in formulas)


@pytest.mark.parametrize("n", range(1, 11))
def test_counts_match_recurrence(n, f_tables, fexp_table):
    assert count_by_enumeration(n) == f_tables[0][n]
    assert count_by_enumeration(n, EXPONENTIAL) == fexp_table[n]


def test_grouped_by_multiplications():
    assert count_by_k(5) == {0: 14, 1: 2}
    assert count_by_k(4) == {0: 5, 1: 1}


def test_group_by_k_config_groups_count():
    grouped = FormulaEnumerator(EnumerationConfig(group_by_k=True))
    assert grouped.count(6) == grouped.count_by_k(6)
    assert sum(grouped.count(6).values()) == FormulaEnumerator().count(6) == 52
    assert FormulaEnumerator(EnumerationConfig()).count(4) == 6


def test_grouped_by_k_matches_tables():
    tables = build_fk_tables(3, 10)
    enumerator = FormulaEnumerator()
    for n in range(1, 11):
        counts = enumerator.count_by_k(n)
        assert all(counts.get(k, 0) == tables[k][n] for k in range(4))


def test_grouped_by_trace_matches_trace_formula():
    tables = build_fk_tables(3, 10)
    enumerator = FormulaEnumerator()
    for n in (5, 8, 10):
        for trace, count in enumerator.count_by_trace(n).items():
            assert f_trace(trace, n, tables) == count
    assert enumerator.count_by_trace(5) == {Trace(): 14, Trace(1, (0,), (0,)): 2}


def test_exponential_formulas_may_use_pow():
    keys = {a.key for a in enumerate_formulas(4, EXPONENTIAL)}
    assert '∧+11+11' in keys
    assert len(keys) == 7


def test_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_formulas(13))
    with pytest.raises(CapExceeded):
        EnumerationConfig(max_n=HARD_CAP + 1)


def test_dump_writes_polish_lines():
    out = io.StringIO()
    written = FormulaEnumerator().dump(3, out)
    assert written == 2
    assert sorted(out.getvalue().split()) == ['++111', '+1+11']


def test_minimum_size():
    assert [minimum_size(n, EXPONENTIAL) for n in range(1, 7)] == [1, 3, 5, 7, 9, 9]
    assert minimum_size(6, ARITHMETIC) == 9


def test_memo_threshold_does_not_change_results():
    small = FormulaEnumerator(EnumerationConfig(memo_threshold=2))
    large = FormulaEnumerator(EnumerationConfig(memo_threshold=10))
    assert [a.key for a in small.enumerate(9)] == [a.key for a in large.enumerate(9)]

"""
Tests for the counting recurrences, traces and f_k tables
"""

import pytest

from counting import (CountTable, build_f0_table, build_fexp_parts, build_fk_table, build_fk_tables,
                      build_ftrace_table, catalan, check_f_invariants, check_partition_identity,
                      enumerate_traces, f0, f_trace, max_multiplications, perfect_power_pairs,
                      proper_convolution, proper_divisors, trace_count)
from errors import IndexOutOfTable, MissingTable
from formula import Trace, count_mul_nodes
from notation import parse_infix

F_VALUES = [1, 1, 2, 6, 16, 52]


def test_f_first_values(f_tables):
    f, f_plus, f_times = f_tables
    assert [f[n] for n in range(1, 7)] == F_VALUES
    assert f_plus[6] == 48 and f_times[6] == 4
    assert f_plus[1] == 1 and f_times[1] == 0


def test_f_times_vanishes_on_primes(f_tables):
    _, _, f_times = f_tables
    assert all(f_times[p] == 0 for p in (2, 3, 5, 7, 11, 13, 59))


def test_invariants_hold(f_tables, f0_table):
    check_f_invariants(*f_tables, f0_table=f0_table)


def test_catalan():
    assert [catalan(m) for m in range(6)] == [1, 1, 2, 5, 14, 42]
    assert f0(10) == 4862
    table = build_f0_table(12)
    assert table[10] == 4862
    assert all(table[n] == f0(n) for n in range(1, 13))


def test_fexp_first_values(fexp_table, f_tables):
    assert fexp_table[4] == 7
    assert all(fexp_table[n] == f_tables[0][n] for n in (1, 2, 3))
    assert fexp_table[5] == 18
    assert all(fexp_table[n] >= f_tables[0][n] for n in range(1, 61))


def test_fexp_without_pow_is_f(f_tables):
    parts = build_fexp_parts(60, allow_pow=False)
    assert sorted(parts) == ['f_exp_nopow', 'f_exp_nopow_plus', 'f_exp_nopow_times']
    assert parts['f_exp_nopow'].values == f_tables[0].values
    assert parts['f_exp_nopow_times'].values == f_tables[2].values
    assert 'f_exp_pow' in build_fexp_parts(20)


def test_divisors_and_powers():
    assert proper_divisors(12) == [2, 3, 4, 6]
    assert proper_divisors(7) == []
    assert proper_divisors(1) == []
    assert perfect_power_pairs(64) == [(2, 6), (4, 3), (8, 2)]
    assert perfect_power_pairs(12) == []


def test_proper_convolution(f_tables):
    f = f_tables[0]
    assert proper_convolution(f, f, 6) == 4
    assert proper_convolution(f, f, 7) == 0


def test_table_bounds():
    table = CountTable('f', [0, 1, 1])
    with pytest.raises(IndexOutOfTable):
        table[3]
    with pytest.raises(IndexOutOfTable):
        table[0]
    assert CountTable('f_3', [0]).k == 3
    assert CountTable('f_plus', [0]).k is None


def test_trace_counts():
    assert trace_count(0) == 1
    assert trace_count(1) == 1
    assert trace_count(2) == 3
    assert enumerate_traces(0) == [Trace()]
    assert enumerate_traces(2) == sorted([Trace(1, (1,), (0,)), Trace(1, (0,), (1,)),
                                          Trace(2, (0, 0), (0, 0))])


@pytest.mark.parametrize("k", range(5))
def test_trace_enumeration_matches_count(k):
    traces = enumerate_traces(k)
    assert len(traces) == trace_count(k)
    assert all(trace.weight == k for trace in traces)


def test_single_product_trace():
    tables = build_fk_tables(1, 5)
    assert f_trace(Trace(1, (0,), (0,)), 5, tables) == 2
    assert f_trace(Trace(), 5, tables) == 14


def test_trace_table_matches_pointwise():
    tables = build_fk_tables(1, 14)
    for trace in enumerate_traces(2):
        table = build_ftrace_table(trace, 14, tables)
        assert table.max_n == 14
        assert all(table[n] == f_trace(trace, n, tables) for n in range(1, 15))


def test_missing_table():
    tables = build_fk_tables(0, 10)
    with pytest.raises(MissingTable):
        f_trace(Trace(1, (1,), (0,)), 10, tables)


def test_fk_small_values():
    tables = build_fk_tables(2, 8)
    assert tables[0][5] == 14
    assert tables[1][5] == 2
    assert tables[1][4] == 1
    assert tables[2][8] == 3
    assert tables[2][7] == 0
    assert build_fk_table(1, 8)[6] == tables[1][6]


def test_five_products_first_appear_at_twenty():
    formula = parse_infix("(1+1)(1+1)+((1+1)(1+1)+((1+1)(1+1)+((1+1)(1+1)+(1+1)(1+1))))")
    assert formula.value == 20
    assert count_mul_nodes(formula) == 5
    assert max_multiplications(20) == 5
    tables = build_fk_tables(5, 20)
    assert tables[5][20] == 78
    assert all(tables[5][n] == 0 for n in range(1, 20))
    assert tables[4][16] > 0


def test_fk_nonzero_beyond_log2(f_tables):
    tables = check_partition_identity(40, f_tables[0].truncated(40))
    assert max(tables) == 10
    assert tables[10][40] > 0
    assert all(tables[10][n] == 0 for n in range(1, 40))
    # value 4k is reached only by sums of (1+1)(1+1), (1+1)((1+1)(1+1)) and its mirror
    tight = {1: 1, 2: 3}
    for k in range(3, 11):
        tight[k] = sum(tight[i] * tight[k - i] for i in range(1, k))
    assert all(tables[k][4 * k] == tight[k] for k in range(1, 11))
    assert any(tables[k][n] for n in range(1, 41) for k in tables if k > n.bit_length() - 1)


def test_partition_identity(f_tables):
    check_partition_identity(40, f_tables[0].truncated(40))


def test_f_below_eight_to_the_n(f_tables):
    f = f_tables[0]
    assert all(f[n] < 8 ** n for n in range(1, 61))

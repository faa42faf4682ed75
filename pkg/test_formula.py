"""
Tests for formula trees: construction, validation, size and traces
"""

import pytest

from errors import MalformedTree, MulByOne, PowDisallowed
from formula import (ARITHMETIC, EXPONENTIAL, TWO, Formula, Kind, Trace, check,
                     count_mul_nodes, evaluate, has_pow, size, trace_of, validate, walk)

ONE = Formula.leaf()
THREE = Formula.add(TWO, ONE)


def test_leaf_and_two():
    assert ONE.value == 1 and ONE.size == 1
    assert TWO.value == 2 and TWO.size == 3
    assert TWO.key == '+11'


def test_values_and_sizes():
    four = Formula.mul(TWO, TWO)
    assert four.value == 4
    assert size(four) == 7
    eight = Formula.pow(TWO, THREE)
    assert evaluate(eight) == 8
    assert eight.size == 9


def test_equality_is_structural():
    assert Formula.add(TWO, ONE) == THREE
    assert Formula.add(ONE, TWO) != THREE
    assert hash(Formula.add(TWO, ONE)) == hash(THREE)


def test_walk_is_preorder():
    formula = Formula.mul(THREE, TWO)
    kinds = [node.kind for _, node in walk(formula)]
    assert kinds == [Kind.MUL, Kind.ADD, Kind.ADD, Kind.LEAF, Kind.LEAF, Kind.LEAF,
                     Kind.ADD, Kind.LEAF, Kind.LEAF]
    assert [i for i, _ in walk(formula)] == list(range(9))


def test_multiplication_by_one_rejected():
    bad = Formula(Kind.MUL, TWO, ONE)
    result = validate(bad)
    assert not result.valid
    assert isinstance(result.error, MulByOne)
    assert result.position == 0


def test_violation_position_points_at_inner_node():
    bad = Formula.add(ONE, Formula(Kind.MUL, ONE, TWO))
    result = validate(bad)
    assert isinstance(result.error, MulByOne)
    assert result.position == 2


def test_pow_needs_exponential_kinds():
    eight = Formula.pow(TWO, THREE)
    assert isinstance(validate(eight, ARITHMETIC).error, PowDisallowed)
    assert validate(eight, EXPONENTIAL).valid
    with pytest.raises(PowDisallowed):
        check(eight)


def test_pow_with_exponent_one_rejected():
    assert isinstance(validate(Formula(Kind.POW, TWO, ONE), EXPONENTIAL).error, MulByOne)


def test_wrong_cached_value_detected():
    lying = Formula(Kind.ADD, TWO, ONE, value=4)
    assert isinstance(validate(lying).error, MalformedTree)
    with pytest.raises(MalformedTree):
        evaluate(lying)


def test_missing_child_is_malformed():
    assert isinstance(validate(Formula(Kind.ADD, TWO)).error, MalformedTree)


def test_counts():
    formula = Formula.add(Formula.mul(TWO, TWO), ONE)
    assert count_mul_nodes(formula) == 1
    assert not has_pow(formula)


def test_trace_of_sum_of_products():
    # (2×2) + (2×(2×2)): two primitive products
    inner = Formula.mul(TWO, TWO)
    formula = Formula.add(inner, Formula.mul(TWO, inner))
    assert trace_of(formula) == Trace(2, (0, 0), (0, 1))
    assert trace_of(formula).weight == 3


def test_trace_of_addition_only_is_zero():
    assert trace_of(THREE) == Trace()


def test_trace_rejects_pow():
    with pytest.raises(PowDisallowed):
        trace_of(Formula.pow(TWO, TWO))


def test_trace_shape_checked():
    with pytest.raises(ValueError):
        Trace(2, (0,), (0, 0))

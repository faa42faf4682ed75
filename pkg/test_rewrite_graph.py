"""
Tests for the rewrite graph G_n
"""

import io

import pytest

from analytic import PUBLISHED
from errors import CapExceeded, PowDisallowed
from formula import ARITHMETIC, validate
from notation import parse_infix
from rewrite_graph import (Rule, build_graph, degree_report, neighbors, rewrite_steps, stats,
                           write_dot, write_edge_list)


def test_associativity_neighbors():
    formula = parse_infix("(1+1)+(1+1)")
    assert neighbors(formula) == {parse_infix("((1+1)+1)+1"), parse_infix("1+(1+(1+1))")}


def test_identical_children_do_not_commute():
    formula = parse_infix("(1+1)+(1+1)")
    rules = {step.rule for step, _ in rewrite_steps(formula)}
    assert Rule.COMM_SWAP not in rules
    assert rules == {Rule.ASSOC_LEFT, Rule.ASSOC_RIGHT}
    assert formula not in neighbors(formula)


def test_expansion_blocked_by_factor_one():
    formula = parse_infix("(1+1)×(1+(1+1))")
    assert all(step.rule is not Rule.DISTRIB_EXPAND for step, _ in rewrite_steps(formula))


def test_expand_and_factor_are_inverse():
    product = parse_infix("(1+1)×((1+1)+(1+1))")
    expanded = parse_infix("(1+1)×(1+1)+(1+1)×(1+1)")
    assert expanded in neighbors(product)
    assert product in neighbors(expanded)


def test_rewrite_positions_are_preorder():
    formula = parse_infix("((1+1)+1)+1")
    positions = {step.position for step, _ in rewrite_steps(formula)}
    assert positions == {0, 1}


def test_pow_rejected():
    with pytest.raises(PowDisallowed):
        neighbors(parse_infix("(1+1)^(1+1)"))


def test_graph_for_three():
    graph = build_graph(3)
    assert graph.number_of_nodes() == 2
    assert graph.number_of_edges() == 1
    report = degree_report(graph)
    assert report.addition_only_degrees == [1, 1]
    assert report.f0_minus_one == 1
    assert report.addition_only_agrees


@pytest.mark.parametrize("n, vertices", [(4, 6), (5, 16), (6, 52)])
def test_vertex_counts(n, vertices):
    assert build_graph(n).number_of_nodes() == vertices


def test_graph_for_four():
    graph = build_graph(4)
    graph_stats = stats(graph)
    assert graph_stats.vertex_count == 6
    assert len(graph_stats.addition_only_degrees) == 5
    # (1+1)×(1+1) has no rewrite
    assert graph.degree['×+11+11'] == 0
    assert graph_stats.component_count == 2
    assert graph_stats.mul_root_reachable_from_horner
    report = degree_report(graph)
    assert report.f0_minus_one == 4


def test_degree_report_takes_growth_constant():
    graph = build_graph(5)
    published = degree_report(graph)
    assert published.growth_constant == float(PUBLISHED['degree_constant_C'])
    report = degree_report(graph, 2.0)
    assert report.growth_constant == 2.0
    assert report.size_over_c_power == 16 / 2.0 ** 5
    assert report.to_json()['growth_constant'] == 2.0
    with pytest.raises(ValueError):
        degree_report(graph, 1.0)


def test_edges_symmetric_and_value_preserving():
    for n in range(3, 8):
        graph = build_graph(n)
        for u, v in graph.edges():
            a = graph.nodes[u]['formula']
            b = graph.nodes[v]['formula']
            assert a.value == b.value == n
            assert validate(b, ARITHMETIC).valid
            assert a in neighbors(b) and b in neighbors(a)


def test_degree_cap():
    graph = build_graph(7)
    for key, degree in graph.degree():
        internal = (graph.nodes[key]['formula'].size - 1) // 2
        assert degree <= 5 * internal


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        build_graph(11)


def test_exports():
    graph = build_graph(3)
    edges = io.StringIO()
    write_edge_list(graph, edges)
    assert edges.getvalue() == "++111\t+1+11\n"
    dot = io.StringIO()
    write_dot(graph, dot)
    text = dot.getvalue()
    assert text.startswith("graph G_3 {")
    assert '"++111" -- "+1+11";' in text
    assert text.rstrip().endswith("}")


def test_threads_give_same_graph():
    single = build_graph(6)
    threaded = build_graph(6, threads=4)
    assert set(map(frozenset, single.edges())) == set(map(frozenset, threaded.edges()))


@pytest.mark.slow
@pytest.mark.parametrize("n", range(8, 11))
def test_vertex_count_equals_f(n, f_tables):
    graph = build_graph(n)
    assert graph.number_of_nodes() == f_tables[0][n]
    report = degree_report(graph)
    assert report.max_degree == max(d for _, d in graph.degree())

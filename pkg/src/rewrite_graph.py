"""
Rewrite Graph
Vertices are the arithmetic formulas for n; two formulas are adjacent when
one commutation, association or distribution at a single node turns one
into the other.
"""

import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Set, TextIO, Tuple

import networkx as nx

from analytic import PUBLISHED
from counting import f0
from encoders import horner_arithmetic
from enumeration import EnumerationConfig, FormulaEnumerator
from errors import CapExceeded, PowDisallowed, VerificationFailure
from formula import ARITHMETIC, Formula, Kind, count_mul_nodes, has_pow
from notation import to_infix

DEFAULT_GRAPH_CAP = 10

# Each internal node admits at most this many local rewrites
DEGREE_PER_NODE = 5


class Rule(Enum):
    COMM_SWAP = 'CommSwap'
    ASSOC_LEFT = 'AssocLeft'
    ASSOC_RIGHT = 'AssocRight'
    DISTRIB_EXPAND = 'DistribExpand'
    DISTRIB_FACTOR = 'DistribFactor'


@dataclass(frozen=True)
class RewriteStep:
    """
    Args:
        rule: Rewrite rule
        position: Pre-order index of the node it is applied at
    """
    rule: Rule
    position: int


def _local_rewrites(node: Formula) -> Iterator[Tuple[Rule, Formula]]:
    """Rewrites applied at the node itself"""
    if node.kind is Kind.LEAF:
        return
    kind, a, b = node.kind, node.left, node.right
    if a != b:
        yield Rule.COMM_SWAP, Formula(kind, b, a)
    if b.kind is kind:
        yield Rule.ASSOC_LEFT, Formula(kind, Formula(kind, a, b.left), b.right)
    if a.kind is kind:
        yield Rule.ASSOC_RIGHT, Formula(kind, a.left, Formula(kind, a.right, b))

    if kind is Kind.MUL:
        # a × (x + y) -> a×x + a×y, only when no product gets a factor 1
        if b.kind is Kind.ADD and b.left.value >= 2 and b.right.value >= 2:
            yield Rule.DISTRIB_EXPAND, Formula.add(Formula.mul(a, b.left), Formula.mul(a, b.right))
        if a.kind is Kind.ADD and a.left.value >= 2 and a.right.value >= 2:
            yield Rule.DISTRIB_EXPAND, Formula.add(Formula.mul(a.left, b), Formula.mul(a.right, b))
    elif kind is Kind.ADD and a.kind is Kind.MUL and b.kind is Kind.MUL:
        if a.left == b.left:
            yield Rule.DISTRIB_FACTOR, Formula.mul(a.left, Formula.add(a.right, b.right))
        if a.right == b.right:
            yield Rule.DISTRIB_FACTOR, Formula.mul(Formula.add(a.left, b.left), a.right)


def rewrite_steps(formula: Formula, position: int = 0) -> Iterator[Tuple[RewriteStep, Formula]]:
    """Every single-node rewrite of formula with the step that produces it"""
    for rule, result in _local_rewrites(formula):
        yield RewriteStep(rule, position), result
    if formula.kind is Kind.LEAF:
        return
    left, right = formula.left, formula.right
    for step, new_left in rewrite_steps(left, position + 1):
        yield step, Formula(formula.kind, new_left, right)
    for step, new_right in rewrite_steps(right, position + 1 + left.size):
        yield step, Formula(formula.kind, left, new_right)


def neighbors(formula: Formula) -> Set[Formula]:
    """
    Distinct formulas one rewrite away, the formula itself excluded

    Raises:
        PowDisallowed: formula contains ∧
    """
    if has_pow(formula):
        raise PowDisallowed("the rewrite graph is defined on arithmetic formulas")
    return {result for _, result in rewrite_steps(formula) if result != formula}


def _neighbor_keys(formula: Formula) -> Tuple[str, List[str]]:
    found = neighbors(formula)
    for result in found:
        if result.value != formula.value:
            raise VerificationFailure('value-preserving', f"{formula.key} -> {result.key}")
    internal = (formula.size - 1) // 2
    if len(found) > DEGREE_PER_NODE * internal:
        raise VerificationFailure('degree-cap', formula.key)
    return formula.key, sorted(result.key for result in found)


def build_graph(n: int, cap: int = DEFAULT_GRAPH_CAP, threads: int = 1) -> nx.Graph:
    """
    G_n as an undirected networkx graph keyed by Polish notation

    Node attributes: `formula`, `addition_only`, `mul_root`.

    Raises:
        CapExceeded: n above the graph cap
        VerificationFailure: an edge is one-directional or changes the value
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise CapExceeded(n, cap)
    print(f"🔢 Building rewrite graph for n={n}", file=sys.stderr)
    enumerator = FormulaEnumerator(EnumerationConfig(max_n=max(n, cap), kinds=ARITHMETIC))
    formulas = list(enumerator.enumerate(n))

    graph = nx.Graph(n=n)
    for formula in formulas:
        graph.add_node(formula.key, formula=formula,
                       addition_only=count_mul_nodes(formula) == 0,
                       mul_root=formula.kind is Kind.MUL)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            adjacency = dict(executor.map(_neighbor_keys, formulas))
    else:
        adjacency = dict(map(_neighbor_keys, formulas))

    for key, found in adjacency.items():
        for other in found:
            if other not in adjacency:
                raise VerificationFailure('closed', f"{key} -> {other}")
            if key not in adjacency[other]:
                raise VerificationFailure('symmetric', f"{key} -> {other}")
            graph.add_edge(key, other)
    print(f"✅ G_{n}: {graph.number_of_nodes()} vertices, "
          f"{graph.number_of_edges()} edges", file=sys.stderr)
    return graph


@dataclass
class GraphStats:
    n: int
    vertex_count: int
    edge_count: int
    max_degree: int
    addition_only_degrees: Dict[str, int] = field(default_factory=dict)
    component_count: int = 0
    mul_root_reachable_from_horner: bool = False

    def to_json(self) -> dict:
        return asdict(self)


def stats(graph: nx.Graph) -> GraphStats:
    n = graph.graph['n']
    degrees = dict(graph.degree())
    horner = horner_arithmetic(n).key
    reachable = nx.node_connected_component(graph, horner) if horner in graph else set()
    return GraphStats(
        n=n,
        vertex_count=graph.number_of_nodes(),
        edge_count=graph.number_of_edges(),
        max_degree=max(degrees.values(), default=0),
        addition_only_degrees={key: degrees[key] for key in sorted(graph)
                               if graph.nodes[key]['addition_only']},
        component_count=nx.number_connected_components(graph),
        mul_root_reachable_from_horner=any(graph.nodes[key]['mul_root'] for key in reachable),
    )


@dataclass
class DegreeReport:
    """Observed degrees next to the values f0(n) - 1 and |G_n| / Cⁿ"""
    n: int
    vertex_count: int
    addition_only_degrees: List[int]
    f0_minus_one: int
    max_degree: int
    max_degree_addition_only: bool
    growth_constant: float
    size_over_c_power: float

    @property
    def addition_only_agrees(self) -> bool:
        return all(d == self.f0_minus_one for d in self.addition_only_degrees)

    def to_json(self) -> dict:
        data = asdict(self)
        data['addition_only_agrees'] = self.addition_only_agrees
        data['size_over_c_power'] = round(self.size_over_c_power, 9)
        return data

    def to_text(self) -> str:
        return '\n'.join([
            f"n = {self.n}, |G_n| = {self.vertex_count}",
            f"addition-only degrees: {self.addition_only_degrees} (f0(n) - 1 = {self.f0_minus_one})",
            f"max degree: {self.max_degree} (addition-only: {self.max_degree_addition_only})",
            f"|G_n| / C^n = {self.size_over_c_power:.6f} (C = {self.growth_constant:.12f})",
        ])


def degree_report(graph: nx.Graph, growth_constant: Optional[float] = None) -> DegreeReport:
    """
    Reports, never asserts, the degree comparisons

    Args:
        graph: G_n from build_graph
        growth_constant: C in |G_n| / Cⁿ, e.g. a ConstantsReport value;
            the published C when omitted
    """
    n = graph.graph['n']
    if growth_constant is None:
        growth_constant = PUBLISHED['degree_constant_C']
    growth_constant = float(growth_constant)
    if growth_constant <= 1:
        raise ValueError(f"growth constant {growth_constant} must exceed 1")
    degrees = dict(graph.degree())
    max_degree = max(degrees.values(), default=0)
    return DegreeReport(
        n=n,
        vertex_count=graph.number_of_nodes(),
        addition_only_degrees=[degrees[key] for key in sorted(graph)
                               if graph.nodes[key]['addition_only']],
        f0_minus_one=f0(n) - 1,
        max_degree=max_degree,
        max_degree_addition_only=any(graph.nodes[key]['addition_only']
                                     for key, d in degrees.items() if d == max_degree),
        growth_constant=growth_constant,
        size_over_c_power=graph.number_of_nodes() / growth_constant ** n,
    )


def _sorted_edges(graph):
    return sorted(tuple(sorted(edge)) for edge in graph.edges())


def write_edge_list(graph: nx.Graph, stream: TextIO):
    """One edge per line: two Polish keys, tab-separated"""
    for u, v in _sorted_edges(graph):
        stream.write(f"{u}\t{v}\n")


def write_dot(graph: nx.Graph, stream: TextIO):
    """Undirected DOT with Polish keys as ids and infix labels"""
    stream.write(f"graph G_{graph.graph['n']} {{\n")
    for key in sorted(graph):
        label = to_infix(graph.nodes[key]['formula'])
        shape = 'box' if graph.nodes[key]['addition_only'] else 'ellipse'
        stream.write(f'  "{key}" [label="{label}", shape={shape}];\n')
    for u, v in _sorted_edges(graph):
        stream.write(f'  "{u}" -- "{v}";\n')
    stream.write("}\n")


def write_stats(graph_stats: GraphStats, stream: TextIO):
    json.dump(graph_stats.to_json(), stream, indent=2, sort_keys=True)
    stream.write('\n')

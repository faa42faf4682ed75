"""
Formula Core Module
Value-carrying full binary trees over {1, +, ×, ∧}: construction,
validation, evaluation, size and multiplicative trace
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, NamedTuple, Optional, Tuple

from errors import FormulaError, MalformedTree, MulByOne, PowDisallowed


class Kind(Enum):
    """Node label; the value is the node's symbol in Polish notation"""
    LEAF = '1'
    ADD = '+'
    MUL = '×'
    POW = '∧'


@dataclass(frozen=True)
class FormulaKindSet:
    """Arithmetic formulas (+, ×) or arithmetic exponential formulas (+, ×, ∧)"""
    allow_pow: bool = False


ARITHMETIC = FormulaKindSet(allow_pow=False)
EXPONENTIAL = FormulaKindSet(allow_pow=True)


def _combine(kind, a, b):
    if kind is Kind.ADD:
        return a + b
    if kind is Kind.MUL:
        return a * b
    return a ** b


class Formula:
    """
    Immutable formula tree node

    The value and size are computed once at construction and trusted
    afterwards; validate() and evaluate() recompute them. Two formulas are
    equal iff their trees are equal (compared through the Polish key).
    """

    __slots__ = ('kind', 'left', 'right', 'value', 'size', '_key')

    def __init__(self, kind: Kind, left: 'Formula' = None, right: 'Formula' = None,
                 value: Optional[int] = None):
        self.kind = kind
        self.left = left
        self.right = right
        self._key = None
        if kind is Kind.LEAF:
            self.value = 1 if value is None else value
            self.size = 1 + (left.size if left else 0) + (right.size if right else 0)
        elif left is not None and right is not None:
            self.value = _combine(kind, left.value, right.value) if value is None else value
            self.size = 1 + left.size + right.size
        else:
            # Structurally incomplete; only validate() has anything to say about it
            self.value = value
            self.size = 1 + (left.size if left else 0) + (right.size if right else 0)

    @classmethod
    def leaf(cls):
        return _LEAF

    @classmethod
    def add(cls, left, right):
        return cls(Kind.ADD, left, right)

    @classmethod
    def mul(cls, left, right):
        return cls(Kind.MUL, left, right)

    @classmethod
    def pow(cls, left, right):
        return cls(Kind.POW, left, right)

    @property
    def is_leaf(self):
        return self.kind is Kind.LEAF

    @property
    def key(self) -> str:
        """Polish-notation serialization, built iteratively and cached per node"""
        if self._key is None:
            stack = [self]
            while stack:
                node = stack[-1]
                if node._key is not None:
                    stack.pop()
                    continue
                children = [c for c in (node.left, node.right) if c is not None]
                pending = [c for c in children if c._key is None]
                if pending:
                    stack.extend(pending)
                    continue
                node._key = node.kind.value + ''.join(c._key for c in children)
                stack.pop()
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return (self.value == other.value and self.size == other.size
                and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Formula('{self.key}', value={self.value})"


_LEAF = Formula(Kind.LEAF)

# Frequently used small formula
TWO = Formula.add(_LEAF, _LEAF)


class ValidationResult(NamedTuple):
    valid: bool
    error: Optional[FormulaError] = None
    position: Optional[int] = None


def walk(formula: Formula) -> Iterator[Tuple[int, Formula]]:
    """Pre-order traversal yielding (index, node)"""
    stack = [formula]
    index = 0
    while stack:
        node = stack.pop()
        yield index, node
        index += 1
        if node.right is not None:
            stack.append(node.right)
        if node.left is not None:
            stack.append(node.left)


def _recomputed_values(formula):
    """Bottom-up values keyed by node id; None marks an unevaluable subtree"""
    values = {}
    stack = [(formula, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in values:
            continue
        if node.kind is Kind.LEAF:
            values[id(node)] = 1
            continue
        if node.left is None or node.right is None:
            values[id(node)] = None
            continue
        if not expanded:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
            continue
        a = values[id(node.left)]
        b = values[id(node.right)]
        if a is None or b is None:
            values[id(node)] = None
        elif node.kind in (Kind.MUL, Kind.POW) and (a < 2 or b < 2):
            # Never raise 1 or build huge values from an already invalid node
            values[id(node)] = None
        else:
            values[id(node)] = _combine(node.kind, a, b)
    return values


def validate(formula: Formula, kinds: FormulaKindSet = ARITHMETIC) -> ValidationResult:
    """
    Check every Formula invariant

    Args:
        formula: Tree to check
        kinds: Whether ∧ nodes are allowed

    Returns:
        ValidationResult; on rejection the error names the first violating
        node in pre-order
    """
    values = _recomputed_values(formula)
    for index, node in walk(formula):
        error = None
        if node.kind is Kind.LEAF:
            if node.left is not None or node.right is not None:
                error = MalformedTree("leaf with children", index)
            elif node.value != 1:
                error = MalformedTree(f"leaf carries value {node.value}", index)
        elif node.left is None or node.right is None:
            error = MalformedTree(f"'{node.kind.value}' node without two children", index)
        elif node.kind is Kind.POW and not kinds.allow_pow:
            error = PowDisallowed("∧ node in an arithmetic formula", index)
        elif node.kind in (Kind.MUL, Kind.POW) and (
                values[id(node.left)] == 1 or values[id(node.right)] == 1):
            error = MulByOne(f"'{node.kind.value}' node with an argument of value 1", index)
        elif values[id(node)] is not None and node.value != values[id(node)]:
            error = MalformedTree(
                f"cached value {node.value} differs from {values[id(node)]}", index)
        if error is not None:
            return ValidationResult(False, error, index)
    return ValidationResult(True)


def check(formula: Formula, kinds: FormulaKindSet = ARITHMETIC) -> Formula:
    """validate() that raises the violation instead of returning it"""
    result = validate(formula, kinds)
    if not result.valid:
        raise result.error
    return formula


def evaluate(formula: Formula) -> int:
    """Recompute the root value bottom-up; cached values must agree"""
    values = _recomputed_values(formula)
    for index, node in walk(formula):
        if values[id(node)] is None or values[id(node)] != node.value:
            raise MalformedTree(f"cached value {node.value} differs from recomputation", index)
    return values[id(formula)]


def size(formula: Formula) -> int:
    """Number of nodes = number of symbols 1, +, ×, ∧ (parentheses excluded)"""
    return formula.size


def count_mul_nodes(formula: Formula) -> int:
    return sum(1 for _, node in walk(formula) if node.kind is Kind.MUL)


def has_pow(formula: Formula) -> bool:
    return any(node.kind is Kind.POW for _, node in walk(formula))


@dataclass(frozen=True, order=True)
class Trace:
    """
    Multiplicative trace (p, l, r)

    p counts primitive × nodes (no × ancestor), left to right; l[i] and r[i]
    count × nodes in the left and right subtrees of the i-th one.
    """
    p: int = 0
    l: Tuple[int, ...] = field(default_factory=tuple)
    r: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.l) != self.p or len(self.r) != self.p:
            raise ValueError(f"trace {self} needs {self.p} left and right counts")

    @property
    def weight(self) -> int:
        return sum(self.l) + sum(self.r) + self.p

    def __str__(self):
        return f"({self.p},{self.l},{self.r})"


ZERO_TRACE = Trace()


def trace_of(formula: Formula) -> Trace:
    """Trace of an arithmetic formula"""
    if has_pow(formula):
        raise PowDisallowed("trace is defined for arithmetic formulas only")
    lefts, rights = [], []
    stack = [formula]
    while stack:
        node = stack.pop()
        if node.kind is Kind.MUL:
            lefts.append(count_mul_nodes(node.left))
            rights.append(count_mul_nodes(node.right))
        elif node.kind is Kind.ADD:
            stack.append(node.right)
            stack.append(node.left)
    return Trace(len(lefts), tuple(lefts), tuple(rights))

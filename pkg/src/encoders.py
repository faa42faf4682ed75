"""
Encoding Schemes for Positive Integers
First canonical form (binary expansion, recursively), second canonical form
(prime factorization, recursively) and the Horner form, with a registry for
switching between them by name.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional

from errors import EncodingError
from factorizer import Factorizer, default_factorizer
from formula import TWO, Formula, Kind, evaluate, walk
from notation import to_infix

# Sub-encodings kept for reuse across a census sweep
ENCODING_CACHE_SIZE = 1 << 14


@dataclass(frozen=True)
class EncodingResult:
    """
    Args:
        formula: Encoded tree (may contain ∧)
        scheme: Scheme name
        length: Node count of the tree
    """
    formula: Formula
    scheme: str
    length: int

    @property
    def value(self) -> int:
        return self.formula.value

    def infix(self) -> str:
        return to_infix(self.formula)


def _require_positive(n, lowest=1):
    if not isinstance(n, int) or n < lowest:
        raise ValueError(f"n must be an integer >= {lowest}, got {n!r}")


def _sum_right(terms: List[Formula]) -> Formula:
    node = terms[-1]
    for term in reversed(terms[:-1]):
        node = Formula.add(term, node)
    return node


def _product_left(factors: List[Formula]) -> Formula:
    node = factors[0]
    for factor in factors[1:]:
        node = Formula.mul(node, factor)
    return node


def _power_of_two(exponent_formula: Formula, exponent: int) -> Formula:
    if exponent == 0:
        return Formula.leaf()
    if exponent == 1:
        return TWO
    return Formula.pow(TWO, exponent_formula)


@lru_cache(maxsize=ENCODING_CACHE_SIZE)
def _fcf(n: int) -> Formula:
    exponents = [i for i in range(n.bit_length() - 1, -1, -1) if n >> i & 1]
    terms = [_power_of_two(_fcf(a) if a >= 2 else None, a) for a in exponents]
    return _sum_right(terms)


def encode_fcf(n: int) -> EncodingResult:
    """
    First canonical form: n = Σ 2^aᵢ with strictly decreasing aᵢ, sum
    right-associated, each aᵢ >= 2 encoded the same way
    """
    _require_positive(n)
    formula = _fcf(n)
    return EncodingResult(formula, 'fcf', formula.size)


@lru_cache(maxsize=ENCODING_CACHE_SIZE)
def _scf(n: int, factorizer: Factorizer) -> Formula:
    factors = []
    for p, alpha in factorizer.factor(n).items():
        base = TWO if p == 2 else Formula.add(Formula.leaf(), _scf(p - 1, factorizer))
        factors.append(base if alpha == 1 else Formula.pow(base, _scf(alpha, factorizer)))
    return _product_left(factors)


def encode_scf(n: int, factorizer: Optional[Factorizer] = None) -> EncodingResult:
    """
    Second canonical form: primes ascending in a left-associated product,
    p > 2 written 1 + SCF(p - 1), exponents >= 2 encoded the same way

    Raises:
        FactorizationFailure: n or some p - 1 in the recursion cannot be factored
    """
    _require_positive(n, 2)
    formula = _scf(n, factorizer or default_factorizer())
    return EncodingResult(formula, 'scf', formula.size)


@lru_cache(maxsize=ENCODING_CACHE_SIZE)
def _horner(n: int) -> Formula:
    if n == 1:
        return Formula.leaf()
    if n & 1:
        return Formula.add(_horner(n - 1), Formula.leaf())
    v = (n & -n).bit_length() - 1
    m = n >> v
    power = TWO if v == 1 else Formula.pow(TWO, _horner(v))
    return power if m == 1 else Formula.mul(_horner(m), power)


def encode_horner(n: int) -> EncodingResult:
    """
    Horner form: odd n is H(n-1) + 1; even n = m·2^v is H(m) × (1+1)^H(v),
    without the ∧ when v = 1 and without the × when m = 1
    """
    _require_positive(n)
    formula = _horner(n)
    return EncodingResult(formula, 'horner', formula.size)


@lru_cache(maxsize=ENCODING_CACHE_SIZE)
def _horner_arithmetic(n: int) -> Formula:
    if n == 1:
        return Formula.leaf()
    if n == 2:
        return TWO
    if n & 1:
        return Formula.add(_horner_arithmetic(n - 1), Formula.leaf())
    return Formula.mul(_horner_arithmetic(n // 2), TWO)


def horner_arithmetic(n: int) -> Formula:
    """∧-free Horner formula: doublings by × (1+1), odd steps by + 1"""
    _require_positive(n)
    return _horner_arithmetic(n)


def _fcf_exponents(formula: Formula) -> List[int]:
    """Binary exponents of an FCF tree, read off its term structure"""
    exponents = []
    stack = [formula]
    while stack:
        node = stack.pop()
        if node.kind is Kind.LEAF:
            exponents.append(0)
        elif node.kind is Kind.POW:
            exponents.append(evaluate(node.right))
        elif node.kind is Kind.ADD and node.left.is_leaf and node.right.is_leaf:
            exponents.append(1)
        elif node.kind is Kind.ADD:
            stack.append(node.right)
            stack.append(node.left)
        else:
            raise EncodingError(f"not a first canonical form: {node.kind.value} node")
    if len(set(exponents)) != len(exponents):
        raise EncodingError("repeated binary exponent in first canonical form")
    return sorted(exponents)


def _horner_from_exponents(exponents: List[int]) -> Formula:
    if exponents == [0]:
        return Formula.leaf()
    if exponents[0] == 0:
        return Formula.add(_horner_from_exponents(exponents[1:]), Formula.leaf())
    v = exponents[0]
    power = TWO if v == 1 else Formula.pow(TWO, _horner(v))
    shifted = [a - v for a in exponents]
    return power if shifted == [0] else Formula.mul(_horner_from_exponents(shifted), power)


def horner_from_fcf(formula: Formula) -> EncodingResult:
    """
    Horner form rebuilt from a first canonical form by factoring out the
    lowest power of two at every step; only the exponents are evaluated
    """
    result = _horner_from_exponents(_fcf_exponents(formula))
    return EncodingResult(result, 'horner', result.size)


def s2(n: int) -> int:
    """Number of nonzero binary digits"""
    _require_positive(n)
    return bin(n).count('1')


def count_twos(formula: Formula) -> int:
    """Number of (1+1) sub-trees"""
    return sum(1 for _, node in walk(formula)
               if node.kind is Kind.ADD and node.left.is_leaf and node.right.is_leaf)


def t_count(n: int, factorizer: Optional[Factorizer] = None) -> int:
    """Number of (1+1) occurrences in the second canonical form of n"""
    return count_twos(encode_scf(n, factorizer).formula)


class EncodingScheme:
    """Base class for encoding schemes"""

    name = 'base'
    description = ''
    min_n = 1

    def encode(self, n: int) -> EncodingResult:
        raise NotImplementedError

    def length(self, n: int) -> int:
        return self.encode(n).length


class FirstCanonicalForm(EncodingScheme):
    name = 'fcf'
    description = 'recursive binary expansion'

    def encode(self, n):
        return encode_fcf(n)


class SecondCanonicalForm(EncodingScheme):
    name = 'scf'
    description = 'recursive prime factorization'
    min_n = 2

    def __init__(self, factorizer: Optional[Factorizer] = None):
        self.factorizer = factorizer

    def encode(self, n):
        return encode_scf(n, self.factorizer)


class HornerForm(EncodingScheme):
    name = 'horner'
    description = 'recursive factoring of the binary expansion'

    def encode(self, n):
        return encode_horner(n)


# Available schemes
SCHEMES = {
    'fcf': FirstCanonicalForm,
    'scf': SecondCanonicalForm,
    'horner': HornerForm,
}


def get_scheme(scheme_name: str = 'fcf') -> EncodingScheme:
    """
    Get an encoding scheme by name

    Args:
        scheme_name: 'fcf', 'scf', or 'horner'

    Returns:
        EncodingScheme instance
    """
    scheme_class = SCHEMES.get(scheme_name.lower())
    if scheme_class is None:
        raise ValueError(f"Unknown scheme '{scheme_name}', choose from {', '.join(SCHEMES)}")
    return scheme_class()


def list_schemes():
    """(name, description) for every registered scheme"""
    return [(name, cls.description) for name, cls in SCHEMES.items()]

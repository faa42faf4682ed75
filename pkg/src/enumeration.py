"""
Enumeration Oracle Module
Brute-force generation of every (exponential) arithmetic formula for small n.
Ground truth for the counting tables, the shortest-size DP and the rewrite
graph.
"""

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, TextIO, Union

from counting import perfect_power_pairs, proper_divisors
from errors import CapExceeded
from formula import (ARITHMETIC, Formula, FormulaKindSet, Kind, Trace,
                     count_mul_nodes, trace_of)

DEFAULT_CAP = 12
HARD_CAP = 16
DEFAULT_MEMO_THRESHOLD = 9


@dataclass
class EnumerationConfig:
    """
    Args:
        max_n: Largest n that may be enumerated
        kinds: Arithmetic or exponential formulas
        group_by_k: count() returns counts keyed by number of × nodes
        memo_threshold: Sub-formula lists for values up to this are kept in memory
    """
    max_n: int = DEFAULT_CAP
    kinds: FormulaKindSet = ARITHMETIC
    group_by_k: bool = False
    memo_threshold: int = DEFAULT_MEMO_THRESHOLD

    def __post_init__(self):
        if self.max_n < 1:
            raise ValueError("max_n must be >= 1")
        if self.max_n > HARD_CAP:
            raise CapExceeded(self.max_n, HARD_CAP)


class FormulaEnumerator:
    """
    Streams formulas for n in a fixed order: additive splits by ascending
    left value, then products by ascending left divisor, then powers by
    ascending base
    """

    def __init__(self, config: Optional[EnumerationConfig] = None):
        self.config = config or EnumerationConfig()
        self._memo: Dict[int, List[Formula]] = {}

    def _check_cap(self, n):
        if n > self.config.max_n:
            raise CapExceeded(n, self.config.max_n)

    def _formulas(self, n: int):
        if n <= self.config.memo_threshold:
            cached = self._memo.get(n)
            if cached is None:
                cached = list(self._generate(n))
                self._memo[n] = cached
            return cached
        return self._generate(n)

    def _generate(self, n: int) -> Iterator[Formula]:
        if n == 1:
            yield Formula.leaf()
            return
        for a in range(1, n):
            for left in self._formulas(a):
                for right in self._formulas(n - a):
                    yield Formula(Kind.ADD, left, right, n)
        for d in proper_divisors(n):
            for left in self._formulas(d):
                for right in self._formulas(n // d):
                    yield Formula(Kind.MUL, left, right, n)
        if self.config.kinds.allow_pow:
            for a, b in perfect_power_pairs(n):
                for left in self._formulas(a):
                    for right in self._formulas(b):
                        yield Formula(Kind.POW, left, right, n)

    def enumerate(self, n: int) -> Iterator[Formula]:
        """Every valid formula for n, each exactly once"""
        if n < 1:
            raise ValueError("n must be >= 1")
        self._check_cap(n)
        return self._generate(n)

    def count(self, n: int) -> Union[int, Dict[int, int]]:
        if self.config.group_by_k:
            return self.count_by_k(n)
        return sum(1 for _ in self.enumerate(n))

    def count_by_k(self, n: int) -> Dict[int, int]:
        """Formula counts keyed by number of × nodes"""
        return dict(sorted(Counter(count_mul_nodes(a) for a in self.enumerate(n)).items()))

    def count_by_trace(self, n: int) -> Dict[Trace, int]:
        return dict(sorted(Counter(trace_of(a) for a in self.enumerate(n)).items()))

    def dump(self, n: int, stream: TextIO) -> int:
        """Write one Polish-notation formula per line; returns the count"""
        written = 0
        for formula in self.enumerate(n):
            stream.write(formula.key)
            stream.write('\n')
            written += 1
        return written


def enumerate_formulas(n: int, kinds: FormulaKindSet = ARITHMETIC,
                       cap: int = DEFAULT_CAP) -> Iterator[Formula]:
    return FormulaEnumerator(EnumerationConfig(max_n=cap, kinds=kinds)).enumerate(n)


def count_by_enumeration(n: int, kinds: FormulaKindSet = ARITHMETIC,
                         cap: int = DEFAULT_CAP) -> int:
    return FormulaEnumerator(EnumerationConfig(max_n=cap, kinds=kinds)).count(n)


def count_by_k(n: int, cap: int = DEFAULT_CAP) -> Dict[int, int]:
    return FormulaEnumerator(EnumerationConfig(max_n=cap, group_by_k=True)).count(n)


def minimum_size(n: int, kinds: FormulaKindSet, cap: int = DEFAULT_CAP) -> int:
    """Smallest formula size for n over the full enumeration"""
    return min(a.size for a in enumerate_formulas(n, kinds, cap))

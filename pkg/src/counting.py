"""
Counting Module
Exact counts of arithmetic formulas: Catalan numbers, proper Dirichlet
convolution, the f = f⁺ + f× recurrences, the exponential variant, k-traces
and the number f_k(n) of formulas using exactly k multiplications.

Values are exact Python integers. Tables are 1-indexed: table[n] for
1 <= n <= table.max_n.
"""

import math
from dataclasses import dataclass
from itertools import combinations
from operator import mul
from typing import Dict, List, Mapping, Optional, Sequence

from sympy import divisors, integer_nthroot

from errors import CountingError, IndexOutOfTable, MethodMismatch, MissingTable
from formula import ZERO_TRACE, Trace

SEQUENCE_NAMES = ('f', 'f0', 'f_plus', 'f_times', 'f_exp', 'f_exp_plus',
                  'f_exp_times', 'f_exp_pow')


@dataclass
class CountTable:
    """Exact sequence values indexed 1..max_n (values[0] is a placeholder)"""
    name: str
    values: List[int]

    @property
    def max_n(self) -> int:
        return len(self.values) - 1

    @property
    def k(self) -> Optional[int]:
        """Multiplication count for f_k tables, None otherwise"""
        if self.name.startswith('f_') and self.name[2:].isdigit():
            return int(self.name[2:])
        return None

    def __getitem__(self, n: int) -> int:
        if n < 1 or n > self.max_n:
            raise IndexOutOfTable(f"{self.name}({n}) outside 1..{self.max_n}")
        return self.values[n]

    def __iter__(self):
        return iter(self.values[1:])

    def items(self):
        return ((n, self.values[n]) for n in range(1, self.max_n + 1))

    def truncated(self, max_n: int) -> 'CountTable':
        if max_n > self.max_n:
            raise IndexOutOfTable(f"{self.name} only reaches {self.max_n}")
        return CountTable(self.name, self.values[:max_n + 1])


def fk_name(k: int) -> str:
    return f"f_{k}"


# Catalan numbers and addition-only formulas

def catalan(m: int) -> int:
    """C_m = binom(2m, m) / (m + 1)"""
    return math.comb(2 * m, m) // (m + 1)


def f0(n: int) -> int:
    """Number of addition-only formulas for n, C_{n-1}"""
    return catalan(n - 1)


def build_f0_table(max_n: int) -> CountTable:
    values = [0] * (max_n + 1)
    c = 1
    for n in range(1, max_n + 1):
        values[n] = c
        m = n - 1
        c = c * 2 * (2 * m + 1) // (m + 2)
    return CountTable('f0', values)


# Proper Dirichlet convolution

def proper_divisors(n: int) -> List[int]:
    """Divisors d of n with 1 < d < n, ascending"""
    return divisors(n)[1:-1] if n > 1 else []


def proper_convolution(g: CountTable, h: CountTable, n: int) -> int:
    """(g *′ h)(n) = Σ_{d|n, 1<d<n} g(d) h(n/d)"""
    if n < 1:
        raise IndexOutOfTable(f"convolution index {n} < 1")
    return sum(g[d] * h[n // d] for d in proper_divisors(n))


def _convolution_series(g: Sequence[int], h: Sequence[int], max_n: int) -> List[int]:
    """(g *′ h)(n) for 0 <= n <= max_n from 0-padded lists, by a divisor sieve"""
    out = [0] * (max_n + 1)
    for d in range(2, max_n // 2 + 1):
        gd = g[d]
        if not gd:
            continue
        for e in range(2, max_n // d + 1):
            if h[e]:
                out[d * e] += gd * h[e]
    return out


def _additive_convolution(a: Sequence[int], b: Sequence[int], max_n: int) -> List[int]:
    out = [0] * (max_n + 1)
    nonzero_b = [(t, v) for t, v in enumerate(b[:max_n + 1]) if v]
    for s, av in enumerate(a[:max_n + 1]):
        if not av:
            continue
        for t, bv in nonzero_b:
            if s + t > max_n:
                break
            out[s + t] += av * bv
    return out


def _additive_sum(a: Sequence[int], b: Sequence[int], n: int) -> int:
    """Σ_{h=1}^{n-1} a(n-h) b(h)"""
    return sum(map(mul, a[n - 1:0:-1], b[1:n]))


# f, f⁺, f×

def build_f_table(max_n: int):
    """
    Count arithmetic formulas by root label

    Args:
        max_n: Largest n to compute

    Returns:
        (f, f_plus, f_times) CountTables, with f⁺(1) = 1 and f×(1) = 0
    """
    f = [0] * (max_n + 1)
    f_plus = [0] * (max_n + 1)
    f_times = [0] * (max_n + 1)
    f[1] = f_plus[1] = 1
    for n in range(2, max_n + 1):
        f_plus[n] = _additive_sum(f, f, n)
        f_times[n] = sum(f[d] * f[n // d] for d in proper_divisors(n))
        f[n] = f_plus[n] + f_times[n]
    return CountTable('f', f), CountTable('f_plus', f_plus), CountTable('f_times', f_times)


def perfect_power_pairs(n: int):
    """All (a, b) with a^b = n and a, b >= 2, by ascending base"""
    pairs = []
    for b in range(2, n.bit_length()):
        a, exact = integer_nthroot(n, b)
        if exact and a >= 2:
            pairs.append((a, b))
    return sorted(pairs)


def build_fexp_parts(max_n: int, allow_pow: bool = True) -> Dict[str, CountTable]:
    """
    Count arithmetic exponential formulas by root label

    f_E(1) = 1 (the single leaf); for n >= 2
    f_E(n) = f_E⁺(n) + f_E×(n) + f_E∧(n) with
    f_E∧(n) = Σ_{a^b = n, a,b >= 2} f_E(a) f_E(b).

    With allow_pow=False the ∧ term is dropped and the tables are named
    f_exp_nopow*; the result must then agree with f.
    """
    prefix = 'f_exp' if allow_pow else 'f_exp_nopow'
    f = [0] * (max_n + 1)
    f_plus = [0] * (max_n + 1)
    f_times = [0] * (max_n + 1)
    f_pow = [0] * (max_n + 1)
    f[1] = f_plus[1] = 1
    for n in range(2, max_n + 1):
        f_plus[n] = _additive_sum(f, f, n)
        f_times[n] = sum(f[d] * f[n // d] for d in proper_divisors(n))
        if allow_pow:
            f_pow[n] = sum(f[a] * f[b] for a, b in perfect_power_pairs(n))
        f[n] = f_plus[n] + f_times[n] + f_pow[n]
    parts = {
        prefix: CountTable(prefix, f),
        f'{prefix}_plus': CountTable(f'{prefix}_plus', f_plus),
        f'{prefix}_times': CountTable(f'{prefix}_times', f_times),
    }
    if allow_pow:
        parts['f_exp_pow'] = CountTable('f_exp_pow', f_pow)
    return parts


def build_fexp_table(max_n: int) -> CountTable:
    return build_fexp_parts(max_n)['f_exp']


# Traces

def trace_count(k: int) -> int:
    """|T_k| by stars and bars"""
    if k == 0:
        return 1
    return sum(math.comb(k + p - 1, 2 * p - 1) for p in range(1, k + 1))


def _weak_compositions(total, parts):
    for bars in combinations(range(total + parts - 1), parts - 1):
        previous = -1
        out = []
        for bar in bars:
            out.append(bar - previous - 1)
            previous = bar
        out.append(total + parts - 2 - previous)
        yield out


def enumerate_traces(k: int) -> List[Trace]:
    """All k-traces, sorted; T_0 holds only the zero trace"""
    if k < 0:
        raise CountingError(f"trace weight {k} < 0")
    if k == 0:
        return [ZERO_TRACE]
    traces = []
    for p in range(1, k + 1):
        for parts in _weak_compositions(k - p, 2 * p):
            traces.append(Trace(p, tuple(parts[0::2]), tuple(parts[1::2])))
    if len(traces) != trace_count(k) or len(set(traces)) != len(traces):
        raise CountingError(f"T_{k} has {len(traces)} entries, expected {trace_count(k)}")
    return sorted(traces)


def _trace_series(trace: Trace, max_n: int, fk: Mapping[int, Sequence[int]],
                  f0_values: Sequence[int]) -> List[int]:
    """f_(p,l,r)(n) for 0 <= n <= max_n from the trace formula"""
    product = [0] * (max_n + 1)
    product[0] = 1
    for left, right in zip(trace.l, trace.r):
        block = _convolution_series(fk[left], fk[right], max_n)
        product = _additive_convolution(product, block, max_n)
    p = trace.p
    support = [(s, v) for s, v in enumerate(product) if v]
    out = [0] * (max_n + 1)
    for n in range(1, max_n + 1):
        total = 0
        for s, v in support:
            m = n + p - s
            if m < max(p, 1):
                break
            if m <= max_n:
                total += v * math.comb(m, p) * f0_values[m]
        out[n] = total
    return out


def _lists_for(trace: Trace, n: int, tables: Mapping[int, CountTable]):
    needed = set(trace.l) | set(trace.r) | {0}
    lists = {}
    for k in needed:
        table = tables.get(k)
        if table is None or table.max_n < n:
            raise MissingTable(f"f_{k} table up to {n} needed for trace {trace}")
        lists[k] = table.values
    return lists


def f_trace(trace: Trace, n: int, tables: Mapping[int, CountTable]) -> int:
    """
    Number of arithmetic formulas for n with the given trace

    Σ over n_1 + ... + n_p + m = n + p of
    binom(m, p) f_0(m) Π (f_{l_i} *′ f_{r_i})(n_i).

    Args:
        trace: The trace (p, l, r)
        n: Target value
        tables: f_k tables keyed by k, covering every l_i, r_i and 0 up to n
    """
    lists = _lists_for(trace, n, tables)
    return _trace_series(trace, n, lists, lists[0])[n]


def build_ftrace_table(trace: Trace, max_n: int, tables: Mapping[int, CountTable]) -> CountTable:
    lists = _lists_for(trace, max_n, tables)
    return CountTable(f"f_trace{trace}", _trace_series(trace, max_n, lists, lists[0]))


# f_k

def max_multiplications(n: int) -> int:
    """Largest k with f_k(n) possibly nonzero: a formula with k >= 1 products has value >= 4k"""
    return n // 4


def _fk_lists_direct(k_max: int, max_n: int) -> List[List[int]]:
    """
    f_0 .. f_{k_max} by the root-split recursion

    f_k⁺(n) = Σ_h Σ_{i+j=k} f_i(n-h) f_j(h)
    f_k×(n) = Σ_{d|n proper} Σ_{i+j=k-1} f_i(d) f_j(n/d)
    """
    F = [[0] * (max_n + 1) for _ in range(k_max + 1)]
    F[0][1] = 1
    for n in range(2, max_n + 1):
        divs = proper_divisors(n)
        top = min(k_max, max_multiplications(n))
        for k in range(top + 1):
            total = 0
            for i in range(k + 1):
                total += _additive_sum(F[i], F[k - i], n)
            for i in range(k):
                a, b = F[i], F[k - 1 - i]
                total += sum(a[d] * b[n // d] for d in divs)
            F[k][n] = total
    return F


def build_fk_tables(k_max: int, max_n: int) -> Dict[int, CountTable]:
    """
    f_k tables for 0 <= k <= k_max, each computed twice

    The direct recursion gives every f_k; the trace formula recomputes f_k as
    the sum of f_(p,l,r) over all k-traces from the lower-order tables. The
    two must agree at every index.

    Raises:
        MethodMismatch: the two methods disagree
    """
    direct = _fk_lists_direct(k_max, max_n)
    f0_values = direct[0]
    lists = dict(enumerate(direct))
    for k in range(k_max + 1):
        by_traces = [0] * (max_n + 1)
        for trace in enumerate_traces(k):
            series = _trace_series(trace, max_n, lists, f0_values)
            by_traces = [a + b for a, b in zip(by_traces, series)]
        for n in range(1, max_n + 1):
            if by_traces[n] != direct[k][n]:
                raise MethodMismatch(k, n, by_traces[n], direct[k][n])
    return {k: CountTable(fk_name(k), direct[k]) for k in range(k_max + 1)}


def build_fk_table(k: int, max_n: int) -> CountTable:
    return build_fk_tables(k, max_n)[k]


# Invariant checks

def check_f_invariants(f: CountTable, f_plus: CountTable, f_times: CountTable,
                       f0_table: Optional[CountTable] = None):
    """
    Check f = f⁺ + f×, f(n) < 8ⁿ, f(n) >= f_0(n), f×(prime) = 0 and
    (f_0 *′ f_0)(n) <= 3ⁿ over the whole table

    Raises:
        CountingError: naming the first failing n
    """
    max_n = f.max_n
    f0_table = f0_table or build_f0_table(max_n)
    conv = _convolution_series(f0_table.values, f0_table.values, max_n)
    if f[1] != 1 or f_times[1] != 0:
        raise CountingError("f(1) must be 1 and f×(1) must be 0")
    for n in range(1, max_n + 1):
        if n >= 2 and f[n] != f_plus[n] + f_times[n]:
            raise CountingError(f"f({n}) != f⁺({n}) + f×({n})")
        if f[n] >= 8 ** n:
            raise CountingError(f"f({n}) >= 8^{n}")
        if f[n] < f0_table[n]:
            raise CountingError(f"f({n}) < f0({n})")
        if not proper_divisors(n) and f_times[n] != 0:
            raise CountingError(f"f×({n}) != 0 for prime {n}")
        if conv[n] > 3 ** n:
            raise CountingError(f"(f0 *′ f0)({n}) > 3^{n}")


def check_partition_identity(max_n: int, f: Optional[CountTable] = None) -> Dict[int, CountTable]:
    """
    Σ_k f_k(n) = f(n) for every n <= max_n, summed over every k <= n/4

    Uses the direct recursion; build_fk_tables cross-checks it against the
    trace formula.
    """
    f = f or build_f_table(max_n)[0]
    k_max = max_multiplications(max_n)
    direct = _fk_lists_direct(k_max, max_n)
    tables = {k: CountTable(fk_name(k), direct[k]) for k in range(k_max + 1)}
    for n in range(1, max_n + 1):
        total = sum(tables[k][n] for k in range(k_max + 1))
        if total != f[n]:
            raise CountingError(f"Σ_k f_k({n}) = {total} != f({n}) = {f[n]}")
    return tables

"""
Size Census
Shortest-formula dynamic program over {+, ×, ∧}, encoder size sweeps with
bound checks, binary-digit census, and CSV / JSON output.
"""

import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, TextIO

import numpy as np
from scipy import stats

from encoders import count_twos, encode_fcf, encode_horner, encode_scf
from errors import BoundViolation
from factorizer import Factorizer, default_factorizer
from formula import Formula

DEFAULT_LIMIT = 1 << 16
MAX_LIMIT = 1 << 20
SIZE_INFINITY = np.iinfo(np.uint16).max

CSV_HEADER = ('n', 's2', 't', 'S_fcf', 'S_scf', 'S_hor', 'S_short')

# Growth constant of S_FCF against log n · log log n for almost all n
FCF_LOWER_CONSTANT = 1 / (4 * math.log(2) ** 2)


def shortest_sizes(limit: int) -> np.ndarray:
    """
    S_short(1..limit) as uint16, index 0 unused

    S(n) = 1 + min over a + b = n, d·e = n (d, e >= 2) and a^b = n (a, b >= 2)
    of S(·) + S(·). Products and powers are pushed forward once both
    operands are final; sums are a vectorized minimum over the prefix.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if limit > MAX_LIMIT:
        raise ValueError(f"limit {limit} above {MAX_LIMIT}")
    S = np.zeros(limit + 1, dtype=np.uint16)
    pending = np.full(limit + 1, SIZE_INFINITY, dtype=np.uint16)
    S[1] = 1
    for n in range(1, limit + 1):
        if n > 1:
            half = n // 2
            additive = (S[1:half + 1] + S[n - 1:n - half - 1:-1]).min()
            S[n] = 1 + min(int(additive), int(pending[n]))
        # n is final: push n·e and powers with n as the larger operand
        top = min(n, limit // n)
        if top >= 2:
            es = np.arange(2, top + 1)
            targets = n * es
            pending[targets] = np.minimum(pending[targets], S[n] + S[es])
        if n >= 2:
            b, power = 2, n * n
            while b <= n and power <= limit:
                pending[power] = min(int(pending[power]), int(S[n]) + int(S[b]))
                b += 1
                power *= n
            a = 2
            while a < n < limit.bit_length() and a ** n <= limit:
                pending[a ** n] = min(int(pending[a ** n]), int(S[a]) + int(S[n]))
                a += 1
    return S


def shortest_formula(n: int, sizes: np.ndarray) -> Formula:
    """One minimum-size formula for n rebuilt from the DP table"""
    if n < 1 or n >= len(sizes):
        raise ValueError(f"n={n} outside the table (limit {len(sizes) - 1})")
    if n == 1:
        return Formula.leaf()
    target = int(sizes[n]) - 1
    for a in range(1, n // 2 + 1):
        if int(sizes[a]) + int(sizes[n - a]) == target:
            return Formula.add(shortest_formula(a, sizes), shortest_formula(n - a, sizes))
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0 and int(sizes[d]) + int(sizes[n // d]) == target:
            return Formula.mul(shortest_formula(d, sizes), shortest_formula(n // d, sizes))
    for b in range(2, n.bit_length()):
        a = round(n ** (1 / b))
        for base in (a - 1, a, a + 1):
            if base >= 2 and base ** b == n and int(sizes[base]) + int(sizes[b]) == target:
                return Formula.pow(shortest_formula(base, sizes), shortest_formula(b, sizes))
    raise ValueError(f"size table is inconsistent at n={n}")


@dataclass
class SizeCensus:
    """
    Per-n encoder sizes for 2 <= n <= limit, with bound violations

    Columns are numpy arrays aligned on `n`.
    """
    limit: int
    epsilon: float
    columns: Dict[str, np.ndarray]
    violations: Dict[str, List[int]] = field(default_factory=dict)
    small_size_count: int = 0
    small_size_bound: float = 0.0
    x_power: float = 0.0
    summary: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.violations.values())

    def write_csv(self, stream: TextIO):
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for row in zip(*(self.columns[name] for name in CSV_HEADER)):
            writer.writerow(int(v) for v in row)

    def to_json(self) -> dict:
        return {
            'limit': self.limit,
            'epsilon': self.epsilon,
            'violations': {name: len(w) for name, w in sorted(self.violations.items())},
            'first_witness': {name: w[0] for name, w in sorted(self.violations.items()) if w},
            'small_size_count': self.small_size_count,
            'small_size_bound': round(self.small_size_bound, 6),
            'x_power': round(self.x_power, 6),
            'summary': {k: round(v, 9) for k, v in sorted(self.summary.items())},
        }

    def to_text(self) -> str:
        data = self.to_json()
        lines = [f"census 2..{self.limit}, epsilon={self.epsilon}"]
        for name, count in data['violations'].items():
            lines.append(f"  {name:16s} violations: {count}")
        lines.append(f"  #{{n : S_short(n) <= (1-eps) log4 n}} = {self.small_size_count}"
                     f" (bound {data['small_size_bound']}, x^(1-eps) = {data['x_power']})")
        for name, value in data['summary'].items():
            lines.append(f"  {name:24s} {value}")
        return '\n'.join(lines)


def _encode_chunk(ns, factorizer):
    rows = []
    for n in ns:
        scf = encode_scf(n, factorizer).formula
        rows.append((n, bin(n).count('1'), count_twos(scf), encode_fcf(n).length,
                     scf.size, encode_horner(n).length))
    return rows


def encoder_sizes(limit: int, threads: int = 1,
                  factorizer: Optional[Factorizer] = None) -> Dict[str, np.ndarray]:
    """n, s2, t, S_fcf, S_scf, S_hor columns for 2 <= n <= limit"""
    factorizer = factorizer or default_factorizer()
    ns = list(range(2, limit + 1))
    chunk = max(1, len(ns) // max(1, threads * 4))
    chunks = [ns[i:i + chunk] for i in range(0, len(ns), chunk)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(lambda c: _encode_chunk(c, factorizer), chunks))
    else:
        results = [_encode_chunk(c, factorizer) for c in chunks]
    table = np.array([row for rows in results for row in rows], dtype=np.int64).reshape(-1, 6)
    return {name: table[:, i] for i, name in enumerate(CSV_HEADER[:6])}


def verify_bounds(limit: int = DEFAULT_LIMIT, epsilon: float = 0.5, threads: int = 1,
                  sizes: Optional[np.ndarray] = None, strict: bool = True,
                  factorizer: Optional[Factorizer] = None) -> SizeCensus:
    """
    Sweep 2 <= n <= limit and check
        S_SCF(n) <= 6·t(n) - 1,   2^t(n) <= n,   S_FCF(n) >= s2(n),
        S_short(n) <= min(S_FCF, S_SCF, S_Hor)

    Also counts n <= limit with S_short(n) <= (1 - ε)·log4 n against the
    4^((1-ε)·log4 x + 1) bound, and fits descriptive growth constants.

    Raises:
        BoundViolation: on the first witness when strict
    """
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must be in (0, 1)")
    if limit < 2:
        raise ValueError("limit must be >= 2")
    print(f"🔢 Census sweep up to {limit}", file=sys.stderr)
    if sizes is None or len(sizes) <= limit:
        sizes = shortest_sizes(limit)
    columns = encoder_sizes(limit, threads, factorizer)
    n = columns['n']
    columns['S_short'] = sizes[2:limit + 1].astype(np.int64)

    t = columns['t']
    encoder_min = np.minimum(np.minimum(columns['S_fcf'], columns['S_scf']), columns['S_hor'])
    checks = {
        'scf_six_t': columns['S_scf'] > 6 * t - 1,
        'two_power_t': (np.left_shift(np.int64(1), t)) > n,
        'fcf_s2': columns['S_fcf'] < columns['s2'],
        'short_min': columns['S_short'] > encoder_min,
    }
    violations = {name: [int(w) for w in n[mask]] for name, mask in checks.items()}

    census = SizeCensus(limit, epsilon, columns, violations)
    all_n = np.arange(1, limit + 1)
    log4 = np.log(all_n) / math.log(4)
    census.small_size_count = int(np.count_nonzero(sizes[1:limit + 1] <= (1 - epsilon) * log4))
    census.small_size_bound = 4 ** ((1 - epsilon) * math.log(limit, 4) + 1)
    census.x_power = limit ** (1 - epsilon)
    census.summary = _summary(columns)

    if strict:
        for name, witnesses in violations.items():
            if witnesses:
                raise BoundViolation(name, witnesses[0])
    status = "✅" if census.ok else "❌"
    print(f"{status} Census up to {limit}: "
          f"{sum(len(w) for w in violations.values())} violations", file=sys.stderr)
    return census


def _summary(columns) -> Dict[str, float]:
    n = columns['n'].astype(float)
    log_n = np.log(n)
    summary = {
        f'mean_{name}': float(np.mean(columns[name]))
        for name in ('S_fcf', 'S_scf', 'S_hor', 'S_short')
    }
    summary['share_scf_below_fcf'] = float(np.mean(columns['S_scf'] < columns['S_fcf']))
    summary['hor_log_slope'] = float(stats.linregress(log_n, columns['S_hor']).slope)
    summary['scf_log_slope'] = float(stats.linregress(log_n, columns['S_scf']).slope)
    mask = n >= 3
    scale = log_n[mask] * np.log(log_n[mask])
    summary['fcf_loglog_slope'] = float(stats.linregress(scale, columns['S_fcf'][mask]).slope)
    summary['fcf_loglog_mean_ratio'] = float(np.mean(columns['S_fcf'][mask] / scale))
    summary['fcf_lower_constant'] = FCF_LOWER_CONSTANT
    return summary


@dataclass
class DigitCensus:
    bits: int
    epsilon: float
    threshold: int
    exact_count: Optional[int]
    binomial_count: int
    fraction: float

    def to_json(self) -> dict:
        return {
            'bits': self.bits,
            'epsilon': self.epsilon,
            'threshold': self.threshold,
            'exact_count': self.exact_count,
            'binomial_count': self.binomial_count,
            'fraction': round(self.fraction, 12),
        }


def s2_census(bits: int, epsilon: float, exact_max_bits: int = 22) -> DigitCensus:
    """
    Count 0 <= n < 2^bits with s2(n) <= (1/2 - ε)·bits, by sweep (when
    bits <= exact_max_bits) and by Σ binom(bits, j)
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    threshold = math.floor((0.5 - epsilon) * bits)
    binomial_count = sum(math.comb(bits, j) for j in range(0, threshold + 1)) if threshold >= 0 else 0
    exact = None
    if bits <= exact_max_bits:
        values = np.arange(1 << bits, dtype=np.uint32)
        ones = np.zeros(values.shape, dtype=np.int64)
        for i in range(bits):
            ones += (values >> i) & 1
        exact = int(np.count_nonzero(ones <= threshold))
    fraction = float(stats.binom.cdf(threshold, bits, 0.5)) if threshold >= 0 else 0.0
    return DigitCensus(bits, epsilon, threshold, exact, binomial_count, fraction)


def write_summary(census: SizeCensus, stream: TextIO):
    json.dump(census.to_json(), stream, indent=2, sort_keys=True)
    stream.write('\n')

"""
Analytic Constants Module
High-precision ξ, ρ = 1/ξ, c, σ, the exponential-variant ρ and C = ρ/4,
Darboux expansion coefficients and asymptotic ratio reports.

Everything is evaluated on the real segment 0 <= x <= 1/4 from exact count
tables. Truncation tails are bounded with the crude growth bounds
f(n) < 8ⁿ and f_E(n) < 12ⁿ, which give geometric tails on that segment.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional

from mpmath import mp, mpf

from counting import CountTable, _convolution_series, enumerate_traces
from errors import (AnalyticError, DomainError, InsufficientTable, NoSignChange,
                    PrecisionExhausted)

# Values printed in the source material, used only for comparison reports
PUBLISHED = {
    'rho': '4.076561785276046',
    'c': '0.145691854699979',
    'rho_exp': '4.13073529514801',
    'degree_constant_C': '1.019140446319',
}

# Crude growth bounds: at most n-1 internal nodes, 2 or 3 labels each
GROWTH_ARITHMETIC = 8
GROWTH_EXPONENTIAL = 12

# Bisection steps before switching to Newton
BISECTION_STEPS = 40
NEWTON_MAX_STEPS = 60


@dataclass
class PrecisionContext:
    """
    Args:
        working_digits: Decimal digits carried by mpmath
        target_digits: Digits the results must certify
        guard: Minimum gap between the two
    """
    working_digits: int = 60
    target_digits: int = 15
    guard: int = 10

    def __post_init__(self):
        if self.guard < 10:
            raise ValueError("guard must be >= 10 digits")
        if self.working_digits < self.target_digits + self.guard:
            raise ValueError(
                f"working_digits={self.working_digits} < target_digits + guard "
                f"= {self.target_digits + self.guard}")

    @property
    def tolerance(self):
        return mpf(10) ** (-self.target_digits)


@dataclass
class SeriesTruncation:
    n_max_f: int
    d_max: int
    tail_bound: Optional[mpf] = None  # at the evaluation point


class BoundedValue(NamedTuple):
    value: mpf
    error: mpf


class TildeSeries:
    """
    Truncated F̃(z) = z + Σ_{d>=2} f(d) (F(z^d) - z^d) [+ Σ_{a,b>=2} f(a) f(b) z^(a^b)]

    The double sum is kept as exact integer coefficients of z^e for every
    pair d <= d_max, m <= n_max_f with d·m <= 2·n_max_f; the optional ∧ sum
    covers every a^b <= 2·n_max_f.
    """

    def __init__(self, table: CountTable, d_max: int, growth: int = GROWTH_ARITHMETIC,
                 pow_terms: bool = False, n_max_f: Optional[int] = None):
        n_max_f = n_max_f or table.max_n
        if table.max_n < n_max_f or d_max > n_max_f or d_max < 2:
            raise InsufficientTable(
                f"{table.name} reaches {table.max_n}, need n_max_f={n_max_f} >= d_max={d_max} >= 2")
        self.table = table
        self.n_max_f = n_max_f
        self.d_max = d_max
        self.growth = growth
        self.pow_terms = pow_terms
        self.exponent_cap = 2 * n_max_f

        f = table.values
        coefficients = {1: 1}
        for d in range(2, d_max + 1):
            for m in range(2, min(n_max_f, self.exponent_cap // d) + 1):
                coefficients[d * m] = coefficients.get(d * m, 0) + f[d] * f[m]
        if pow_terms:
            b = 2
            while 2 ** b <= self.exponent_cap:
                a = 2
                while a ** b <= self.exponent_cap:
                    coefficients[a ** b] = coefficients.get(a ** b, 0) + f[a] * f[b]
                    a += 1
                b += 1
        self.terms = sorted(coefficients.items())

    @property
    def truncation(self) -> SeriesTruncation:
        return SeriesTruncation(self.n_max_f, self.d_max)

    def value(self, x, derivative: int = 0):
        """Truncated F̃ or its termwise derivative at x"""
        x = mpf(x)
        total = mpf(0)
        for e, coefficient in self.terms:
            if e < derivative:
                continue
            falling = math.perm(e, derivative)
            total += coefficient * falling * x ** (e - derivative)
        return total

    def tail_bound(self, x):
        """Upper bound on F̃(x) minus the truncated sum, for 0 <= x <= 1/4"""
        x = mpf(x)
        if x == 0:
            return mpf(0)
        B = self.growth
        f = self.table.values
        tail = mpf(0)
        # Inner tails: Σ_{m > M_d} f(m) x^{dm} <= Σ (B x^d)^m
        for d in range(2, self.d_max + 1):
            q = B * x ** d
            M = min(self.n_max_f, self.exponent_cap // d)
            tail += f[d] * q ** (M + 1) / (1 - q)
        # Outer tail: d > d_max
        q2 = B * x ** 2
        tail += B ** 2 * q2 ** (self.d_max + 1) / (1 - q2) ** 2
        if self.pow_terms:
            # a^b = t > cap: at most log2(t) pairs, a <= sqrt(t), b <= log2(t)
            E = self.exponent_cap
            r = x * mpf(B) ** ((mp.sqrt(E) + 2 * mp.log(E, 2)) / E)
            if r >= 1:
                raise InsufficientTable("∧ tail does not converge at this truncation")
            tail += r ** (E + 1) / (1 - r)
        return tail


def _check_tilde_domain(x):
    if x < 0 or x > mpf(1) / 4:
        raise DomainError(f"x={x} outside the certified segment [0, 1/4]")


def eval_F(x, table: CountTable, growth: int = GROWTH_ARITHMETIC) -> BoundedValue:
    """
    F(x) = Σ f(n) xⁿ truncated at the table length

    The tail is Σ_{n > N} (Bx)ⁿ, so x must satisfy Bx < 1.
    """
    x = mpf(x)
    if x < 0 or growth * x >= 1:
        raise DomainError(f"x={x} outside [0, 1/{growth})")
    total = mpf(0)
    power = mpf(1)
    for value in table:
        power *= x
        total += value * power
    q = growth * x
    return BoundedValue(total, q ** (table.max_n + 1) / (1 - q))


def eval_F_tilde(x, series: TildeSeries) -> BoundedValue:
    """F̃(x) with a certified truncation bound, 0 <= x <= 1/4"""
    x = mpf(x)
    _check_tilde_domain(x)
    return BoundedValue(series.value(x), series.tail_bound(x))


def certified_decimals(error, cap: int) -> int:
    """Decimal places guaranteed by an absolute error bound"""
    if error <= 0:
        return cap
    return max(0, min(cap, int(mp.floor(-mp.log10(error)))))


def format_decimals(value, decimals: int) -> str:
    """value rounded to the given number of decimal places"""
    if value == 0:
        return '0'
    magnitude = int(mp.floor(mp.log10(abs(value)))) + 1
    return mp.nstr(value, max(1, decimals + magnitude), strip_zeros=False)


@dataclass
class CertifiedConstant:
    value: mpf
    error: mpf
    certified_digits: int
    residual: Optional[mpf] = None

    def text(self) -> str:
        return format_decimals(self.value, self.certified_digits)


@dataclass
class XiSolution:
    xi: mpf
    rho: mpf
    residual: mpf
    tail_bound: mpf
    xi_error: mpf
    rho_error: mpf
    derivative: mpf


def solve_xi(series: TildeSeries, ctx: PrecisionContext) -> XiSolution:
    """
    Smallest positive root of F̃(ξ) = 1/4

    Bisection on (0, 1/4) to bracket, then Newton with the termwise
    derivative. F̃′ >= 1 on the segment, so |ξ - x| <= residual + tail.

    Raises:
        NoSignChange: F̃(1/4) <= 1/4 for this truncation
        PrecisionExhausted: Newton stalls or the certificate misses the target
    """
    with mp.workdps(ctx.working_digits):
        quarter = mpf(1) / 4

        def g(x):
            return series.value(x) - quarter

        lo, hi = mpf(0), quarter
        if g(hi) <= 0:
            raise NoSignChange("F̃(1/4) <= 1/4; table too short")
        for _ in range(BISECTION_STEPS):
            mid = (lo + hi) / 2
            if g(mid) > 0:
                hi = mid
            else:
                lo = mid

        x = (lo + hi) / 2
        step_tolerance = mpf(10) ** (-(ctx.working_digits - 5))
        for _ in range(NEWTON_MAX_STEPS):
            step = g(x) / series.value(x, 1)
            x -= step
            if abs(step) < step_tolerance:
                break
        else:
            raise PrecisionExhausted("Newton iteration did not converge")
        if not 0 < x < quarter:
            raise PrecisionExhausted(f"Newton left the bracket: x={x}")

        residual = abs(g(x))
        tail = series.tail_bound(x)
        xi_error = residual + tail
        if xi_error >= ctx.tolerance:
            raise PrecisionExhausted(
                f"certificate {mp.nstr(xi_error, 5)} misses 1e-{ctx.target_digits}")
        rho = 1 / x
        rho_error = xi_error / (x * (x - xi_error))
        return XiSolution(x, rho, residual, tail, xi_error, rho_error, series.value(x, 1))


def _c_from(xi, derivative):
    return mp.sqrt(xi * derivative / mp.pi) / 2


def compute_c(series: TildeSeries, solution: XiSolution, ctx: PrecisionContext) -> CertifiedConstant:
    """
    c = ½·√(ξ F̃′(ξ) / π), from the leading Darboux term

    The interval uses ξ ± δ and bounds the truncated F̃′ from above through
    the convexity bound T′(x) <= T(1/4) / (1/4 - x) on the positive tail T.
    """
    with mp.workdps(ctx.working_digits):
        xi, delta = solution.xi, solution.xi_error
        c = _c_from(xi, series.value(xi, 1))
        quarter = mpf(1) / 4
        derivative_tail = series.tail_bound(quarter) / (quarter - (xi + delta))
        c_lo = _c_from(xi - delta, series.value(xi - delta, 1))
        c_hi = _c_from(xi + delta, series.value(xi + delta, 1) + derivative_tail)
        error = max(abs(c - c_lo), abs(c_hi - c))
        if c <= 0:
            raise PrecisionExhausted("c must be positive")
        return CertifiedConstant(c, error, certified_decimals(error, ctx.target_digits))


def compute_sigma(f0_table: CountTable, ctx: PrecisionContext) -> CertifiedConstant:
    """
    σ = Σ_m (f_0 *′ f_0)(m) / 4^(m-1)

    Tail bound 16·(3/4)^(N+1), valid once (f_0 *′ f_0)(m) <= 3^m is checked
    for every computed m.
    """
    N = f0_table.max_n
    conv = _convolution_series(f0_table.values, f0_table.values, N)
    for m in range(1, N + 1):
        if conv[m] > 3 ** m:
            raise AnalyticError(f"(f0 *′ f0)({m}) > 3^{m}; tail certificate fails")
    with mp.workdps(ctx.working_digits):
        total = mpf(0)
        for m in range(4, N + 1):
            if conv[m]:
                total += mpf(conv[m]) / mpf(4) ** (m - 1)
        tail = 16 * (mpf(3) / 4) ** (N + 1)
        return CertifiedConstant(total, tail, certified_decimals(tail, ctx.target_digits))


def darboux_coefficients(series: TildeSeries, solution: XiSolution, J: int,
                         ctx: PrecisionContext) -> List[mpf]:
    """
    c_0 .. c_J with ½·√G(ξz) = Σ c_j (1 - z)^j, where
    1 - 4F̃(z) = (1 - z/ξ) G(z)

    G's expansion about ξ comes from termwise derivatives of the truncated
    F̃: with w = 1 - z, G(ξz) = Σ g_j w^j and
    g_j = 4 (-1)^j ξ^(j+1) F̃^(j+1)(ξ) / (j+1)!.
    """
    if J < 0 or J > 4:
        raise ValueError("J must be in 0..4")
    with mp.workdps(ctx.working_digits):
        xi = solution.xi
        g = [4 * (-1) ** j * xi ** (j + 1) * series.value(xi, j + 1) / math.factorial(j + 1)
             for j in range(J + 1)]
        if g[0] <= 0:
            raise PrecisionExhausted("G(ξ) must be positive")
        s = [mp.sqrt(g[0])]
        for j in range(1, J + 1):
            s.append((g[j] - sum(s[i] * s[j - i] for i in range(1, j))) / (2 * s[0]))
        return [value / 2 for value in s]


def darboux_prediction(coefficients: List[mpf], n: int, terms: int):
    """-Σ_{j < terms} c_j binom(n - j - 3/2, n), the prediction for f(n) ξⁿ"""
    return -sum(coefficients[j] * mp.binomial(n - j - mpf(3) / 2, n) for j in range(terms))


@dataclass
class AsymptoticRow:
    n: int
    exact: int
    leading: mpf
    leading_ratio: mpf
    traces: mpf
    traces_ratio: mpf
    traces_beat_leading: bool = False


def trace_constant(fk: Dict[int, CountTable], left: int, right: int):
    """Σ_t (f_left *′ f_right)(t) / 4^(t-1) over the table range"""
    N = min(fk[left].max_n, fk[right].max_n)
    conv = _convolution_series(fk[left].values, fk[right].values, N)
    return sum(mpf(v) / mpf(4) ** (t - 1) for t, v in enumerate(conv) if v)


def asymptotic_ratio_report(k: int, fk: Dict[int, CountTable], ns: List[int],
                            ctx: PrecisionContext) -> List[AsymptoticRow]:
    """
    Compare f_k(n) with the single-term prediction
    σ^k / (4√π k!) 4ⁿ n^(k - 3/2) and with the full trace prediction
    4ⁿ / (4√π n^(3/2)) Σ_traces nᵖ/p! Π_i Σ_t (f_lᵢ *′ f_rᵢ)(t)/4^(t-1)
    """
    with mp.workdps(ctx.working_digits):
        constants = {}
        sigma = trace_constant(fk, 0, 0)
        traces = enumerate_traces(k)
        for trace in traces:
            for pair in zip(trace.l, trace.r):
                if pair not in constants:
                    constants[pair] = trace_constant(fk, *pair)
        rows = []
        for n in ns:
            exact = fk[k][n]
            base = mpf(4) ** n / (4 * mp.sqrt(mp.pi) * mpf(n) ** mpf(1.5))
            leading = base * (mpf(n) * sigma) ** k / math.factorial(k)
            by_traces = mpf(0)
            for trace in traces:
                term = mpf(n) ** trace.p / math.factorial(trace.p)
                for pair in zip(trace.l, trace.r):
                    term *= constants[pair]
                by_traces += term
            by_traces *= base
            leading_ratio, traces_ratio = exact / leading, exact / by_traces
            rows.append(AsymptoticRow(n, exact, leading, leading_ratio, by_traces, traces_ratio,
                                      bool(abs(traces_ratio - 1) < abs(leading_ratio - 1))))
        return rows


@dataclass
class ConstantsReport:
    xi: CertifiedConstant
    rho: CertifiedConstant
    c: CertifiedConstant
    sigma: CertifiedConstant
    rho_exp: CertifiedConstant
    degree_constant_C: CertifiedConstant
    truncation: SeriesTruncation
    residual: mpf
    four_exp_sigma: mpf = None
    rho_below_four_exp_sigma: bool = None
    published: Dict[str, str] = field(default_factory=lambda: dict(PUBLISHED))

    NAMES = ('xi', 'rho', 'c', 'sigma', 'rho_exp', 'degree_constant_C')

    def to_json(self) -> dict:
        out = {}
        for name in self.NAMES:
            constant = getattr(self, name)
            residual = constant.residual if constant.residual is not None else constant.error
            out[name] = {
                'value': constant.text(),
                'certified_digits': constant.certified_digits,
                'residual': mp.nstr(residual, 3),
            }
        out['four_exp_sigma'] = {'value': mp.nstr(self.four_exp_sigma, 15),
                                 'rho_below': bool(self.rho_below_four_exp_sigma)}
        out['truncation'] = {'n_max_f': self.truncation.n_max_f,
                             'd_max': self.truncation.d_max,
                             'tail_bound': mp.nstr(self.truncation.tail_bound, 3)}
        return out

    def to_text(self) -> str:
        lines = []
        for name in self.NAMES:
            constant = getattr(self, name)
            line = f"{name:18s} = {constant.text()}  ({constant.certified_digits} certified decimals)"
            if name in self.published:
                line += f"  published {self.published[name]}"
            lines.append(line)
        lines.append(f"{'4e^sigma':18s} = {mp.nstr(self.four_exp_sigma, 15)}  "
                     f"(rho < 4e^sigma: {self.rho_below_four_exp_sigma})")
        lines.append(f"residual |F~(xi) - 1/4| = {mp.nstr(self.residual, 3)}, "
                     f"tail bound {mp.nstr(self.truncation.tail_bound, 3)}")
        return '\n'.join(lines)


class ConstantsEngine:
    """
    Computes every constant from count tables held by a TableStore

    Args:
        store: table_cache.TableStore
        ctx: PrecisionContext
        n_max_f: Table length used in the series
        d_max: Outer-sum cutoff
    """

    def __init__(self, store, ctx: Optional[PrecisionContext] = None,
                 n_max_f: int = 400, d_max: int = 200):
        self.store = store
        self.ctx = ctx or PrecisionContext()
        self.n_max_f = n_max_f
        self.d_max = d_max
        self._series = {}
        self._solutions = {}

    def series(self, exponential: bool = False, allow_pow: bool = True) -> TildeSeries:
        key = (exponential, allow_pow)
        if key not in self._series:
            if exponential:
                table = self.store.fexp_table(self.n_max_f, allow_pow=allow_pow)
                self._series[key] = TildeSeries(table, self.d_max, GROWTH_EXPONENTIAL,
                                                pow_terms=allow_pow, n_max_f=self.n_max_f)
            else:
                table = self.store.f_tables(self.n_max_f)[0]
                self._series[key] = TildeSeries(table, self.d_max, GROWTH_ARITHMETIC,
                                                n_max_f=self.n_max_f)
        return self._series[key]

    def solve_xi(self, exponential: bool = False, allow_pow: bool = True) -> XiSolution:
        key = (exponential, allow_pow)
        if key not in self._solutions:
            self._solutions[key] = solve_xi(self.series(exponential, allow_pow), self.ctx)
        return self._solutions[key]

    def compute_c(self) -> CertifiedConstant:
        return compute_c(self.series(), self.solve_xi(), self.ctx)

    def compute_sigma(self) -> CertifiedConstant:
        return compute_sigma(self.store.f0_table(self.n_max_f), self.ctx)

    def compute_rho_exp(self, allow_pow: bool = True) -> CertifiedConstant:
        solution = self.solve_xi(exponential=True, allow_pow=allow_pow)
        with mp.workdps(self.ctx.working_digits):
            return CertifiedConstant(solution.rho, solution.rho_error,
                                     certified_decimals(solution.rho_error, self.ctx.target_digits),
                                     solution.residual)

    def darboux_coefficients(self, J: int) -> List[mpf]:
        return darboux_coefficients(self.series(), self.solve_xi(), J, self.ctx)

    def darboux_errors(self, n: int, J: int) -> List[mpf]:
        """|f(n)ξⁿ - prediction| using 1, 2, ..., J+1 terms"""
        coefficients = self.darboux_coefficients(J)
        f = self.store.f_tables(max(n, self.n_max_f))[0]
        with mp.workdps(self.ctx.working_digits):
            exact = f[n] * self.solve_xi().xi ** n
            return [abs(exact - darboux_prediction(coefficients, n, terms))
                    for terms in range(1, J + 2)]

    def empirical_c(self, ns: List[int]) -> Dict[int, mpf]:
        """f(n) ξⁿ n^(3/2), which tends to c"""
        f = self.store.f_tables(max(max(ns), self.n_max_f))[0]
        xi = self.solve_xi().xi
        with mp.workdps(self.ctx.working_digits):
            return {n: f[n] * xi ** n * mpf(n) ** mpf(1.5) for n in ns}

    def asymptotic_ratio_report(self, k: int, N: int, ns: List[int]) -> List[AsymptoticRow]:
        fk = self.store.fk_tables(k, N)
        return asymptotic_ratio_report(k, fk, ns, self.ctx)

    def report(self) -> ConstantsReport:
        """Every constant with its certificate"""
        solution = self.solve_xi()
        ctx = self.ctx
        with mp.workdps(ctx.working_digits):
            xi = CertifiedConstant(solution.xi, solution.xi_error,
                                   certified_decimals(solution.xi_error, ctx.target_digits),
                                   solution.residual)
            rho = CertifiedConstant(solution.rho, solution.rho_error,
                                    certified_decimals(solution.rho_error, ctx.target_digits),
                                    solution.residual)
            degree_constant = CertifiedConstant(solution.rho / 4, solution.rho_error / 4,
                                              certified_decimals(solution.rho_error / 4,
                                                                 ctx.target_digits))
            sigma = self.compute_sigma()
            four_exp_sigma = 4 * mp.exp(sigma.value)
            truncation = self.series().truncation
            truncation.tail_bound = solution.tail_bound
            return ConstantsReport(
                xi=xi, rho=rho, c=self.compute_c(), sigma=sigma,
                rho_exp=self.compute_rho_exp(), degree_constant_C=degree_constant,
                truncation=truncation, residual=solution.residual,
                four_exp_sigma=four_exp_sigma,
                rho_below_four_exp_sigma=bool(solution.rho < four_exp_sigma))

"""
Verification Suites
Cross-checks behind `verify --suite`: each suite raises VerificationFailure
with the first witness, or returns the list of checks it passed.
"""

import sys
from typing import Callable, Dict, List

from mpmath import mp, mpf

from analytic import PUBLISHED, ConstantsEngine, PrecisionContext
from census import shortest_sizes, verify_bounds
from counting import (build_fk_tables, check_f_invariants, check_partition_identity, f_trace,
                      max_multiplications)
from encoders import encode_fcf, encode_horner, encode_scf, horner_from_fcf
from enumeration import EnumerationConfig, FormulaEnumerator
from errors import FormulaCensusError, VerificationFailure
from formula import ARITHMETIC, EXPONENTIAL, validate
from notation import canonical_key, parse_infix, parse_polish, to_infix, to_polish
from rewrite_graph import build_graph, neighbors, stats


# Partition identity and two-method f_k ranges of the counting suite
PARTITION_MAX_N = 40
METHODS_MAX_N = 24
# Printer / parser round trips of the graph suite
ROUND_TRIP_MAX_N = 12


def _expect(suite, condition, witness):
    if not condition:
        raise VerificationFailure(suite, witness)


def verify_counting(store, settings) -> List[str]:
    """Enumeration against every counting method for n <= oracle_max_n"""
    N = settings['oracle_max_n']
    f, f_plus, f_times = store.f_tables(settings['max_n_f'])
    f0_table = store.f0_table(settings['max_n_f'])
    try:
        check_f_invariants(f, f_plus, f_times, f0_table)
        partition_n = min(PARTITION_MAX_N, f.max_n)
        check_partition_identity(partition_n, f.truncated(partition_n))
        # k = 5 first appears at n = 20
        build_fk_tables(max_multiplications(METHODS_MAX_N), METHODS_MAX_N)
        k_max = max_multiplications(N)
        fk = build_fk_tables(k_max, N)
    except FormulaCensusError as e:
        raise VerificationFailure('counting', str(e)) from e
    fexp = store.fexp_table(N)

    arithmetic = FormulaEnumerator(EnumerationConfig(max_n=N, kinds=ARITHMETIC))
    exponential = FormulaEnumerator(EnumerationConfig(max_n=N, kinds=EXPONENTIAL))
    for n in range(1, N + 1):
        _expect('counting', arithmetic.count(n) == f[n], f"f({n})")
        by_k = arithmetic.count_by_k(n)
        for k in range(k_max + 1):
            _expect('counting', by_k.get(k, 0) == fk[k][n], f"f_{k}({n})")
        for trace, count in arithmetic.count_by_trace(n).items():
            _expect('counting', count == f_trace(trace, n, fk), f"f_trace{trace}({n})")
        _expect('counting', exponential.count(n) == fexp[n], f"f_exp({n})")
    return ['f = f⁺ + f×', 'f < 8ⁿ', f'Σ f_k = f n <= {partition_n}',
            f'f_k traces = recursion n <= {METHODS_MAX_N}', f'enumeration n <= {N}']


def verify_encodings(store, settings) -> List[str]:
    """Encoders, displays and bound sweep"""
    displays = {
        'fcf': (encode_fcf(31), "(1+1)^((1+1)^(1+1))+((1+1)^((1+1)+1)+((1+1)^(1+1)+((1+1)+1)))"),
        'scf': (encode_scf(2430), "((1+1)×(1+(1+1))^(1+(1+1)^(1+1)))×(1+(1+1)^(1+1))"),
        'horner': (encode_horner(53376),
                   "((((1+1)+1)(1+1)^(1+1)+1)(1+1)^((1+1)^(1+1)+1)+1)(1+1)^(((1+1)+1)(1+1)+1)"),
    }
    for name, (result, text) in displays.items():
        _expect('encodings', result.formula == parse_infix(text), f"{name} display")

    limit = min(settings['census_limit'], 1 << 12)
    for n in range(2, limit + 1):
        for result in (encode_fcf(n), encode_scf(n), encode_horner(n)):
            _expect('encodings', validate(result.formula, EXPONENTIAL).valid
                    and result.formula.value == n, f"{result.scheme}({n})")
        _expect('encodings', horner_from_fcf(encode_fcf(n).formula) == encode_horner(n),
                f"horner_from_fcf({n})")

    N = settings['oracle_max_n']
    sizes = shortest_sizes(settings['census_limit'])
    enumerator = FormulaEnumerator(EnumerationConfig(max_n=N, kinds=EXPONENTIAL))
    for n in range(1, N + 1):
        _expect('encodings', int(sizes[n]) == min(a.size for a in enumerator.enumerate(n)),
                f"S_short({n})")
    try:
        verify_bounds(settings['census_limit'], settings['epsilon'],
                      settings['threads'], sizes=sizes)
    except FormulaCensusError as e:
        raise VerificationFailure('encodings', str(e)) from e
    return ['displays', f'encoders n <= {limit}', f'S_short n <= {N}',
            f"bounds n <= {settings['census_limit']}"]


def verify_graph(store, settings) -> List[str]:
    """Vertex counts, symmetry and round trips for small graphs"""
    cap = settings['graph_cap']
    f = store.f_tables(max(cap, ROUND_TRIP_MAX_N))[0]
    for n in range(3, cap + 1):
        graph = build_graph(n, cap, settings['threads'])
        graph_stats = stats(graph)
        _expect('graph', graph_stats.vertex_count == f[n], f"|G_{n}|")
    enumerator = FormulaEnumerator(EnumerationConfig(max_n=ROUND_TRIP_MAX_N))
    for n in range(1, min(cap, 8) + 1):
        for formula in enumerator.enumerate(n):
            for other in neighbors(formula):
                _expect('graph', formula in neighbors(other), f"{formula.key} -> {other.key}")
    for n in range(1, ROUND_TRIP_MAX_N + 1):
        keys = set()
        for formula in enumerator.enumerate(n):
            polish = to_polish(formula)
            _expect('graph', validate(formula).valid and formula.value == n, polish)
            _expect('graph', len(polish) == formula.size, polish)
            _expect('graph', parse_polish(polish, ARITHMETIC) == formula, polish)
            _expect('graph', parse_infix(to_infix(formula), ARITHMETIC) == formula, polish)
            keys.add(canonical_key(formula))
        _expect('graph', len(keys) == f[n], f"{len(keys)} distinct keys for n={n}")
    return [f'|G_n| = f(n) for 3 <= n <= {cap}', 'edge symmetry',
            f'round trips n <= {ROUND_TRIP_MAX_N}']


def verify_constants(store, settings) -> List[str]:
    """Constants against the published digits"""
    ctx = PrecisionContext(settings['working_digits'], settings['target_digits'],
                           settings['guard_digits'])
    engine = ConstantsEngine(store, ctx, settings['max_n_f'], settings['d_max'])
    report = engine.report()
    with mp.workdps(ctx.working_digits):
        checks = {'rho': (report.rho.value, 12), 'c': (report.c.value, 12),
                  'rho_exp': (report.rho_exp.value, 10),
                  'degree_constant_C': (report.degree_constant_C.value, 12)}
        for name, (value, digits) in checks.items():
            _expect('constants', abs(value - mpf(PUBLISHED[name])) < mpf(10) ** (-digits), name)
        _expect('constants', report.residual < mpf(10) ** -12, 'residual')
        # The exponential pipeline with ∧ switched off must land on ρ
        nopow = engine.series(exponential=True, allow_pow=False)
        _expect('constants', nopow.table.values == store.f_tables(engine.n_max_f)[0].values,
                'f_exp without ∧ = f')
        degenerate = engine.compute_rho_exp(allow_pow=False)
        _expect('constants', abs(degenerate.value - report.rho.value) < mpf(10) ** -12, 'rho_exp without ∧')
    return ['rho', 'c', 'rho_exp', 'degree_constant_C', 'residual', 'degenerate rho_exp']


# Available suites
SUITES: Dict[str, Callable] = {
    'counting': verify_counting,
    'encodings': verify_encodings,
    'graph': verify_graph,
    'constants': verify_constants,
}


def run_suite(name: str, store, settings) -> List[str]:
    """
    Run one suite by name

    Raises:
        VerificationFailure: with the first witness
    """
    suite = SUITES.get(name)
    if suite is None:
        raise ValueError(f"Unknown suite '{name}', choose from {', '.join(SUITES)}")
    passed = suite(store, settings)
    print(f"✅ {name}: {len(passed)} checks passed", file=sys.stderr)
    return passed

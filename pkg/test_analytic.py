"""
Tests for the analytic constants
"""

import math

import pytest
from mpmath import mp, mpf

from analytic import (GROWTH_ARITHMETIC, GROWTH_EXPONENTIAL, PUBLISHED, ConstantsEngine,
                      PrecisionContext, TildeSeries, asymptotic_ratio_report, certified_decimals,
                      compute_c, compute_sigma, darboux_coefficients, eval_F,
                      eval_F_tilde, format_decimals, solve_xi)
from counting import build_f0_table, build_f_table, build_fk_tables
from errors import DomainError, InsufficientTable

QUICK = PrecisionContext(working_digits=40, target_digits=12, guard=10)


@pytest.fixture(scope='module')
def quick_series():
    f = build_f_table(120)[0]
    return TildeSeries(f, d_max=60, growth=GROWTH_ARITHMETIC)


@pytest.fixture(scope='module')
def quick_solution(quick_series):
    return solve_xi(quick_series, QUICK)


def test_precision_context_needs_guard_digits():
    with pytest.raises(ValueError):
        PrecisionContext(working_digits=20, target_digits=15, guard=10)
    with pytest.raises(ValueError):
        PrecisionContext(working_digits=60, target_digits=15, guard=5)


def test_eval_F_domain(f_tables):
    with pytest.raises(DomainError):
        eval_F(mpf(1) / 8, f_tables[0])
    with pytest.raises(DomainError):
        eval_F(-1, f_tables[0])
    value, tail = eval_F(mpf(1) / 16, f_tables[0])
    assert value > mpf(1) / 16
    assert tail < mpf(10) ** -15


def test_eval_F_tilde_domain(quick_series):
    with pytest.raises(DomainError):
        eval_F_tilde(mpf('0.26'), quick_series)
    with pytest.raises(DomainError):
        eval_F_tilde(-mpf('0.01'), quick_series)
    assert eval_F_tilde(0, quick_series).value == 0


def test_series_needs_enough_table(f_tables):
    with pytest.raises(InsufficientTable):
        TildeSeries(f_tables[0], d_max=80)


def test_series_starts_with_z_and_products(quick_series):
    coefficients = dict(quick_series.terms)
    # z + f(2)f(2) z^4 + 2 f(2)f(3) z^6 + ...
    assert coefficients[1] == 1
    assert coefficients[4] == 1
    assert coefficients[6] == 4
    assert 2 not in coefficients and 3 not in coefficients


def test_exponential_series_without_pow(memory_store):
    engine = ConstantsEngine(memory_store, QUICK, n_max_f=120, d_max=60)
    nopow = engine.series(exponential=True, allow_pow=False)
    arithmetic = engine.series()
    assert nopow.table.name == 'f_exp_nopow'
    assert nopow.growth == GROWTH_EXPONENTIAL and not nopow.pow_terms
    assert nopow.terms == arithmetic.terms
    with_pow = dict(engine.series(exponential=True).terms)
    # 2^2 adds f_E(2)f_E(2) on top of the product terms
    assert with_pow[4] == dict(nopow.terms)[4] + 1
    x = mpf('0.2')
    assert nopow.tail_bound(x) > arithmetic.tail_bound(x)


def test_xi_and_rho(quick_solution):
    with mp.workdps(40):
        assert quick_solution.residual < mpf(10) ** -12
        assert quick_solution.xi_error < mpf(10) ** -12
        assert abs(quick_solution.rho - mpf(PUBLISHED['rho'])) < mpf(10) ** -11
        assert abs(1 / quick_solution.xi - quick_solution.rho) < mpf(10) ** -30


def test_c(quick_series, quick_solution):
    c = compute_c(quick_series, quick_solution, QUICK)
    with mp.workdps(40):
        assert abs(c.value - mpf(PUBLISHED['c'])) < mpf(10) ** -11
        assert c.certified_digits >= 11


def test_c_matches_leading_darboux_coefficient(quick_series, quick_solution):
    coefficients = darboux_coefficients(quick_series, quick_solution, 2, QUICK)
    c = compute_c(quick_series, quick_solution, QUICK)
    with mp.workdps(40):
        assert abs(coefficients[0] / (2 * mp.sqrt(mp.pi)) - c.value) < mpf(10) ** -20


def test_sigma():
    sigma = compute_sigma(build_f0_table(200), QUICK)
    with mp.workdps(40):
        assert mpf(1) / 64 < sigma.value < 1
        assert sigma.error < mpf(10) ** -20
        # rho sits below 4e^sigma
        assert mpf(PUBLISHED['rho']) < 4 * mp.exp(sigma.value)


def test_certified_decimals_and_formatting():
    assert certified_decimals(mpf('1e-13'), 15) == 13
    assert certified_decimals(mpf('1e-40'), 15) == 15
    assert certified_decimals(mpf(0), 12) == 12
    with mp.workdps(30):
        assert format_decimals(mpf(PUBLISHED['rho']), 12) == '4.076561785276'
        assert format_decimals(mpf('0.015625'), 3) == '0.016'


def test_catalan_ratio_near_one():
    f0_table = build_f0_table(100)
    ratio = f0_table[100] * 4 * math.sqrt(math.pi) * 100 ** 1.5 / 4 ** 100
    assert abs(ratio - 1) < 0.02


@pytest.mark.slow
def test_full_constants_report(store):
    engine = ConstantsEngine(store, PrecisionContext(), n_max_f=400, d_max=200)
    report = engine.report()
    with mp.workdps(60):
        assert abs(report.rho.value - mpf(PUBLISHED['rho'])) < mpf(10) ** -12
        assert abs(report.c.value - mpf(PUBLISHED['c'])) < mpf(10) ** -12
        assert abs(report.rho_exp.value - mpf(PUBLISHED['rho_exp'])) < mpf(10) ** -10
        assert abs(report.degree_constant_C.value - mpf(PUBLISHED['degree_constant_C'])) < mpf(10) ** -12
        assert report.residual < mpf(10) ** -12
        assert report.rho_below_four_exp_sigma
        nopow = engine.series(exponential=True, allow_pow=False)
        assert nopow.table.name == 'f_exp_nopow' and nopow.growth == GROWTH_EXPONENTIAL
        degenerate = engine.compute_rho_exp(allow_pow=False)
        assert abs(degenerate.value - report.rho.value) < mpf(10) ** -20
    data = report.to_json()
    assert data['rho']['certified_digits'] >= 12
    assert data['rho']['value'].startswith('4.07656178527')


@pytest.mark.slow
def test_two_term_darboux_beats_one_term(store):
    engine = ConstantsEngine(store, PrecisionContext(), n_max_f=400, d_max=200)
    one, two = engine.darboux_errors(200, 1)
    assert two <= one / 2


@pytest.mark.slow
def test_empirical_c_approaches_c(store):
    engine = ConstantsEngine(store, PrecisionContext(), n_max_f=400, d_max=200)
    values = engine.empirical_c([100, 200, 400])
    c = float(PUBLISHED['c'])
    gaps = [abs(float(values[n]) - c) for n in (100, 200, 400)]
    assert gaps[0] > gaps[1] > gaps[2]


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 2])
def test_ratios_approach_one(store, k):
    engine = ConstantsEngine(store, PrecisionContext(), n_max_f=400, d_max=200)
    rows = engine.asymptotic_ratio_report(k, 400, [100, 200, 400])
    gaps = [abs(row.traces_ratio - 1) for row in rows]
    assert gaps[0] > gaps[1] > gaps[2]


@pytest.mark.slow
def test_trace_comparison_is_reported(store):
    engine = ConstantsEngine(store, PrecisionContext(), n_max_f=400, d_max=200)
    rows = engine.asymptotic_ratio_report(2, 400, [100, 200, 400])
    assert [row.n for row in rows] == [100, 200, 400]
    for row in rows:
        assert row.traces_beat_leading == (abs(row.traces_ratio - 1) < abs(row.leading_ratio - 1))
        assert 0.9 < row.traces_ratio < 1 and 0.9 < row.leading_ratio < 1
    assert rows[0].leading_ratio < rows[1].leading_ratio < rows[2].leading_ratio


def test_single_product_predictions_coincide():
    tables = build_fk_tables(1, 100)
    row = asymptotic_ratio_report(1, tables, [100], QUICK)[0]
    assert row.leading == row.traces
    assert not row.traces_beat_leading


def test_ratio_report_k_zero():
    tables = build_fk_tables(0, 100)
    rows = asymptotic_ratio_report(0, tables, [100], QUICK)
    assert abs(rows[0].leading_ratio - 1) < 0.02
    assert rows[0].leading == rows[0].traces

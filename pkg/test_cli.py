"""
Tests for the command line front end
"""

import json

import pytest

import verification
from cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, run
from encoders import encode_scf
from errors import VerificationFailure
from notation import parse_infix


@pytest.fixture
def cli(tmp_path, capsys):
    """Run a command against a throwaway cache; returns (code, stdout)"""
    def invoke(*argv):
        code = run(list(argv) + ['--cache-dir', str(tmp_path / 'cache')])
        return code, capsys.readouterr().out
    return invoke


def test_count(cli):
    assert cli('count', '--seq', 'f', '--n', '4') == (EXIT_OK, '6\n')
    assert cli('count', '--seq', 'f0', '--n', '10') == (EXIT_OK, '4862\n')
    assert cli('count', '--seq', 'fexp', '--n', '4') == (EXIT_OK, '7\n')
    assert cli('count', '--seq', 'fk', '--k', '1', '--n', '5') == (EXIT_OK, '2\n')
    assert cli('count', '--seq', 'fk', '--k', '5', '--n', '20') == (EXIT_OK, '78\n')


def test_count_table_csv(cli):
    code, out = cli('count', '--seq', 'f', '--n', '4', '--all', '--format', 'csv')
    assert code == EXIT_OK
    assert out.splitlines() == ['n,value', '1,1', '2,1', '3,2', '4,6']


def test_usage_errors(cli):
    assert cli('count', '--seq', 'fk', '--n', '5')[0] == EXIT_USAGE
    assert cli('count', '--seq', 'nope', '--n', '5')[0] == EXIT_USAGE
    assert cli('count', '--seq', 'f', '--n', '0')[0] == EXIT_USAGE
    assert cli('census', '--epsilon', '2')[0] == EXIT_USAGE
    assert run([]) == EXIT_USAGE


def test_traces(cli):
    code, out = cli('traces', '--k', '2')
    assert code == EXIT_OK
    assert len(out.splitlines()) == 3
    code, out = cli('traces', '--k', '1', '--n', '5', '--format', 'json')
    data = json.loads(out)
    assert data['traces'] == [{'p': 1, 'l': [0], 'r': [0], 'count': 2}]


def test_enumerate(cli):
    assert cli('enumerate', '--n', '4') == (EXIT_OK, '6\n')
    assert cli('enumerate', '--n', '4', '--pow') == (EXIT_OK, '7\n')
    code, out = cli('enumerate', '--n', '5', '--by-k', '--format', 'json')
    assert json.loads(out)['by_k'] == {'0': 14, '1': 2}
    code, out = cli('enumerate', '--n', '3', '--dump')
    assert sorted(out.split()) == ['++111', '+1+11']
    assert cli('enumerate', '--n', '13')[0] == EXIT_USAGE


def test_encode(cli):
    code, out = cli('encode', '--scheme', 'scf', '--n', '2430')
    assert code == EXIT_OK
    assert parse_infix(out.strip()) == encode_scf(2430).formula
    code, out = cli('encode', '--scheme', 'short', '--n', '6', '--format', 'json')
    assert json.loads(out)['length'] == 9


def test_census(cli, tmp_path):
    summary = tmp_path / 'summary.json'
    code, out = cli('census', '--limit', '300', '--format', 'csv', '--summary', str(summary))
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == 'n,s2,t,S_fcf,S_scf,S_hor,S_short'
    assert len(lines) == 300
    assert json.loads(summary.read_text(encoding='utf-8'))['limit'] == 300
    code, out = cli('census', '--limit', '300', '--format', 'json')
    assert all(v == 0 for v in json.loads(out)['violations'].values())


def test_s2_census(cli):
    code, out = cli('census', '--s2-bits', '16', '--epsilon', '0.25', '--format', 'json')
    assert code == EXIT_OK
    assert json.loads(out)['exact_count'] == 2517


def test_graph(cli, tmp_path):
    dot = tmp_path / 'g.dot'
    graph_stats = tmp_path / 'stats.json'
    code, out = cli('graph', '--n', '4', '--format', 'json', '--dot', str(dot),
                    '--stats', str(graph_stats))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data['stats']['vertex_count'] == 6
    assert data['degrees']['f0_minus_one'] == 4
    assert dot.read_text(encoding='utf-8').startswith('graph G_4 {')
    assert json.loads(graph_stats.read_text(encoding='utf-8')) == data['stats']


def test_graph_growth_constant(cli):
    code, out = cli('graph', '--n', '4', '--format', 'json', '--growth-constant', '2')
    assert code == EXIT_OK
    degrees = json.loads(out)['degrees']
    assert degrees['growth_constant'] == 2.0
    assert degrees['size_over_c_power'] == 0.375
    assert cli('graph', '--n', '4', '--growth-constant', '0.5')[0] == EXIT_USAGE


def test_json_is_deterministic(cli):
    first = cli('graph', '--n', '5', '--format', 'json')
    second = cli('graph', '--n', '5', '--format', 'json')
    assert first == second


def test_verification_failure_exit_code(cli, monkeypatch):
    def failing(store, settings):
        raise VerificationFailure('graph', 'witness')
    monkeypatch.setitem(verification.SUITES, 'graph', failing)
    assert cli('verify', '--suite', 'graph')[0] == EXIT_VERIFICATION


def test_verify_counting_suite(cli, tmp_path):
    settings = tmp_path / 'settings.json'
    settings.write_text(json.dumps({'oracle_max_n': 8, 'max_n_f': 40}), encoding='utf-8')
    code, out = cli('verify', '--suite', 'counting', '--settings', str(settings))
    assert code == EXIT_OK
    assert 'ok' in out


@pytest.mark.slow
def test_verify_graph_suite_round_trips_to_twelve(cli, tmp_path):
    settings = tmp_path / 'settings.json'
    settings.write_text(json.dumps({'graph_cap': 6}), encoding='utf-8')
    code, out = cli('verify', '--suite', 'graph', '--settings', str(settings))
    assert code == EXIT_OK
    assert 'round trips n <= 12' in out


@pytest.mark.slow
def test_constants(cli):
    code, out = cli('constants', '--digits', '12')
    assert code == EXIT_OK
    assert '4.076561785276' in out
    first = cli('constants', '--digits', '12', '--format', 'json')
    second = cli('constants', '--digits', '12', '--format', 'json')
    assert first == second
    assert json.loads(first[1])['rho']['value'] == '4.076561785276'

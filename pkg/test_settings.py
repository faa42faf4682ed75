"""
Tests for settings loading and cache directory resolution
"""

import json

import settings
from settings import DEFAULT_SETTINGS, load_settings, resolve_cache_dir, save_settings


def test_missing_file_gives_defaults(tmp_path):
    loaded = load_settings(str(tmp_path / 'absent.json'))
    assert loaded == DEFAULT_SETTINGS
    assert loaded is not DEFAULT_SETTINGS


def test_file_overrides_defaults(tmp_path):
    path = tmp_path / 'settings.json'
    path.write_text(json.dumps({'graph_cap': 8}), encoding='utf-8')
    loaded = load_settings(str(path))
    assert loaded['graph_cap'] == 8
    assert loaded['max_n_f'] == DEFAULT_SETTINGS['max_n_f']


def test_broken_file_falls_back(tmp_path):
    path = tmp_path / 'settings.json'
    path.write_text('{not json', encoding='utf-8')
    assert load_settings(str(path)) == DEFAULT_SETTINGS


def test_save_then_load(tmp_path):
    path = str(tmp_path / 'settings.json')
    save_settings({**DEFAULT_SETTINGS, 'threads': 4}, path)
    assert load_settings(path)['threads'] == 4


def test_shipped_config_matches_defaults():
    assert set(load_settings()) == set(DEFAULT_SETTINGS)


def test_cache_dir_order(monkeypatch):
    monkeypatch.delenv(settings.CACHE_DIR_ENV, raising=False)
    assert resolve_cache_dir({'cache_dir': None}).endswith('cache')
    assert resolve_cache_dir({'cache_dir': '/from/settings'}) == '/from/settings'
    monkeypatch.setenv(settings.CACHE_DIR_ENV, '/from/env')
    assert resolve_cache_dir({'cache_dir': '/from/settings'}) == '/from/env'
    assert resolve_cache_dir({}, '/from/flag') == '/from/flag'

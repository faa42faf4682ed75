"""
Settings Module
Loads project settings from config/formula_settings.json and resolves the
table cache directory
"""

import json
import os
import sys

# Project root directory (parent of src/)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Settings file
SETTINGS_FILE = os.path.join(BASE_DIR, 'config', 'formula_settings.json')

# Environment variable selecting the table cache directory
CACHE_DIR_ENV = 'FORMULA_CACHE_DIR'

# Default settings
DEFAULT_SETTINGS = {
    'cache_dir': None,  # None = <project>/cache
    'use_cache': True,
    'max_n_f': 400,  # f-table length needed by the analytic pipeline
    'oracle_max_n': 12,  # n range for oracle-equivalence checks
    'enumeration_cap': 12,
    'memo_threshold': 9,  # sub-formula lists kept in memory up to this value
    'working_digits': 60,
    'target_digits': 15,
    'guard_digits': 10,
    'd_max': 200,  # outer-sum cutoff for F-tilde
    'census_limit': 65536,
    'census_max_limit': 1048576,
    'epsilon': 0.5,
    'graph_cap': 10,
    'threads': 1,
}


def load_settings(path=None):
    """
    Load settings from disk, merged over DEFAULT_SETTINGS

    Args:
        path: Settings file path (default: config/formula_settings.json)

    Returns:
        dict: Merged settings
    """
    path = path or SETTINGS_FILE
    if os.path.exists(path):
        try:
            with open(path, 'r') as f:
                return {**DEFAULT_SETTINGS, **json.load(f)}
        except Exception as e:
            print(f"⚠️  Error loading settings: {e}", file=sys.stderr)
    return DEFAULT_SETTINGS.copy()


def save_settings(settings, path=None):
    """Save settings to disk"""
    path = path or SETTINGS_FILE
    try:
        with open(path, 'w') as f:
            json.dump(settings, f, indent=2)
        print("💾 Settings saved", file=sys.stderr)
    except Exception as e:
        print(f"⚠️  Error saving settings: {e}", file=sys.stderr)


def resolve_cache_dir(settings, override=None):
    """
    Pick the table cache directory

    Order: explicit override (CLI flag), FORMULA_CACHE_DIR, the
    'cache_dir' setting, then <project>/cache.
    """
    if override:
        return override
    env_dir = os.environ.get(CACHE_DIR_ENV)
    if env_dir:
        return env_dir
    if settings.get('cache_dir'):
        return settings['cache_dir']
    return os.path.join(BASE_DIR, 'cache')

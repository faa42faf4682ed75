"""
Shared pytest setup: puts src/ on sys.path the way run.py does
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from counting import build_f0_table, build_f_table, build_fexp_table  # noqa: E402
from table_cache import TableStore  # noqa: E402


@pytest.fixture(scope='session')
def f_tables():
    """(f, f_plus, f_times) up to 60"""
    return build_f_table(60)


@pytest.fixture(scope='session')
def f0_table():
    return build_f0_table(60)


@pytest.fixture(scope='session')
def fexp_table():
    return build_fexp_table(60)


@pytest.fixture
def store(tmp_path):
    """TableStore writing into a throwaway cache directory"""
    return TableStore(str(tmp_path / 'cache'))


@pytest.fixture
def memory_store():
    return TableStore(None, use_cache=False)

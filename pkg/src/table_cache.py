"""
Table Cache Module
Human-readable on-disk cache for CountTables

File format:
    # sequence=<name> max_n=<N>
    1 <value>
    ...
    N <value>
    # sha256=<hex digest of every preceding line>
"""

import hashlib
import os
import sys
from typing import Callable, Dict, Optional

from counting import (CountTable, build_f0_table, build_f_table, build_fexp_parts,
                      build_fk_tables, catalan, fk_name, max_multiplications, perfect_power_pairs,
                      proper_divisors)
from errors import (CacheError, CacheIOError, ChecksumMismatch, FormatError,
                    TableInvariantViolation)

# Indices re-derived from the loaded table itself when checking invariants
INVARIANT_SAMPLE = 40


def _body(table: CountTable) -> str:
    lines = [f"# sequence={table.name} max_n={table.max_n}\n"]
    lines.extend(f"{n} {value}\n" for n, value in table.items())
    return ''.join(lines)


def save_table(table: CountTable, path: str):
    """Write a table; the checksum covers the header and every value line"""
    body = _body(table)
    digest = hashlib.sha256(body.encode('utf-8')).hexdigest()
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        tmp_path = f"{path}.tmp"
        with open(tmp_path, 'w', encoding='utf-8') as f:
            f.write(body)
            f.write(f"# sha256={digest}\n")
        os.replace(tmp_path, path)
    except OSError as e:
        raise CacheIOError(f"cannot write {path}: {e}") from e


def _check_invariants(table: CountTable):
    """Re-derive a sample of values from the table's own earlier entries"""
    values = table.values
    top = min(table.max_n, INVARIANT_SAMPLE)
    if any(v < 0 for v in values[1:]):
        raise TableInvariantViolation(f"{table.name}: negative value")
    if table.name in ('f', 'f_exp_nopow'):
        for n in range(1, top + 1):
            expected = 1 if n == 1 else (
                sum(values[n - h] * values[h] for h in range(1, n))
                + sum(values[d] * values[n // d] for d in proper_divisors(n)))
            if values[n] != expected:
                raise TableInvariantViolation(f"{table.name}({n}) = {values[n]} breaks f = f⁺ + f×")
    elif table.name == 'f_exp':
        for n in range(1, top + 1):
            expected = 1 if n == 1 else (
                sum(values[n - h] * values[h] for h in range(1, n))
                + sum(values[d] * values[n // d] for d in proper_divisors(n))
                + sum(values[a] * values[b] for a, b in perfect_power_pairs(n)))
            if values[n] != expected:
                raise TableInvariantViolation(f"f_exp({n}) = {values[n]} breaks its recurrence")
    elif table.name == 'f0':
        for n in range(1, top + 1):
            if values[n] != catalan(n - 1):
                raise TableInvariantViolation(f"f0({n}) is not C_{n - 1}")
    elif table.k is not None:
        for n in range(1, table.max_n + 1):
            if table.k > max_multiplications(n) and values[n] != 0:
                raise TableInvariantViolation(f"{table.name}({n}) must be 0 below n = 4k")


def load_table(path: str) -> CountTable:
    """
    Read a table written by save_table

    Raises:
        CacheIOError: the file cannot be read
        FormatError: truncated or malformed content
        ChecksumMismatch: the body does not match its digest
        TableInvariantViolation: values break the sequence's own recurrence
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.readlines()
    except OSError as e:
        raise CacheIOError(f"cannot read {path}: {e}") from e

    if len(lines) < 2 or not lines[0].startswith('# sequence='):
        raise FormatError(f"{path}: missing header")
    if not lines[-1].startswith('# sha256=') or not lines[-1].endswith('\n'):
        raise FormatError(f"{path}: missing checksum line (truncated file?)")

    try:
        header = dict(field.split('=', 1) for field in lines[0][2:].split())
        name = header['sequence']
        max_n = int(header['max_n'])
    except (KeyError, ValueError) as e:
        raise FormatError(f"{path}: bad header {lines[0].strip()!r}") from e

    body = ''.join(lines[:-1])
    digest = lines[-1].strip()[len('# sha256='):]
    if hashlib.sha256(body.encode('utf-8')).hexdigest() != digest:
        raise ChecksumMismatch(f"{path}: checksum mismatch")

    value_lines = lines[1:-1]
    if len(value_lines) != max_n:
        raise FormatError(f"{path}: {len(value_lines)} value lines, header says {max_n}")
    values = [0] * (max_n + 1)
    for expected_n, line in enumerate(value_lines, start=1):
        parts = line.split()
        try:
            n, value = int(parts[0]), int(parts[1])
        except (IndexError, ValueError) as e:
            raise FormatError(f"{path}: bad line {line.strip()!r}") from e
        if n != expected_n or len(parts) != 2:
            raise FormatError(f"{path}: expected index {expected_n}, found {line.strip()!r}")
        values[n] = value

    table = CountTable(name, values)
    _check_invariants(table)
    return table


class TableStore:
    """
    Builds CountTables on demand and keeps them on disk between runs

    A cached table is reused when it reaches at least the requested max_n;
    otherwise the table is rebuilt and the cache file replaced.
    """

    def __init__(self, cache_dir: Optional[str], use_cache: bool = True):
        self.cache_dir = cache_dir
        self.use_cache = use_cache and cache_dir is not None
        self.memory: Dict[str, CountTable] = {}

    def path_for(self, name: str) -> str:
        return os.path.join(self.cache_dir, f"{name}.txt")

    def _from_disk(self, name, max_n):
        path = self.path_for(name)
        if not os.path.exists(path):
            return None
        try:
            table = load_table(path)
        except CacheError as e:
            print(f"⚠️  Ignoring cached {name}: {e}", file=sys.stderr)
            return None
        if table.name != name or table.max_n < max_n:
            return None
        print(f"📂 Loaded {name} (max_n={table.max_n}) from cache", file=sys.stderr)
        return table

    def _store(self, table):
        self.memory[table.name] = table
        if self.use_cache:
            try:
                save_table(table, self.path_for(table.name))
                print(f"💾 Saved {table.name} (max_n={table.max_n})", file=sys.stderr)
            except CacheIOError as e:
                print(f"⚠️  {e}", file=sys.stderr)

    def get(self, name: str, max_n: int, build: Callable[[int], Dict[str, CountTable]]) -> CountTable:
        """
        Fetch a table reaching max_n

        Args:
            name: Sequence name
            max_n: Required length
            build: Called with max_n, returns every table it produced by name
        """
        table = self.memory.get(name)
        if table is not None and table.max_n >= max_n:
            return table.truncated(max_n)
        if self.use_cache:
            table = self._from_disk(name, max_n)
            if table is not None:
                self.memory[name] = table
                return table.truncated(max_n)
        print(f"🔢 Building {name} up to n={max_n}", file=sys.stderr)
        for built in build(max_n).values():
            self._store(built)
        return self.memory[name].truncated(max_n)

    def f_tables(self, max_n: int):
        """(f, f_plus, f_times)"""
        def build(n):
            return {t.name: t for t in build_f_table(n)}
        return tuple(self.get(name, max_n, build) for name in ('f', 'f_plus', 'f_times'))

    def f0_table(self, max_n: int) -> CountTable:
        return self.get('f0', max_n, lambda n: {'f0': build_f0_table(n)})

    def fexp_table(self, max_n: int, allow_pow: bool = True) -> CountTable:
        if allow_pow:
            return self.get('f_exp', max_n, build_fexp_parts)
        return self.get('f_exp_nopow', max_n, lambda n: build_fexp_parts(n, allow_pow=False))

    def fk_tables(self, k_max: int, max_n: int) -> Dict[int, CountTable]:
        def build(n):
            return {t.name: t for t in build_fk_tables(k_max, n).values()}
        return {k: self.get(fk_name(k), max_n, build) for k in range(k_max + 1)}

"""
Command-line front end
Every subcommand parses its arguments, calls the library and prints the
result as text, JSON or CSV on stdout. Status lines go to stderr.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

import argparse
import csv
import io
import json
import sys
from typing import List, Optional

from mpmath import mp

from analytic import ConstantsEngine, PrecisionContext
from census import (DEFAULT_LIMIT, s2_census, shortest_formula, shortest_sizes, verify_bounds,
                    write_summary)
from counting import enumerate_traces, f_trace
from encoders import SCHEMES, get_scheme
from enumeration import HARD_CAP, EnumerationConfig, FormulaEnumerator
from errors import (BoundViolation, FormulaCensusError, MethodMismatch, UsageError,
                    VerificationFailure)
from formula import ARITHMETIC, EXPONENTIAL
from notation import to_infix
from rewrite_graph import (build_graph, degree_report, stats, write_dot, write_edge_list,
                           write_stats)
from settings import load_settings, resolve_cache_dir
from table_cache import TableStore
from verification import SUITES, run_suite

SEQUENCES = ('f', 'f0', 'fk', 'fexp', 'f_plus', 'f_times')
FORMATS = ('text', 'json', 'csv')

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser that raises UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(f"{message}\n{self.format_usage()}")


def _positive(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer")
    if number < 1:
        raise argparse.ArgumentTypeError(f"{value} must be >= 1")
    return number


def _non_negative(value):
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer")
    if number < 0:
        raise argparse.ArgumentTypeError(f"{value} must be >= 0")
    return number


def _fraction(value):
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not a number")
    if not 0 < number < 1:
        raise argparse.ArgumentTypeError(f"{value} must lie in (0, 1)")
    return number


def build_parser() -> CommandParser:
    common = CommandParser(add_help=False)
    common.add_argument('--format', choices=FORMATS, default='text')
    common.add_argument('--cache-dir', default=None, help='table cache directory')
    common.add_argument('--no-cache', action='store_true', help='build tables in memory only')
    common.add_argument('--threads', type=_positive, default=None, help='worker threads')
    common.add_argument('--settings', default=None, help='settings JSON file')

    parser = CommandParser(prog='formula-census',
                           description='Counting, constants, encodings and rewrite graphs '
                                       'of arithmetic formulas')
    commands = parser.add_subparsers(dest='command', required=True)

    count = commands.add_parser('count', parents=[common], help='exact sequence values')
    count.add_argument('--seq', choices=SEQUENCES, required=True)
    count.add_argument('--n', type=_positive, required=True)
    count.add_argument('--k', type=_non_negative, default=None)
    count.add_argument('--all', action='store_true', help='print the table 1..n')

    traces = commands.add_parser('traces', parents=[common], help='list k-traces')
    traces.add_argument('--k', type=_non_negative, required=True)
    traces.add_argument('--n', type=_positive, default=None, help='also count formulas per trace')

    constants = commands.add_parser('constants', parents=[common], help='analytic constants')
    constants.add_argument('--digits', type=_positive, default=None)
    constants.add_argument('--darboux', type=_non_negative, default=None, metavar='J',
                           help='Darboux coefficients c_0..c_J')
    constants.add_argument('--ratios', type=_non_negative, default=None, metavar='K',
                           help='asymptotic ratio report for f_K')

    enumerate_cmd = commands.add_parser('enumerate', parents=[common], help='brute-force enumeration')
    enumerate_cmd.add_argument('--n', type=_positive, required=True)
    enumerate_cmd.add_argument('--pow', action='store_true', help='allow ∧')
    enumerate_cmd.add_argument('--dump', action='store_true', help='print every formula')
    enumerate_cmd.add_argument('--by-k', action='store_true')
    enumerate_cmd.add_argument('--by-trace', action='store_true')
    enumerate_cmd.add_argument('--allow-slow', action='store_true',
                               help=f'raise the cap to {HARD_CAP}')

    encode = commands.add_parser('encode', parents=[common], help='encode an integer')
    encode.add_argument('--scheme', choices=tuple(SCHEMES) + ('short',), required=True)
    encode.add_argument('--n', type=_positive, required=True)

    census = commands.add_parser('census', parents=[common], help='encoder size census')
    census.add_argument('--limit', type=_positive, default=None)
    census.add_argument('--epsilon', type=_fraction, default=None)
    census.add_argument('--csv', default=None, metavar='PATH', help='per-n rows')
    census.add_argument('--summary', default=None, metavar='PATH', help='summary JSON')
    census.add_argument('--s2-bits', type=_positive, default=None,
                        help='binary-digit census over n < 2^bits instead')

    graph = commands.add_parser('graph', parents=[common], help='rewrite graph G_n')
    graph.add_argument('--n', type=_positive, required=True)
    graph.add_argument('--dot', default=None, metavar='PATH')
    graph.add_argument('--edges', default=None, metavar='PATH')
    graph.add_argument('--stats', default=None, metavar='PATH', help='stats JSON')
    graph.add_argument('--growth-constant', type=float, default=None, metavar='C',
                       help='C in |G_n| / C^n (default: published value)')

    verify = commands.add_parser('verify', parents=[common], help='run an invariant suite')
    verify.add_argument('--suite', choices=tuple(SUITES), required=True)
    return parser


class Context:
    """Settings, table store and output stream shared by a command"""

    def __init__(self, args, out):
        self.args = args
        self.out = out
        self.settings = load_settings(args.settings)
        if args.threads is not None:
            self.settings['threads'] = args.threads
        use_cache = self.settings['use_cache'] and not args.no_cache
        self.store = TableStore(resolve_cache_dir(self.settings, args.cache_dir), use_cache)

    def emit(self, text: str = None, data=None, rows=None, header=None):
        fmt = self.args.format
        if fmt == 'json' and data is not None:
            self.out.write(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
            self.out.write('\n')
        elif fmt == 'csv' and rows is not None:
            writer = csv.writer(self.out, lineterminator='\n')
            if header:
                writer.writerow(header)
            writer.writerows(rows)
        else:
            self.out.write(text if text.endswith('\n') else text + '\n')


def _table(ctx, seq, n, k):
    store = ctx.store
    if seq == 'f':
        return store.f_tables(n)[0]
    if seq == 'f_plus':
        return store.f_tables(n)[1]
    if seq == 'f_times':
        return store.f_tables(n)[2]
    if seq == 'f0':
        return store.f0_table(n)
    if seq == 'fexp':
        return store.fexp_table(n)
    if k is None:
        raise UsageError("--seq fk needs --k")
    return store.fk_tables(k, n)[k]


def cmd_count(ctx):
    args = ctx.args
    table = _table(ctx, args.seq, args.n, args.k)
    if args.all:
        rows = list(table.items())
        ctx.emit('\n'.join(f"{n} {v}" for n, v in rows),
                 {'seq': table.name, 'values': {str(n): v for n, v in rows}},
                 rows, ('n', 'value'))
    else:
        value = table[args.n]
        ctx.emit(str(value), {'seq': table.name, 'n': args.n, 'value': value},
                 [(args.n, value)], ('n', 'value'))


def cmd_traces(ctx):
    args = ctx.args
    traces = enumerate_traces(args.k)
    counts = None
    if args.n is not None:
        tables = ctx.store.fk_tables(max(args.k - 1, 0), args.n)
        counts = [f_trace(trace, args.n, tables) for trace in traces]
    lines, rows, data = [], [], []
    for i, trace in enumerate(traces):
        entry = {'p': trace.p, 'l': list(trace.l), 'r': list(trace.r)}
        line = str(trace)
        if counts is not None:
            entry['count'] = counts[i]
            line += f" {counts[i]}"
        lines.append(line)
        data.append(entry)
        rows.append((str(trace),) + ((counts[i],) if counts is not None else ()))
    header = ('trace', 'count') if counts is not None else ('trace',)
    ctx.emit('\n'.join(lines), {'k': args.k, 'traces': data}, rows, header)


def cmd_constants(ctx):
    args, settings = ctx.args, ctx.settings
    target = args.digits or settings['target_digits']
    working = max(settings['working_digits'], target + settings['guard_digits'] + 5)
    precision = PrecisionContext(working, target, settings['guard_digits'])
    engine = ConstantsEngine(ctx.store, precision, settings['max_n_f'], settings['d_max'])
    report = engine.report()
    data = report.to_json()
    text = [report.to_text()]

    if args.darboux is not None:
        n = settings['max_n_f'] // 2
        coefficients = engine.darboux_coefficients(args.darboux)
        errors = engine.darboux_errors(n, args.darboux)
        data['darboux'] = {'coefficients': [mp.nstr(c, 15) for c in coefficients],
                           'n': n, 'errors': [mp.nstr(e, 5) for e in errors]}
        for j, c in enumerate(coefficients):
            text.append(f"c_{j} = {mp.nstr(c, 15)}   error with {j + 1} terms at n={n}: "
                        f"{mp.nstr(errors[j], 5)}")

    if args.ratios is not None:
        N = settings['max_n_f']
        ns = [n for n in (25, 50, 100, 200, 400) if n <= N]
        rows = engine.asymptotic_ratio_report(args.ratios, N, ns)
        data['ratios'] = [{'n': row.n, 'leading_ratio': mp.nstr(row.leading_ratio, 10),
                           'traces_ratio': mp.nstr(row.traces_ratio, 10),
                           'traces_beat_leading': row.traces_beat_leading} for row in rows]
        for row in rows:
            text.append(f"f_{args.ratios}({row.n}): leading ratio {mp.nstr(row.leading_ratio, 10)}"
                        f", traces ratio {mp.nstr(row.traces_ratio, 10)}"
                        f", traces closer: {row.traces_beat_leading}")

    csv_rows = [(name, entry['value'], entry['certified_digits'])
                for name, entry in data.items() if 'certified_digits' in entry]
    ctx.emit('\n'.join(text), data, csv_rows, ('constant', 'value', 'certified_digits'))


def cmd_enumerate(ctx):
    args, settings = ctx.args, ctx.settings
    cap = HARD_CAP if args.allow_slow else settings['enumeration_cap']
    config = EnumerationConfig(max_n=cap, kinds=EXPONENTIAL if args.pow else ARITHMETIC,
                               group_by_k=args.by_k, memo_threshold=settings['memo_threshold'])
    enumerator = FormulaEnumerator(config)
    if args.dump:
        written = enumerator.dump(args.n, ctx.out)
        print(f"✅ {written} formulas for n={args.n}", file=sys.stderr)
        return
    if args.by_k:
        counts = enumerator.count(args.n)
        ctx.emit('\n'.join(f"k={k} {v}" for k, v in counts.items()),
                 {'n': args.n, 'by_k': {str(k): v for k, v in counts.items()}},
                 list(counts.items()), ('k', 'count'))
    elif args.by_trace:
        if args.pow:
            raise UsageError("--by-trace applies to arithmetic formulas only")
        counts = enumerator.count_by_trace(args.n)
        ctx.emit('\n'.join(f"{t} {v}" for t, v in counts.items()),
                 {'n': args.n, 'by_trace': {str(t): v for t, v in counts.items()}},
                 [(str(t), v) for t, v in counts.items()], ('trace', 'count'))
    else:
        total = enumerator.count(args.n)
        ctx.emit(str(total), {'n': args.n, 'pow': args.pow, 'count': total},
                 [(args.n, total)], ('n', 'count'))


def cmd_encode(ctx):
    args = ctx.args
    if args.scheme == 'short':
        if args.n > ctx.settings['census_max_limit']:
            raise UsageError(f"--scheme short supports n <= {ctx.settings['census_max_limit']}")
        formula = shortest_formula(args.n, shortest_sizes(args.n))
    else:
        formula = get_scheme(args.scheme).encode(args.n).formula
    infix = to_infix(formula)
    ctx.emit(infix, {'scheme': args.scheme, 'n': args.n, 'length': formula.size,
                     'infix': infix, 'polish': formula.key},
             [(args.n, formula.size, infix)], ('n', 'length', 'infix'))


def cmd_census(ctx):
    args, settings = ctx.args, ctx.settings
    epsilon = args.epsilon if args.epsilon is not None else settings['epsilon']
    if args.s2_bits is not None:
        digits = s2_census(args.s2_bits, epsilon)
        data = digits.to_json()
        ctx.emit('\n'.join(f"{k} = {v}" for k, v in data.items()), data,
                 [tuple(data.values())], tuple(data))
        return
    limit = args.limit or settings['census_limit'] or DEFAULT_LIMIT
    if limit > settings['census_max_limit']:
        raise UsageError(f"--limit must be <= {settings['census_max_limit']}")
    census = verify_bounds(limit, epsilon, settings['threads'], strict=False)
    if args.csv:
        with open(args.csv, 'w', newline='') as f:
            census.write_csv(f)
        print(f"💾 Census rows written to {args.csv}", file=sys.stderr)
    if args.summary:
        with open(args.summary, 'w', encoding='utf-8') as f:
            write_summary(census, f)
        print(f"💾 Census summary written to {args.summary}", file=sys.stderr)
    if ctx.args.format == 'csv':
        census.write_csv(ctx.out)
    else:
        ctx.emit(census.to_text(), census.to_json())
    for name, witnesses in sorted(census.violations.items()):
        if witnesses:
            raise BoundViolation(name, witnesses[0])


def cmd_graph(ctx):
    args, settings = ctx.args, ctx.settings
    graph = build_graph(args.n, settings['graph_cap'], settings['threads'])
    if args.dot:
        with open(args.dot, 'w', encoding='utf-8') as f:
            write_dot(graph, f)
        print(f"💾 DOT written to {args.dot}", file=sys.stderr)
    if args.edges:
        with open(args.edges, 'w', encoding='utf-8') as f:
            write_edge_list(graph, f)
        print(f"💾 Edge list written to {args.edges}", file=sys.stderr)
    graph_stats = stats(graph)
    if args.stats:
        with open(args.stats, 'w', encoding='utf-8') as f:
            write_stats(graph_stats, f)
        print(f"💾 Graph stats written to {args.stats}", file=sys.stderr)
    report = degree_report(graph, args.growth_constant)
    data = {'stats': graph_stats.to_json(), 'degrees': report.to_json()}
    text = '\n'.join([
        report.to_text(),
        f"edges: {graph_stats.edge_count}, components: {graph_stats.component_count}",
        f"multiplicative root reachable from Horner vertex: "
        f"{graph_stats.mul_root_reachable_from_horner}",
    ])
    if args.format == 'csv':
        buffer = io.StringIO()
        write_edge_list(graph, buffer)
        rows = [tuple(line.split('\t')) for line in buffer.getvalue().splitlines()]
        ctx.emit(None, None, rows, ('u', 'v'))
    else:
        ctx.emit(text, data)


def cmd_verify(ctx):
    passed = run_suite(ctx.args.suite, ctx.store, ctx.settings)
    ctx.emit('\n'.join(f"ok {check}" for check in passed),
             {'suite': ctx.args.suite, 'passed': passed},
             [(ctx.args.suite, check) for check in passed], ('suite', 'check'))


COMMANDS = {
    'count': cmd_count,
    'traces': cmd_traces,
    'constants': cmd_constants,
    'enumerate': cmd_enumerate,
    'encode': cmd_encode,
    'census': cmd_census,
    'graph': cmd_graph,
    'verify': cmd_verify,
}


def run(argv: Optional[List[str]] = None, out=None) -> int:
    """
    Run one command

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])
        out: Output stream (default: sys.stdout)

    Returns:
        int: Exit code
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        COMMANDS[args.command](Context(args, out))
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    except (VerificationFailure, BoundViolation, MethodMismatch) as e:
        print(f"❌ Verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except UsageError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except (FormulaCensusError, ValueError) as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def main():
    sys.exit(run())

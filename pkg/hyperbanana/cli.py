import sys
from datetime import datetime, timezone
from math import comb
from typing import List, Optional, Tuple

import click
import pandas as pd

from . import __version__
from .analysis.maxwell import MaxwellError, check_maxwell
from .analysis.rigidity import (DEFAULT_SEED, DEFAULT_TRIALS, DimensionRegimeError, RankMode,
                                RigidityError, check_row_space_dependence, classify, implied_edges)
from .constructions import (BananaBunchLabels, ConstructionError, EPlusLayout, Family, FamilyParams,
                            HyperbananaLabels, in_theorem_family)
from .graph_file import GraphFile, GraphFileError, read_graph_file, write_graph_file
from .logging import getLoggers, set_run_context
from .params import (CLASSIFICATION_CHOICE, E_PLUS_CHOICE, FAMILY_CHOICE, FAMILY_ERROR_INPUT_MESSAGE, MODE_CHOICE,
                     OUTCOME_CHOICE, PAIR_LIST, RANGE, TABLE_FAMILY_CHOICE)
from .report import SCHEMA_VERSION, TableRangeError, analysis_report, nullity_table, render_table, to_json
from .utils import check_directory_writable, create_ticket, get_output_dir, save_report


# Logging
mainLogger, accountLogger = getLoggers()

DEFAULT_TABLE_RANGE = {'odd': (2, 4), 'even': (2, 3)}


def _account(command: str, start: datetime, ticket: str, success: bool, comment: Optional[str] = None) -> None:
    execution_time = round((datetime.now(timezone.utc) - start).total_seconds(), 3)
    accountLogger(command=command, execution_start=start, execution_time=execution_time, ticket=ticket,
                  success=success, comment=comment)


def _load(path: str) -> GraphFile:
    try:
        graph_file = read_graph_file(path)
    except GraphFileError as e:
        raise click.ClickException(f'{path}: {e}')
    except OSError as e:
        raise click.ClickException(f'Cannot read {path}: {e}')
    set_run_context(n=graph_file.graph.n, m=graph_file.graph.m, d=graph_file.d, source=path)
    return graph_file


def _store(content: str, ticket: str) -> None:
    output_dir = get_output_dir()
    if output_dir is None:
        return
    try:
        check_directory_writable(output_dir)
    except OSError as e:
        raise click.ClickException(f'OUTPUT_DIR {output_dir} is not writable: {e}')
    filepath = save_report(content, ticket, output_dir)
    mainLogger.info(f'Report of ticket {ticket} stored at {filepath}')


def _layout_lines(labels) -> List[str]:
    if isinstance(labels, HyperbananaLabels):
        lines = [
            f'v1={labels.v1[0]}..{labels.v1[-1]}',
            f'v2={labels.v2[0]}..{labels.v2[-1]}',
            f'u={labels.u[0]}..{labels.u[-1]}',
        ]
        if labels.e_plus:
            lines.append('e_plus=' + ','.join(f'{x}-{y}' for x, y in labels.e_plus))
        return lines
    if isinstance(labels, BananaBunchLabels):
        return [f'base={labels.base[0]}..{labels.base[-1]}', f'bananas={labels.bananas[0]}..{labels.bananas[-1]}']
    return []


def _summary_frame(items: List[Tuple[str, object]]) -> str:
    frame = pd.DataFrame(items, columns=['field', 'value'])
    return frame.to_string(index=False, header=False)


@click.group()
@click.version_option(__version__, prog_name='hyperbanana')
def cli():
    """Maxwell counts and generic rigidity of hyperbanana graphs."""


@cli.command('gen')
@click.argument('family', type=FAMILY_CHOICE, metavar='FAMILY')
@click.option('--d', 'd', type=click.IntRange(min=1), required=True, help='Ambient dimension.')
@click.option('--b', 'b', type=click.IntRange(min=1), help='Number of banana vertices.')
@click.option('--n', 'n', type=click.IntRange(min=1), help='Vertex count of the complete family.')
@click.option('--e-plus', type=E_PLUS_CHOICE, default=EPlusLayout.MATCHING.value, show_default=True,
              help='Layout of the extra edges of an even hyperbanana.')
@click.option('-o', '--out', 'out_path', type=click.Path(dir_okay=False), required=True)
def gen(family, d, b, n, e_plus, out_path):
    """Generate a graph of FAMILY and write it as a graph file."""
    params = FamilyParams(Family(family), d, b, n, EPlusLayout(e_plus))
    try:
        graph, labels = params.build()
    except ConstructionError as e:
        raise click.BadParameter(f'{e}. {FAMILY_ERROR_INPUT_MESSAGE}', param_hint='family parameters')
    if params.family is not Family.COMPLETE and not in_theorem_family(params.family, d, b):
        click.echo(f'warning: {family} with d={d}, b={b} is outside the Maxwell families '
                   f'(odd: d = 2b-1, even: d = 2b)', err=True)
    try:
        write_graph_file(out_path, GraphFile(d=d, graph=graph, family=params))
    except OSError as e:
        raise click.ClickException(f'Cannot write {out_path}: {e}')
    mainLogger.info(f'Wrote {family} graph to {out_path}')
    click.echo(f'n={graph.n} m={graph.m}')
    for line in _layout_lines(labels):
        click.echo(line)


def _expectation_failures(report: dict, expect_maxwell, expect_class, expect_dof, expect_rank) -> List[str]:
    failures = []
    if expect_maxwell is not None:
        actual = 'pass' if report['maxwell']['pass'] else 'fail'
        if actual != expect_maxwell:
            failures.append(f'maxwell: expected {expect_maxwell}, got {actual}')
    rigidity = report.get('rigidity')
    checks = [('classification', expect_class), ('dof', expect_dof), ('rank', expect_rank)]
    for key, expected in checks:
        if expected is None:
            continue
        actual = rigidity[key] if rigidity is not None else 'not run'
        if actual != expected:
            failures.append(f'{key}: expected {expected}, got {actual}')
    return failures


@cli.command('check')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--maxwell', 'run_maxwell', is_flag=True, help='Check both Maxwell conditions.')
@click.option('--classify', 'run_classify', is_flag=True, help='Estimate the generic rank and classify.')
@click.option('--implied', 'run_implied', is_flag=True, help='List implied edges among all non-edges.')
@click.option('--mode', type=MODE_CHOICE, default=RankMode.MODP.value, show_default=True)
@click.option('--exact', is_flag=True, help='Shorthand for --mode both.')
@click.option('--trials', type=click.IntRange(min=1), default=DEFAULT_TRIALS, show_default=True)
@click.option('--seed', type=int, default=DEFAULT_SEED, show_default=True)
@click.option('--parallelism', type=click.IntRange(min=0), default=None, help='Worker processes (0: one per CPU).')
@click.option('--force-condition2', is_flag=True, help='Enumerate subsets even when condition 1 fails.')
@click.option('--allow-large', is_flag=True, help='Lift the subset-enumeration vertex cap.')
@click.option('--timings', is_flag=True, help='Include elapsed times in the JSON report.')
@click.option('--json', 'as_json', is_flag=True, help='Print the JSON report.')
@click.option('--expect-maxwell', type=OUTCOME_CHOICE)
@click.option('--expect-class', type=CLASSIFICATION_CHOICE)
@click.option('--expect-dof', type=int)
@click.option('--expect-rank', type=int)
@click.pass_context
def check(ctx, path, run_maxwell, run_classify, run_implied, mode, exact, trials, seed, parallelism,
          force_condition2, allow_large, timings, as_json, expect_maxwell, expect_class, expect_dof, expect_rank):
    """Run the requested analyses on the graph file PATH."""
    start = datetime.now(timezone.utc)
    ticket = create_ticket()
    graph_file = _load(path)
    if not (run_maxwell or run_classify or run_implied):
        run_maxwell = run_classify = True
    if expect_maxwell is not None:
        run_maxwell = True
    if expect_class is not None or expect_dof is not None or expect_rank is not None:
        run_classify = True
    rank_mode = RankMode.BOTH if exact else RankMode(mode)
    graph, d = graph_file.graph, graph_file.d
    mainLogger.info(f'Starting check of {path} (ticket {ticket})')
    maxwell = verdict = implied = None
    try:
        if run_maxwell:
            maxwell = check_maxwell(graph, d, parallelism, force_condition2, allow_large=allow_large)
        if run_classify:
            verdict = classify(graph, d, trials, seed, rank_mode, family=graph_file.family, parallelism=parallelism)
        if run_implied:
            implied = implied_edges(graph, d, None, trials, seed)
    except (MaxwellError, DimensionRegimeError, RigidityError) as e:
        _account('check', start, ticket, False, str(e))
        raise click.ClickException(str(e))
    report = analysis_report(graph_file, seed, trials, rank_mode, maxwell, verdict, implied, timings)
    content = to_json(report)
    _store(content, ticket)
    if as_json:
        click.echo(content, nl=False)
    else:
        click.echo(_summary_frame(_summary_items(report)))
    failures = _expectation_failures(report, expect_maxwell, expect_class, expect_dof, expect_rank)
    _account('check', start, ticket, not failures, '; '.join(failures) or None)
    if failures:
        for failure in failures:
            click.echo(f'expectation failed: {failure}', err=True)
        ctx.exit(1)


def _summary_items(report: dict) -> List[Tuple[str, object]]:
    graph = report['graph']
    items = [('graph', f'd={graph["d"]} n={graph["n"]} m={graph["m"]}')]
    if report['family'] is not None:
        items.append(('family', ' '.join(f'{k}={v}' for k, v in report['family'].items())))
    maxwell = report.get('maxwell')
    if maxwell is not None:
        condition1 = maxwell['condition1']
        items.append(('maxwell', 'pass' if maxwell['pass'] else 'fail'))
        items.append(('condition 1', f'{condition1["actual"]} edges, expected {condition1["expected"]}'))
        condition2 = maxwell['condition2']
        if not condition2['run']:
            items.append(('condition 2', 'not run'))
        elif condition2['witness'] is None:
            items.append(('condition 2', f'pass ({maxwell["subsets_checked"]} subsets)'))
        else:
            witness = condition2['witness']
            items.append(('condition 2', f'fail: {witness["members"]} induces {witness["induced_edges"]} '
                                         f'> {witness["bound"]}'))
    rigidity = report.get('rigidity')
    if rigidity is not None:
        items.append(('rank', rigidity['rank']))
        items.append(('nullity', rigidity['nullity']))
        items.append(('dof', rigidity['dof']))
        items.append(('classification', rigidity['classification']))
        items.append(('status', rigidity['status']))
    if 'implied_edges' in report:
        items.append(('implied edges', ' '.join(f'{u}-{v}' for u, v in report['implied_edges']) or 'none'))
    return items


def _u_pairs(graph_file: GraphFile) -> List[Tuple[int, int]]:
    params = graph_file.family
    if params is None or params.family is Family.COMPLETE:
        raise click.BadParameter('--u-pairs needs a banana or hyperbanana file with a family comment')
    try:
        _, labels = params.build()
    except ConstructionError as e:
        raise click.BadParameter(str(e), param_hint='--u-pairs')
    u = labels.u if isinstance(labels, HyperbananaLabels) else labels.bananas
    return [(x, y) for i, x in enumerate(u) for y in u[i + 1:]]


@cli.command('implied')
@click.argument('path', type=click.Path(exists=True, dir_okay=False))
@click.option('--pairs', type=PAIR_LIST, default=None, help='Candidate pairs, e.g. 0-1,2-5 (default: all non-edges).')
@click.option('--u-pairs', is_flag=True, help='Use the pairs of banana vertices as candidates.')
@click.option('--trials', type=click.IntRange(min=1), default=DEFAULT_TRIALS, show_default=True)
@click.option('--seed', type=int, default=DEFAULT_SEED, show_default=True)
@click.option('--json', 'as_json', is_flag=True)
def implied(path, pairs, u_pairs, trials, seed, as_json):
    """List the non-edges of PATH whose lengths are fixed by the edges."""
    start = datetime.now(timezone.utc)
    ticket = create_ticket()
    graph_file = _load(path)
    candidates = _u_pairs(graph_file) if u_pairs else pairs
    try:
        found = implied_edges(graph_file.graph, graph_file.d, candidates, trials, seed)
    except RigidityError as e:
        _account('implied', start, ticket, False, str(e))
        raise click.ClickException(str(e))
    if as_json:
        report = analysis_report(graph_file, seed, trials, RankMode.MODP, implied=found)
        click.echo(to_json(report), nl=False)
    else:
        for u, v in found:
            click.echo(f'{u} {v}')
    _account('implied', start, ticket, True, f'{len(found)} implied')


@cli.command('table')
@click.argument('kind', type=TABLE_FAMILY_CHOICE)
@click.option('--b', 'b_range', type=RANGE, default=None, help='Range of b, e.g. 2..4.')
@click.option('--exact', is_flag=True, help='Confirm every row with the exact rational rank.')
@click.option('--trials', type=click.IntRange(min=1), default=DEFAULT_TRIALS, show_default=True)
@click.option('--seed', type=int, default=DEFAULT_SEED, show_default=True)
@click.option('--parallelism', type=click.IntRange(min=0), default=None)
@click.option('--json', 'as_json', is_flag=True)
def table(kind, b_range, exact, trials, seed, parallelism, as_json):
    """Computed against predicted nullity of the odd or even hyperbananas."""
    start = datetime.now(timezone.utc)
    ticket = create_ticket()
    b_range = b_range or DEFAULT_TABLE_RANGE[kind]
    try:
        rows = nullity_table(kind, b_range, exact, trials, seed, parallelism)
    except TableRangeError as e:
        raise click.BadParameter(str(e), param_hint='--b')
    report = {
        'schema': SCHEMA_VERSION,
        'tool': {'name': 'hyperbanana', 'version': __version__},
        'table': kind,
        'randomness': {'seed': seed, 'trials': trials, 'mode': (RankMode.BOTH if exact else RankMode.MODP).value},
        'rows': [row.to_dict() for row in rows],
    }
    content = to_json(report)
    _store(content, ticket)
    if as_json:
        click.echo(content, nl=False)
    else:
        click.echo(render_table(rows))
    _account('table', start, ticket, all(row.match for row in rows))


SELFTEST_CASES = [
    # (label, family params, Maxwell expected, nullity expected, strict)
    ('H(3,2)', FamilyParams(Family.HYPERBANANA, 3, 2), True, 7, True),
    ('H(5,3)', FamilyParams(Family.HYPERBANANA, 5, 3), True, 18, True),
    ('H+(4,2)', FamilyParams(Family.EVEN_HYPERBANANA, 4, 2), True, 11, False),
    ('H(4,3)', FamilyParams(Family.HYPERBANANA, 4, 3), False, 11, True),
    ('H(6,3)', FamilyParams(Family.HYPERBANANA, 6, 3), False, None, True),
    ('B(3,2)', FamilyParams(Family.BANANA, 3, 2), True, 6, True),
    ('B(5,3)', FamilyParams(Family.BANANA, 5, 3), True, 15, True),
]


@cli.command('selftest')
@click.option('--strict', is_flag=True, help='Fail on a conjecture mismatch too.')
@click.option('--seed', type=int, default=DEFAULT_SEED, show_default=True)
@click.pass_context
def selftest(ctx, strict, seed):
    """Re-check the small hyperbanana results."""
    start = datetime.now(timezone.utc)
    ticket = create_ticket()
    rows = []
    for label, params, maxwell_expected, nullity_expected, binding in SELFTEST_CASES:
        graph, _ = params.build()
        maxwell = check_maxwell(graph, params.d)
        verdict = classify(graph, params.d, DEFAULT_TRIALS, seed, RankMode.BOTH, family=params)
        nullity_ok = nullity_expected is None or verdict.nullity == nullity_expected
        ok = maxwell.passed == maxwell_expected and verdict.evidence.oracle_agrees and nullity_ok
        if nullity_expected is None:
            ok = ok and verdict.classification.flexible
        rows.append({'case': label, 'maxwell': maxwell.passed, 'nullity': verdict.nullity,
                     'expected': nullity_expected if nullity_expected is not None else 'flexible',
                     'status': verdict.status, 'ok': bool(ok), 'binding': binding or strict})
    hinge, _ = FamilyParams(Family.HYPERBANANA, 3, 2).build()
    found = implied_edges(hinge, 3, seed=seed)
    rows.append({'case': 'implied H(3,2)', 'maxwell': None, 'nullity': None, 'expected': '[(6, 7)]',
                 'status': str(found), 'ok': found == [(6, 7)], 'binding': True})
    for d, b in [(3, 2), (4, 2), (5, 3)]:
        holds = check_row_space_dependence(d, b, seed=seed)
        rows.append({'case': f'K_U rows in B({d},{b})', 'maxwell': None, 'nullity': None,
                     'expected': f'{comb(b, 2)} implied', 'status': 'holds' if holds else 'fails',
                     'ok': holds, 'binding': True})
    frame = pd.DataFrame(rows)
    click.echo(frame.to_string(index=False))
    failed = frame[(~frame['ok']) & frame['binding']]
    _account('selftest', start, ticket, failed.empty, None if failed.empty else ','.join(failed['case']))
    if not failed.empty:
        ctx.exit(1)


def main(argv: Optional[List[str]] = None) -> None:
    cli.main(args=argv, prog_name='hyperbanana')


if __name__ == '__main__':
    main(sys.argv[1:])

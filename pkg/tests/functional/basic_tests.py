import json
import tempfile
from os import getenv, listdir, mkdir, path

from click.testing import CliRunner

from hyperbanana import __version__
from hyperbanana.cli import cli


_tempdir: str = ""


def setup_module():
    print(f" == Setting up tests for {__name__}")

    global _tempdir
    _tempdir = getenv('TEMPDIR')
    if _tempdir:
        try:
            mkdir(_tempdir)
        except FileExistsError:
            pass
    else:
        _tempdir = tempfile.mkdtemp(prefix='hyperbanana-')


def teardown_module():
    print(f" == Tearing down tests for {__name__}")


def _invoke(*args, env=None):
    runner = CliRunner()
    return runner.invoke(cli, [str(arg) for arg in args], env=env)


def _generate(name, *args):
    file_path = path.join(_tempdir, name)
    res = _invoke('gen', *args, '-o', file_path)
    assert res.exit_code == 0, res.output
    return file_path


def _write(name, text):
    file_path = path.join(_tempdir, name)
    with open(file_path, 'w') as f:
        f.write(text)
    return file_path


# Tests

def test_version():
    res = _invoke('--version')
    assert res.exit_code == 0
    assert __version__ in res.output


def test_gen_prints_layout():
    file_path = path.join(_tempdir, 'h32.txt')
    res = _invoke('gen', 'hyperbanana', '--d', 3, '--b', 2, '-o', file_path)
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[0] == 'n=8 m=18'
    assert 'v1=0..2' in lines
    assert 'v2=3..5' in lines
    assert 'u=6..7' in lines
    with open(file_path) as f:
        assert f.readline() == '# family=hyperbanana d=3 b=2\n'
        assert f.readline() == '3 8 18\n'


def test_gen_even_hyperbanana_lists_extra_edges():
    res = _invoke('gen', 'even-hyperbanana', '--d', 4, '--b', 2, '-o', path.join(_tempdir, 'he42.txt'))
    assert res.exit_code == 0
    assert 'n=10 m=30' in res.output
    assert 'e_plus=0-4,1-5' in res.output


def test_gen_warns_outside_theorem_families():
    res = _invoke('gen', 'hyperbanana', '--d', 4, '--b', 3, '-o', path.join(_tempdir, 'h43.txt'))
    assert res.exit_code == 0
    assert 'warning' in res.output


def test_gen_rejects_bad_parameters():
    res = _invoke('gen', 'banana', '--d', 3, '-o', path.join(_tempdir, 'bad.txt'))
    assert res.exit_code == 2
    res = _invoke('gen', 'even-hyperbanana', '--d', 5, '--b', 3, '-o', path.join(_tempdir, 'bad.txt'))
    assert res.exit_code == 2
    res = _invoke('gen', 'octahedron', '--d', 3, '-o', path.join(_tempdir, 'bad.txt'))
    assert res.exit_code == 2


def test_gen_complete():
    file_path = _generate('k5.txt', 'complete', '--d', 3, '--n', 5)
    with open(file_path) as f:
        assert f.read().splitlines()[1] == '3 5 10'


def test_check_double_banana_json():
    file_path = _generate('double-banana.txt', 'hyperbanana', '--d', 3, '--b', 2)
    res = _invoke('check', file_path, '--maxwell', '--classify', '--json')
    assert res.exit_code == 0
    r = json.loads(res.stdout)
    assert r['schema'] == 1
    assert r['graph'] == {'d': 3, 'n': 8, 'm': 18}
    assert r['maxwell']['pass'] is True
    assert r['maxwell']['subsets_checked'] == 219
    assert 'elapsed' not in r['maxwell']
    assert r['rigidity']['classification'] == 'flexible-dependent'
    assert r['rigidity']['dof'] == 1
    assert r['rigidity']['status'] == 'certified'
    assert r['randomness']['seed'] == 42
    assert len(r['randomness']['primes']) == 3


def test_check_ignores_family_comment_of_edited_graph():
    file_path = _generate('double-banana-edited.txt', 'hyperbanana', '--d', 3, '--b', 2)
    with open(file_path) as f:
        lines = f.read().splitlines()
    assert lines[1] == '3 8 18'
    lines[1] = '3 8 19'
    lines.append('6 7')
    _write('double-banana-edited.txt', '\n'.join(lines) + '\n')
    res = _invoke('check', file_path, '--classify', '--json')
    assert res.exit_code == 0
    r = json.loads(res.stdout)
    assert r['graph'] == {'d': 3, 'n': 8, 'm': 19}
    assert r['rigidity']['rank'] == 17
    assert r['rigidity']['certified'] is False
    assert r['rigidity']['status'] == 'probabilistic'
    assert r['rigidity']['prediction'] is None


def test_check_json_is_reproducible():
    file_path = _generate('b53.txt', 'banana', '--d', 5, '--b', 3)
    first = _invoke('check', file_path, '--json')
    second = _invoke('check', file_path, '--json')
    assert first.exit_code == 0
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)['rigidity']['classification'] == 'minimally-rigid'


def test_check_table_output():
    file_path = _generate('double-banana-2.txt', 'hyperbanana', '--d', 3, '--b', 2)
    res = _invoke('check', file_path)
    assert res.exit_code == 0
    assert 'flexible-dependent' in res.output
    assert 'maxwell' in res.output


def test_check_timings():
    file_path = _generate('double-banana-3.txt', 'hyperbanana', '--d', 3, '--b', 2)
    res = _invoke('check', file_path, '--maxwell', '--json', '--timings')
    assert res.exit_code == 0
    assert 'elapsed' in json.loads(res.stdout)['maxwell']


def test_check_expectations():
    file_path = _generate('double-banana-4.txt', 'hyperbanana', '--d', 3, '--b', 2)
    res = _invoke('check', file_path, '--expect-maxwell', 'pass', '--expect-class', 'flexible-dependent',
                  '--expect-dof', 1, '--expect-rank', 17)
    assert res.exit_code == 0
    res = _invoke('check', file_path, '--expect-class', 'minimally-rigid')
    assert res.exit_code == 1
    assert 'expected minimally-rigid' in res.output


def test_check_h43_fails_condition1():
    file_path = _generate('h43-check.txt', 'hyperbanana', '--d', 4, '--b', 3)
    res = _invoke('check', file_path, '--json', '--exact', '--expect-maxwell', 'fail')
    assert res.exit_code == 0
    r = json.loads(res.stdout)
    assert r['maxwell']['condition1'] == {'expected': 34, 'actual': 36, 'pass': False}
    assert r['maxwell']['condition2'] == {'run': False}
    assert (r['rigidity']['rank'], r['rigidity']['dof']) == (33, 1)
    assert r['rigidity']['oracle_agrees'] is True


def test_check_force_condition2_reports_witness():
    file_path = _generate('k5-forced.txt', 'complete', '--d', 3, '--n', 5)
    res = _invoke('check', file_path, '--maxwell', '--force-condition2', '--json')
    assert res.exit_code == 0
    witness = json.loads(res.stdout)['maxwell']['condition2']['witness']
    assert witness == {'members': [0, 1, 2, 3, 4], 'induced_edges': 10, 'bound': 9}


def test_check_implied():
    file_path = _generate('double-banana-5.txt', 'hyperbanana', '--d', 3, '--b', 2)
    res = _invoke('check', file_path, '--implied', '--json')
    assert res.exit_code == 0
    assert json.loads(res.stdout)['implied_edges'] == [[6, 7]]


def test_check_refuses_fewer_than_d_vertices():
    file_path = _write('small.txt', '4 3 3\n0 1\n1 2\n0 2\n')
    res = _invoke('check', file_path, '--classify')
    assert res.exit_code == 1
    assert 'at least d vertices' in res.output


def test_check_parse_error_has_line_number():
    file_path = _write('broken.txt', '3 4 2\n0 1\n0 9\n')
    res = _invoke('check', file_path)
    assert res.exit_code == 1
    assert 'line 3' in res.output


def test_check_enumeration_cap():
    file_path = _generate('h53.txt', 'hyperbanana', '--d', 5, '--b', 3)
    res = _invoke('check', file_path, '--maxwell', env={'HYPERBANANA_ENUM_CAP': '12'})
    assert res.exit_code == 1
    res = _invoke('check', file_path, '--maxwell', '--allow-large', env={'HYPERBANANA_ENUM_CAP': '12'})
    assert res.exit_code == 0


def test_check_stores_report_in_output_dir():
    output_dir = tempfile.mkdtemp(prefix='hyperbanana-out-')
    file_path = _generate('double-banana-6.txt', 'hyperbanana', '--d', 3, '--b', 2)
    res = _invoke('check', file_path, '--maxwell', env={'OUTPUT_DIR': output_dir})
    assert res.exit_code == 0
    [day] = listdir(output_dir)
    [ticket] = listdir(path.join(output_dir, day))
    with open(path.join(output_dir, day, ticket, 'report.json')) as f:
        assert json.load(f)['maxwell']['pass'] is True


def test_implied_command():
    file_path = _generate('double-banana-7.txt', 'hyperbanana', '--d', 3, '--b', 2)
    res = _invoke('implied', file_path)
    assert res.exit_code == 0
    assert res.stdout == '6 7\n'
    res = _invoke('implied', file_path, '--pairs', '0-3,1-4')
    assert res.exit_code == 0
    assert res.stdout == ''
    res = _invoke('implied', file_path, '--pairs', '0-x')
    assert res.exit_code == 2


def test_implied_u_pairs():
    file_path = _generate('h53-implied.txt', 'hyperbanana', '--d', 5, '--b', 3)
    res = _invoke('implied', file_path, '--u-pairs', '--json')
    assert res.exit_code == 0
    assert json.loads(res.stdout)['implied_edges'] == [[10, 11], [10, 12], [11, 12]]
    plain = _write('plain.txt', '3 4 3\n0 1\n1 2\n2 3\n')
    res = _invoke('implied', plain, '--u-pairs')
    assert res.exit_code == 2


def test_implied_rejects_self_pair():
    file_path = _generate('double-banana-loop.txt', 'hyperbanana', '--d', 3, '--b', 2)
    res = _invoke('implied', file_path, '--pairs', '3-3')
    assert res.exit_code == 2
    assert 'distinct vertices' in res.output


def test_table_odd():
    res = _invoke('table', 'odd', '--b', '2..3', '--json')
    assert res.exit_code == 0
    rows = json.loads(res.stdout)['rows']
    assert [(row['d'], row['nullity'], row['predicted']) for row in rows] == [(3, 7, 7), (5, 18, 18)]
    assert all(row['match'] and row['maxwell'] for row in rows)
    assert all(row['status'] == 'CERTIFIED' for row in rows)


def test_table_exact_matches_modular():
    modular = json.loads(_invoke('table', 'odd', '--b', '2', '--json').stdout)['rows'][0]
    exact = json.loads(_invoke('table', 'odd', '--b', '2', '--exact', '--json').stdout)['rows'][0]
    assert exact['nullity'] == modular['nullity'] == 7
    assert exact['oracle_agrees'] is True


def test_table_even_is_labelled_conjecture():
    res = _invoke('table', 'even', '--b', '2')
    assert res.exit_code == 0
    assert 'CONJECTURE' in res.output
    assert ' 11 ' in res.output


def test_table_rejects_out_of_cap_range():
    assert _invoke('table', 'odd', '--b', '2..7').exit_code == 2
    assert _invoke('table', 'even', '--b', '1..2').exit_code == 2
    assert _invoke('table', 'odd', '--b', '4..2').exit_code == 2


def test_selftest():
    res = _invoke('selftest')
    assert res.exit_code == 0, res.output
    assert 'H(3,2)' in res.output

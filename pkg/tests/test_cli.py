import json
import os

from mcgraphs.cli import main

import oracles


def run(tmp_path, *args):
    out = tmp_path / 'out'
    code = main(list(args) + ['--out', str(out)])
    return code, out


def read(path):
    with open(path, 'rb') as handle:
        return handle.read()


def test_build_radius_zero(tmp_path):
    code, out = run(tmp_path, 'build', '--surface', '1,1', '--spec', 'L_X', '--radius', '0')
    assert code == 0
    data = json.loads(read(out / 'graph.json'))
    assert data['schema_version'] == 1
    assert len(data['graph']['vertices']) == 1
    assert data['graph']['edges'] == []


def test_build_rerun_is_byte_identical(tmp_path):
    args = ['build', '--surface', '1,1', '--spec', 'L_X', '--radius', '2']
    code, out = run(tmp_path, *args)
    first = read(out / 'graph.json')
    code2, _ = run(tmp_path, *args)
    assert code == code2 == 0
    assert read(out / 'graph.json') == first


def test_torus_ball_matches_farey_oracle(tmp_path):
    code, out = run(tmp_path, 'build', '--surface', '1,1', '--spec', 'L_X', '--radius', '2')
    assert code == 0
    graph = json.loads(read(out / 'graph.json'))['graph']

    def pair(v):
        (comp,) = v['components']
        return (oracles.torus_slope(comp['base']), oracles.torus_slope(comp['transversal']['curve']))

    a, b = pair(graph['basepoint'])
    expected = oracles.torus_marking_ball(a, b, 2)
    got = {pair(v): d for v, d in zip(graph['vertices'], graph['distances'])}
    assert got == expected


def test_verify_lipschitz_passes(tmp_path):
    code, out = run(tmp_path, 'verify', '--surface', '1,1', '--spec', 'L_X', '--radius', '2',
                    '--suite', 'lipschitz')
    assert code == 0
    summary = json.loads(read(out / 'lipschitz.json'))
    assert summary['passed'] and summary['seed'] == 0
    assert read(out / 'lipschitz.csv').startswith(b'schema_version')


def test_verify_witness_on_marking_graph(tmp_path):
    code, out = run(tmp_path, 'verify', '--surface', '1,1', '--spec', 'L_X', '--suite', 'witness')
    assert code == 0
    rows = read(out / 'witness.csv').decode().splitlines()
    header = rows[0].split(',')
    col = header.index('verdict')
    assert len(rows) > 1
    assert all(r.split(',')[col] == 'yes_certified' for r in rows[1:])


def test_verify_bounds(tmp_path):
    code, out = run(tmp_path, 'verify', '--surface', '1,1', '--spec', 'L_X', '--suite', 'bounds',
                    '--witness-bound', '3')
    assert code == 0
    for stem in ('bounds_compat', 'bounds_completion'):
        assert json.loads(read(out / f'{stem}.json'))['passed']


def test_verify_rebalance(tmp_path):
    code, out = run(tmp_path, 'verify', '--surface', '1,2', '--spec', 'L_X', '--suite', 'rebalance')
    assert code == 0
    summary = json.loads(read(out / 'rebalance.json'))
    assert summary['passed'] and max(summary['after']) <= summary['bound']


def test_unknown_kind_is_a_structured_error(tmp_path, capsys):
    code, _ = run(tmp_path, 'build', '--surface', '1,1', '--spec', 'bogus')
    assert code == 2
    err = json.loads(capsys.readouterr().err)
    assert err['error'] == 'ConfigError'


def test_bad_surface_is_a_structured_error(tmp_path, capsys):
    code, _ = run(tmp_path, 'build', '--surface', 'torus', '--spec', 'L_X')
    assert code == 2
    assert 'surface' in json.loads(capsys.readouterr().err)['message']


def test_bad_basepoint_file(tmp_path, capsys):
    path = tmp_path / 'base.json'
    path.write_text(json.dumps({'components': [{'base': [1, 0, 1], 'transversal': None}]}))
    code, _ = run(tmp_path, 'build', '--surface', '1,1', '--spec', 'L_X', '--basepoint', str(path))
    assert code == 2
    assert json.loads(capsys.readouterr().err)['error'] == 'BasepointError'


def test_module_entry_point(tmp_path):
    import subprocess
    import sys
    out = tmp_path / 'o'
    proc = subprocess.run([sys.executable, '-m', 'mcgraphs', 'build', '--surface', '1,1',
                           '--spec', 'L_X', '--radius', '0', '--out', str(out)],
                          capture_output=True, text=True, env=dict(os.environ))
    assert proc.returncode == 0
    assert (out / 'graph.json').exists()

import csv
import io

import pytest

from mcgraphs.analysis import (
    PathError, check_projection_lipschitz, dim_arc_complex, estimate_f_M, fit_distance_formula,
    four_point_delta, rebalance_path, rebalance_report, rows_to_csv, sample_hyperbolicity,
    twist_excursion_path,
)
from mcgraphs.graphs import WitnessSet, build_ball, l_x
from mcgraphs.markings import Marking, complete_marking
from mcgraphs.projection import annular_distance
from mcgraphs.surface import standard_surface

import oracles
from oracles import S11

S12 = standard_surface(1, 2)


@pytest.fixture(scope='module')
def torus_ball():
    X = WitnessSet.all_subsurfaces(S11, 4)
    mu, _ = complete_marking(Marking(S11, ()))
    return X, build_ball(l_x(X), mu, 3, close_last_layer=True)


def test_single_vertex_lipschitz_is_vacuous():
    X = WitnessSet.all_subsurfaces(S11, 4)
    mu, _ = complete_marking(Marking(S11, ()))
    report = check_projection_lipschitz(build_ball(l_x(X), mu, 0), X)
    assert report.passed and report.samples == 0


def test_torus_lipschitz(torus_ball):
    X, ball = torus_ball
    report = check_projection_lipschitz(ball, X)
    assert report.passed and report.samples > 0
    assert report.max_observed['elementary'] <= 4


def test_fit_on_single_vertex():
    X = WitnessSet.all_subsurfaces(S11, 4)
    mu, _ = complete_marking(Marking(S11, ()))
    ball = build_ball(l_x(X), mu, 0)
    for fit in fit_distance_formula(ball, X, [1, 2]):
        assert fit.pairs == 0 and fit.E == 0 and fit.holds()


def test_fit_is_seeded(torus_ball):
    X, ball = torus_ball
    a = [f.summary() for f in fit_distance_formula(ball, X, [2], max_pairs=50, seed=3)]
    b = [f.summary() for f in fit_distance_formula(ball, X, [2], max_pairs=50, seed=3)]
    assert a == b


def test_envelope_is_monotone(torus_ball):
    _, ball = torus_ball
    env = estimate_f_M(ball)
    values = [d for _, d, _ in env.table]
    assert values == sorted(values)


def test_tree_has_zero_delta():
    parent = [-1, 0, 0, 1, 1, 2, 2, 3, 3, 4, 5, 6, 6]
    delta, rows = four_point_delta(oracles.tree_distances(parent), 300)
    assert delta == 0 and len(rows) == 300


def test_cycle_has_positive_delta():
    n = 8
    dist = [[min(abs(i - j), n - abs(i - j)) for j in range(n)] for i in range(n)]
    delta, _ = four_point_delta(dist, 500)
    assert delta > 0


def test_torus_delta_finite(torus_ball):
    X, ball = torus_ball
    report = sample_hyperbolicity(ball, 200, 0, X)
    assert report.delta >= 0
    assert report.disjoint_witnesses is False


def test_rebalance_balanced_path_unchanged():
    path, a = twist_excursion_path(S12, [0, 0, 0])
    out = rebalance_report(path, a, 0)
    assert out.sigmas == [0, 0]
    assert out.path == path


def test_rebalance_curve_outside_bases_unchanged():
    path, a = twist_excursion_path(S12, [0, 0, 0])
    b = path[0].transversal(a).curve
    assert all(b not in mu.bases for mu in path)
    out = rebalance_report(path, b, 0)
    assert out.path == path and out.last_index == -1
    assert all(d <= 4 for d in out.before)


def test_rebalance_large_twist():
    path, a = twist_excursion_path(S12, [0, 6, -4, 2, 0])
    out = rebalance_report(path, a, 0)
    assert max(out.before) >= 6
    assert out.passed and out.edges_ok
    assert all(d <= out.bound for d in out.after)
    assert out.path[0] == path[0] and out.path[-1] == path[-1]
    # measured directly on the output path
    for x, y in zip(out.path, out.path[1:]):
        tx, ty = x.transversal(a), y.transversal(a)
        if tx is not None and ty is not None:
            assert annular_distance(a, tx.curve, ty.curve) <= out.bound
    assert rebalance_path(path, a, 0) == out.path


def test_rebalance_rejects_non_path():
    path, a = twist_excursion_path(S12, [0, 0, 0])
    with pytest.raises(PathError):
        rebalance_report(path[:1], a, 0)
    # dropping both base curves at once is not a move
    bare = Marking(S12, ((a, path[0].transversal(a)),))
    with pytest.raises(PathError):
        rebalance_report([path[0], Marking(S12, ()), bare], a, 0)


def test_csv_schema_column_first():
    text = rows_to_csv([{'b': 1, 'a': 2}])
    header = next(csv.reader(io.StringIO(text)))
    assert header == ['schema_version', 'a', 'b']


def test_arc_complex_dimension():
    # an ideal triangulation has 6g + 3b - 6 arcs
    assert dim_arc_complex(S11) == 2
    assert dim_arc_complex(standard_surface(0, 4)) == 5

import json

import pytest

from mcgraphs.graphs import (
    NO, YES, BasepointError, WitnessSet, WitnessSetError, build_ball, close_witness_set,
    is_vertex, is_witness, k_x, l_x, m_a, mu_alpha, multiarc_curve, prescribed_arc,
    retraction_fiber, universal_map,
)
from mcgraphs.markings import Marking, complete_marking, is_clean, meets
from mcgraphs.projection import (
    annulus, complementary_pieces, enumerate_subsurfaces, topological_type, whole_surface,
)
from mcgraphs.surface import (
    CurveSystem, arc_endpoints, enumerate_curves, intersection_number, standard_surface, twist,
)

from oracles import S11, torus_curve

S05 = standard_surface(0, 5)


def test_closure_of_whole_surface():
    for S in (S11, S05):
        X = close_witness_set([whole_surface(S)], S, 4)
        assert X.closure == [whole_surface(S)]


def test_closure_of_annulus():
    a = enumerate_curves(S05, 6)[0]
    X = close_witness_set([annulus(a)], S05, 6)
    universe = enumerate_subsurfaces(S05, 6)
    kind = topological_type(annulus(a))
    orbit = [W for W in universe if topological_type(W) == kind]
    assert set(orbit) <= set(X.closure)
    # four-holed spheres on the side of a are enlargements of the annulus;
    # the far side of their boundary is a pair of pants, so disjointness decides
    for W in universe:
        if W.is_connected and not W.pieces[0].is_annulus and a not in W.boundary.components \
                and not intersection_number(a, W.boundary):
            assert W in X.closure


def test_pants_generator_rejected():
    S06 = standard_surface(0, 6)
    with pytest.raises(WitnessSetError):
        close_witness_set([whole_surface(S06).__class__(S06, ())], S06, 4)


def test_ball_radius_zero():
    X = WitnessSet.all_subsurfaces(S11, 4)
    mu, _ = complete_marking(Marking(S11, ()))
    ball = build_ball(l_x(X), mu, 0)
    assert ball.size == 1 and not ball.edges


def test_ball_rejects_bad_basepoint():
    # a bare curve leaves its annulus unmet, and that annulus lies in X
    X = WitnessSet.all_subsurfaces(S11, 4)
    bare = Marking(S11, ((torus_curve(0, 1), None),))
    assert not is_vertex(l_x(X), bare)
    with pytest.raises(BasepointError):
        build_ball(l_x(X), bare, 1)
    Y = close_witness_set([whole_surface(S11)], S11, 4)
    assert is_vertex(l_x(Y), bare)


def test_ball_is_deterministic_across_workers():
    X = WitnessSet.all_subsurfaces(S11, 4)
    mu, _ = complete_marking(Marking(S11, ()))
    a = json.dumps(build_ball(l_x(X), mu, 2, workers=0).to_json())
    b = json.dumps(build_ball(l_x(X), mu, 2, workers=2).to_json())
    assert a == b


def test_whole_surface_is_witness():
    X = WitnessSet.all_subsurfaces(S11, 4)
    for spec in (l_x(X), k_x(X), multiarc_curve(S11, 1)):
        assert is_witness(spec, whole_surface(S11))[0] == YES


def test_lemma_a_certificate():
    spheres = [W for W in enumerate_subsurfaces(S05, 6, connected_only=True)
               if not W.pieces[0].is_annulus and W.pieces[0].xi == 1]
    X = close_witness_set([spheres[0]], S05, 6)
    spec = l_x(X)
    checked = 0
    for W in enumerate_subsurfaces(S05, 6):
        if X.contains(W):
            assert is_witness(spec, W)[0] == YES
            continue
        verdict, cert = is_witness(spec, W)
        assert verdict == NO
        assert is_vertex(spec, cert) and not meets(cert, W)
        checked += 1
    assert checked


def test_prescribed_arc_genus_two_annular_witness():
    S22 = standard_surface(2, 2)
    spec = prescribed_arc(S22, [(0, 1)], 2)
    # a separating curve with one boundary component and one handle on each side
    c = CurveSystem.from_weights(S22, (0, 0, 0, 0, 0, 2, 2, 2, 2, 1, 1, 2))
    sides = [p for p in complementary_pieces(c) if not p.is_annulus]
    assert sorted((p.genus, sorted(p.punctures)) for p in sides) == [(1, [0]), (1, [1])]
    assert is_witness(spec, annulus(c))[0] == YES
    # every arc from 0 to 1 crosses it: edge arcs and their images under small twists
    edges = []
    for e in range(S22.num_edges):
        w = [0] * S22.num_edges
        w[e] = -1
        arc = CurveSystem.from_weights(S22, w)
        if arc_endpoints(arc) == frozenset({0, 1}):
            edges.append(arc)
    assert edges
    arcs = set(edges)
    for d in enumerate_curves(S22, 6):
        arcs |= {twist(d, p, arc) for arc in edges for p in (1, -1)}
    for arc in arcs:
        assert is_vertex(spec, arc)
        assert intersection_number(arc, c) > 0


def test_mu_alpha_of_curve():
    a = torus_curve(1, 2)
    assert mu_alpha(a) == [Marking(S11, ((a, None),))]


def test_mu_alpha_of_arc():
    for e, slope in enumerate([(1, 0), (0, 1), (1, -1)]):
        w = [0, 0, 0]
        w[e] = -1
        arc = CurveSystem.from_weights(S11, w)
        out = mu_alpha(arc)
        assert out
        for mu in out:
            assert mu.bases == (torus_curve(*slope),)
            assert is_clean(mu)


def test_universal_map_identity():
    X = WitnessSet.all_subsurfaces(S11, 4)
    mu, _ = complete_marking(Marking(S11, ()))
    assert universal_map(mu, l_x(X), l_x(X)) == mu


def test_complete_marking_is_vertex_everywhere():
    for S in (S11, S05):
        mu, _ = complete_marking(Marking(S, ()))
        X = WitnessSet.all_subsurfaces(S, 4)
        for W in [whole_surface(S)] + enumerate_subsurfaces(S, 4)[:6]:
            if W.has_pants:
                continue
            Y = close_witness_set([W], S, 4)
            assert universal_map(mu, l_x(X), l_x(Y)) == mu


def test_retraction_fiber_contains_mu():
    X = WitnessSet.all_subsurfaces(S11, 4)
    spec = l_x(X)
    mu, _ = complete_marking(Marking(S11, ()))
    ball = build_ball(spec, mu, 2)
    fiber = retraction_fiber(mu, spec, 0, list(ball.vertices), ball)
    assert mu in fiber.vertices and not fiber.empty


def test_m_a_ball_vertices_are_mu_alpha_markings():
    inner = multiarc_curve(S11, 1, universe_weight=3)
    spec = m_a(inner)
    from mcgraphs.graphs import system_universe
    alpha = system_universe(inner)[0]
    start = mu_alpha(alpha)[0]
    ball = build_ball(spec, start, 1)
    images = {m for s in system_universe(inner) for m in mu_alpha(s)}
    assert set(ball.vertices) <= images

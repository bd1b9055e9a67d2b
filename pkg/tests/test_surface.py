import itertools

import pytest

from mcgraphs.surface import (
    HALF_TWIST, ApplicabilityError, CoordinateError, CurveSystem, MappingClassGenerator,
    SurfaceError, apply_mapping_class, arc_endpoints, canonicalize, empty_system,
    enumerate_curves, enumerate_systems, half_twist_applicable, intersection_number,
    regular_neighborhood_boundary, standard_surface, twist,
)

import oracles
from oracles import S04, S11, sphere_curve, torus_curve


def edge_arc(surface, e):
    w = [0] * surface.num_edges
    w[e] = -1
    return CurveSystem.from_weights(surface, w)


def test_canonicalize_idempotent():
    for c in enumerate_systems(S11, 4) + enumerate_systems(S04, 4):
        once = canonicalize(c)
        assert canonicalize(once) == once


def test_canonicalize_empty():
    e = empty_system(S11)
    assert canonicalize(e).is_empty


def test_boundary_parallel_curve_is_stripped():
    c = canonicalize(CurveSystem(S11, (2, 2, 2)))
    assert c.is_empty
    assert c.stripped == ((2, 2, 2),)


def test_malformed_weights():
    with pytest.raises(CoordinateError):
        CurveSystem.from_weights(S11, (1, 2))
    with pytest.raises(CoordinateError):
        CurveSystem.from_weights(S11, (1, 1, 1))


def test_parallel_copies_collapse():
    assert CurveSystem.from_weights(S11, (2, 0, 2)) == torus_curve(0, 1)


def test_self_intersection_zero():
    for c in enumerate_curves(S04, 4):
        assert intersection_number(c, c) == 0


def test_intersection_examples():
    assert intersection_number(torus_curve(0, 1), torus_curve(1, 0)) == 1
    assert intersection_number(sphere_curve(0, 1), sphere_curve(1, 1)) == 2


def test_intersection_matches_slope_oracle_small():
    slopes = oracles.primitive_slopes(4)
    for u, v in itertools.combinations(slopes, 2):
        assert intersection_number(torus_curve(*u), torus_curve(*v)) == oracles.slope_intersection(u, v)


def test_mismatched_surfaces():
    with pytest.raises(SurfaceError):
        intersection_number(torus_curve(0, 1), sphere_curve(0, 1))


def test_neighborhood_of_curve_is_itself():
    for c in enumerate_curves(S11, 6):
        assert regular_neighborhood_boundary(c) == c


def test_neighborhood_of_torus_arc():
    # the edge arc of slope p/q is disjoint from the curve of slope p/q only
    for e, slope in enumerate([(1, 0), (0, 1), (1, -1)]):
        arc = edge_arc(S11, e)
        curve = torus_curve(*slope)
        assert intersection_number(arc, curve) == 0
        assert regular_neighborhood_boundary(arc) == curve


def test_neighborhood_of_sphere_arc():
    # opposite edges join complementary pairs of boundary components
    pairs = {0: 5, 1: 4, 2: 3}
    for e, f in pairs.items():
        a, b = edge_arc(S04, e), edge_arc(S04, f)
        assert arc_endpoints(a) | arc_endpoints(b) == frozenset(range(4))
        assert not arc_endpoints(a) & arc_endpoints(b)
        c = regular_neighborhood_boundary(a)
        assert c == regular_neighborhood_boundary(b)
        assert c.is_curve
        assert intersection_number(c, a) == 0 and intersection_number(c, b) == 0


def test_twist_power_zero_is_identity():
    for c in enumerate_systems(S11, 4):
        assert twist(torus_curve(0, 1), 0, c) == c


def test_twist_example():
    assert twist(torus_curve(0, 1), 1, torus_curve(1, 0)) == torus_curve(1, 1)


def test_twist_matches_transvection():
    for about in [(0, 1), (1, 0), (1, 1), (1, -2)]:
        for v in oracles.primitive_slopes(3):
            for n in range(-3, 4):
                expected = oracles.twist_slope(about, n, v)
                assert twist(torus_curve(*about), n, torus_curve(*v)) == torus_curve(*expected)


def test_twist_inverse():
    a = torus_curve(1, 2)
    g = MappingClassGenerator('dehn_twist', a, 3)
    for c in enumerate_curves(S11, 6):
        assert apply_mapping_class([g, g.inverse()], c) == c


def test_half_twist():
    a = sphere_curve(1, 0)
    assert half_twist_applicable(a)
    h = MappingClassGenerator(HALF_TWIST, a, 1)
    b = sphere_curve(0, 1)
    assert apply_mapping_class([h, h], b) == twist(a, 1, b)
    assert intersection_number(apply_mapping_class(h, b), b) == 2


def test_half_twist_inapplicable():
    a = torus_curve(0, 1)
    assert not half_twist_applicable(a)
    with pytest.raises(ApplicabilityError):
        apply_mapping_class(MappingClassGenerator(HALF_TWIST, a, 1), torus_curve(1, 0))


def test_enumerate_zero_weight():
    assert enumerate_systems(S11, 0) == []
    assert enumerate_curves(S11, 0) == []


def test_enumerate_curves_matches_stern_brocot():
    for bound in (2, 4, 6, 8, 10):
        got = {c.weights for c in enumerate_curves(S11, bound)}
        expected = {oracles.torus_weights(*v) for v in oracles.stern_brocot_curves(bound)}
        assert got == expected
        assert len(enumerate_curves(S11, bound)) == len(got)


def test_standard_surface_rejects_pants():
    with pytest.raises(SurfaceError):
        standard_surface(0, 3)

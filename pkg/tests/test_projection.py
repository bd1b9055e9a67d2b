import itertools

import pytest

from mcgraphs.projection import (
    CONTAINS, EQUAL, NESTED, ORTHOGONAL, TRANSVERSE, AnnularSet, ProjectionError, ProjectionSet,
    RhoError, Subsurface, annular_distance, annulus, complementary_pieces, enumerate_subsurfaces,
    farey_distance, fill, project_system, projection_diameter, projection_distance,
    relate, rho_map, topological_type, whole_surface,
)
from mcgraphs.surface import (
    MappingClassGenerator, apply_mapping_class, disjoint, enumerate_curves, intersection_number,
    standard_surface, twist, union,
)

import oracles
from oracles import S04, S11, torus_curve

S05 = standard_surface(0, 5)


def four_holed_spheres(surface, bound):
    return [W for W in enumerate_subsurfaces(surface, bound, connected_only=True)
            if not W.pieces[0].is_annulus and W.pieces[0].xi == 1]


def curves_inside(W, curves):
    """Enumerated curves in W, for W a four-holed sphere or all of Σ_{0,5}.

    The far side of such a W is a pair of pants, so disjointness from ∂W decides.
    """
    return {c for c in curves
            if c not in W.boundary.components and all(disjoint(c, b) for b in W.boundary.components)}


def test_farey_distance_matches_bfs():
    slopes = oracles.primitive_slopes(5)
    for u, v in itertools.combinations(slopes, 2):
        assert farey_distance(u, v) == oracles.farey_bfs(u, v)


def test_whole_torus_projection_is_farey_distance():
    W = whole_surface(S11)
    slopes = oracles.primitive_slopes(3)
    for u, v in itertools.combinations(slopes, 2):
        x = project_system(torus_curve(*u), W)
        y = project_system(torus_curve(*v), W)
        d = projection_distance(x, y)
        assert not d.capped
        assert d.value == oracles.farey_bfs(u, v)


def test_relate_equal():
    for W in enumerate_subsurfaces(S05, 6):
        assert relate(W, W) == EQUAL


def test_relate_crossing_annuli():
    assert relate(annulus(torus_curve(0, 1)), annulus(torus_curve(1, 0))) == TRANSVERSE


def test_relate_annulus_in_whole():
    A, W = annulus(torus_curve(1, 2)), whole_surface(S11)
    assert relate(A, W) == NESTED
    assert relate(W, A) == CONTAINS


def test_orthogonal_four_holed_spheres_on_six_holed_sphere():
    # a curve cutting Σ_{0,6} into two four-holed spheres; they share that curve
    S06 = standard_surface(0, 6)
    for c in enumerate_curves(S06, 6):
        pieces = complementary_pieces(c)
        regions = [p for p in pieces if not p.is_annulus]
        if len(regions) == 2 and all(p.xi == 1 for p in regions):
            U, V = (Subsurface(S06, (p,)) for p in regions)
            assert relate(U, V) == ORTHOGONAL
            assert U.boundary == V.boundary == c
            return
    pytest.fail('no splitting curve enumerated')


def test_relate_against_curve_sets():
    curves = enumerate_curves(S05, 8)
    subs = four_holed_spheres(S05, 6) + [whole_surface(S05)]
    inside = {W: curves_inside(W, curves) for W in subs}
    for U, V in itertools.permutations(subs, 2):
        r = relate(U, V)
        if r == NESTED:
            assert inside[U] <= inside[V]
        elif r == ORTHOGONAL:
            assert all(disjoint(a, b) for a in inside[U] for b in inside[V])
        elif r == TRANSVERSE:
            assert not inside[U] <= inside[V] and not inside[V] <= inside[U]
            assert any(not disjoint(a, b) for a in inside[U] for b in inside[V])


def test_projection_of_disjoint_curve_is_empty():
    a = torus_curve(1, 2)
    assert project_system(a, annulus(a)).is_empty
    for W in four_holed_spheres(S05, 6):
        assert project_system(W.boundary, W).is_empty


def test_projection_of_contained_curve():
    W = whole_surface(S11)
    c = torus_curve(1, 2)
    assert project_system(c, W).curves == {c}


def test_surgery_projection_on_five_holed_sphere():
    curves = enumerate_curves(S05, 8)
    for W in four_holed_spheres(S05, 6):
        d = W.boundary
        inside = curves_inside(W, curves)
        for s in curves:
            k = intersection_number(s, d)
            if not k:
                continue
            proj = project_system(s, W).curves
            assert proj
            for c in proj:
                # surgered curves live in W and are built from one arc of s plus boundary
                assert disjoint(c, d) and c != d
                assert intersection_number(c, s) <= 2 * k
                if c in set(curves):
                    assert c in inside
            assert projection_diameter(project_system(s, W)).value <= 2


def test_annular_interval_diameter():
    a = torus_curve(0, 1)
    A = annulus(a)

    def at(n):
        return ProjectionSet(A, ((A.pieces[0], AnnularSet.interval(a, n)),))

    assert projection_diameter(at(0), at(5)).value == oracles.interval_diameter((0, 0), (5, 5))
    assert projection_distance(at(3), at(3)).value == 0


def test_projection_distance_of_empty_raises():
    a = torus_curve(1, 2)
    e = project_system(a, annulus(a))
    with pytest.raises(ProjectionError):
        projection_distance(e, e)


def test_annular_twist_growth():
    a, x = torus_curve(0, 1), torus_curve(1, 0)
    for n in range(-6, 7):
        d = annular_distance(a, x, twist(a, n, x))
        assert abs(d - abs(n)) <= 2


def test_annular_distance_equivariant():
    a, x, y = torus_curve(1, 1), torus_curve(1, 0), torus_curve(2, 1)
    base = annular_distance(a, x, y)
    for about, power in [((0, 1), 2), ((1, -2), -1), ((3, 1), 1)]:
        g = MappingClassGenerator('dehn_twist', torus_curve(*about), power)
        ga, gx, gy = (apply_mapping_class(g, c) for c in (a, x, y))
        assert annular_distance(ga, gx, gy) == base


def test_rho_annulus_into_region():
    a = torus_curve(1, 2)
    assert rho_map(annulus(a), whole_surface(S11)) == a


def test_rho_transverse():
    pairs = [(U, V) for U, V in itertools.permutations(four_holed_spheres(S05, 6), 2)
             if relate(U, V) == TRANSVERSE]
    assert pairs
    for U, V in pairs:
        uv, vu = rho_map(U, V), rho_map(V, U)
        assert not uv.is_empty and not vu.is_empty
        assert projection_diameter(uv).value <= 2
        assert projection_diameter(vu).value <= 2
        assert uv == project_system(U.boundary, V)


def test_rho_orthogonal_raises():
    x, y = next((x, y) for x, y in itertools.combinations(enumerate_curves(S05, 6), 2)
                if disjoint(x, y))
    with pytest.raises(RhoError):
        rho_map(annulus(x), annulus(y))


def test_subsurfaces_of_small_surfaces():
    for S in (S11, S04):
        subs = enumerate_subsurfaces(S, 6)
        curves = enumerate_curves(S, 6)
        annuli = [W for W in subs if W.is_connected and W.pieces[0].is_annulus]
        assert len(annuli) == len(curves)
        assert [W for W in subs if W not in annuli] == [whole_surface(S)]


def test_subsurfaces_of_five_holed_sphere():
    subs = enumerate_subsurfaces(S05, 6, connected_only=True)
    curves = enumerate_curves(S05, 6)
    spheres = four_holed_spheres(S05, 6)
    annuli = [W for W in subs if W.pieces[0].is_annulus]
    # each curve cuts off a pair of holes, leaving one four-holed sphere
    assert len(spheres) == len(curves)
    assert {W.boundary for W in spheres} == set(curves)
    assert len(annuli) == len(curves)
    assert len(subs) == 1 + len(spheres) + len(annuli)
    assert len({topological_type(W) for W in spheres}) == len(spheres)


def test_fill_examples():
    a, b = torus_curve(0, 1), torus_curve(1, 0)
    assert fill(a, b) == whole_surface(S11)
    assert fill(a, a) == annulus(a)
    x, y = next((x, y) for x, y in itertools.combinations(enumerate_curves(S05, 6), 2)
                if disjoint(x, y))
    F = fill(x, y)
    assert set(F.pieces) == set(annulus(x).pieces + annulus(y).pieces)
    assert F.boundary == union(S05, [x, y])

"""Subsurfaces, their relations, and subsurface projection.

A connected essential subsurface is either an annulus, named by its core
curve, or a region: a complementary piece of its boundary multicurve. A
region is stored as its boundary multicurve together with a signature
(genus, punctures it contains, boundary sides) that picks it out among the
complementary pieces. A general subsurface is a set of pairwise disjoint
connected pieces.

Curve graph distances:

* annuli use integer twisting coordinates (see :class:`AnnularSet`);
* complexity-one regions use the Farey graph through a slope chart built
  from three pairwise adjacent curves of the region;
* larger regions use an exact test for distances 0, 1, 2 and a bounded
  search for 3; anything further is returned as a flagged lower bound.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools
import math

from .cutting import get_cut
from .surface import (
    CurveSystem, SurfaceError, empty_system, intersection_number, twist, union,
)

ANNULUS = 'annulus'
REGION = 'region'

EQUAL = 'equal'
NESTED = 'nested'
CONTAINS = 'contains'
ORTHOGONAL = 'orthogonal'
TRANSVERSE = 'transverse'

# Largest gap between the coordinate-interval model of an annular curve graph
# and the metric of the annular cover; widened into every annular bound check.
ANNULAR_SLACK = 2


class ProjectionError(ValueError):
    """Projection-distance request on an empty projection."""


class RhoError(ValueError):
    """ρ-map requested for an orthogonal pair."""


# --------------------------------------------------------------------------
# Subsurfaces


@dataclass(frozen=True)
class Piece:
    """A connected essential subsurface."""

    kind: str
    boundary: CurveSystem
    genus: int = 0
    punctures: frozenset = frozenset()
    sides: tuple = ()          # ((curve weights, number of sides), ...)

    @property
    def is_annulus(self):
        return self.kind == ANNULUS

    @property
    def core(self):
        return self.boundary if self.is_annulus else None

    @property
    def holes(self):
        return len(self.punctures) + sum(n for _, n in self.sides)

    @property
    def xi(self):
        if self.is_annulus:
            return -1
        return 3 * self.genus + self.holes - 3

    @property
    def is_pants(self):
        return not self.is_annulus and self.genus == 0 and self.holes == 3

    @property
    def is_farey(self):
        """Region whose curve graph is a Farey graph (ξ = 1, or the closed torus)."""
        if self.is_annulus:
            return False
        if self.boundary.surface.closed and self.genus == 1 and not self.sides:
            return True
        return self.xi == 1

    def sort_key(self):
        return (self.kind, self.boundary.sort_key(), self.genus, tuple(sorted(self.punctures)), self.sides)

    def describe(self):
        if self.is_annulus:
            return 'A'
        return f'S({self.genus},{self.holes})'


@dataclass(frozen=True)
class Subsurface:
    """An essential subsurface, possibly disconnected, as a set of disjoint pieces."""

    surface: object
    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, 'pieces', tuple(sorted(set(self.pieces), key=Piece.sort_key)))

    @property
    def is_empty(self):
        return not self.pieces

    @property
    def is_connected(self):
        return len(self.pieces) == 1

    @property
    def is_annulus(self):
        return self.is_connected and self.pieces[0].is_annulus

    @property
    def core(self):
        return self.pieces[0].core if self.is_annulus else None

    @property
    def boundary(self):
        """All boundary curves, annulus cores included."""
        return union(self.surface, [p.boundary for p in self.pieces])

    @property
    def components(self):
        return tuple(Subsurface(self.surface, (p,)) for p in self.pieces)

    @property
    def has_pants(self):
        return any(p.is_pants for p in self.pieces)

    @property
    def connected_components(self):
        """Per-component topological type: (genus, boundary count, annulus flag)."""
        return [(p.genus, 2 if p.is_annulus else p.holes, p.is_annulus) for p in self.pieces]

    def sort_key(self):
        return (self.boundary.size, len(self.pieces), tuple(p.sort_key() for p in self.pieces))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        parts = ' + '.join(f'{p.describe()}{list(p.boundary.weights)}' for p in self.pieces)
        return f'Subsurface({parts or "empty"})'

    def to_json(self):
        bd = self.boundary.components
        index = {c.weights: i for i, c in enumerate(bd)}
        mask = []
        for p in self.pieces:
            if p.is_annulus:
                mask.append({'annulus': index[p.boundary.weights]})
            else:
                mask.append({'region': {'genus': p.genus, 'punctures': sorted(p.punctures),
                                        'sides': [[index[w], n] for w, n in p.sides]}})
        return {'boundary_weights': [list(c.weights) for c in bd], 'side_mask': mask}

    @classmethod
    def from_json(cls, surface, data):
        curves = [CurveSystem.from_weights(surface, w) for w in data['boundary_weights']]
        pieces = []
        for entry in data['side_mask']:
            if 'annulus' in entry:
                pieces.append(annulus(curves[entry['annulus']]).pieces[0])
            else:
                r = entry['region']
                sides = tuple(sorted((curves[i].weights, n) for i, n in r['sides']))
                bd = union(surface, [curves[i] for i, _ in r['sides']])
                pieces.append(Piece(REGION, bd, r['genus'], frozenset(r['punctures']), sides))
        return cls(surface, tuple(pieces))


def whole_surface(surface):
    n = surface.boundary_components
    return Subsurface(surface, (Piece(REGION, empty_system(surface), surface.genus, frozenset(range(n)), ()),))


def annulus(curve):
    if not curve.is_curve:
        raise ValueError('an annulus needs a single essential curve as its core')
    return Subsurface(curve.surface, (Piece(ANNULUS, curve),))


def _piece_from_region(cut, region):
    curves = [cut.curves[i] for i, _ in region.sides]
    sides = tuple(sorted((cut.curves[i].weights, n) for i, n in region.sides))
    return Piece(REGION, union(cut.surface, curves), region.genus, region.punctures, sides)


def complementary_pieces(multicurve):
    """The complementary regions of a multicurve as pieces (pants included)."""
    cut = get_cut(multicurve)
    return [_piece_from_region(cut, r) for r in cut.regions(range(len(cut.curves)))]


def _region_of(cut, piece):
    """The region of ``cut`` (with the piece's boundary kept) matching the piece."""
    keep = [cut.curve_index[c.weights] for c in piece.boundary.components]
    for region in cut.regions(keep):
        if _piece_from_region(cut, region) == piece:
            return region
    raise SurfaceError('piece does not match any complementary region')


def _atom_of(piece):
    cut = get_cut(piece.boundary)
    region = _region_of(cut, piece)
    if len(region.atoms) != 1:
        raise SurfaceError('region boundary is not the full set of adjacent curves')
    return cut, next(iter(region.atoms))


# --------------------------------------------------------------------------
# Relations


def _piece_footprint(cut, piece):
    if piece.is_annulus:
        return ('a', cut.curve_index[piece.boundary.weights])
    region = _region_of(cut, piece)
    return ('r', region.atoms, region.interior)


def _inside(fp, other):
    if fp[0] == 'a':
        if other[0] == 'a':
            return fp[1] == other[1]
        return fp[1] in other[2]
    if other[0] == 'a':
        return False
    return fp[1] <= other[1] and fp[2] <= other[2]


def _apart(fp, other):
    if fp[0] == 'a' and other[0] == 'a':
        return fp[1] != other[1]
    if fp[0] == 'a':
        return fp[1] not in other[2]
    if other[0] == 'a':
        return other[1] not in fp[2]
    return not (fp[1] & other[1])


def relate(U, V):
    """One of ``equal``, ``nested`` (U ⊊ V), ``contains`` (V ⊊ U), ``orthogonal``, ``transverse``."""
    if U.surface != V.surface:
        raise SurfaceError('subsurfaces live on different surfaces')
    if U == V:
        return EQUAL
    bu, bv = U.boundary.components, V.boundary.components
    for x in bu:
        for y in bv:
            if x != y and intersection_number(x, y):
                return TRANSVERSE
    cut = get_cut(union(U.surface, list(bu) + list(bv)))
    fu = [_piece_footprint(cut, p) for p in U.pieces]
    fv = [_piece_footprint(cut, p) for p in V.pieces]
    u_in_v = all(any(_inside(x, y) for y in fv) for x in fu)
    v_in_u = all(any(_inside(y, x) for x in fu) for y in fv)
    if u_in_v and v_in_u:
        return EQUAL
    if u_in_v:
        return NESTED
    if v_in_u:
        return CONTAINS
    if all(_apart(x, y) for x in fu for y in fv):
        return ORTHOGONAL
    return TRANSVERSE


def is_nested(U, V):
    """U ⊑ V (equality allowed)."""
    return relate(U, V) in (EQUAL, NESTED)


def topological_type(W):
    """A key that is equal for two subsurfaces iff a pure mapping class carries one to the other."""
    surface = W.surface
    bd = W.boundary
    cut = get_cut(bd)
    selected_atoms, selected_annuli = set(), set()
    for p in W.pieces:
        if p.is_annulus:
            selected_annuli.add(cut.curve_index[p.boundary.weights])
        else:
            selected_atoms |= _region_of(cut, p).atoms
    labels = [(a.genus, tuple(sorted(a.punctures)), a.marked, a.index in selected_atoms) for a in cut.atoms]
    ends = {}
    for a in cut.atoms:
        for c in a.sides:
            ends.setdefault(c, []).append(a.index)
    edges = [(tuple(ends[c]), c in selected_annuli) for c in range(len(cut.curves))]
    order = sorted(range(len(labels)), key=lambda i: labels[i])
    groups = [list(g) for _, g in itertools.groupby(order, key=lambda i: labels[i])]
    best = None
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        position = {}
        for perm in choice:
            for i in perm:
                position[i] = len(position)
        key = tuple(sorted((tuple(sorted(position[x] for x in e)), s) for e, s in edges))
        if best is None or key < best:
            best = key
    return (surface.genus, surface.boundary_components, tuple(sorted(labels)), best)


# --------------------------------------------------------------------------
# Annular coordinates


_REFERENCES = {}
_TWISTING = {}


def annular_reference(core):
    """Fixed system crossing ``core``: the edge arc of the first edge it crosses.

    On the closed torus, where arcs do not exist, the curve around that edge
    is used instead.
    """
    key = (core.surface.triangles, core.weights)
    if key not in _REFERENCES:
        T = core.surface.triangulation
        edge = next(i for i, w in enumerate(core.weights) if w > 0)
        lam = T.edge_curve(edge) if core.surface.closed else T.edge_arc(edge)
        _REFERENCES[key] = CurveSystem.from_weights(core.surface, lam.geometric)
    return _REFERENCES[key]


def relative_twist(core, x, y):
    """Centre of the integers t minimising i(τ^t x, y), τ the right twist about ``core``.

    Exactly equivariant: replacing x by τ^n x shifts the value by -n, and
    replacing y by τ^n y shifts it by +n.
    """
    key = (core.weights, x, y)
    if key in _TWISTING:
        return _TWISTING[key]
    ref = annular_reference(core)
    if x == ref:
        start = round(core.lamination.relative_twisting(x.lamination, y.lamination))
    else:
        start = round(twisting_coordinate(core, y) - twisting_coordinate(core, x))
    f = {}

    def value(t):
        if t not in f:
            f[t] = intersection_number(twist(core, t, x), y)
        return f[t]

    lo = hi = start
    while value(lo - 1) <= value(lo):
        lo -= 1
    while value(hi + 1) <= value(hi):
        hi += 1
    best = min(value(t) for t in range(lo, hi + 1))
    ts = [t for t in range(lo, hi + 1) if value(t) == best]
    # walk outward across any plateau of minimisers
    while value(ts[0] - 1) == best:
        ts.insert(0, ts[0] - 1)
    while value(ts[-1] + 1) == best:
        ts.append(ts[-1] + 1)
    result = Fraction(ts[0] + ts[-1], 2)
    _TWISTING[key] = result
    return result


def twisting_coordinate(core, system):
    """Rational twisting coordinate of a connected system crossing ``core``.

    Applying the right twist about ``core`` n times raises it by n.
    """
    return relative_twist(core, annular_reference(core), system)


def annular_distance(core, x, y):
    """Distance in the annular curve graph between the projections of two components."""
    if x == y:
        return 0
    return max(1, math.ceil(abs(relative_twist(core, x, y))))


@dataclass(frozen=True)
class AnnularSet:
    """Projection to an annulus: an integer interval, optionally with the systems it came from.

    When sources are present they are authoritative for distances
    (:func:`annular_distance` is invariant under mapping classes); bare
    intervals fall back to interval arithmetic.
    """

    core: CurveSystem
    lo: int
    hi: int
    sources: frozenset = frozenset()

    @classmethod
    def from_sources(cls, core, sources):
        sources = frozenset(sources)
        coords = [twisting_coordinate(core, s) for s in sources]
        lo = min(math.floor(c) for c in coords)
        hi = max(math.ceil(c) for c in coords)
        return cls(core, lo, hi, sources)

    @classmethod
    def interval(cls, core, lo, hi=None):
        return cls(core, lo, lo if hi is None else hi)

    def merge(self, other):
        if self.sources and other.sources:
            return AnnularSet(self.core, min(self.lo, other.lo), max(self.hi, other.hi),
                              self.sources | other.sources)
        return AnnularSet(self.core, min(self.lo, other.lo), max(self.hi, other.hi))

    def shifted(self, n):
        return AnnularSet(self.core, self.lo + n, self.hi + n)

    def diameter(self):
        if not self.sources:
            return self.hi - self.lo
        srcs = sorted(self.sources, key=CurveSystem.sort_key)
        best = max((1 for s in srcs if intersection_number(s, self.core) >= 2), default=0)
        for x, y in itertools.combinations(srcs, 2):
            best = max(best, annular_distance(self.core, x, y))
        return best

    def to_json(self):
        return {'interval': [self.lo, self.hi]}


def _annular_union_diameter(sets):
    sets = [s for s in sets if s is not None]
    if not sets:
        return 0
    if all(s.sources for s in sets):
        merged = sets[0]
        for s in sets[1:]:
            merged = merged.merge(s)
        return merged.diameter()
    lo = min(s.lo for s in sets)
    hi = max(s.hi for s in sets)
    return hi - lo


# --------------------------------------------------------------------------
# Farey charts


def _farey_adjacent(u, v):
    return abs(u[0] * v[1] - u[1] * v[0]) == 1


def _ancestors(p, q):
    """Stern-Brocot ancestors of p/q (q > 0), including the bracketing integers."""
    out = set()
    a, b = (math.floor(Fraction(p, q)), 1), (math.floor(Fraction(p, q)) + 1, 1)
    out.add(a)
    out.add(b)
    while True:
        m = (a[0] + b[0], a[1] + b[1])
        if m == (p, q) or (a[0] * q == p * a[1]) or (b[0] * q == p * b[1]):
            break
        out.add(m)
        if Fraction(p, q) < Fraction(*m):
            b = m
        else:
            a = m
    out.add((p, q))
    return out


def farey_distance(u, v):
    """Distance between slopes u = (p, q) and v = (r, s) in the Farey graph."""
    (p, q), (r, s) = u, v
    if p * s - q * r == 0:
        return 0
    if abs(p * s - q * r) == 1:
        return 1
    # send u to 1/0 by an element of SL(2, Z)
    g, x, y = _ext_gcd(p, q)
    # x*p + y*q = 1; the matrix [[x, y], [-q, p]] maps (p, q) to (1, 0)
    a, b = x * r + y * s, -q * r + p * s
    if b < 0:
        a, b = -a, -b
    if b == 1:
        return 1
    nodes = _ancestors(a, b)
    target = (a, b)
    frontier = [n for n in nodes if n[1] == 1]
    dist = {n: 1 for n in frontier}
    while target not in dist:
        nxt = []
        for n in frontier:
            for m in nodes:
                if m not in dist and _farey_adjacent(n, m):
                    dist[m] = dist[n] + 1
                    nxt.append(m)
        frontier = nxt
        if not frontier:
            raise ArithmeticError('Farey search failed')
    return dist[target]


def _ext_gcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


class FareyChart:
    """Slopes for curves in a complexity-one region, from three pairwise adjacent curves."""

    def __init__(self, piece):
        self.piece = piece
        surface = piece.boundary.surface
        if piece.boundary.is_empty:
            cut, atom = get_cut(empty_system(surface)), 0
        else:
            cut, atom = _atom_of(piece)
        x = cut.atom_curves(atom)[0]
        found = _clean_in_atom(cut, x)
        if found is None:
            raise SurfaceError('no transverse curve found in Farey region')
        y, _, k = found
        if k == 1:
            w = twist(x, 1, y)
        else:
            h = cut.half_twist(x, 1)
            w = cut.lift_system(h(cut.crush(y.lamination)))
        self.k, self.x, self.y, self.w = k, x, y, w

    def slope(self, z):
        k = self.k
        P = intersection_number(z, self.x) // k
        Q = intersection_number(z, self.y) // k
        R = intersection_number(z, self.w) // k
        if P == 0:
            return (0, 1)
        if Q == 0:
            return (1, 0)
        q = Q if R == abs(P - Q) else -Q
        g = math.gcd(P, Q)
        p, q = P // g, q // g
        if q < 0:
            p, q = -p, -q
        return (p, q)


def _clean_in_atom(cut, x):
    if cut.surface.closed and cut.multicurve.is_empty:
        # the closed torus: borrow the punctured-torus arithmetic
        for y in cut.atom_curves(0):
            if intersection_number(x, y) == 1:
                return y, 0, 1
        return None
    return cut.clean_transverse(x)


_CHARTS = {}


def farey_chart(piece):
    if piece not in _CHARTS:
        _CHARTS[piece] = FareyChart(piece)
    return _CHARTS[piece]


# --------------------------------------------------------------------------
# Projection


@dataclass(frozen=True)
class ProjectionSet:
    """Projection of a system or marking to a subsurface, one part per piece met."""

    target: Subsurface
    parts: tuple      # ((piece, frozenset of curves | AnnularSet), ...)

    @property
    def is_empty(self):
        return not self.parts

    @property
    def curves(self):
        out = set()
        for piece, value in self.parts:
            if not piece.is_annulus:
                out |= value
        return frozenset(out)

    def part(self, piece):
        for p, value in self.parts:
            if p == piece:
                return value
        return None

    def to_json(self):
        def one(piece, value):
            if piece.is_annulus:
                return value.to_json()
            return {'curve_set': [list(c.weights) for c in sorted(value, key=CurveSystem.sort_key)]}
        if self.target.is_connected:
            return one(*self.parts[0]) if self.parts else {'curve_set': []}
        return {'join': [one(p, v) for p, v in self.parts]}


_REGION_PROJ = {}


def _project_region(system, piece):
    key = (system, piece)
    if key not in _REGION_PROJ:
        _REGION_PROJ[key] = _project_region_uncached(system, piece)
    return _REGION_PROJ[key]


def _project_region_uncached(system, piece):
    if piece.boundary.is_empty:
        comps = system.components
        out = set()
        for c in comps:
            if c.is_curve:
                out.add(c)
            else:
                out |= set(regular_boundary_components(c))
        return frozenset(out)
    cut, atom = _atom_of(piece)
    crushed = cut.crush(system.lamination)
    out = set()
    for comp in crushed.components():
        if cut.support(comp) != {atom} or comp.is_peripheral():
            continue
        if hasattr(comp, 'boundary') and comp.__class__.__name__ == 'Arc':
            for b in comp.boundary().components():
                if not b.is_peripheral():
                    out.add(cut.lift_system(b))
        else:
            out.add(cut.lift_system(comp))
    return frozenset(c for c in out if c.is_curve)


def regular_boundary_components(system):
    from .surface import regular_neighborhood_boundary
    return regular_neighborhood_boundary(system).components


def project_piece(system, piece):
    """Projection of a canonical system to one connected piece (``None`` if it misses)."""
    if piece.is_annulus:
        core = piece.boundary
        crossing = [c for c in system.components if intersection_number(c, core) > 0]
        return AnnularSet.from_sources(core, crossing) if crossing else None
    out = _project_region(system, piece)
    return out or None


def project_system(system, W):
    """Subsurface projection π_W of a canonical system, as a :class:`ProjectionSet`."""
    if isinstance(W, Piece):
        W = Subsurface(W.boundary.surface, (W,))
    parts = []
    for piece in W.pieces:
        value = project_piece(system, piece)
        if value is not None:
            parts.append((piece, value))
    return ProjectionSet(W, tuple(parts))


_MEETS = {}


def piece_meets(system, piece):
    """Whether a system has non-empty projection to one piece (no lifting needed)."""
    if piece.is_annulus:
        return any(intersection_number(c, piece.boundary) > 0 for c in system.components)
    if piece.boundary.is_empty:
        return not system.is_empty
    key = (system, piece)
    if key in _REGION_PROJ:
        return bool(_REGION_PROJ[key])
    if key not in _MEETS:
        cut, atom = _atom_of(piece)
        found = False
        for comp in cut.crush(system.lamination).components():
            if cut.support(comp) != {atom} or comp.is_peripheral():
                continue
            if comp.__class__.__name__ == 'Arc':
                found = any(not b.is_peripheral() for b in comp.boundary().components())
            else:
                found = True
            if found:
                break
        _MEETS[key] = found
    return _MEETS[key]


def meets(system, W):
    return any(piece_meets(system, p) for p in W.pieces)


# --------------------------------------------------------------------------
# Distances


@dataclass(frozen=True)
class Distance:
    """A curve-graph distance; ``capped`` marks a lower bound from a truncated search."""

    value: int
    capped: bool = False

    def __int__(self):
        return self.value


_FILLS = {}
_REGION_DIST = {}


def _fills(piece, x, y):
    """Whether two crossing curves leave no essential curve of the piece in their complement."""
    key = (piece, x, y) if x.sort_key() <= y.sort_key() else (piece, y, x)
    if key not in _FILLS:
        _FILLS[key] = _fills_uncached(piece, x, y)
    return _FILLS[key]


def _fills_uncached(piece, x, y):
    bd = {c.weights for c in piece.boundary.components}
    return all(c.weights in bd for c in _boundary_curves(x, y))


def region_distance(piece, x, y, search=None):
    """Distance between curves x, y inside a region piece."""
    key = (piece, x, y) if x.sort_key() <= y.sort_key() else (piece, y, x)
    if search is None and key in _REGION_DIST:
        return _REGION_DIST[key]
    result = _region_distance(piece, key[1], key[2], search)
    if search is None:
        _REGION_DIST[key] = result
    return result


def _region_distance(piece, x, y, search):
    if x == y:
        return Distance(0)
    if piece.is_farey:
        chart = farey_chart(piece)
        return Distance(farey_distance(chart.slope(x), chart.slope(y)))
    if intersection_number(x, y) == 0:
        return Distance(1)
    if not _fills(piece, x, y):
        return Distance(2)
    # distance >= 3; look for a curve disjoint from x that does not fill with y
    pool = set(search or ())
    surface = piece.boundary.surface
    cut = get_cut(union(surface, [x] + list(piece.boundary.components)))
    for atom in cut.atoms:
        pool.update(cut.atom_curves(atom.index))
    pool.update(_boundary_curves(x, y))
    for z in sorted(pool, key=CurveSystem.sort_key):
        if z in (x, y) or z.weights in {c.weights for c in piece.boundary.components}:
            continue
        if intersection_number(z, x) == 0 and project_piece(z, piece) is not None:
            if intersection_number(z, y) == 0 or not _fills(piece, z, y):
                return Distance(3)
    return Distance(3, capped=True)


def _boundary_curves(x, y):
    """Essential non-peripheral curves of ∂N(x ∪ y), for a curve x."""
    cut = get_cut(x)
    out = {}
    for comp in cut.crush(y.lamination).boundary().components():
        if not comp.is_peripheral():
            c = cut.lift_system(comp)
            if c.is_curve:
                out[c.weights] = c
    return sorted(out.values(), key=CurveSystem.sort_key)


def set_diameter(piece, values):
    """Diameter of a union of projections to one connected piece."""
    if piece.is_annulus:
        d = _annular_union_diameter(values)
        return Distance(d)
    curves = set()
    for v in values:
        if v:
            curves |= v
    curves = sorted(curves, key=CurveSystem.sort_key)
    best, capped = 0, False
    for x, y in itertools.combinations(curves, 2):
        d = region_distance(piece, x, y)
        if d.value > best or (d.value == best and d.capped):
            best, capped = d.value, d.capped
    return Distance(best, capped)


def projection_diameter(*sets):
    """Diameter of the union of projections (same target) in its curve graph."""
    sets = [s for s in sets if s is not None]
    if not sets:
        return Distance(0)
    target = sets[0].target
    pieces = [p for p in target.pieces if any(s.part(p) is not None for s in sets)]
    if not pieces:
        return Distance(0)
    if len(target.pieces) == 1:
        return set_diameter(pieces[0], [s.part(pieces[0]) for s in sets])
    best, capped = 0, False
    if len(pieces) > 1:
        best = 1
    for p in pieces:
        d = set_diameter(p, [s.part(p) for s in sets])
        value = min(d.value, 2)
        if value > best:
            best, capped = value, d.capped and d.value <= 2
    return Distance(best, capped)


def projection_distance(x, y):
    """d_W for two non-empty projections to the same target."""
    if x.is_empty or y.is_empty:
        raise ProjectionError('projection distance is undefined for empty projections')
    if x.target != y.target:
        raise SurfaceError('projections have different targets')
    return projection_diameter(x, y)


# --------------------------------------------------------------------------
# ρ-maps


def boundary_in(U, V):
    """∂_V U: curves of ∂U that are non-peripheral in V."""
    cut = get_cut(union(U.surface, list(U.boundary.components) + list(V.boundary.components)))
    out = []
    for c in U.boundary.components:
        idx = cut.curve_index[c.weights]
        for p in V.pieces:
            fp = _piece_footprint(cut, p)
            if fp[0] == 'r' and idx in fp[2]:
                out.append(c)
    return union(U.surface, out)


def rho_map(U, V):
    """ρ from U to V.

    ``U ⊊ V`` gives ∂_V U (a curve system); ``U ⋔ V`` gives π_V(∂U); ``V ⊊ U``
    gives the downward map as a function of a system, i.e. projection into V.
    """
    rel = relate(U, V)
    if rel == ORTHOGONAL:
        raise RhoError('no ρ-map between orthogonal subsurfaces')
    if rel == NESTED:
        return boundary_in(U, V)
    if rel == TRANSVERSE:
        return project_system(U.boundary, V)
    if rel == CONTAINS:
        return lambda system: project_system(system, V)
    raise RhoError('no ρ-map from a subsurface to itself')


# --------------------------------------------------------------------------
# Fill


def _region_containing(boundary, system):
    cut = get_cut(boundary)
    atoms = cut.locate(system)
    regions = cut.regions(range(len(cut.curves)))
    out = []
    for r in regions:
        if r.atoms & atoms:
            out.append(_piece_from_region(cut, r))
    return out


def _nonperipheral(surface, lam):
    out = []
    for comp in lam.components():
        if not comp.is_peripheral():
            out.append(CurveSystem.from_weights(surface, comp.geometric))
    return union(surface, out)


def _absorb(surface, piece, k):
    """Smallest region containing a region piece and a system crossing its boundary."""
    bd = piece.boundary
    if bd.is_empty:
        return piece
    crossing = [c for c in bd.components if intersection_number(c, k) > 0]
    if not crossing:
        return piece
    around = _nonperipheral(surface, bd.lamination.boundary_union(k.lamination))
    cut = get_cut(bd)
    _, atom = _atom_of(piece)
    outside = [c for c in around.components
               if c.weights not in cut.curve_index and cut.locate(c) != {atom}]
    keep = [c for c in bd.components if c not in crossing]
    new_bd = union(surface, outside + keep)
    blob = union(surface, [c for c in bd.components if c in crossing])
    found = _region_containing(new_bd, blob) if not new_bd.is_empty else [whole_surface(surface).pieces[0]]
    return found[0]


def fill(a, b):
    """Smallest essential subsurface containing both systems."""
    if a.surface != b.surface:
        raise SurfaceError('systems live on different surfaces')
    surface = a.surface
    comps = sorted({c.weights: c for c in a.components + b.components}.values(),
                   key=CurveSystem.sort_key)
    if not comps:
        return Subsurface(surface, ())
    # clusters of mutually crossing components
    parent = list(range(len(comps)))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(comps)), 2):
        if intersection_number(comps[i], comps[j]):
            parent[find(j)] = find(i)
    clusters = {}
    for i in range(len(comps)):
        clusters.setdefault(find(i), []).append(comps[i])
    singles = [c[0] for c in clusters.values() if len(c) == 1]
    pieces = []
    if singles:
        arcs = [c for c in singles if c.is_arc]
        curves = [c for c in singles if c.is_curve]
        pieces.extend(annulus(c).pieces[0] for c in curves)
        if arcs:
            from .surface import regular_neighborhood_boundary
            m = union(surface, list(regular_neighborhood_boundary(union(surface, arcs)).components) + curves)
            if m.is_empty:
                pieces = [whole_surface(surface).pieces[0]]
            else:
                pieces.extend(_region_containing(m, union(surface, arcs)))
    for cluster in clusters.values():
        if len(cluster) == 1:
            continue
        first = cluster[0]
        partner = next(c for c in cluster[1:] if intersection_number(first, c))
        if first.is_curve:
            seed = first.lamination.boundary_union(partner.lamination)
        elif partner.is_curve:
            seed = partner.lamination.boundary_union(first.lamination)
        else:
            raise NotImplementedError('fill of two crossing arc systems')
        bd = _nonperipheral(surface, seed)
        if bd.is_empty:
            piece = whole_surface(surface).pieces[0]
        else:
            piece = _region_containing(bd, union(surface, [first]))[0]
        for k in cluster:
            piece = _absorb(surface, piece, k)
        pieces.append(piece)
    return Subsurface(surface, tuple(pieces))


# --------------------------------------------------------------------------
# Enumeration


class SubsurfaceList(list):
    """A list of subsurfaces with enumeration metadata."""

    def __init__(self, items, bound, complete):
        super().__init__(items)
        self.bound = bound
        self.complete = complete

    @property
    def metadata(self):
        return {'bound': self.bound, 'complete': self.complete, 'count': len(self)}


_SUBSURFACES = {}


def connected_subsurfaces(surface, bound):
    """Connected essential non-pants subsurfaces with boundary size ≤ bound."""
    from .surface import enumerate_curves
    curves = enumerate_curves(surface, bound)
    out = []
    whole = whole_surface(surface)
    if not whole.pieces[0].is_pants:
        out.append(whole)
    out.extend(annulus(c) for c in curves)
    multis = _multicurves(curves, bound, surface.xi)
    for m in multis:
        cut = get_cut(m)
        for region in cut.regions(range(len(cut.curves))):
            if {i for i, _ in region.sides} != set(range(len(cut.curves))):
                continue
            piece = _piece_from_region(cut, region)
            if piece.is_pants or piece.holes + 3 * piece.genus <= 2:
                continue
            out.append(Subsurface(surface, (piece,)))
    return sorted(set(out), key=Subsurface.sort_key)


def _multicurves(curves, bound, max_size):
    out = []

    def rec(start, chosen, size):
        if chosen:
            out.append(union(curves[0].surface, chosen))
        if len(chosen) == max_size:
            return
        for i in range(start, len(curves)):
            c = curves[i]
            if size + c.size > bound:
                continue
            if all(intersection_number(c, d) == 0 for d in chosen):
                rec(i + 1, chosen + [c], size + c.size)

    rec(0, [], 0)
    return out


def enumerate_subsurfaces(surface, max_boundary_weight, connected_only=False):
    """Essential non-pants subsurfaces whose boundary multicurve has size ≤ the bound.

    Disconnected subsurfaces are unions of pairwise orthogonal connected ones.
    The result carries ``bound`` and ``complete`` metadata: completeness is
    relative to the boundary-size bound.
    """
    key = (surface, max_boundary_weight, connected_only)
    if key in _SUBSURFACES:
        return _SUBSURFACES[key]
    conn = connected_subsurfaces(surface, max_boundary_weight)
    out = list(conn)
    if not connected_only:
        n = len(conn)
        orth = {}
        for i, j in itertools.combinations(range(n), 2):
            orth[i, j] = relate(conn[i], conn[j]) == ORTHOGONAL

        def rec(start, chosen):
            if len(chosen) >= 2:
                W = Subsurface(surface, tuple(conn[i].pieces[0] for i in chosen))
                if W.boundary.size <= max_boundary_weight:
                    out.append(W)
            for k in range(start, n):
                if all(orth[i, k] for i in chosen):
                    trial = Subsurface(surface, tuple(conn[i].pieces[0] for i in chosen + [k]))
                    if trial.boundary.size <= max_boundary_weight:
                        rec(k + 1, chosen + [k])

        rec(0, [])
    result = SubsurfaceList(sorted(set(out), key=Subsurface.sort_key), max_boundary_weight, True)
    _SUBSURFACES[key] = result
    return result

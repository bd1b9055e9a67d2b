"""Isotopy classes of arc and curve systems on a triangulated surface.

Surfaces are ideally triangulated: every vertex of the triangulation is a
puncture standing in for a boundary component. A system of disjoint arcs and
curves is stored by its normal coordinates, one integer per edge. An arc
running along an edge has coordinate -1 there (the ``curver`` convention).

Normal coordinates on a fixed ideal triangulation are already a complete
invariant of the isotopy class, so the canonical form of a system is just
its coordinate vector after dropping peripheral curves and repeated copies.
"""

from dataclasses import dataclass, field
from functools import cached_property
import json

import curver

from . import _curver_compat  # noqa: F401  (patches curver on import)

ARC = 'arc'
CURVE = 'curve'


class SurfaceError(ValueError):
    """Malformed surface or operands living on different surfaces."""


class CoordinateError(ValueError):
    """A weight vector that is not a valid normal-coordinate vector."""


class ApplicabilityError(ValueError):
    """A mapping class requested where it is not defined."""


_TRIANGULATIONS = {}


def _edge_label(x):
    return x if x >= 0 else ~x


@dataclass(frozen=True)
class SurfaceSpec:
    """Compact orientable surface of genus ``genus`` with ``boundary_components`` holes.

    ``triangles`` lists cyclically ordered triples of oriented edge labels,
    where ``~i`` (that is ``-i-1``) is edge ``i`` with reversed orientation.
    The one exception to the ideal model is the closed torus, whose single
    vertex is a marked point rather than a puncture.
    """

    genus: int
    boundary_components: int
    triangles: tuple
    boundary_edges: tuple = ()

    def __post_init__(self):
        triangles = tuple(tuple(int(x) for x in t) for t in self.triangles)
        object.__setattr__(self, 'triangles', triangles)
        object.__setattr__(self, 'boundary_edges', tuple(self.boundary_edges))
        g, b = self.genus, self.boundary_components
        if g < 0 or b < 0:
            raise SurfaceError('genus and boundary count must be non-negative')
        if 3 * g + b - 3 <= 0 and (g, b) != (1, 0):
            raise SurfaceError(f'complexity {3 * g + b - 3} surfaces are not supported')
        if any(len(t) != 3 for t in triangles) or not triangles:
            raise SurfaceError('triangulation must be a non-empty list of triples')
        zeta = len(triangles) * 3 // 2
        labels = sorted(x for t in triangles for x in t)
        if labels != sorted(list(range(zeta)) + [~i for i in range(zeta)]):
            raise SurfaceError('each edge must appear exactly once with each orientation')
        if self.boundary_edges:
            raise SurfaceError('ideal triangulations carry no boundary edges')
        T = self.triangulation
        F, E, V = len(triangles), zeta, T.num_vertices
        if not T.is_connected():
            raise SurfaceError('triangulation is disconnected')
        if b == 0:
            if V - E + F != 2 - 2 * g or V != 1:
                raise SurfaceError('Euler characteristic does not match genus')
        elif V != b or F - E != 2 - 2 * g - b:
            raise SurfaceError('Euler characteristic does not match genus and boundary')

    @property
    def triangulation(self):
        try:
            return _TRIANGULATIONS[self.triangles]
        except KeyError:
            T = curver.create_triangulation([list(t) for t in self.triangles])
            _TRIANGULATIONS[self.triangles] = T
            return T

    @property
    def xi(self):
        """Complexity 3g + b - 3."""
        return 3 * self.genus + self.boundary_components - 3

    @property
    def euler_characteristic(self):
        return 2 - 2 * self.genus - self.boundary_components

    @property
    def num_edges(self):
        return len(self.triangles) * 3 // 2

    @property
    def closed(self):
        return self.boundary_components == 0

    @property
    def surface_id(self):
        return f'S{self.genus}_{self.boundary_components}:{self.triangulation.sig()}'

    def __repr__(self):
        return f'SurfaceSpec({self.genus}, {self.boundary_components})'

    def to_json(self):
        return {
            'genus': self.genus,
            'boundary': self.boundary_components,
            'triangles': [list(t) for t in self.triangles],
            'boundary_edges': list(self.boundary_edges),
        }

    @classmethod
    def from_json(cls, data):
        return cls(data['genus'], data['boundary'], tuple(map(tuple, data['triangles'])),
                   tuple(data.get('boundary_edges', ())))

    @cached_property
    def puncture_curves(self):
        """Weights of the peripheral curve around each puncture, in vertex order."""
        if self.closed:
            return ()
        T = self.triangulation
        return tuple(tuple(T.curve_from_cut_sequence(v).geometric) for v in sorted_vertices(T))


def sorted_vertices(T):
    """Vertices of a curver triangulation in a fixed order (by smallest edge label)."""
    return sorted(T.vertices, key=lambda v: min(e.label for e in v))


def standard_surface(genus, boundary):
    """A fixed triangulation of the surface of the given type.

    The one-holed torus, the closed torus and the four-holed sphere use the
    small symmetric triangulations that slope charts are written against;
    everything else comes from curver's census.
    """
    if (genus, boundary) in ((1, 1), (1, 0)):
        return SurfaceSpec(genus, boundary, ((0, 1, 2), (~0, ~1, ~2)))
    if (genus, boundary) == (0, 4):
        return SurfaceSpec(0, 4, ((1, ~2, ~0), (0, 4, ~3), (3, ~5, ~1), (2, 5, ~4)))
    T = curver.load(genus, max(boundary, 1)).triangulation
    return SurfaceSpec(genus, boundary, tuple(tuple(e.label for e in t) for t in T))


def load_surface(path):
    with open(path, encoding='utf-8') as handle:
        return SurfaceSpec.from_json(json.load(handle))


# --------------------------------------------------------------------------
# Curve systems

_LAMINATIONS = {}


def _lamination(surface, weights):
    key = (surface.triangles, weights)
    try:
        return _LAMINATIONS[key]
    except KeyError:
        pass
    T = surface.triangulation
    try:
        lam = T.lamination(list(weights))
    except (AssertionError, ValueError, TypeError) as error:
        raise CoordinateError(f'invalid normal coordinates {list(weights)}: {error}') from None
    _LAMINATIONS[key] = lam
    return lam


def _kind(component):
    return ARC if isinstance(component, curver.kernel.Arc) else CURVE


@dataclass(frozen=True)
class CurveSystem:
    """A system of disjoint essential arcs and curves in normal coordinates.

    Instances built through :func:`canonicalize` (or the helpers that call
    it) carry ``canonical=True`` and can be compared with ``==``.
    ``stripped`` lists inessential components removed during
    canonicalization and does not take part in equality.
    """

    surface: SurfaceSpec
    weights: tuple
    labels: tuple = ()
    canonical: bool = False
    stripped: tuple = field(default=(), compare=False, hash=False, repr=False)

    @classmethod
    def from_weights(cls, surface, weights):
        return canonicalize(cls(surface, tuple(int(w) for w in weights)))

    @property
    def lamination(self):
        return _lamination(self.surface, self.weights)

    @property
    def is_empty(self):
        return not any(self.weights)

    @property
    def size(self):
        """Coordinate size: the sum of absolute edge weights."""
        return sum(abs(w) for w in self.weights)

    @property
    def num_components(self):
        return len(self.labels)

    @property
    def is_curve(self):
        return self.labels == (CURVE,)

    @property
    def is_arc(self):
        return self.labels == (ARC,)

    @property
    def is_multicurve(self):
        return all(x == CURVE for x in self.labels)

    @property
    def is_multiarc(self):
        return all(x == ARC for x in self.labels)

    @cached_property
    def components(self):
        """Single-component systems, in canonical order."""
        if not self.canonical:
            return canonicalize(self).components
        if len(self.labels) <= 1:
            return (self,) if self.labels else ()
        return tuple(_components(self.surface, self.lamination))

    def curves(self):
        return union(self.surface, [c for c in self.components if c.is_curve])

    def arcs(self):
        return union(self.surface, [c for c in self.components if c.is_arc])

    def sort_key(self):
        return (self.size, self.weights)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f'CurveSystem({list(self.weights)}, {"+".join(self.labels) or "empty"})'

    def to_json(self):
        return {'surface_id': self.surface.surface_id, 'weights': list(self.weights),
                'labels': list(self.labels)}

    @classmethod
    def from_json(cls, surface, data):
        if data.get('surface_id', surface.surface_id) != surface.surface_id:
            raise SurfaceError('curve file belongs to a different surface')
        return cls.from_weights(surface, data['weights'])


def _single(surface, component):
    return CurveSystem(surface, tuple(component.geometric), (_kind(component),), True)


def _components(surface, lam):
    out = [_single(surface, c) for c in lam.components() if not c.is_peripheral()]
    return sorted(out, key=lambda c: (c.labels, c.size, c.weights))


def canonicalize(system):
    """Canonical representative of the isotopy class of ``system``.

    Peripheral curves (and, on the closed torus, the curve around the marked
    point) are inessential; they are removed and recorded in ``stripped``.
    Parallel copies of a component collapse to one.
    """
    if system.canonical:
        return system
    surface = system.surface
    weights = tuple(int(w) for w in system.weights)
    if len(weights) != surface.num_edges:
        raise CoordinateError(f'expected {surface.num_edges} weights, got {len(weights)}')
    if not any(weights):
        return CurveSystem(surface, weights, (), True)
    lam = _lamination(surface, weights)
    stripped, kept = [], []
    for component in lam.components():
        if component.is_peripheral():
            stripped.append(tuple(component.geometric))
        else:
            kept.append(_single(surface, component))
    if surface.closed and any(c.is_arc for c in kept):
        raise CoordinateError('arcs are not defined on a closed surface')
    kept.sort(key=lambda c: (c.labels, c.size, c.weights))
    result = union(surface, kept)
    return CurveSystem(surface, result.weights, result.labels, True, tuple(sorted(stripped)))


def union(surface, systems):
    """Canonical union of pairwise disjoint canonical systems."""
    comps = {}
    for s in systems:
        for c in s.components:
            comps[c.weights] = c
    ordered = sorted(comps.values(), key=lambda c: (c.labels, c.size, c.weights))
    weights = [0] * surface.num_edges
    for c in ordered:
        for i, w in enumerate(c.weights):
            weights[i] += w
    return CurveSystem(surface, tuple(weights), tuple(c.labels[0] for c in ordered), True)


def empty_system(surface):
    return CurveSystem(surface, (0,) * surface.num_edges, (), True)


def _check_same(a, b):
    if a.surface != b.surface:
        raise SurfaceError('systems live on different surfaces')


_INTERSECTIONS = {}


def intersection_number(a, b):
    """Geometric intersection number i(a, b) of two canonical systems."""
    _check_same(a, b)
    if a.is_empty or b.is_empty:
        return 0
    key = (a.surface.triangles, a.weights, b.weights) if a.weights <= b.weights \
        else (a.surface.triangles, b.weights, a.weights)
    try:
        return _INTERSECTIONS[key]
    except KeyError:
        pass
    x, y = _lamination(a.surface, key[1]), _lamination(a.surface, key[2])
    value = int(x.intersection(y))
    _INTERSECTIONS[key] = value
    return value


def disjoint(a, b):
    return intersection_number(a, b) == 0


def regular_neighborhood_boundary(a):
    """Distinct essential non-peripheral boundary curves of a neighbourhood of a and the boundary."""
    if a.is_empty:
        return a
    boundary = a.lamination.boundary()
    return union(a.surface, _components(a.surface, boundary))


# --------------------------------------------------------------------------
# Mapping classes

DEHN_TWIST = 'dehn_twist'
HALF_TWIST = 'half_twist'


def arc_endpoints(arc):
    """Puncture labels at the ends of a single arc (one label for a loop)."""
    if not arc.is_arc:
        raise ValueError('expected a single arc')
    T = arc.surface.triangulation
    order = sorted_vertices(T)
    return frozenset(order.index(v) for v in arc.lamination.vertices())


@dataclass(frozen=True)
class MappingClassGenerator:
    """A power of a right-handed Dehn twist or half twist about a curve."""

    kind: str
    about: CurveSystem
    power: int = 1

    def __post_init__(self):
        if self.kind not in (DEHN_TWIST, HALF_TWIST):
            raise ValueError(f'unknown generator kind {self.kind!r}')
        if not self.about.is_curve:
            raise ValueError('generators are defined about a single essential curve')
        if self.kind == HALF_TWIST and self.power and not half_twist_applicable(self.about):
            raise ApplicabilityError('curve does not bound a twice-punctured disk')

    def inverse(self):
        return MappingClassGenerator(self.kind, self.about, -self.power)


_ENCODINGS = {}


def _halftwist_frame(curve):
    """Return ``(arc, conjugator)`` where the conjugated ``curve`` bounds a neighbourhood of ``arc``.

    After shortening, a curve cutting off two punctures is the boundary of an
    edge joining them; ``None`` means no such edge exists.
    """
    short, conjugator = curve.lamination.shorten()
    tri = short.triangulation
    for index in range(tri.zeta):
        arc = tri.edge_arc(index)
        if arc.has_distinct_endpoints() and arc.boundary() == short:
            return arc, conjugator
    return None


def half_twist_applicable(curve):
    """A half twist about ``curve`` exists iff it cuts off a disk with exactly two punctures."""
    if not curve.is_curve or curve.surface.closed:
        return False
    return _halftwist_frame(curve) is not None


def _encoding(g):
    key = (g.kind, g.about.surface.triangles, g.about.weights, g.power)
    try:
        return _ENCODINGS[key]
    except KeyError:
        pass
    if g.kind == DEHN_TWIST:
        enc = g.about.lamination.encode_twist(g.power)
    else:
        frame = _halftwist_frame(g.about)
        if frame is None:
            raise ApplicabilityError('curve does not bound a twice-punctured disk')
        arc, conjugator = frame
        enc = conjugator.inverse() * arc.encode_halftwist(g.power) * conjugator
    _ENCODINGS[key] = enc
    return enc


def apply_mapping_class(g, system):
    """Image of a canonical system under a generator (or a sequence of them)."""
    if isinstance(g, (list, tuple)):
        for h in reversed(g):
            system = apply_mapping_class(h, system)
        return system
    _check_same(g.about, system)
    if g.power == 0 or system.is_empty:
        return system
    image = _encoding(g)(system.lamination)
    weights = tuple(int(w) for w in image.geometric)
    _LAMINATIONS.setdefault((system.surface.triangles, weights), image)
    return CurveSystem(system.surface, weights, system.labels, True)


def twist(about, power, system):
    return apply_mapping_class(MappingClassGenerator(DEHN_TWIST, about, power), system)


# --------------------------------------------------------------------------
# Enumeration

_ENUMERATIONS = {}


def _curve_candidate(triangles, w):
    for t in triangles:
        x, y, z = (w[_edge_label(e)] for e in t)
        if (x + y + z) % 2 or x > y + z or y > x + z or z > x + y:
            return False
    return True


def _vectors(n, budget, allow_negative):
    low = -1 if allow_negative else 0

    def rec(prefix, remaining):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for v in range(low, remaining + 1):
            prefix.append(v)
            yield from rec(prefix, remaining - abs(v))
            prefix.pop()

    return rec([], budget)


def enumerate_systems(surface, max_weight, kind='mixed', connected=False):
    """All canonical systems of coordinate size at most ``max_weight``.

    ``kind`` is ``'arcs'``, ``'curves'`` or ``'mixed'``; with ``connected``
    only single arcs or curves are returned. The order is by size, then
    lexicographic in the weights.
    """
    if kind not in ('arcs', 'curves', 'mixed'):
        raise ValueError(f'unknown kind {kind!r}')
    key = (surface.triangles, surface.genus, surface.boundary_components, max_weight, kind, connected)
    if key in _ENUMERATIONS:
        return list(_ENUMERATIONS[key])
    out = []
    if max_weight > 0:
        allow_arcs = kind != 'curves' and not surface.closed
        for w in _vectors(surface.num_edges, max_weight, allow_arcs):
            if not any(w):
                continue
            if kind == 'curves' and not _curve_candidate(surface.triangles, w):
                continue
            try:
                s = canonicalize(CurveSystem(surface, w))
            except CoordinateError:
                continue
            if s.weights != w or s.stripped:
                continue
            if kind == 'curves' and not s.is_multicurve:
                continue
            if kind == 'arcs' and not s.is_multiarc:
                continue
            if connected and s.num_components != 1:
                continue
            out.append(s)
    out.sort(key=CurveSystem.sort_key)
    _ENUMERATIONS[key] = tuple(out)
    return out


def enumerate_curves(surface, max_weight):
    return enumerate_systems(surface, max_weight, 'curves', connected=True)


def fill(a, b):
    """Smallest essential subsurface containing a and b."""
    from .projection import fill as _fill
    return _fill(a, b)


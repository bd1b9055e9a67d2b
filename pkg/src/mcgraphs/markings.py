"""Markings: base multicurves with annular transversals.

A transversal at a base curve ``a`` is a diameter-one set in the annular
curve graph of ``a``. It is stored as an integer interval of twisting
coordinates and, when it comes from a curve ``b`` (for clean markings, a
clean transverse curve), together with ``b``; the curve is authoritative.

Clean transverse curves of ``a`` relative to a base multicurve live in the
complexity-one piece ``F`` of ``base - a`` that contains ``a``. They form a
single orbit under powers of the twist about ``a`` (one-holed torus) or the
half twist about ``a`` (four-holed sphere), indexed here by an integer.
"""

from dataclasses import dataclass
from fractions import Fraction
import itertools
import math

from .cutting import get_cut
from .projection import (
    AnnularSet, ProjectionSet, Subsurface, annulus, complementary_pieces,
    annular_distance, piece_meets, project_piece, relative_twist, twisting_coordinate,
    _annular_union_diameter,
)
from .surface import (
    CurveSystem, SurfaceError, ApplicabilityError, empty_system,
    enumerate_curves, intersection_number, twist, union,
)


class MarkingError(ValueError):
    """Malformed marking or a move that is undefined on it."""


@dataclass(frozen=True)
class Transversal:
    """Annular data at a base curve: an interval, optionally with its source curve."""

    lo: int
    hi: int
    curve: CurveSystem = None

    @classmethod
    def of_curve(cls, core, curve):
        """Transversal given by a system crossing ``core`` (usually a single curve)."""
        crossing = [c for c in curve.components if intersection_number(core, c) > 0]
        if not crossing:
            raise MarkingError('transversal system must cross its base curve')
        coords = [twisting_coordinate(core, c) for c in crossing]
        return cls(min(math.floor(c) for c in coords), max(math.ceil(c) for c in coords), curve)

    def annular(self, core):
        if self.curve is None:
            return AnnularSet(core, self.lo, self.hi)
        sources = frozenset(c for c in self.curve.components if intersection_number(core, c) > 0)
        return AnnularSet(core, self.lo, self.hi, sources)

    def key(self):
        return (self.lo, self.hi, self.curve.weights if self.curve is not None else ())

    def to_json(self):
        if self.curve is not None:
            return {'curve': list(self.curve.weights), 'interval': [self.lo, self.hi]}
        return {'interval': [self.lo, self.hi]}


@dataclass(frozen=True)
class Marking:
    """A marking: pairwise disjoint base curves, each with an optional transversal."""

    surface: object
    components: tuple      # ((base curve, Transversal or None), ...)

    def __post_init__(self):
        comps = tuple(sorted(self.components, key=lambda c: c[0].sort_key()))
        object.__setattr__(self, 'components', comps)
        bases = [a for a, _ in comps]
        if len({a.weights for a in bases}) != len(bases):
            raise MarkingError('base curves must be distinct')
        for a in bases:
            if not a.is_curve:
                raise MarkingError('base components must be single curves')
        for a, b in itertools.combinations(bases, 2):
            if intersection_number(a, b):
                raise MarkingError('base curves must be disjoint')

    @classmethod
    def from_base(cls, base, transversals=None):
        """Marking on the components of a multicurve; ``transversals`` maps a curve to a curve or Transversal."""
        transversals = transversals or {}
        comps = []
        for a in base.components:
            t = transversals.get(a)
            if isinstance(t, CurveSystem):
                t = Transversal.of_curve(a, t)
            comps.append((a, t))
        return cls(base.surface, tuple(comps))

    @property
    def base(self):
        return union(self.surface, [a for a, _ in self.components])

    @property
    def bases(self):
        return tuple(a for a, _ in self.components)

    @property
    def size(self):
        """|μ|: number of base curves plus number of non-empty transversals."""
        return len(self.components) + sum(1 for _, t in self.components if t is not None)

    def transversal(self, a):
        for base, t in self.components:
            if base == a:
                return t
        raise MarkingError('curve is not a base component')

    def replace(self, a, t):
        return Marking(self.surface, tuple((b, t if b == a else s) for b, s in self.components))

    def add(self, a, t=None):
        return Marking(self.surface, self.components + ((a, t),))

    def remove(self, a):
        return Marking(self.surface, tuple(c for c in self.components if c[0] != a))

    def key(self):
        return tuple((a.weights, t.key() if t is not None else None) for a, t in self.components)

    def sort_key(self):
        return (self.size, self.key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        parts = []
        for a, t in self.components:
            if t is None:
                parts.append(f'{list(a.weights)}')
            else:
                parts.append(f'{list(a.weights)}:[{t.lo},{t.hi}]')
        return 'Marking(' + ', '.join(parts) + ')'

    def to_json(self):
        return {'components': [{'base': list(a.weights), 'transversal': t.to_json() if t else None}
                               for a, t in self.components]}

    @classmethod
    def from_json(cls, surface, data):
        comps = []
        for entry in data['components']:
            a = CurveSystem.from_weights(surface, entry['base'])
            t = entry.get('transversal')
            if t is None:
                comps.append((a, None))
            elif 'curve' in t:
                comps.append((a, Transversal.of_curve(a, CurveSystem.from_weights(surface, t['curve']))))
            else:
                lo, hi = t['interval']
                comps.append((a, Transversal(lo, hi)))
        return cls(surface, tuple(comps))


# --------------------------------------------------------------------------
# Clean transverse curves


class CleanFamily:
    """Clean transverse curves of ``a`` relative to a base multicurve, indexed by integers.

    Member ``n`` is ``f^n(b0)`` with ``f`` the twist (one-holed torus piece)
    or the half twist (four-holed sphere piece) about ``a``; its twisting
    coordinate is ``coord0 + n * step``.
    """

    def __init__(self, base, a):
        self.a = a
        rest = union(a.surface, [c for c in base.components if c != a])
        self.cut = get_cut(rest)
        found = self.cut.clean_transverse(a)
        if found is None and a.surface.closed and rest.is_empty:
            found = _torus_transverse(self.cut, a)
        if found is None:
            raise MarkingError('base curve does not sit in a complexity-one piece')
        self.b0, self.atom, self.k = found
        self.step = Fraction(1) if self.k == 1 else Fraction(1, 2)
        self.coord0 = twisting_coordinate(a, self.b0)
        self._members = {0: self.b0}
        self._coord1 = None

    @property
    def half(self):
        return self.k == 2

    def member(self, n):
        if n not in self._members:
            if self.k == 1:
                self._members[n] = twist(self.a, n, self.b0)
            elif n % 2 == 0:
                self._members[n] = twist(self.a, n // 2, self.b0)
            else:
                h = self.cut.half_twist(self.a, n)
                self._members[n] = self.cut.lift_system(h(self.cut.crush(self.b0.lamination)))
        return self._members[n]

    def coordinate(self, n):
        """Twisting coordinate of member ``n`` (exact, from two computed values)."""
        if self.k == 1:
            return self.coord0 + n
        if n % 2 == 0:
            return self.coord0 + n // 2
        if self._coord1 is None:
            self._coord1 = twisting_coordinate(self.a, self.member(1))
        return self._coord1 + n // 2

    def offsets(self, x):
        """Function n -> relative twisting from ``x`` to member ``n``."""
        r0 = relative_twist(self.a, x, self.b0)
        if self.k == 1:
            return lambda n: r0 + n
        r1 = relative_twist(self.a, x, self.member(1))
        return lambda n: (r0 if n % 2 == 0 else r1) + n // 2

    def index_of(self, b):
        """Index of a clean transverse curve, or ``None`` when ``b`` is not one."""
        if intersection_number(self.a, b) != self.k:
            return None
        c = twisting_coordinate(self.a, b)
        if self.k == 1:
            candidates = [c - self.coord0]
        else:
            candidates = [2 * (c - self.coord0), 2 * (c - self.coordinate(1)) + 1]
        for n in candidates:
            if n.denominator == 1 and self.member(int(n)) == b:
                return int(n)
        return None

    def nearest(self, target):
        """Index whose coordinate is closest to a rational target coordinate."""
        return round((Fraction(target) - self.coord0) / self.step)


def _torus_transverse(cut, a):
    for y in cut.atom_curves(0):
        if intersection_number(a, y) == 1:
            return y, 0, 1
    return None


_FAMILIES = {}


def clean_family(base, a):
    key = (base.weights, a.weights)
    if key not in _FAMILIES:
        _FAMILIES[key] = CleanFamily(base, a)
    return _FAMILIES[key]


def _in_farey_piece(base, a):
    rest = union(a.surface, [c for c in base.components if c != a])
    cut = get_cut(rest)
    atoms = cut.locate(a)
    if len(atoms) != 1:
        return False
    atom = cut.atoms[next(iter(atoms))]
    if a.surface.closed and rest.is_empty:
        return True
    return atom.xi == 1


# --------------------------------------------------------------------------
# Predicates


def is_locally_complete(mu):
    """Every non-empty transversal sits at a curve whose piece of base - a has ξ = 1."""
    base = mu.base
    return all(t is None or _in_farey_piece(base, a) for a, t in mu.components)


def clean_index(mu, a):
    """Family index of the transversal at ``a`` when it is clean, else ``None``."""
    t = mu.transversal(a)
    if t is None:
        return None
    family = clean_family(mu.base, a)
    if t.curve is not None:
        return family.index_of(t.curve)
    n = family.nearest(Fraction(t.lo + t.hi, 2))
    for m in (n - 1, n, n + 1):
        b = family.member(m)
        if _interval(a, b) == (t.lo, t.hi):
            return m
    return None


def _interval(a, b):
    c = twisting_coordinate(a, b)
    return (math.floor(c), math.ceil(c))


def is_clean(mu):
    """Locally complete, and every transversal is π_a(b) for a clean transverse curve b."""
    if not is_locally_complete(mu):
        return False
    return all(t is None or clean_index(mu, a) is not None for a, t in mu.components)


# --------------------------------------------------------------------------
# Compatibility


def _transversal_distance(core, t, b):
    """d_a between a transversal and the projection of a curve."""
    if t.curve is not None:
        return annular_distance(core, t.curve, b)
    lo, hi = _interval(core, b)
    return max(hi, t.hi) - min(lo, t.lo)


def _twist_offset(core, t, b):
    """Exact rational twisting between a transversal and a curve (tie-breaker)."""
    if t.curve is not None:
        return abs(relative_twist(core, t.curve, b))
    return abs(twisting_coordinate(core, b) - Fraction(t.lo + t.hi, 2))


def compatible_choices(mu, a):
    """Clean transverse curves at ``a`` closest to the current transversal.

    Closeness is the integer annular distance, refined by the exact rational
    twisting offset; candidates tied on both are all kept.
    """
    t = mu.transversal(a)
    family = clean_family(mu.base, a)
    if t.curve is not None:
        offset = family.offsets(t.curve)
        own = family.index_of(t.curve) if t.curve.is_curve else None
    else:
        centre = Fraction(t.lo + t.hi, 2)
        offset = lambda n: family.coordinate(n) - centre
        own = None
    if own is not None:
        return [(own, family.member(own))]
    n0 = family.nearest(family.coord0 - offset(0))
    span = 4 if family.half else 2
    scored = []
    for n in range(n0 - span, n0 + span + 1):
        r = offset(n)
        if t.curve is not None:
            d = max(1, math.ceil(abs(r)))
        else:
            lo, hi = math.floor(family.coordinate(n)), math.ceil(family.coordinate(n))
            d = max(hi, t.hi) - min(lo, t.lo)
        scored.append(((d, abs(r)), n))
    best = min(d for d, _ in scored)
    return [(n, family.member(n)) for d, n in scored if d == best]


def compatible_clean_markings(mu):
    """All clean markings with the same base and transversal pattern, each transversal distance-minimal."""
    if not is_locally_complete(mu):
        raise MarkingError('marking is not locally complete')
    slots = []
    for a, t in mu.components:
        if t is None:
            slots.append([(a, None)])
        else:
            slots.append([(a, Transversal.of_curve(a, b)) for _, b in compatible_choices(mu, a)])
    out = {Marking(mu.surface, combo) for combo in itertools.product(*slots)}
    return sorted(out, key=Marking.sort_key)


# --------------------------------------------------------------------------
# Intersection number


def _annular_projection(core, system):
    crossing = [c for c in system.components if intersection_number(c, core) > 0]
    return AnnularSet.from_sources(core, crossing) if crossing else None


def marking_intersection(mu, nu):
    """i(μ, ν): base intersection plus annular diameters at every base curve."""
    if mu.surface != nu.surface:
        raise SurfaceError('markings live on different surfaces')
    total = intersection_number(mu.base, nu.base)
    for a, t in mu.components:
        total += _annular_union_diameter([_annular_projection(a, nu.base), t.annular(a) if t else None])
    for b, s in nu.components:
        total += _annular_union_diameter([_annular_projection(b, mu.base), s.annular(b) if s else None])
    for a, t in mu.components:
        for b, s in nu.components:
            if a == b:
                total += _annular_union_diameter([t.annular(a) if t else None, s.annular(b) if s else None])
    return total


# --------------------------------------------------------------------------
# Elementary moves


def elementary_twist(mu, a, power=1, half=False):
    """Replace the transversal at ``a`` by its image under a (half) twist about ``a``."""
    t = mu.transversal(a)
    if t is None:
        raise MarkingError('twist move needs a non-empty transversal')
    if power not in (1, -1):
        raise MarkingError('elementary twists have power ±1')
    family = clean_family(mu.base, a)
    n = clean_index(mu, a)
    if n is None:
        raise MarkingError('twist move needs a clean transversal')
    if half:
        if not family.half:
            raise ApplicabilityError('half twist needs a four-holed-sphere piece')
        m = n + power
    else:
        m = n + power * (2 if family.half else 1)
    return mu.replace(a, Transversal.of_curve(a, family.member(m)))


def elementary_flip(mu, a):
    """Swap ``a`` with its clean transverse curve, then resolve to compatible clean markings."""
    t = mu.transversal(a)
    if t is None:
        raise MarkingError('flip move needs a non-empty transversal')
    n = clean_index(mu, a)
    if n is None:
        raise MarkingError('flip move needs a clean transversal')
    b = clean_family(mu.base, a).member(n)
    comps = []
    for c, s in mu.components:
        if c == a:
            comps.append((b, Transversal.of_curve(b, a)))
        else:
            comps.append((c, s))
    flipped = Marking(mu.surface, tuple(comps))
    return compatible_clean_markings(flipped)


# --------------------------------------------------------------------------
# Complements and witnesses


def complement(mu):
    """The largest subsurface disjoint from μ in the sense of witnesses.

    Non-pants complementary pieces of the base, plus the annuli of base
    curves with empty transversal.
    """
    surface = mu.surface
    pieces = []
    base = mu.base
    if base.is_empty:
        from .projection import whole_surface
        return whole_surface(surface)
    for p in complementary_pieces(base):
        if p.xi >= 1 or p.is_farey:
            pieces.append(p)
    for a, t in mu.components:
        if t is None:
            pieces.append(annulus(a).pieces[0])
    return Subsurface(surface, tuple(pieces))


def meets(mu, W):
    """Whether W meets μ: W meets the base, or has an annular piece whose core carries a transversal."""
    base = mu.base
    for piece in W.pieces:
        if piece.is_annulus:
            t = None
            for a, s in mu.components:
                if a == piece.core:
                    t = s
            if t is not None:
                return True
        if piece_meets(base, piece):
            return True
    return False


def meets_only_by_transversal(mu, W):
    """W meets μ through condition (ii) alone (flagged for disconnected witnesses)."""
    base = mu.base
    if any(piece_meets(base, p) for p in W.pieces):
        return False
    return meets(mu, W)


def project_marking(mu, W):
    """π_W(μ): annuli at base curves use the transversal, everything else projects the base."""
    base = mu.base
    parts = []
    for piece in W.pieces:
        value = None
        if piece.is_annulus and piece.core in mu.bases:
            t = mu.transversal(piece.core)
            value = t.annular(piece.core) if t is not None else None
        else:
            value = project_piece(base, piece)
        if value is not None:
            parts.append((piece, value))
    return ProjectionSet(W, tuple(parts))


# --------------------------------------------------------------------------
# Completion


def _new_curve(mu):
    """A curve disjoint from the base inside some non-pants complementary piece, or ``None``."""
    base = mu.base
    cut = get_cut(base)
    bases = {a.weights for a in mu.bases}
    for atom in cut.atoms:
        xi = atom.xi if not (mu.surface.closed and base.is_empty) else 1
        if xi < 1:
            continue
        for c in cut.atom_curves(atom.index):
            if c.weights not in bases:
                return c
    return None


def completion_path(mu):
    """Stages from μ to a complete clean marking: add base curves, then transversals."""
    stages = [mu]
    current = mu
    while True:
        c = _new_curve(current)
        if c is None:
            break
        current = current.add(c)
        stages.append(current)
    for a, t in current.components:
        if t is None:
            b = clean_family(current.base, a).member(0)
            current = current.replace(a, Transversal.of_curve(a, b))
            stages.append(current)
    return stages


def complete_marking(mu):
    """A complete clean marking reachable from μ, with the number of moves used."""
    stages = completion_path(mu)
    return stages[-1], len(stages) - 1


def is_complete(mu):
    return _new_curve(mu) is None and all(t is not None for _, t in mu.components)


# --------------------------------------------------------------------------
# Enumeration


def enumerate_multicurves(surface, max_weight):
    """Multicurves built from curves of size ≤ ``max_weight`` (empty one included)."""
    from .projection import _multicurves
    curves = enumerate_curves(surface, max_weight)
    out = [empty_system(surface)]
    out.extend(_multicurves(curves, max_weight * surface.xi, surface.xi) if curves else [])
    return sorted(set(out), key=lambda m: m.sort_key())


def enumerate_clean_markings(surface, max_weight, indices=(0,)):
    """Clean markings on enumerated bases; each eligible curve gets no transversal or member n."""
    out = []
    for base in enumerate_multicurves(surface, max_weight):
        slots = []
        for a in base.components:
            options = [None]
            if _in_farey_piece(base, a):
                family = clean_family(base, a)
                options += [Transversal.of_curve(a, family.member(n)) for n in indices]
            slots.append([(a, t) for t in options])
        for combo in itertools.product(*slots):
            out.append(Marking(surface, combo))
    return out


def enumerate_locally_complete(surface, max_weight, transversal_weight, per_slot=6):
    """Locally complete markings whose transversals come from arbitrary crossing curves."""
    crossing = enumerate_curves(surface, transversal_weight)
    out = []
    for base in enumerate_multicurves(surface, max_weight):
        slots = []
        for a in base.components:
            options = [None]
            if _in_farey_piece(base, a):
                cands = [c for c in crossing if intersection_number(a, c) > 0]
                options += [Transversal.of_curve(a, c) for c in cands[:per_slot]]
            slots.append([(a, t) for t in options])
        for combo in itertools.product(*slots):
            if any(t is not None for _, t in combo):
                out.append(Marking(surface, combo))
    return out

# --------------------------------------------------------------------------
# Restriction to a subsurface


@dataclass(frozen=True)
class Restriction:
    """ω|_K: the components of ω lying in K, and the arcs of the rest inside K."""

    subsurface: Subsurface
    marking: Marking          # σ
    arcs: tuple               # α: laminations on the crushed triangulation of ∂K

    @property
    def is_empty(self):
        return not self.marking.components and not self.arcs


def _contained(system, K):
    """Whether a curve system lies in K (disjoint from ∂K and not outside)."""
    if any(intersection_number(system, c) for c in K.boundary.components):
        return False
    if K.boundary.is_empty:
        return True
    cut = get_cut(K.boundary)
    from .projection import _region_of
    atoms = set()
    for p in K.pieces:
        if not p.is_annulus:
            atoms |= _region_of(cut, p).atoms
    return bool(system.components) and cut.locate(system) <= atoms and \
        all(c.weights not in cut.curve_index for c in system.components)


def restrict(omega, K):
    """Split ω into σ (components inside K) and α (the rest, cut down to arcs in K)."""
    surface = omega.surface
    sigma, rest = [], []
    for a, t in omega.components:
        if _contained(a, K) and (t is None or t.curve is None or _contained(t.curve, K)):
            sigma.append((a, t))
        else:
            rest.append(a)
            if t is not None and t.curve is not None:
                rest.append(t.curve)
    arcs = []
    if rest:
        cut = get_cut(K.boundary)
        from .projection import _region_of
        atoms = set()
        for p in K.pieces:
            if not p.is_annulus:
                atoms |= _region_of(cut, p).atoms
        for c in rest:
            lam = cut.crush(c.lamination)
            for comp in lam.components():
                if cut.support(comp) <= atoms and comp.__class__.__name__ in ('Arc', 'MultiArc'):
                    arcs.append(comp)
    arcs = tuple(sorted(arcs, key=lambda x: tuple(x.geometric)))
    return Restriction(K, Marking(surface, tuple(sigma)), arcs)


def _arc_marking_intersection(cut, sigma, arcs):
    """i(σ, α) = i(base σ, α) + Σ diam(π_a(α) ∪ t_a), computed on the crushed surface."""
    if not arcs or not sigma.components:
        return 0
    total = 0
    for a, t in sigma.components:
        ca = cut.crush(a.lamination)
        for x in arcs:
            total += ca.intersection(x)
        crossing = [x for x in arcs if ca.intersection(x) > 0]
        if t is not None and t.curve is not None and crossing:
            tc = cut.crush(t.curve.lamination)
            best = 0
            for x in crossing:
                best = max(best, _lam_twist_distance(ca, tc, x))
            for x, y in itertools.combinations(crossing, 2):
                best = max(best, _lam_twist_distance(ca, x, y))
            total += best
        elif crossing:
            total += 1 if len(crossing) > 1 else 0
    return total


def _lam_twist_distance(core, x, y):
    """Annular distance on a crushed triangulation, via the same minimiser as the surface version."""
    if x == y:
        return 0
    values = {}

    def value(t):
        if t not in values:
            values[t] = core.encode_twist(t)(x).intersection(y)
        return values[t]

    start = round(core.relative_twisting(x, y))
    lo = hi = start
    while value(lo - 1) <= value(lo):
        lo -= 1
    while value(hi + 1) <= value(hi):
        hi += 1
    best = min(value(s) for s in range(lo, hi + 1))
    ts = [s for s in range(lo, hi + 1) if value(s) == best]
    centre = Fraction(ts[0] + ts[-1], 2)
    return max(1, math.ceil(abs(centre)))


def restricted_intersection(r1, r2, K=None):
    """i_K(ω|_K, ω'|_K) = i(σ,σ') + i(α,σ') + i(σ,α') + i(α,α')."""
    K = K or r1.subsurface
    cut = get_cut(K.boundary)
    total = 0
    if r1.marking.components and r2.marking.components:
        total += marking_intersection(r1.marking, r2.marking)
    total += _arc_marking_intersection(cut, r2.marking, r1.arcs)
    total += _arc_marking_intersection(cut, r1.marking, r2.arcs)
    for x in r1.arcs:
        for y in r2.arcs:
            total += x.intersection(y)
    return total

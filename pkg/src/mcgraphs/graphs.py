"""Witness sets, graph specifications and finite balls.

Graph kinds:

* ``multiarc_curve``: arc-and-curve systems, adjacent when they intersect at
  most ``bound`` times (vertices drawn from an enumerated universe);
* ``prescribed_arc``: the same, restricted to multiarcs whose arcs join
  boundary components related by ``gamma``;
* ``L_X``: clean markings meeting every member of a witness set ``X``,
  with add/remove moves and elementary twists and flips;
* ``K_X``: multicurves meeting every non-annular member of ``X``, with
  add/remove moves and twist-free flips;
* ``M_A``: the marking graph attached to an arc-and-curve graph through
  the sets μ_α.

All infinite neighbourhoods are truncated by explicit caps; a ball that hit
a cap is flagged ``truncated``.
"""

from collections import deque
from dataclasses import dataclass, field
import itertools
import json
import os

from .cutting import get_cut
from .markings import (
    Marking, MarkingError, Transversal, clean_family, compatible_clean_markings,
    complement, elementary_flip, elementary_twist, is_clean,
    is_locally_complete, marking_intersection, meets,
)
from .projection import (
    Subsurface, _region_of, annulus, complementary_pieces,
    enumerate_subsurfaces, is_nested, project_system, topological_type,
    whole_surface,
)
from .surface import (
    CurveSystem, arc_endpoints, enumerate_curves, enumerate_systems,
    intersection_number, regular_neighborhood_boundary, union,
)

YES = 'yes_certified'
NO = 'no_with_certificate'
UNKNOWN = 'unknown'


class WitnessSetError(ValueError):
    """Invalid generator for a witness set."""


class BasepointError(ValueError):
    """Basepoint does not satisfy the vertex predicate."""


class InclusionError(ValueError):
    """A vertex of one graph is not a vertex of the graph it should include into."""


# --------------------------------------------------------------------------
# Witness sets


class WitnessSet:
    """A set of subsurfaces closed under enlargement and under pure mapping classes.

    Pure mapping class orbits are recognised through :func:`topological_type`.
    Membership of an arbitrary subsurface is decided by its type; the type
    list is complete for the enumerated universe at ``bound``.
    """

    def __init__(self, surface, generators, bound, closure, types, everything=False):
        self.surface = surface
        self.generators = list(generators)
        self.bound = bound
        self.closure = list(closure)
        self.types = frozenset(types)
        self.everything = everything

    @classmethod
    def all_subsurfaces(cls, surface, bound):
        """Every essential non-pants subsurface (the witness set of the marking graph)."""
        universe = enumerate_subsurfaces(surface, bound)
        types = {topological_type(W) for W in universe}
        return cls(surface, [whole_surface(surface)], bound, universe, types, everything=True)

    def contains(self, W):
        if W.is_empty:
            return False
        if self.everything:
            return not W.has_pants
        return topological_type(W) in self.types

    __contains__ = contains

    @property
    def connected_part(self):
        """X̂: connected members."""
        return [W for W in self.closure if W.is_connected]

    @property
    def twist_free_part(self):
        """X̃: members without annular components."""
        return [W for W in self.closure if not any(p.is_annulus for p in W.pieces)]

    def connected(self):
        """The witness set generated by X̂."""
        gens = self.connected_part
        if self.everything:
            universe = [W for W in self.closure if W.is_connected]
            return WitnessSet(self.surface, gens, self.bound, universe,
                              {topological_type(W) for W in universe})
        return close_witness_set(gens, self.surface, self.bound) if gens else \
            WitnessSet(self.surface, [], self.bound, [], set())

    def contains_twist_free(self, W):
        return not any(p.is_annulus for p in W.pieces) and self.contains(W)

    def to_json(self):
        return {
            'generators': [W.to_json() for W in self.generators],
            'bound': self.bound,
            'closure': [W.to_json() for W in self.closure],
        }


_CLOSURES = {}


def close_witness_set(generators, surface, bound):
    """Closure of the generators under enlargement and type orbits, within the bounded universe."""
    for G in generators:
        if G.is_empty or G.has_pants:
            raise WitnessSetError('witness generators must be essential and non-pants')
    key = (surface, bound, tuple(sorted(G.sort_key() for G in generators)))
    if key in _CLOSURES:
        return _CLOSURES[key]
    universe = enumerate_subsurfaces(surface, bound)
    gen_types = {topological_type(G) for G in generators}
    orbit = [W for W in universe if topological_type(W) in gen_types]
    members = set(orbit) | set(generators)
    for W in universe:
        if W in members:
            continue
        if any(is_nested(G, W) for G in orbit):
            members.add(W)
    closure = sorted(members, key=Subsurface.sort_key)
    types = {topological_type(W) for W in closure}
    result = WitnessSet(surface, generators, bound, closure, types)
    _CLOSURES[key] = result
    return result


# --------------------------------------------------------------------------
# Graph specifications


@dataclass(frozen=True)
class GraphSpec:
    """Which graph, plus the caps used to truncate infinite neighbourhoods.

    ``universe_weight`` bounds the coordinate size of curves and systems
    offered as new vertices; ``move_cap`` bounds twist powers when choosing
    new transversals or flip targets.
    """

    kind: str
    surface: object
    bound: int = 0
    witnesses: object = None
    inner: object = None
    gamma: tuple = ()
    universe_weight: int = 4
    move_cap: int = 2
    ordering_cap: int = 24

    def describe(self):
        out = {'kind': self.kind, 'surface': self.surface.surface_id,
               'universe_weight': self.universe_weight, 'move_cap': self.move_cap}
        if self.kind in ('multiarc_curve', 'prescribed_arc', 'partial_marking'):
            out['bound'] = self.bound
        if self.gamma:
            out['gamma'] = [list(p) for p in self.gamma]
        if self.witnesses is not None:
            out['witness_bound'] = self.witnesses.bound
            out['witness_count'] = len(self.witnesses.closure)
            out['witness_everything'] = self.witnesses.everything
        if self.inner is not None:
            out['inner'] = self.inner.describe()
            out['ordering_cap'] = self.ordering_cap
        return out

    @property
    def uses_markings(self):
        return self.kind in ('L_X', 'K_X', 'M_A', 'partial_marking')


def multiarc_curve(surface, bound, universe_weight=4):
    return GraphSpec('multiarc_curve', surface, bound=bound, universe_weight=universe_weight)


def prescribed_arc(surface, gamma, bound, universe_weight=4):
    gamma = tuple(sorted(tuple(sorted(p)) for p in gamma))
    return GraphSpec('prescribed_arc', surface, bound=bound, gamma=gamma, universe_weight=universe_weight)


def l_x(witnesses, universe_weight=4, move_cap=2):
    return GraphSpec('L_X', witnesses.surface, witnesses=witnesses,
                     universe_weight=universe_weight, move_cap=move_cap)


def k_x(witnesses, universe_weight=4, move_cap=2):
    return GraphSpec('K_X', witnesses.surface, witnesses=witnesses,
                     universe_weight=universe_weight, move_cap=move_cap)


def m_a(inner, ordering_cap=24):
    return GraphSpec('M_A', inner.surface, inner=inner, ordering_cap=ordering_cap,
                     universe_weight=inner.universe_weight)


def partial_marking(witnesses, bound, universe_weight=4, move_cap=2):
    """Clean markings (vertices of L_X) joined when their intersection is at most ``bound``."""
    return GraphSpec('partial_marking', witnesses.surface, bound=bound, witnesses=witnesses,
                     universe_weight=universe_weight, move_cap=move_cap)


# --------------------------------------------------------------------------
# Vertex predicates


def _gamma_ok(spec, system):
    if not system.components or not system.is_multiarc:
        return False
    for arc in system.components:
        ends = tuple(sorted(arc_endpoints(arc)))
        if len(ends) == 1:
            ends = (ends[0], ends[0])
        if ends not in spec.gamma:
            return False
    return True


def is_vertex(spec, v):
    kind = spec.kind
    if kind == 'multiarc_curve':
        return isinstance(v, CurveSystem) and not v.is_empty
    if kind == 'prescribed_arc':
        return isinstance(v, CurveSystem) and _gamma_ok(spec, v)
    if kind in ('L_X', 'partial_marking'):
        return isinstance(v, Marking) and is_clean(v) and not spec.witnesses.contains(complement(v))
    if kind == 'K_X':
        if not isinstance(v, Marking) or any(t is not None for _, t in v.components):
            return False
        return not spec.witnesses.contains_twist_free(_region_complement(v))
    if kind == 'M_A':
        return isinstance(v, Marking) and is_clean(v)
    raise ValueError(f'unknown graph kind {kind!r}')


def _region_complement(mu):
    pieces = [p for p in complementary_pieces(mu.base) if p.xi >= 1 or p.is_farey] \
        if not mu.base.is_empty else list(whole_surface(mu.surface).pieces)
    return Subsurface(mu.surface, tuple(pieces))


# --------------------------------------------------------------------------
# Moves


ADD_REMOVE = 'add_remove'
ELEMENTARY = 'elementary'


@dataclass
class Moves:
    """Neighbours of one vertex, each tagged with its move kind."""

    neighbours: list = field(default_factory=list)   # [(vertex, kind)]
    truncated: bool = False


def _candidate_curves(mu, spec):
    """Curves disjoint from the base that could be added (within the universe weight)."""
    bases = {a.weights for a in mu.bases}
    out = []
    for c in enumerate_curves(mu.surface, spec.universe_weight):
        if c.weights in bases:
            continue
        if all(intersection_number(c, a) == 0 for a in mu.bases):
            out.append(c)
    return out


def _marking_moves(spec, mu):
    moves = Moves(truncated=True)
    out = {}
    twist_free = spec.kind == 'K_X'

    def offer(nu, kind):
        if nu != mu and is_vertex(spec, nu):
            key = encode(nu)
            if key not in out or (out[key][1] == ELEMENTARY and kind == ADD_REMOVE):
                out[key] = (nu, kind)

    for a, t in mu.components:
        offer_remove = mu.remove(a)
        if is_clean(offer_remove):
            offer(offer_remove, ADD_REMOVE)
    for c in _candidate_curves(mu, spec):
        nu = mu.add(c)
        if is_clean(nu):
            offer(nu, ADD_REMOVE)
    base = mu.base
    for a, t in mu.components:
        try:
            family = clean_family(base, a)
        except MarkingError:
            continue
        if twist_free:
            for n in range(-spec.move_cap, spec.move_cap + 1):
                b = family.member(n)
                flipped = Marking(mu.surface, tuple((b if c == a else c, None) for c, _ in mu.components))
                offer(flipped, ELEMENTARY)
            continue
        if t is None:
            for n in range(-spec.move_cap, spec.move_cap + 1):
                offer(mu.replace(a, Transversal.of_curve(a, family.member(n))), ADD_REMOVE)
        else:
            offer(mu.replace(a, None), ADD_REMOVE)
            for power in (1, -1):
                offer(elementary_twist(mu, a, power), ELEMENTARY)
                if family.half:
                    offer(elementary_twist(mu, a, power, half=True), ELEMENTARY)
            for nu in elementary_flip(mu, a):
                offer(nu, ELEMENTARY)
    moves.neighbours = [out[k] for k in sorted(out)]
    return moves


_UNIVERSES = {}


def system_universe(spec):
    """Enumerated vertex universe of an arc-and-curve graph spec."""
    key = (spec.kind, spec.surface, spec.universe_weight, spec.gamma)
    if key not in _UNIVERSES:
        systems = enumerate_systems(spec.surface, spec.universe_weight, kind='mixed')
        _UNIVERSES[key] = [s for s in systems if is_vertex(spec, s)]
    return _UNIVERSES[key]


def _system_moves(spec, alpha):
    moves = Moves(truncated=True)
    out = []
    for beta in system_universe(spec):
        if beta != alpha and intersection_number(alpha, beta) <= spec.bound:
            out.append((beta, ADD_REMOVE))
    moves.neighbours = out
    return moves


def neighbours(spec, v):
    if spec.kind in ('multiarc_curve', 'prescribed_arc'):
        return _system_moves(spec, v)
    if spec.kind in ('L_X', 'K_X'):
        return _marking_moves(spec, v)
    if spec.kind == 'partial_marking':
        inner = GraphSpec('L_X', spec.surface, witnesses=spec.witnesses,
                          universe_weight=spec.universe_weight, move_cap=spec.move_cap)
        moves = _marking_moves(inner, v)
        moves.neighbours = [(nu, k) for nu, k in moves.neighbours
                            if marking_intersection(v, nu) <= spec.bound]
        return moves
    if spec.kind == 'M_A':
        return _ma_moves(spec, v)
    raise ValueError(f'unknown graph kind {spec.kind!r}')


# --------------------------------------------------------------------------
# Encodings


def encode(v):
    """Canonical string for a vertex."""
    if isinstance(v, Marking):
        return json.dumps(v.to_json(), sort_keys=True, separators=(',', ':'))
    return json.dumps(list(v.weights), separators=(',', ':'))


def vertex_json(v):
    return v.to_json() if isinstance(v, Marking) else list(v.weights)


# --------------------------------------------------------------------------
# Balls


@dataclass
class BuiltGraph:
    """A finite ball: vertices in BFS order, edges with move kinds, and a truncation flag."""

    spec: GraphSpec
    basepoint: object
    radius: int
    vertices: list
    distance: list
    edges: list          # [(i, j, kind)] with i < j
    truncated: bool

    @property
    def size(self):
        return len(self.vertices)

    def index(self):
        return {encode(v): i for i, v in enumerate(self.vertices)}

    def adjacency(self):
        adj = [[] for _ in self.vertices]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def distances_from(self, source):
        """Graph distances inside the ball from one vertex index."""
        adj = self.adjacency()
        dist = [-1] * len(self.vertices)
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def to_json(self):
        return {
            'spec': self.spec.describe(),
            'basepoint': vertex_json(self.basepoint),
            'radius': self.radius,
            'vertices': [vertex_json(v) for v in self.vertices],
            'distances': self.distance,
            'edges': [[i, j] for i, j, _ in self.edges],
            'edge_kinds': [k for _, _, k in self.edges],
            'truncated': self.truncated,
        }


def worker_count():
    """Workers from ``MCG_THREADS`` (0 or unset means sequential)."""
    try:
        return max(0, int(os.environ.get('MCG_THREADS', '0')))
    except ValueError:
        return 0


_WORKER_SPEC = None


def _init_worker(spec):
    global _WORKER_SPEC
    _WORKER_SPEC = spec


def _expand(v):
    return neighbours(_WORKER_SPEC, v)


def _expand_all(spec, frontier, workers):
    if workers <= 1 or len(frontier) < 2:
        return [neighbours(spec, v) for v in frontier]
    import multiprocessing
    ctx = multiprocessing.get_context('fork')
    with ctx.Pool(workers, initializer=_init_worker, initargs=(spec,)) as pool:
        return pool.map(_expand, frontier, chunksize=1)


def build_ball(spec, basepoint, radius, workers=None, close_last_layer=False):
    """Exact BFS ball of the given radius around ``basepoint``.

    Neighbours are expanded layer by layer (in parallel when ``workers`` > 1);
    results are merged in canonical order so the output does not depend on
    the worker count. With ``close_last_layer`` the outermost layer is also
    expanded to record edges among ball vertices.
    """
    if not is_vertex(spec, basepoint):
        raise BasepointError('basepoint does not satisfy the vertex predicate')
    workers = worker_count() if workers is None else workers
    index = {encode(basepoint): 0}
    vertices, dist = [basepoint], [0]
    edges = {}
    truncated = False
    frontier = [basepoint]
    for layer in range(radius + (1 if close_last_layer else 0)):
        if not frontier:
            break
        results = _expand_all(spec, frontier, workers)
        nxt = []
        for v, moves in zip(frontier, results):
            i = index[encode(v)]
            if moves.truncated:
                truncated = True
            for w, kind in moves.neighbours:
                key = encode(w)
                j = index.get(key)
                if j is None:
                    if layer >= radius:
                        continue
                    j = index[key] = len(vertices)
                    vertices.append(w)
                    dist.append(layer + 1)
                    nxt.append(w)
                e = (min(i, j), max(i, j))
                if e not in edges or kind == ADD_REMOVE:
                    edges[e] = kind
        frontier = sorted(nxt, key=encode)
    # canonical vertex order: by distance, then encoding
    order = sorted(range(len(vertices)), key=lambda k: (dist[k], encode(vertices[k])))
    relabel = {old: new for new, old in enumerate(order)}
    vertices = [vertices[k] for k in order]
    dist = [dist[k] for k in order]
    edge_list = sorted((min(relabel[i], relabel[j]), max(relabel[i], relabel[j]), kind)
                       for (i, j), kind in edges.items())
    return BuiltGraph(spec, basepoint, radius, vertices, dist, edge_list, truncated)


# --------------------------------------------------------------------------
# Witness tests


def _complementary_regions(W):
    """Complementary regions of ∂W that are not pieces of W."""
    bd = W.boundary
    if bd.is_empty:
        return []
    cut = get_cut(bd)
    inside = set()
    for p in W.pieces:
        if not p.is_annulus:
            inside |= _region_of(cut, p).atoms
    return [a for a in cut.atoms if a.index not in inside]


def lemma_a_certificate(W, witnesses=None):
    """∂W with empty transversals, completed to a clean marking on the rest of the surface."""
    bd = W.boundary
    mu = Marking.from_base(bd)
    # pants-decompose the outside
    while True:
        cut = get_cut(mu.base)
        added = False
        for atom in cut.atoms:
            if atom.xi < 1:
                continue
            for c in cut.atom_curves(atom.index):
                if c in mu.bases or project_system(c, W).parts:
                    continue
                mu = mu.add(c)
                added = True
                break
            if added:
                break
        if not added:
            break
    bd_set = {c.weights for c in bd.components}
    for a, t in mu.components:
        if a.weights in bd_set or t is not None:
            continue
        b = clean_family(mu.base, a).member(0)
        mu = mu.replace(a, Transversal.of_curve(a, b))
    return mu


def is_witness(spec, W, search_bound=4):
    """Classify W as a witness for ``spec``: (verdict, certificate vertex or None)."""
    if W.is_empty or W.has_pants:
        return UNKNOWN, None
    kind = spec.kind
    whole = W == whole_surface(W.surface)
    if kind in ('L_X', 'partial_marking', 'K_X'):
        X = spec.witnesses
        member = X.contains_twist_free(W) if kind == 'K_X' else X.contains(W)
        if member:
            return YES, None
        cert = lemma_a_certificate(W)
        if kind == 'K_X':
            cert = Marking.from_base(cert.base)
        if is_vertex(spec, cert) and not meets(cert, W):
            return NO, cert
        return UNKNOWN, None
    if kind == 'M_A':
        return is_witness(spec.inner, W, search_bound)
    if kind == 'multiarc_curve':
        if whole:
            return YES, None
        return NO, W.boundary.components[0]
    if kind == 'prescribed_arc':
        regions = _complementary_regions(W)
        if whole or not regions:
            return YES, None
        related = False
        for atom in regions:
            punct = atom.punctures
            for i, j in spec.gamma:
                if i in punct and j in punct and (i != j or atom.holes > 2 or atom.genus > 0):
                    related = True
        if not related:
            return YES, None
        for s in enumerate_systems(W.surface, search_bound, kind='arcs', connected=True):
            if _gamma_ok(spec, s) and project_system(s, W).is_empty:
                return NO, s
        return UNKNOWN, None
    raise ValueError(f'unknown graph kind {kind!r}')


def annular_witnesses(spec, max_weight, search_bound=4):
    """Annuli about enumerated curves that are certified witnesses."""
    out = []
    for c in enumerate_curves(spec.surface, max_weight):
        verdict, _ = is_witness(spec, annulus(c), search_bound)
        if verdict == YES:
            out.append(annulus(c))
    return out


# --------------------------------------------------------------------------
# The markings μ_α


def _arc_groups(alpha):
    """Connected components of α ∪ ∂Σ: curves alone, arcs grouped by shared endpoints."""
    curves = [c for c in alpha.components if c.is_curve]
    arcs = [c for c in alpha.components if c.is_arc]
    ends = [arc_endpoints(a) for a in arcs]
    parent = list(range(len(arcs)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for i, j in itertools.combinations(range(len(arcs)), 2):
        if ends[i] & ends[j]:
            parent[find(j)] = find(i)
    groups = {}
    for i in range(len(arcs)):
        groups.setdefault(find(i), []).append(arcs[i])
    return curves, [groups[k] for k in sorted(groups)]


@dataclass
class MuAlpha:
    """μ_α together with flags recording how it was produced."""

    markings: list
    partial: bool = False           # ordering cap hit
    repaired: bool = False          # some transversal dropped to restore local completeness


def mu_alpha_report(alpha, ordering_cap=24):
    surface = alpha.surface
    curves, groups = _arc_groups(alpha)
    fixed = {}
    for c in curves:
        for b in regular_neighborhood_boundary(c).components:
            fixed[b] = None
    group_options = []
    partial = False
    for group in groups:
        if len(group) == 1:
            opts = [{b: None for b in regular_neighborhood_boundary(group[0]).components}]
            group_options.append(opts)
            continue
        system = union(surface, group)
        opts = []
        count = 0
        for order in itertools.permutations(group):
            if count >= ordering_cap:
                partial = True
                break
            count += 1
            comps = {}
            for k in range(1, len(order) + 1):
                for b in regular_neighborhood_boundary(union(surface, list(order[:k]))).components:
                    comps[b] = None
            for b in comps:
                if intersection_number(b, system) > 0:
                    comps[b] = Transversal.of_curve(b, system)
            opts.append(comps)
        group_options.append(opts)
    results = set()
    repaired = False
    for choice in itertools.product(*group_options) if group_options else [()]:
        merged = dict(fixed)
        for comps in choice:
            for b, t in comps.items():
                if merged.get(b) is None:
                    merged[b] = t
        mu = Marking(surface, tuple(merged.items()))
        if not is_locally_complete(mu):
            repaired = True
            base = mu.base
            from .markings import _in_farey_piece
            mu = Marking(surface, tuple((a, t if t is None or _in_farey_piece(base, a) else None)
                                        for a, t in mu.components))
        results.update(compatible_clean_markings(mu))
    return MuAlpha(sorted(results, key=Marking.sort_key), partial, repaired)


def mu_alpha(alpha, ordering_cap=24):
    """The finite set μ_α of clean markings attached to an arc-and-curve system."""
    return mu_alpha_report(alpha, ordering_cap).markings


_MU_CACHE = {}


def _mu_cached(alpha, cap):
    key = (alpha, cap)
    if key not in _MU_CACHE:
        _MU_CACHE[key] = mu_alpha(alpha, cap)
    return _MU_CACHE[key]


def _preimage(spec, mu):
    """E_μ within the inner universe: systems α with μ ∈ μ_α."""
    return [alpha for alpha in system_universe(spec.inner)
            if mu in _mu_cached(alpha, spec.ordering_cap)]


def _ma_moves(spec, mu):
    moves = Moves(truncated=True)
    out = {}
    for alpha in _preimage(spec, mu):
        for beta, _ in _system_moves(spec.inner, alpha).neighbours:
            for nu in _mu_cached(beta, spec.ordering_cap):
                if nu != mu:
                    out[encode(nu)] = (nu, ADD_REMOVE)
    moves.neighbours = [out[k] for k in sorted(out)]
    return moves


def ma_edge_sources(spec, mu, nu):
    """Pairs (α, β) of adjacent inner vertices with μ ∈ μ_α and ν ∈ μ_β."""
    out = []
    for alpha in _preimage(spec, mu):
        for beta in _preimage(spec, nu):
            if alpha != beta and intersection_number(alpha, beta) <= spec.inner.bound:
                out.append((alpha, beta))
    return out


# --------------------------------------------------------------------------
# Universal map and retraction


def universal_map(mu, from_spec, to_spec):
    """Vertex-set inclusion: μ itself, after checking it is a vertex of the target graph."""
    if not is_vertex(from_spec, mu):
        raise InclusionError('marking is not a vertex of the source graph')
    if not is_vertex(to_spec, mu):
        raise InclusionError('marking is not a vertex of the target graph')
    return mu


@dataclass
class Fiber:
    """E_μ within a finite universe, with its diameter measured inside a ball."""

    vertices: list
    diameter: int
    empty: bool


def retraction_fiber(mu, spec, M_bound, universe, ball=None):
    """Vertices ν of ``spec`` in ``universe`` with i(μ, ν) ≤ M_bound."""
    if spec.kind == 'M_A' and not isinstance(mu, Marking):
        raise ValueError('M_A fibers start from a marking')
    if spec.uses_markings:
        fiber = [nu for nu in universe if marking_intersection(mu, nu) <= M_bound]
    else:
        fiber = [nu for nu in universe if intersection_number(mu, nu) <= M_bound]
    diameter = 0
    if ball is not None and fiber:
        index = ball.index()
        ids = [index[encode(v)] for v in fiber if encode(v) in index]
        for i in ids:
            d = ball.distances_from(i)
            diameter = max([diameter] + [d[j] for j in ids if d[j] >= 0])
    return Fiber(fiber, diameter, not fiber)


def ma_fiber(spec, mu):
    """E_μ = {α : μ ∈ μ_α} over the inner universe."""
    return _preimage(spec, mu)

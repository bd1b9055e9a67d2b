"""Cutting a surface along a multicurve.

Crushing a multicurve ``m`` (curver's ``crush``) produces a possibly
disconnected triangulation in which every curve of ``m`` has become a pair of
new punctures. The components of that triangulation are the complementary
pieces of ``m``; here they are called atoms. Each vertex of the crushed
triangulation is labelled either by the original puncture it comes from or
by the curve of ``m`` it was created from, by lifting its peripheral curve.
"""

from dataclasses import dataclass
import curver

from .surface import CurveSystem, sorted_vertices


@dataclass(frozen=True)
class Atom:
    """A complementary piece of a multicurve."""

    index: int
    edges: frozenset
    genus: int
    punctures: frozenset
    sides: tuple          # curve index per adjacent side, sorted, with repetition
    marked: int           # vertices that are neither punctures nor sides (closed torus only)

    @property
    def holes(self):
        return len(self.punctures) + len(self.sides) + self.marked

    @property
    def xi(self):
        return 3 * self.genus + len(self.punctures) + len(self.sides) - 3

    @property
    def is_pants(self):
        return self.genus == 0 and self.holes == 3

    @property
    def euler(self):
        return 2 - 2 * self.genus - self.holes


@dataclass(frozen=True)
class Region:
    """A union of atoms glued along curves not kept as boundary."""

    atoms: frozenset
    genus: int
    punctures: frozenset
    sides: tuple          # (curve index, number of sides on this region)
    interior: frozenset   # curve indices glued inside the region
    marked: int

    @property
    def holes(self):
        return len(self.punctures) + sum(n for _, n in self.sides) + self.marked

    @property
    def xi(self):
        return 3 * self.genus + len(self.punctures) + sum(n for _, n in self.sides) - 3

    @property
    def is_pants(self):
        return self.genus == 0 and self.holes == 3


class Cut:
    """The complementary pieces of a canonical multicurve."""

    def __init__(self, multicurve):
        if not multicurve.is_multicurve:
            raise ValueError('can only cut along a multicurve')
        self.surface = multicurve.surface
        self.multicurve = multicurve
        self.curves = multicurve.components
        self.curve_index = {c.weights: i for i, c in enumerate(self.curves)}
        T = self.surface.triangulation
        if multicurve.is_empty:
            self.target = T
            self._crush = self._lift = None
        else:
            encoding = multicurve.lamination.crush()
            self.target = encoding.target_triangulation
            self._crush, self._lift = encoding, encoding.inverse()
        self._atom_curves = {}
        self._label_vertices()
        self._build_atoms()

    # -- maps between the surface and the crushed triangulation
    def crush(self, lam):
        return lam if self._crush is None else self._crush(lam)

    def lift(self, lam):
        return lam if self._lift is None else self._lift(lam)

    def lift_system(self, lam):
        """Lift a lamination on the crushed triangulation to a canonical system."""
        image = self.lift(lam)
        weights = tuple(int(w) for w in image.geometric)
        return CurveSystem.from_weights(self.surface, weights)

    def _label_vertices(self):
        punctures = {w: i for i, w in enumerate(self.surface.puncture_curves)}
        tgt = self.target
        self.vertex_labels = {}
        for v in sorted_vertices(tgt):
            lifted = self.lift(tgt.curve_from_cut_sequence(v))
            w = tuple(int(x) for x in lifted.geometric)
            if w in self.curve_index:
                self.vertex_labels[v] = ('c', self.curve_index[w])
            elif w in punctures:
                self.vertex_labels[v] = ('p', punctures[w])
            else:
                self.vertex_labels[v] = ('x', 0)

    def _build_atoms(self):
        tgt = self.target
        surfaces = tgt.surface()
        comps = sorted(tgt.components(), key=lambda comp: min(e.index for e in comp))
        self.atoms = []
        self.edge_atom = {}
        for k, comp in enumerate(comps):
            edges = frozenset(e.index for e in comp)
            punct, sides, marked = set(), [], 0
            for v, label in self.vertex_labels.items():
                if v[0] not in comp:
                    continue
                if label[0] == 'p':
                    punct.add(label[1])
                elif label[0] == 'c':
                    sides.append(label[1])
                else:
                    marked += 1
            genus = surfaces[comp].g
            atom = Atom(k, edges, genus, frozenset(punct), tuple(sorted(sides)), marked)
            self.atoms.append(atom)
            for e in edges:
                self.edge_atom[e] = k

    # -- locating systems disjoint from the multicurve
    def support(self, lam):
        """Atoms met by a lamination on the crushed triangulation."""
        return frozenset(self.edge_atom[i] for i, w in enumerate(lam.geometric) if w)

    def locate(self, system):
        """Atoms containing the parts of ``system`` (assumed disjoint from the multicurve)."""
        return self.support(self.crush(system.lamination))

    def restrict(self, lam, atom):
        """Sub-lamination of ``lam`` supported in one atom."""
        edges = self.atoms[atom].edges
        weights = [w if i in edges else 0 for i, w in enumerate(lam.geometric)]
        return self.target.lamination(weights)

    # -- regions for a sub-multicurve
    def regions(self, keep):
        """Complementary regions of the curves with indices in ``keep``.

        Atoms separated only by curves outside ``keep`` are merged.
        """
        keep = frozenset(keep)
        parent = list(range(len(self.atoms)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        side_atoms = {}
        for atom in self.atoms:
            for c in atom.sides:
                side_atoms.setdefault(c, []).append(atom.index)
        for c, owners in side_atoms.items():
            if c not in keep:
                for other in owners[1:]:
                    parent[find(other)] = find(owners[0])
        groups = {}
        for atom in self.atoms:
            groups.setdefault(find(atom.index), []).append(atom)
        out = []
        for members in groups.values():
            euler = sum(a.euler for a in members)
            punct = frozenset().union(*(a.punctures for a in members))
            marked = sum(a.marked for a in members)
            counts, interior = {}, set()
            for a in members:
                for c in a.sides:
                    if c in keep:
                        counts[c] = counts.get(c, 0) + 1
                    else:
                        interior.add(c)
            holes = len(punct) + sum(counts.values()) + marked
            genus = (2 - euler - holes) // 2
            out.append(Region(frozenset(a.index for a in members), genus, punct,
                              tuple(sorted(counts.items())), frozenset(interior), marked))
        out.sort(key=lambda r: min(r.atoms))
        return out

    # -- curves inside an atom
    def atom_curves(self, atom):
        """Some essential curves of the surface lying inside ``atom`` (may be empty)."""
        cached = self._atom_curves.get(atom)
        if cached is not None:
            return cached
        tgt = self.target
        found = {}
        for e in sorted(self.atoms[atom].edges):
            candidates = [tgt.edge_curve(e), tgt.edge_curve(~e)]
            try:
                arc = tgt.edge_arc(e)
                candidates.extend(arc.boundary().components())
            except (AssertionError, ValueError):
                pass
            for cand in candidates:
                for comp in _curve_components(cand):
                    if comp.is_peripheral():
                        continue
                    lifted = self.lift_system(comp)
                    if lifted.is_curve:
                        found[lifted.weights] = lifted
        result = self._atom_curves[atom] = sorted(found.values(), key=CurveSystem.sort_key)
        return result

    def clean_transverse(self, curve):
        """A curve meeting ``curve`` minimally inside its ξ=1 atom, plus the atom.

        Returns ``(b, atom_index, k)`` where ``k`` is 1 for a one-holed torus
        and 2 for a four-holed sphere, or ``None`` when the atom containing
        ``curve`` does not have complexity one.
        """
        if curve.weights in self.curve_index:
            return None
        atoms = self.locate(curve)
        if len(atoms) != 1:
            return None
        atom = next(iter(atoms))
        if self.atoms[atom].xi != 1:
            return None
        k = 1 if self.atoms[atom].genus == 1 else 2
        crushed = self.crush(curve.lamination)
        short, conjugator = crushed.shorten()
        back = conjugator.inverse()
        tri = short.triangulation
        best = None
        for e in sorted(self.atoms[atom].edges):
            pool = [tri.edge_curve(e), tri.edge_curve(~e)]
            try:
                pool.extend(tri.edge_arc(e).boundary().components())
            except (AssertionError, ValueError):
                pass
            for cand in pool:
                for comp in _curve_components(cand):
                    if comp.is_peripheral() or comp.intersection(short) != k:
                        continue
                    lifted = self.lift_system(back(comp))
                    if lifted.is_curve and (best is None or lifted.sort_key() < best.sort_key()):
                        best = lifted
        if best is None:
            return None
        return best, atom, k

    def half_twist(self, curve, power):
        """The half twist about ``curve`` inside its four-holed-sphere atom, as a map on systems.

        Returns ``None`` when ``curve`` does not lie in such an atom.
        """
        if curve.weights in self.curve_index:
            return None
        atoms = self.locate(curve)
        if len(atoms) != 1 or self.atoms[next(iter(atoms))].xi != 1 \
                or self.atoms[next(iter(atoms))].genus != 0:
            return None
        crushed = self.crush(curve.lamination)
        short, conjugator = crushed.shorten()
        tri = short.triangulation
        for edge in range(tri.zeta):
            arc = tri.edge_arc(edge)
            if arc.has_distinct_endpoints() and arc.boundary() == short:
                return conjugator.inverse() * arc.encode_halftwist(power) * conjugator
        return None


def _curve_components(lam):
    if isinstance(lam, curver.kernel.Curve):
        return [lam]
    try:
        return [c for c in lam.components() if isinstance(c, curver.kernel.Curve)]
    except (AssertionError, ValueError):
        return []


_CUTS = {}


def get_cut(multicurve):
    key = (multicurve.surface.triangles, multicurve.weights)
    cut = _CUTS.get(key)
    if cut is None:
        cut = _CUTS[key] = Cut(multicurve)
    return cut

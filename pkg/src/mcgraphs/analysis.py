"""Verification suites and empirical probes over built balls.

Every report carries the seed, the bound it checks and any slack added for
annular projections. Capped curve-graph distances never fail a check; they
are counted as inconclusive.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
import csv
import io
import itertools
import json
import random
import time

from .graphs import (
    ADD_REMOVE, ELEMENTARY, NO, is_witness, ma_edge_sources, mu_alpha_report,
)
from .markings import (
    Marking, MarkingError, Transversal, clean_family, compatible_clean_markings,
    complete_marking, is_clean, is_locally_complete, marking_intersection, meets,
    project_marking,
)
from .projection import (
    ANNULAR_SLACK, ORTHOGONAL, annular_distance, annulus,
    meets as system_meets, project_system, projection_distance, relate,
)
from .surface import intersection_number, twist

SCHEMA_VERSION = 1


class PathError(ValueError):
    """Input to the rebalancing procedure is not a path of the required kind."""


# --------------------------------------------------------------------------
# Reports


@dataclass
class BoundReport:
    """Outcome of checking one paper-cited bound over a set of samples."""

    claim: str
    samples: int
    max_observed: object
    bound: object
    slack: int = 0
    passed: bool = True
    inconclusive: int = 0
    runtime: float = 0.0
    seed: int = 0
    rows: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def summary(self):
        return {
            'schema_version': SCHEMA_VERSION,
            'claim': self.claim,
            'samples': self.samples,
            'max_observed': _plain(self.max_observed),
            'bound': _plain(self.bound),
            'slack': self.slack,
            'passed': self.passed,
            'inconclusive': self.inconclusive,
            'seed': self.seed,
            'extra': _plain(self.extra),
        }


def _plain(x):
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _finish(report, violations, start):
    report.passed = violations == 0
    report.runtime = time.perf_counter() - start
    return report


def rows_to_csv(rows):
    """CSV text for a list of flat dicts; the schema version is the first column."""
    if not rows:
        return 'schema_version\n'
    keys = ['schema_version'] + sorted({k for r in rows for k in r})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator='\n')
    writer.writeheader()
    for r in rows:
        writer.writerow({'schema_version': SCHEMA_VERSION, **{k: _plain(v) for k, v in r.items()}})
    return buf.getvalue()


def write_report(report, directory, stem):
    """Write ``<stem>.csv`` (one row per sample) and ``<stem>.json`` (summary)."""
    import os
    os.makedirs(directory, exist_ok=True)
    rows = report.rows if isinstance(report, BoundReport) else getattr(report, 'rows', [])
    summary = report.summary()
    with open(os.path.join(directory, stem + '.csv'), 'w', encoding='utf-8') as f:
        f.write(rows_to_csv(rows))
    with open(os.path.join(directory, stem + '.json'), 'w', encoding='utf-8') as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write('\n')


# --------------------------------------------------------------------------
# Projection Lipschitz bounds


class _ProjectionCache:
    def __init__(self, vertices, witnesses):
        self.vertices = vertices
        self.witnesses = witnesses
        self.cache = {}

    def get(self, v, w):
        key = (v, w)
        if key not in self.cache:
            vertex = self.vertices[v]
            W = self.witnesses[w]
            if isinstance(vertex, Marking):
                self.cache[key] = project_marking(vertex, W)
            else:
                self.cache[key] = project_system(vertex, W)
        return self.cache[key]

    def distance(self, u, v, w):
        a, b = self.get(u, w), self.get(v, w)
        if a.is_empty or b.is_empty:
            return None
        return projection_distance(a, b)


def _has_annulus(W):
    return any(p.is_annulus for p in W.pieces)


def check_projection_lipschitz(ball, witnesses, seed=0):
    """d_W across every edge: ≤ 4 for elementary moves, ≤ 2 for add/remove moves.

    Witnesses with an annular piece get ``ANNULAR_SLACK`` added to the bound.
    """
    start = time.perf_counter()
    members = list(witnesses.closure)
    cache = _ProjectionCache(ball.vertices, members)
    report = BoundReport('pi_lip', 0, 0, {ELEMENTARY: 4, ADD_REMOVE: 2}, ANNULAR_SLACK, seed=seed)
    violations = 0
    worst = {ELEMENTARY: 0, ADD_REMOVE: 0}
    for i, j, kind in ball.edges:
        for w, W in enumerate(members):
            d = cache.distance(i, j, w)
            if d is None:
                continue
            report.samples += 1
            bound = report.bound[kind] + (ANNULAR_SLACK if _has_annulus(W) else 0)
            if d.capped and d.value <= bound:
                status = 'inconclusive'
                report.inconclusive += 1
            elif d.value > bound:
                status = 'violation'
                violations += 1
            else:
                status = 'pass'
            if not d.capped:
                worst[kind] = max(worst[kind], d.value)
            report.rows.append({'edge_i': i, 'edge_j': j, 'kind': kind, 'witness': w,
                                'annular': _has_annulus(W), 'd_W': d.value, 'capped': d.capped,
                                'bound': bound, 'status': status})
    report.max_observed = worst
    report.extra = {'edges': len(ball.edges), 'witnesses': len(members)}
    return _finish(report, violations, start)


# --------------------------------------------------------------------------
# Distance formula


@dataclass
class DistanceFormulaFit:
    """Constants K, E with (1/K)·Σ − E ≤ d ≤ K·Σ + E on every sampled pair."""

    threshold: int
    K: Fraction
    E: Fraction
    pairs: int
    residual_mean: float
    residual_min: float
    residual_max: float
    capped_terms: int
    degenerate: bool
    witness_count: int
    seed: int
    rows: list = field(default_factory=list)

    def holds(self):
        for r in self.rows:
            s, d = r['sum'], r['d']
            if not (Fraction(s) / self.K - self.E <= d <= self.K * s + self.E):
                return False
        return True

    def summary(self):
        return {
            'schema_version': SCHEMA_VERSION,
            'threshold': self.threshold,
            'K': float(self.K), 'E': float(self.E),
            'pairs': self.pairs,
            'residual_mean': self.residual_mean,
            'residual_min': self.residual_min,
            'residual_max': self.residual_max,
            'capped_terms': self.capped_terms,
            'degenerate': self.degenerate,
            'witness_count': self.witness_count,
            'seed': self.seed,
        }


K_GRID = [Fraction(n, 4) for n in range(4, 201)]


def _fit(samples):
    """Smallest max(K, E) (then smallest K) over the grid; E is forced by K."""
    best = None
    for K in K_GRID:
        E = Fraction(0)
        for s, d in samples:
            E = max(E, d - K * s, Fraction(s) / K - d)
        key = (max(K, E), K)
        if best is None or key < best[0]:
            best = (key, K, E)
    return best[1], best[2]


def sample_pairs(n, max_pairs, seed):
    """Unordered index pairs: all of them when few, else a seeded sample (sorted)."""
    total = n * (n - 1) // 2
    if total <= max_pairs:
        return list(itertools.combinations(range(n), 2))
    rng = random.Random(seed)
    chosen = sorted(rng.sample(range(total), max_pairs))
    out = []
    # unrank pair indices in lexicographic order
    it = iter(chosen)
    target = next(it, None)
    k = 0
    for i in range(n):
        row = n - 1 - i
        while target is not None and target < k + row:
            out.append((i, i + 1 + target - k))
            target = next(it, None)
        k += row
    return out


def ball_distances(ball):
    """All-pairs distances measured inside the ball."""
    return [ball.distances_from(i) for i in range(ball.size)]


def fit_distance_formula(ball, witnesses, thresholds, max_pairs=2000, seed=0):
    """Fit the coarse distance formula at each threshold C over sampled pairs."""
    members = list(witnesses.closure)
    cache = _ProjectionCache(ball.vertices, members)
    pairs = sample_pairs(ball.size, max_pairs, seed)
    dist = ball_distances(ball)
    terms = []
    capped = 0
    for u, v in pairs:
        row = []
        for w in range(len(members)):
            d = cache.distance(u, v, w)
            if d is None:
                continue
            row.append(d.value)
            capped += d.capped
        terms.append(row)
    total_terms = sum(len(r) for r in terms)
    degenerate = total_terms > 0 and capped == total_terms
    fits = []
    for C in thresholds:
        samples = []
        rows = []
        for (u, v), row in zip(pairs, terms):
            s = sum(x for x in row if x >= C)
            d = dist[u][v]
            if d < 0:
                continue
            samples.append((s, d))
            rows.append({'u': u, 'v': v, 'd': d, 'sum': s, 'threshold': C})
        if samples:
            K, E = _fit(samples)
            res = [d - s for s, d in samples]
            mean = sum(res) / len(res)
        else:
            K, E, res, mean = Fraction(1), Fraction(0), [0], 0.0
        fits.append(DistanceFormulaFit(C, K, E, len(samples), mean, min(res), max(res),
                                       capped, degenerate, len(members), seed, rows))
    return fits


# --------------------------------------------------------------------------
# f_M envelope


@dataclass
class Envelope:
    """Monotone step table n ↦ max distance among sampled pairs with i ≤ n."""

    table: list          # [(n, max distance, pairs with i == n)]
    pairs: int
    seed: int
    rows: list = field(default_factory=list)

    def __call__(self, n):
        best = 0
        for k, d, _ in self.table:
            if k <= n:
                best = d
        return best

    def summary(self):
        return {'schema_version': SCHEMA_VERSION, 'pairs': self.pairs, 'seed': self.seed,
                'table': [list(r) for r in self.table]}


def _intersection(u, v):
    if isinstance(u, Marking):
        return marking_intersection(u, v)
    return intersection_number(u, v)


def estimate_f_M(ball, max_pairs=2000, seed=0):
    """Empirical envelope of distance against intersection number."""
    pairs = sample_pairs(ball.size, max_pairs, seed)
    dist = ball_distances(ball)
    by_n = {}
    counts = Counter()
    rows = []
    for u, v in pairs:
        d = dist[u][v]
        if d < 0:
            continue
        n = _intersection(ball.vertices[u], ball.vertices[v])
        by_n[n] = max(by_n.get(n, 0), d)
        counts[n] += 1
        rows.append({'u': u, 'v': v, 'i': n, 'd': d})
    table, running = [], 0
    for n in sorted(by_n):
        running = max(running, by_n[n])
        table.append((n, running, counts[n]))
    return Envelope(table, len(rows), seed, rows)


# --------------------------------------------------------------------------
# Hyperbolicity


@dataclass
class HyperbolicityReport:
    delta: Fraction
    quadruples: int
    seed: int
    disjoint_witnesses: object = None
    rows: list = field(default_factory=list)

    def summary(self):
        return {'schema_version': SCHEMA_VERSION, 'delta': float(self.delta),
                'quadruples': self.quadruples, 'seed': self.seed,
                'disjoint_witnesses': self.disjoint_witnesses}


def four_point_delta(dist, quadruples, seed=0):
    """Max four-point δ over seeded random quadruples of a distance matrix."""
    n = len(dist)
    rng = random.Random(seed)
    delta = Fraction(0)
    rows = []
    if n < 4:
        return delta, rows
    for _ in range(quadruples):
        x, y, z, w = rng.sample(range(n), 4)
        sums = sorted([dist[x][y] + dist[z][w], dist[x][z] + dist[y][w], dist[x][w] + dist[y][z]])
        d = Fraction(sums[2] - sums[1], 2)
        delta = max(delta, d)
        rows.append({'x': x, 'y': y, 'z': z, 'w': w, 'delta': float(d)})
    return delta, rows


def has_disjoint_connected_witnesses(witnesses):
    members = [W for W in witnesses.closure if W.is_connected]
    for U, V in itertools.combinations(members, 2):
        if relate(U, V) == ORTHOGONAL:
            return True
    return False


def sample_hyperbolicity(ball, quadruples, seed=0, witnesses=None):
    """Four-point δ estimate over exact in-ball distances (exploratory)."""
    dist = ball_distances(ball)
    if any(d < 0 for row in dist for d in row):
        raise ValueError('ball is disconnected')
    delta, rows = four_point_delta(dist, quadruples, seed)
    disjoint = has_disjoint_connected_witnesses(witnesses) if witnesses is not None else None
    return HyperbolicityReport(delta, len(rows), seed, disjoint, rows)


# --------------------------------------------------------------------------
# Path rebalancing


def twist_marking(mu, a, power):
    """Image of a marking under the Dehn twist τ_a^power."""
    if power == 0:
        return mu
    comps = []
    for c, t in mu.components:
        c2 = twist(a, power, c)
        if t is None:
            comps.append((c2, None))
        elif t.curve is None:
            raise MarkingError('transversal without a source curve cannot be moved')
        else:
            comps.append((c2, Transversal.of_curve(c2, twist(a, power, t.curve))))
    return Marking(mu.surface, tuple(comps))


def base_edge_kind(m, n):
    """Kind of base change along a marking edge (twist, add/remove or flip), or ``None``."""
    m = {c.weights: c for c in m.bases}
    n = {c.weights: c for c in n.bases}
    gone = [m[k] for k in m if k not in n]
    new = [n[k] for k in n if k not in m]
    if not gone and not new:
        return 'twist'
    if len(gone) + len(new) == 1:
        return ADD_REMOVE
    if len(gone) == 1 and len(new) == 1:
        a, b = gone[0], new[0]
        rest = [c for k, c in m.items() if k in n]
        if intersection_number(a, b) == 0 or any(intersection_number(b, c) for c in rest):
            return None
        base = Marking(a.surface, tuple((c, None) for c in m.values())).base
        try:
            family = clean_family(base, a)
        except MarkingError:
            return None
        return 'flip' if family.index_of(b) is not None else None
    return None


def _d_a(A, x, y):
    px, py = project_marking(x, A), project_marking(y, A)
    if px.is_empty or py.is_empty:
        return None
    return projection_distance(px, py).value


def _centre(A, x):
    p = project_marking(x, A)
    if p.is_empty:
        return None
    value = p.parts[0][1]
    return Fraction(value.lo + value.hi, 2)


def _balance(A, a, x, y, direction):
    """σ with d_a(x, τ_a^σ y) minimal, searched around the centre difference."""
    cx, cy = _centre(A, x), _centre(A, y)
    guess = round((cx - cy) * direction)
    best = None
    for sigma in range(guess - 3, guess + 4):
        d = _d_a(A, x, twist_marking(y, a, sigma))
        key = (d, abs(sigma - guess), abs(sigma))
        if best is None or key < best[0]:
            best = (key, sigma, d)
    return best[1], best[2]


def _twist_direction(A, a, x):
    """+1 or -1: how the annular centre of a marking moves under τ_a."""
    c0, c1 = _centre(A, x), _centre(A, twist_marking(x, a, 1))
    return 1 if c1 > c0 else -1


@dataclass
class Rebalanced:
    """The rebalanced path with the quantities used to produce and check it."""

    path: list
    sigmas: list
    rhos: list
    last_index: int          # J (0-based), or -1 when a lies in no base
    before: list             # d_a per step of the input
    after: list              # d_a per step of the output
    residuals: list          # d_a(ω_j, τ^σ_j ω_{j+1})
    c0: int
    K: int
    endpoint_distance: int
    bound: int
    passed: bool
    edges_ok: bool

    def summary(self):
        return {'schema_version': SCHEMA_VERSION, 'sigmas': self.sigmas, 'rhos': self.rhos,
                'J': self.last_index, 'before': self.before, 'after': self.after,
                'residuals': self.residuals, 'c0': self.c0, 'K': self.K,
                'endpoint_distance': self.endpoint_distance, 'bound': self.bound,
                'slack': ANNULAR_SLACK, 'passed': self.passed, 'edges_ok': self.edges_ok}


def rebalance_report(path, a, K):
    """Twist a tail-free prefix of a marking path about ``a`` so each step moves little at ``a``.

    For each step touching ``a`` choose σ_j with d_a(ω_j, τ_a^σ_j ω_{j+1}) ≤ 1,
    accumulate ρ_j = σ_1 + ... + σ_{j-1}, and replace ω_j by τ_a^ρ_j ω_j up to
    the last such step J. c_0 is measured as the largest per-step residual.
    """
    if len(path) < 2:
        raise PathError('a path needs at least two markings')
    for x, y in zip(path, path[1:]):
        if x.surface != y.surface or base_edge_kind(x, y) is None:
            raise PathError('consecutive base multicurves are not adjacent')
    A = annulus(a)
    if any(_centre(A, x) is None for x in path):
        raise PathError('every marking must project to the annulus about a')
    n = len(path)
    relevant = [a in x.bases or a in y.bases for x, y in zip(path, path[1:])]
    direction = _twist_direction(A, a, next(x for x in path if a not in x.bases)) \
        if any(a not in x.bases for x in path) else 1
    sigmas, residuals = [], []
    for j in range(n - 1):
        x, y = path[j], path[j + 1]
        if relevant[j]:
            sigma, d = _balance(A, a, x, y, direction)
            if _d_a(A, x, y) <= d:
                sigma = 0
                d = _d_a(A, x, y)
        else:
            sigma, d = 0, _d_a(A, x, y)
        sigmas.append(sigma)
        residuals.append(d)
    J = max((j for j in range(n - 1) if relevant[j]), default=-1)
    rhos = [sum(sigmas[:j]) for j in range(n)]
    out = [twist_marking(x, a, rhos[j]) if j <= J else x for j, x in enumerate(path)]
    before = [_d_a(A, x, y) for x, y in zip(path, path[1:])]
    after = [_d_a(A, x, y) for x, y in zip(out, out[1:])]
    c0 = max(residuals)
    endpoint = _d_a(A, path[0], path[-1])
    bound = K + c0 * (n - 1) + 2
    edges_ok = all(base_edge_kind(x, y) is not None for x, y in zip(out, out[1:])) \
        and out[0] == path[0] and out[-1] == path[-1]
    passed = edges_ok and all(d <= bound + ANNULAR_SLACK for d in after)
    return Rebalanced(out, sigmas, rhos, J, before, after, residuals, c0, K, endpoint,
                      bound, passed, edges_ok)


def rebalance_path(path, a, K):
    """The rebalanced marking path (see :func:`rebalance_report`)."""
    return rebalance_report(path, a, K).path


# --------------------------------------------------------------------------
# Suites over enumerated inputs


def check_compatible_bounds(markings, seed=0):
    """At least one and at most 4^b compatible clean markings; displacement ≤ 3."""
    start = time.perf_counter()
    report = BoundReport('marking_compat', 0, {'count_over_4b': 0, 'displacement': 0},
                         {'count': '4^b', 'displacement': 3}, seed=seed)
    violations = 0
    for k, mu in enumerate(markings):
        if not is_locally_complete(mu):
            continue
        out = compatible_clean_markings(mu)
        b = sum(1 for _, t in mu.components if t is not None)
        disp = 0
        for nu in out:
            for c, t in mu.components:
                if t is None:
                    continue
                s = nu.transversal(c)
                disp = max(disp, _transversal_displacement(c, t, s))
        ok = 1 <= len(out) <= 4 ** b and disp <= 3
        violations += not ok
        report.samples += 1
        m = report.max_observed
        m['count_over_4b'] = max(m['count_over_4b'], Fraction(len(out), 4 ** b))
        m['displacement'] = max(m['displacement'], disp)
        report.rows.append({'sample': k, 'b': b, 'count': len(out), 'displacement': disp,
                            'status': 'pass' if ok else 'violation'})
    return _finish(report, violations, start)


def _transversal_displacement(core, t, s):
    if t.curve is not None and s.curve is not None:
        return annular_distance(core, t.curve, s.curve)
    return max(t.hi, s.hi) - min(t.lo, s.lo)


def check_completion_budget(markings, seed=0):
    """complete_marking uses at most 2ξ − |μ| moves and ends complete and clean."""
    start = time.perf_counter()
    report = BoundReport('marking_completion', 0, 0, '2xi-|mu|', seed=seed)
    violations = 0
    worst = None
    for k, mu in enumerate(markings):
        done, moves = complete_marking(mu)
        budget = 2 * mu.surface.xi - mu.size
        ok = moves <= budget and is_clean(done)
        violations += not ok
        report.samples += 1
        excess = moves - budget
        worst = excess if worst is None else max(worst, excess)
        report.rows.append({'sample': k, 'size': mu.size, 'moves': moves, 'budget': budget,
                            'status': 'pass' if ok else 'violation'})
    report.max_observed = worst if worst is not None else 0
    report.bound = 0
    report.extra = {'measure': 'moves - (2xi - |mu|)'}
    return _finish(report, violations, start)


def check_witness_preservation(systems, subsurfaces, ordering_cap=24, seed=0):
    """W meets the members of μ_α exactly when W meets α."""
    start = time.perf_counter()
    report = BoundReport('mu_alpha_witness', 0, 0, 0, seed=seed)
    violations = 0
    for k, alpha in enumerate(systems):
        result = mu_alpha_report(alpha, ordering_cap)
        for w, W in enumerate(subsurfaces):
            target = system_meets(alpha, W)
            met = [meets(mu, W) for mu in result.markings]
            ok = bool(met) and all(m == target for m in met)
            violations += not ok
            report.samples += 1
            report.rows.append({'system': k, 'witness': w, 'alpha_meets': target,
                                'markings': len(met), 'repaired': result.repaired,
                                'partial': result.partial, 'status': 'pass' if ok else 'violation'})
    report.max_observed = violations
    return _finish(report, violations, start)


def check_lemma_a(spec, subsurfaces, seed=0):
    """Every enumerated non-member W gets a certificate vertex disjoint from W."""
    start = time.perf_counter()
    report = BoundReport('lemma_a', 0, 0, 0, seed=seed)
    violations = 0
    X = spec.witnesses
    for w, W in enumerate(subsurfaces):
        if W.has_pants or X.contains(W):
            continue
        verdict, cert = is_witness(spec, W)
        ok = verdict == NO and cert is not None and not meets(cert, W)
        violations += not ok
        report.samples += 1
        report.rows.append({'witness': w, 'verdict': verdict,
                            'status': 'pass' if ok else 'violation'})
    report.max_observed = violations
    return _finish(report, violations, start)


def dim_arc_complex(surface):
    """dim A(Σ) = 6g + 3b − 7 (punctures count as boundary components)."""
    return 6 * surface.genus + 3 * surface.boundary_components - 7


def check_ma_adjacency(ball, seed=0):
    """i(base μ, base ν) ≤ 4ξ²(i(α, β) + 2 dim A) for every M_A edge and every source pair."""
    start = time.perf_counter()
    spec = ball.spec
    xi = spec.surface.xi
    dim = dim_arc_complex(spec.surface)
    report = BoundReport('ma_adjacency', 0, None, '4xi^2(i+2dimA)', seed=seed)
    violations = 0
    worst = None
    for i, j, _ in ball.edges:
        mu, nu = ball.vertices[i], ball.vertices[j]
        lhs = intersection_number(mu.base, nu.base)
        sources = ma_edge_sources(spec, mu, nu)
        if not sources:
            violations += 1
            report.rows.append({'edge_i': i, 'edge_j': j, 'status': 'no_source'})
            continue
        for alpha, beta in sources:
            rhs = 4 * xi * xi * (intersection_number(alpha, beta) + 2 * dim)
            ok = lhs <= rhs
            violations += not ok
            report.samples += 1
            worst = lhs - rhs if worst is None else max(worst, lhs - rhs)
            report.rows.append({'edge_i': i, 'edge_j': j, 'lhs': lhs, 'rhs': rhs,
                                'status': 'pass' if ok else 'violation'})
    report.max_observed = worst if worst is not None else 0
    report.bound = 0
    report.extra = {'measure': 'lhs - rhs', 'dim_A': dim, 'xi': xi}
    return _finish(report, violations, start)


def check_witness_classification(spec, subsurfaces, seed=0):
    """Classify every enumerated subsurface; members of X must be certified witnesses.

    For marking graphs every non-member must come with a certificate vertex
    disjoint from it. Other graph kinds are reported without a bound.
    """
    from .graphs import YES, UNKNOWN
    start = time.perf_counter()
    report = BoundReport('witness_classification', 0, 0, 0, seed=seed)
    violations = 0
    marking_kind = spec.kind in ('L_X', 'K_X', 'partial_marking', 'M_A')
    X = spec.witnesses if spec.kind != 'M_A' else None
    for w, W in enumerate(subsurfaces):
        verdict, cert = is_witness(spec, W)
        report.samples += 1
        status = 'pass'
        if verdict == UNKNOWN:
            status = 'inconclusive'
            report.inconclusive += 1
        elif marking_kind and X is not None:
            member = X.contains_twist_free(W) if spec.kind == 'K_X' else X.contains(W)
            if member != (verdict == YES):
                status = 'violation'
            elif verdict == NO and (cert is None or meets(cert, W)):
                status = 'violation'
        violations += status == 'violation'
        report.rows.append({'witness': w, 'verdict': verdict, 'status': status})
    report.max_observed = violations
    return _finish(report, violations, start)


def twist_excursion_path(surface, twists):
    """Marking path alternating between two bases that differ by a twist-free flip.

    Both bases contain a curve ``a``; the transversal at ``a`` in the j-th
    marking is the clean transverse curve of index ``twists[j]``. Returns the
    path and ``a``. Needs complexity at least two.
    """
    if surface.xi < 2:
        raise PathError('twist excursions need two disjoint base curves')
    mu, _ = complete_marking(Marking(surface, ()))
    a, c = mu.bases[0], mu.bases[1]
    family_c = clean_family(mu.base, c)
    c2 = family_c.member(0)
    flipped = Marking(surface, tuple((c2 if b == c else b, None) for b in mu.bases))
    first = Marking(surface, tuple((b, None) for b in mu.bases))
    path = []
    for j, n in enumerate(twists):
        bare = first if j % 2 == 0 else flipped
        comps = []
        for b in bare.bases:
            fam = clean_family(bare.base, b)
            k = n * (2 if fam.half else 1) if b == a else 0
            t = fam.member(k)
            comps.append((b, Transversal.of_curve(b, t)))
        path.append(Marking(surface, tuple(comps)))
    return path, a

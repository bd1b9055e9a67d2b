"""Independent reference computations used by the tests.

Everything here is derived from elementary arithmetic on slopes, not from
the package's triangulation machinery.
"""

import math
from collections import deque
from fractions import Fraction

from mcgraphs.surface import CurveSystem, standard_surface

S11 = standard_surface(1, 1)
S04 = standard_surface(0, 4)


def primitive_slopes(bound):
    """Primitive (p, q) with |p|, |q| <= bound, one representative per ±."""
    out = []
    for p in range(0, bound + 1):
        for q in range(-bound, bound + 1):
            if math.gcd(p, q) != 1:
                continue
            if p == 0 and q != 1:
                continue
            out.append((p, q))
    return out


def torus_weights(p, q):
    """Normal coordinates of the slope p/q on the one-edge-pair chart of Σ_{1,1}."""
    return (abs(q), abs(p), abs(p + q))


def sphere_weights(p, q):
    """Normal coordinates of the slope p/q on Σ_{0,4}; opposite edges carry equal weight."""
    return (abs(q), abs(p), abs(p + q), abs(p + q), abs(p), abs(q))


def torus_curve(p, q):
    return CurveSystem.from_weights(S11, torus_weights(p, q))


def sphere_curve(p, q):
    return CurveSystem.from_weights(S04, sphere_weights(p, q))


def slope_intersection(u, v):
    (p, q), (r, s) = u, v
    return abs(p * s - q * r)


def normalize(v):
    p, q = v
    if p < 0 or (p == 0 and q < 0):
        return (-p, -q)
    return (p, q)


def twist_slope(about, power, v):
    """τ_about^power on slopes, as the transvection w ↦ w − n·det(about, w)·about."""
    (a, b), (p, q) = about, v
    det = a * q - b * p
    return normalize((p - power * det * a, q - power * det * b))


def stern_brocot_curves(max_weight):
    """Slopes of Σ_{1,1} whose normal-coordinate sum is at most ``max_weight``.

    Grown from 0/1 and 1/0 by mediants (positive slopes) and mirrored,
    so no coordinate chart is consulted beyond the weight formula.
    """
    def weight(p, q):
        return sum(torus_weights(p, q))

    found = {(0, 1), (1, 0)}
    queue = deque([((0, 1), (1, 0))])
    while queue:
        left, right = queue.popleft()
        mid = (left[0] + right[0], left[1] + right[1])
        # both the slope and its mirror grow along the tree
        if min(weight(*mid), weight(mid[0], -mid[1])) > max_weight:
            continue
        found.add(mid)
        queue.append((left, mid))
        queue.append((mid, right))
    out = set()
    for p, q in found:
        out.add(normalize((p, q)))
        out.add(normalize((p, -q)))
    return {v for v in out if weight(*v) <= max_weight}


def farey_bfs(u, v, radius=8):
    """Farey-graph distance by breadth-first search over slopes with bounded entries."""
    u, v = normalize(u), normalize(v)
    if u == v:
        return 0
    bound = 2 * max(abs(x) for x in u + v) + 2
    nodes = primitive_slopes(bound)
    dist = {u: 0}
    frontier = [u]
    for d in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for y in nodes:
                if y not in dist and slope_intersection(x, y) == 1:
                    dist[y] = d
                    nxt.append(y)
        if v in dist:
            return dist[v]
        frontier = nxt
    raise AssertionError('farey search exceeded its radius')


def tree_distances(parent):
    """All-pairs distances of a rooted tree given by parent indices (root has -1)."""
    n = len(parent)
    adj = [[] for _ in range(n)]
    for i, p in enumerate(parent):
        if p >= 0:
            adj[i].append(p)
            adj[p].append(i)
    out = []
    for s in range(n):
        d = [-1] * n
        d[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if d[y] < 0:
                    d[y] = d[x] + 1
                    queue.append(y)
        out.append(d)
    return out


def interval_diameter(*intervals):
    lo = min(a for a, _ in intervals)
    hi = max(b for _, b in intervals)
    return Fraction(hi - lo)


def torus_slope(weights):
    """Inverse of :func:`torus_weights`."""
    x, y, z = weights
    p, q = y, x
    return normalize((p, q) if z == x + y else (p, -q))


def torus_marking_ball(a, b, radius):
    """Complete clean markings of Σ_{1,1} as oriented Farey edges (a, b), by BFS.

    A twist moves b to b ± a; a flip swaps the two slopes.
    """
    start = (normalize(a), normalize(b))
    dist = {start: 0}
    frontier = [start]
    for d in range(1, radius + 1):
        nxt = []
        for x, y in frontier:
            for n in [(x, normalize((y[0] + x[0], y[1] + x[1]))),
                      (x, normalize((y[0] - x[0], y[1] - x[1]))),
                      (y, x)]:
                if n not in dist:
                    dist[n] = d
                    nxt.append(n)
        frontier = nxt
    return dist


def marking_meets_on_five_holed_sphere(mu, W):
    """Whether W meets μ, decided from intersection numbers alone on Σ_{0,5}.

    An annulus about c is met by a base curve crossing c or by a transversal
    at c. A four-holed sphere with boundary d contains every curve disjoint
    from d other than d (the far side is a pair of pants), so it is met by
    any base curve other than d.
    """
    from mcgraphs.surface import intersection_number
    for piece in W.pieces:
        if piece.is_annulus:
            c = piece.boundary
            for a, t in mu.components:
                if intersection_number(a, c) or (a == c and t is not None):
                    return True
        else:
            d = piece.boundary
            if any(a != d for a in mu.bases):
                return True
    return False

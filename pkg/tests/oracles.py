"""Independent reference implementations used only by the tests.

They share no code with the package: angles come from mpmath at high
precision, shortest paths from a dense numpy Floyd-Warshall.
"""

import math

import mpmath
import numpy as np

DPS = 60


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _crosses(p, q, a, b):
    d1, d2 = _cross(p, q, a), _cross(p, q, b)
    d3, d4 = _cross(a, b, p), _cross(a, b, q)
    return d1 * d2 < 0 and d3 * d4 < 0


def visible(pts, cons, u, v):
    if (min(u, v), max(u, v)) in cons:
        return True
    return not any(_crosses(pts[u], pts[v], pts[a], pts[b]) for a, b in cons)


def _angle(p, q):
    with mpmath.workdps(DPS):
        a = mpmath.atan2(q[1] - p[1], q[0] - p[0])
        return a + 2 * mpmath.pi if a < 0 else a


def half_theta6_edges(pts, cons):
    """Edge set straight from the definition, for integer points."""
    n = len(pts)
    cons = {(min(a, b), max(a, b)) for a, b in cons}
    third = mpmath.pi / 3
    edges = set()
    with mpmath.workdps(DPS):
        for u in range(n):
            ang = {v: _angle(pts[u], pts[v]) for v in range(n) if v != u}
            sector = {v: int(mpmath.floor(a / third)) for v, a in ang.items()}
            for k in (1, 3, 5):
                inside = [v for v in ang if sector[v] == k]
                cuts = sorted(ang[z] for a, b in cons if u in (a, b)
                              for z in [b if a == u else a] if sector[z] == k)
                lo_ray, hi_ray = k * third, (k + 1) * third
                bounds = [lo_ray] + cuts + [hi_ray]
                bis = (k + mpmath.mpf(1) / 2) * third
                for j in range(len(bounds) - 1):
                    lo, hi = bounds[j], bounds[j + 1]
                    best = None
                    for v in inside:
                        if not (lo <= ang[v] <= hi) or not visible(pts, cons, u, v):
                            continue
                        r = mpmath.sqrt((pts[v][0] - pts[u][0]) ** 2 + (pts[v][1] - pts[u][1]) ** 2)
                        proj = r * mpmath.cos(ang[v] - bis)
                        if best is None or proj < best[0]:
                            best = (proj, v)
                    if best is not None:
                        edges.add((min(u, best[1]), max(u, best[1])))
    return edges


def floyd_warshall(n, edges, pts):
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for u, v in edges:
        w = math.dist(pts[u], pts[v])
        d[u, v] = d[v, u] = min(d[u, v], w)
    for k in range(n):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


def all_pairs_stretch(n, h_edges, base_edges, pts):
    """max over pairs connected in base of d_h / d_base."""
    dh = floyd_warshall(n, h_edges, pts)
    db = floyd_warshall(n, base_edges, pts)
    worst = 1.0
    for u in range(n):
        for v in range(u + 1, n):
            if np.isfinite(db[u, v]):
                worst = max(worst, dh[u, v] / db[u, v])
    return worst

"""Visibility among segment constraints, and the empty convex chain.

Visibility is evaluated pair by pair against every constraint.  That is
quadratic times |S|, which is fine at the sizes this package targets and
keeps every test exact.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

from .cones import Instance
from .exact import Point, orient, properly_intersect


class PreconditionViolated(ValueError):
    pass


def _edge(u: int, v: int) -> tuple:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class GeoGraph:
    """Undirected straight-line graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset

    @classmethod
    def from_edges(cls, n: int, edges) -> "GeoGraph":
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            es.add(_edge(u, v))
        return cls(n, frozenset(es))

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def __contains__(self, e) -> bool:
        return _edge(*e) in self.edges

    def __len__(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple:
        adj = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def issubgraph(self, other: "GeoGraph") -> bool:
        return self.n == other.n and self.edges <= other.edges


_VIS_CACHE: "weakref.WeakKeyDictionary[Instance, list]" = weakref.WeakKeyDictionary()


def visibility_matrix(inst: Instance) -> list:
    """``m[u][v]`` is True iff u and v see each other (u != v)."""
    cached = _VIS_CACHE.get(inst)
    if cached is not None:
        return cached
    ip = inst.ipts
    n = inst.n
    segs = []
    for a, b in sorted(inst.constraints):
        pa, pb = ip[a], ip[b]
        segs.append((pa, pb, min(pa[0], pb[0]), max(pa[0], pb[0]),
                     min(pa[1], pb[1]), max(pa[1], pb[1])))
    m = [[False] * n for _ in range(n)]
    for u in range(n):
        pu = ip[u]
        for v in range(u + 1, n):
            pv = ip[v]
            ok = True
            if (u, v) not in inst.constraints:
                x0, x1 = (pu[0], pv[0]) if pu[0] < pv[0] else (pv[0], pu[0])
                y0, y1 = (pu[1], pv[1]) if pu[1] < pv[1] else (pv[1], pu[1])
                for pa, pb, sx0, sx1, sy0, sy1 in segs:
                    if sx1 <= x0 or sx0 >= x1 or sy1 <= y0 or sy0 >= y1:
                        continue
                    if properly_intersect((pu, pv), (pa, pb)):
                        ok = False
                        break
            m[u][v] = m[v][u] = ok
    _VIS_CACHE[inst] = m
    return m


def can_see(inst: Instance, u: int, v: int) -> bool:
    if u == v:
        raise ValueError("a vertex is not tested against itself")
    return visibility_matrix(inst)[u][v]


def build_visibility_graph(inst: Instance) -> GeoGraph:
    m = visibility_matrix(inst)
    n = inst.n
    return GeoGraph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n) if m[u][v]))


def segment_visible(inst: Instance, p, q) -> bool:
    """Whether the segment pq (scaled frame) avoids proper constraint crossings."""
    ip = inst.ipts
    for a, b in inst.constraints:
        if properly_intersect((p, q), (ip[a], ip[b])):
            return False
    return True


def _vertex_at(inst: Instance, p):
    try:
        return inst.ipts.index(p)
    except ValueError:
        return None


def _resolve(inst: Instance, p):
    if isinstance(p, int):
        return inst.ipts[p], p
    q = inst.to_internal(p)
    return q, _vertex_at(inst, q)


def _is_visibility_edge(inst: Instance, p, ip_, q, iq):
    if ip_ is not None and iq is not None and _edge(ip_, iq) in inst.constraints:
        return True
    return segment_visible(inst, p, q)


def _hull(points: list) -> list:
    """Strict convex hull, counterclockwise (Andrew's monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and orient(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and orient(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def in_closed_triangle(a, b, c, p) -> bool:
    o1, o2, o3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
    return (o1 >= 0 and o2 >= 0 and o3 >= 0) or (o1 <= 0 and o2 <= 0 and o3 <= 0)


def convex_chain(inst: Instance, u, v, w) -> list:
    """Convex chain of visibility edges from u to v inside triangle uvw.

    ``u``, ``v`` and ``w`` may be vertex ids or arbitrary exact points.
    The chain is the convex hull of {u, v} and the vertices in the triangle,
    with the hull edge uv removed; returned as exact Points from u to v.
    """
    pu, iu = _resolve(inst, u)
    pv, iv = _resolve(inst, v)
    pw, iw = _resolve(inst, w)
    turn = orient(pu, pv, pw)
    if turn == 0:
        raise PreconditionViolated("u, v and w are collinear")
    if not _is_visibility_edge(inst, pu, iu, pw, iw):
        raise PreconditionViolated("uw is not a visibility edge")
    if not _is_visibility_edge(inst, pv, iv, pw, iw):
        raise PreconditionViolated("vw is not a visibility edge")
    if iw is not None:
        for z in inst.constrained_neighbors[iw]:
            pz = inst.ipts[z]
            # the constraint leaves w strictly inside the angle uwv
            if orient(pw, pu, pz) * turn > 0 and orient(pw, pv, pz) * turn < 0:
                raise PreconditionViolated(f"constraint ({iw}, {z}) enters the triangle at w")
    corners = {pu, pv, pw}
    inside = [p for p in inst.ipts if p not in corners and in_closed_triangle(pu, pv, pw, p)]
    hull = _hull(inside + [pu, pv])
    if len(hull) == 2:
        chain = [pu, pv]
    else:
        # all points lie on w's side of uv, so uv is a hull edge; walk the rest
        if turn < 0:
            hull = hull[::-1]
        i = hull.index(pu)
        hull = hull[i:] + hull[:i]
        # hull now starts u -> v -> ... -> back to u
        assert hull[1] == pv
        chain = [pu] + hull[2:][::-1] + [pv]
    return [_to_point(inst, p) for p in chain]


def _to_point(inst: Instance, p) -> Point:
    s = inst.scale
    return Point(Fraction(p[0]) / s, Fraction(p[1]) / s)

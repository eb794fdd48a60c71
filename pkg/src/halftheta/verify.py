"""Checks for every quantitative claim about the three graphs.

Each check returns a :class:`CheckResult`; a failed check always carries a
concrete witness (a crossing pair, a vertex, a pair with its path length).
Lengths are summed in doubles; every ratio check allows a relative slack of
``RTOL`` on top of the stated bound and nothing else.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from functools import cmp_to_key

from .cones import BISECTORS, RAYS, ConeRef, Instance, projection_key, vec_cross, vec_dot
from .degree import ChargeLedger, DegreeReduction, build_g9, post_transformation_charges, reduce_degree
from .exact import SQRT3, orient, properly_intersect
from .spanner import HalfThetaGraph, build_half_theta6
from .visibility import GeoGraph, build_visibility_graph, in_closed_triangle, visibility_matrix

RTOL = 1e-9
INF = math.inf


class NotSubgraph(ValueError):
    pass


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: object = None
    measured: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": _jsonable(self.witness),
                "measured": _jsonable(self.measured), "seconds": round(self.seconds, 6)}


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": [c.as_dict() for c in self.checks]}


def _jsonable(x):
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, ConeRef):
        return str(x)
    if x is None or isinstance(x, (int, str, bool)):
        return x
    return str(x)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        for r in (res if isinstance(res, list) else [res]):
            r.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# --- planarity ------------------------------------------------------------

@_timed
def check_plane(g: GeoGraph, inst: Instance, name: str = "plane") -> CheckResult:
    ip = inst.ipts
    edges = g.sorted_edges()
    boxes = []
    for u, v in edges:
        (x0, y0), (x1, y1) = ip[u], ip[v]
        boxes.append((min(x0, x1), max(x0, x1), min(y0, y1), max(y0, y1)))
    for a in range(len(edges)):
        ea, ba = edges[a], boxes[a]
        sa = (ip[ea[0]], ip[ea[1]])
        for b in range(a + 1, len(edges)):
            bb = boxes[b]
            if bb[1] <= ba[0] or bb[0] >= ba[1] or bb[3] <= ba[2] or bb[2] >= ba[3]:
                continue
            eb = edges[b]
            if properly_intersect(sa, (ip[eb[0]], ip[eb[1]])):
                return CheckResult(name, False, [list(ea), list(eb)], {"edges": len(edges)})
    return CheckResult(name, True, None, {"edges": len(edges)})


# --- shortest paths -------------------------------------------------------

def _dijkstra(adj, lengths, source, allowed=None, target=None):
    dist = {source: 0.0}
    heap = [(0.0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == target:
            break
        row = lengths[u]
        for v in adj[u]:
            if allowed is not None and v not in allowed:
                continue
            nd = d + row[v]
            if nd < dist.get(v, INF):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def shortest_path_lengths(g: GeoGraph, inst: Instance, source: int) -> list:
    """Single-source Euclidean shortest-path distances; unreachable is inf."""
    dist = _dijkstra(g.adjacency, inst.lengths, source)
    return [dist.get(v, INF) for v in range(g.n)]


def spanning_ratio(h: GeoGraph, base: GeoGraph, inst: Instance, with_witness: bool = False):
    """max over base edges (u, v) of d_h(u, v) / |uv|."""
    if not h.issubgraph(base):
        extra = sorted(h.edges - base.edges)[:1]
        raise NotSubgraph(f"edge {extra} of h is not in the base graph")
    worst, pair = 1.0 if base.edges else 0.0, None
    by_source: dict = {}
    for u, v in base.edges:
        by_source.setdefault(u, []).append(v)
    for u in sorted(by_source):
        dist = _dijkstra(h.adjacency, inst.lengths, u)
        for v in by_source[u]:
            r = dist.get(v, INF) / inst.length(u, v)
            if pair is None or r > worst:
                worst, pair = max(worst, r), (u, v)
    return (worst, pair) if with_witness else worst


@_timed
def check_spanning_ratio(h: GeoGraph, base: GeoGraph, inst: Instance, t: float,
                         name: str) -> CheckResult:
    ratio, pair = spanning_ratio(h, base, inst, with_witness=True)
    ok = ratio <= t + RTOL
    return CheckResult(name, ok, None if ok else {"pair": pair, "ratio": ratio},
                       {"max_ratio": ratio, "bound": t})


# --- stretch checks ---------------------------------------------------------

def _sorted_by_projection(inst: Instance, u: int, k: int) -> list:
    cand = [v for v in range(inst.n) if inst.sectors[u][v] == k]
    keys = {v: projection_key(inst, u, k, v) for v in cand}
    return sorted(cand, key=keys.__getitem__)


def _real(inst: Instance, pair) -> float:
    """Float value of a doubled (a, b) pair in the scaled frame."""
    a, b = pair
    return (a + b * SQRT3) / (2 * inst.scale)


@_timed
def check_theorem1(inst: Instance, ht: HalfThetaGraph) -> CheckResult:
    """Confined-path bound (sqrt3 cos a + sin a)|uw| for visible positive-cone pairs."""
    adj = ht.graph.adjacency
    vis = visibility_matrix(inst)
    ip = inst.ipts
    pairs, worst, witness = 0, 0.0, None
    for u in range(inst.n):
        for k in (1, 3, 5):
            order = _sorted_by_projection(inst, u, k)
            inside = {u}
            for w in order:
                inside.add(w)
                if not vis[u][w]:
                    continue
                pairs += 1
                dx, dy = ip[w][0] - ip[u][0], ip[w][1] - ip[u][1]
                height = _real(inst, vec_dot(BISECTORS[k], dx, dy))
                offset = abs(_real(inst, vec_cross(BISECTORS[k], dx, dy)))
                bound = SQRT3 * height + offset
                d = _dijkstra(adj, inst.lengths, u, allowed=inside, target=w).get(w, INF)
                uw = inst.length(u, w)
                slack = d / bound if bound > 0 else INF
                if slack > worst:
                    worst = slack
                if d > bound + RTOL * uw and witness is None:
                    witness = {"u": u, "w": w, "path": d, "bound": bound}
    return CheckResult("confined_paths", witness is None, witness,
                       {"pairs": pairs, "max_path_over_bound": worst})


def _records_by_source(records) -> dict:
    out: dict = {}
    for r in records:
        out.setdefault(r.source, []).append(r)
    return out


def refined_edge_bound(inst: Instance, records_of_u, u: int, w: int):
    """(cos a + 5 sin a / sqrt3)|uw| over the canonical paths of u holding w.

    The angle is measured from uw to the boundary ray of u's negative cone
    on the far side of the closest canonical vertex; None when no path of u
    holds w.
    """
    ip = inst.ipts
    dx, dy = ip[w][0] - ip[u][0], ip[w][1] - ip[u][1]
    best = None
    for r in records_of_u:
        if w not in r.sequence:
            continue
        pos = r.sequence.index(w)
        if pos == r.closest_index:
            b = inst.length(u, w)
        else:
            k = r.cone.sector
            ray = RAYS[k] if pos > r.closest_index else RAYS[(k + 1) % 6]
            along = _real(inst, vec_dot(ray, dx, dy))
            across = abs(_real(inst, vec_cross(ray, dx, dy)))
            b = along + 5 * across / SQRT3
        best = b if best is None else max(best, b)
    return best


@_timed
def check_theorem2(inst: Instance, ht: HalfThetaGraph, g9: GeoGraph, records=None) -> list:
    """d_G9(u, w) <= 3|uw| and the refined angle bound, per half-theta-6 edge."""
    if records is None:
        records = build_g9(inst, ht)[1]
    by_src = _records_by_source(records)
    dists = {}
    worst3, worst_ref, fallback = 0.0, 0.0, 0
    w3 = wref = None
    for a, b in ht.graph.sorted_edges():
        u, w = (a, b) if inst.sectors[a][b] % 2 == 0 else (b, a)
        if u not in dists:
            dists[u] = _dijkstra(g9.adjacency, inst.lengths, u)
        d = dists[u].get(w, INF)
        uw = inst.length(u, w)
        worst3 = max(worst3, d / uw)
        if d > 3 * uw + RTOL * uw and w3 is None:
            w3 = {"u": u, "w": w, "path": d, "bound": 3 * uw}
        ref = refined_edge_bound(inst, by_src.get(u, []), u, w)
        if ref is None:
            fallback += 1
            ref = 3 * uw
        worst_ref = max(worst_ref, d / ref)
        if d > ref + RTOL * uw and wref is None:
            wref = {"u": u, "w": w, "path": d, "bound": ref}
    return [
        CheckResult("g9_edge_stretch", w3 is None, w3, {"max_ratio": worst3, "bound": 3.0}),
        CheckResult("g9_edge_refined", wref is None, wref,
                    {"max_path_over_bound": worst_ref, "fallbacks": fallback}),
    ]


@_timed
def check_g6_spanning(inst: Instance, ht: HalfThetaGraph, g6: GeoGraph) -> CheckResult:
    """Every half-theta-6 edge has a G6 path of length at most 3|uw|."""
    worst, witness = 0.0, None
    dists = {}
    for u, w in ht.graph.sorted_edges():
        if u not in dists:
            dists[u] = _dijkstra(g6.adjacency, inst.lengths, u)
        d = dists[u].get(w, INF)
        uw = inst.length(u, w)
        worst = max(worst, d / uw)
        if d > 3 * uw + RTOL * uw and witness is None:
            witness = {"u": u, "w": w, "path": d, "bound": 3 * uw}
    return CheckResult("g6_per_edge", witness is None, witness, {"max_ratio": worst, "bound": 3.0})


@_timed
def check_degree_bounds(inst: Instance, g: GeoGraph, slack: int, name: str = "degree") -> CheckResult:
    worst, witness = None, None
    for v in range(inst.n):
        margin = inst.c(v) + slack - g.degree(v)
        worst = margin if worst is None else min(worst, margin)
        if margin < 0 and witness is None:
            witness = {"vertex": v, "degree": g.degree(v), "c": inst.c(v), "slack": slack}
    return CheckResult(name, witness is None, witness,
                       {"max_degree": g.max_degree(), "min_margin": worst, "slack": slack})


# --- structural checks --------------------------------------------------------

def triangle_is_clean(inst: Instance, a: int, b: int, c: int) -> bool:
    """No vertex in the closed triangle besides its corners; no constraint crosses a side."""
    ip = inst.ipts
    pa, pb, pc = ip[a], ip[b], ip[c]
    for z in range(inst.n):
        if z not in (a, b, c) and in_closed_triangle(pa, pb, pc, ip[z]):
            return False
    sides = ((pa, pb), (pb, pc), (pc, pa))
    for s, t in inst.constraints:
        seg = (ip[s], ip[t])
        if any(properly_intersect(seg, side) for side in sides):
            return False
    return True


@_timed
def check_structure(inst: Instance, ht: HalfThetaGraph, records, g9: GeoGraph = None,
                    vis: GeoGraph = None) -> list:
    if g9 is None:
        g9 = build_g9(inst, ht)[0]
    if vis is None:
        vis = build_visibility_graph(inst)
    cor1 = cor2 = None
    pairs = 0
    for r in records:
        i = r.cone.index
        s = r.sequence
        for j in range(1, len(s)):
            a, b = s[j - 1], s[j]
            pairs += 1
            if cor1 is None and ConeRef.from_sector(inst.sectors[a][b]).index == i:
                cor1 = {"source": r.source, "subcone": str(r.subcone), "pair": [a, b],
                        "cone": str(ConeRef.from_sector(inst.sectors[a][b]))}
            if cor2 is None and not triangle_is_clean(inst, r.source, a, b):
                cor2 = {"source": r.source, "subcone": str(r.subcone), "pair": [a, b]}
    chain = None
    if not g9.issubgraph(ht.graph):
        chain = {"g9_not_in_theta6": sorted(g9.edges - ht.graph.edges)[:3]}
    elif not ht.graph.issubgraph(vis):
        chain = {"theta6_not_in_vis": sorted(ht.graph.edges - vis.edges)[:3]}
    return [
        CheckResult("path_cone_exclusion", cor1 is None, cor1, {"consecutive_pairs": pairs}),
        CheckResult("path_empty_triangles", cor2 is None, cor2, {"consecutive_pairs": pairs}),
        CheckResult("subgraph_chain", chain is None, chain),
        not_closest_audit(inst, g9, records),
    ]


def _closest_lookup(records):
    holders: dict = {}
    for r in records:
        for v in r.sequence:
            holders.setdefault((r.source, v), []).append(r)
    return holders


def not_closest_audit(inst: Instance, g9: GeoGraph, records) -> CheckResult:
    """An edge vx with x never closest in v's subcones lies on at most one canonical path."""
    holders = _closest_lookup(records)
    uses: dict = {}
    for r in records:
        for e in r.path_edges():
            uses[e] = uses.get(e, 0) + 1
    audited, witness = 0, None
    for e in g9.sorted_edges():
        for v, x in (e, e[::-1]):
            if inst.sectors[v][x] % 2:
                continue  # x must be in a negative cone of v
            if any(r.closest == x for r in holders.get((v, x), [])):
                continue
            audited += 1
            if uses.get(e, 0) > 1 and witness is None:
                witness = {"edge": list(e), "center": v, "paths": uses[e]}
    return CheckResult("not_closest", witness is None, witness, {"audited": audited})


@_timed
def check_ledger(inst: Instance, ledger: ChargeLedger, g9: GeoGraph) -> CheckResult:
    witness = None
    if ledger.unchargeable:
        src, sc, v, other = ledger.unchargeable[0]
        witness = {"unchargeable": [v, other], "source": src, "subcone": str(sc)}
    viol = ledger.violations()
    if witness is None and viol:
        v, cone, n, bound = viol[0]
        witness = {"vertex": v, "cone": str(cone), "charge": n, "bound": bound}
    if witness is None:
        for v in range(inst.n):
            if ledger.total(v) < g9.degree(v):
                witness = {"vertex": v, "charge": ledger.total(v), "degree": g9.degree(v)}
                break
    return CheckResult("charges", witness is None, witness,
                       {"violations": len(viol), "unchargeable": len(ledger.unchargeable)})


@_timed
def check_recharge(inst: Instance, red: DegreeReduction) -> CheckResult:
    """After re-charging: every cone at most c+1 and charge still covers G6 degree."""
    post = post_transformation_charges(red.ledger, red.configs)
    witness = None
    for (v, cone), n in sorted(post.charge.items()):
        if n > post.constraints[(v, cone)] + 1:
            witness = {"vertex": v, "cone": str(cone), "charge": n}
            break
    if witness is None:
        for v in range(inst.n):
            if post.total(v) < red.g6.degree(v):
                witness = {"vertex": v, "charge": post.total(v), "degree": red.g6.degree(v)}
                break
    return CheckResult("recharge", witness is None, witness, {"configs": len(red.configs)})


@_timed
def check_transformations(inst: Instance, red: DegreeReduction, vis: GeoGraph) -> CheckResult:
    """G6 edges outside the half-theta-6 graph come from steps; kept edges survive;
    Type-1 configurations share no edge; G6 stays inside Vis."""
    added = {s.added for s in red.steps}
    stray = sorted(red.g6.edges - red.ht.graph.edges - added)
    if stray:
        return CheckResult("transformations", False, {"untraceable": stray[:3]})
    for s in red.steps:
        if s.kept not in red.g6.edges:
            return CheckResult("transformations", False, {"kept_edge_missing": list(s.kept)})
    seen: dict = {}
    for idx, s in enumerate(red.steps):
        for e in (s.kept, s.removed_type1):
            if e in seen:
                return CheckResult("transformations", False,
                                   {"overlapping_steps": [seen[e], idx], "edge": list(e)})
            seen[e] = idx
    if not red.g6.issubgraph(vis):
        return CheckResult("transformations", False,
                           {"g6_not_in_vis": sorted(red.g6.edges - vis.edges)[:3]})
    return CheckResult("transformations", True, None,
                       {"steps": len(red.steps),
                        "type2": sum(1 for s in red.steps if s.removed_type2)})


# --- faces ---------------------------------------------------------------------

def _angle_cmp(origin, ip):
    def half(p):
        dx, dy = p[0] - origin[0], p[1] - origin[1]
        return 0 if dy > 0 or (dy == 0 and dx > 0) else 1

    def cmp(a, b):
        ha, hb = half(ip[a]), half(ip[b])
        if ha != hb:
            return ha - hb
        return -orient(origin, ip[a], ip[b])
    return cmp


def faces(g: GeoGraph, inst: Instance) -> list:
    """Faces of the straight-line embedding as (boundary walk, doubled signed area)."""
    ip = inst.ipts
    rot = []
    for v in range(g.n):
        rot.append(sorted(g.adjacency[v], key=cmp_to_key(_angle_cmp(ip[v], ip))))
    pos = [{w: i for i, w in enumerate(r)} for r in rot]
    seen = set()
    out = []
    for u, v in g.sorted_edges():
        for start in ((u, v), (v, u)):
            if start in seen:
                continue
            walk, he = [], start
            while he not in seen:
                seen.add(he)
                a, b = he
                walk.append(a)
                nb = rot[b]
                # next edge: neighbour of b just clockwise of a (face on the left)
                c = nb[(pos[b][a] - 1) % len(nb)]
                he = (b, c)
            area = sum(ip[walk[i]][0] * ip[walk[(i + 1) % len(walk)]][1]
                       - ip[walk[(i + 1) % len(walk)]][0] * ip[walk[i]][1]
                       for i in range(len(walk)))
            out.append((walk, area))
    return out


def inner_faces(g: GeoGraph, inst: Instance) -> list:
    return [walk for walk, area in faces(g, inst) if area > 0]


# --- full pipeline --------------------------------------------------------------

@dataclass
class Pipeline:
    inst: Instance
    vis: GeoGraph
    ht: HalfThetaGraph
    red: DegreeReduction
    seconds: dict

    @property
    def g9(self) -> GeoGraph:
        return self.red.g9

    @property
    def g6(self) -> GeoGraph:
        return self.red.g6

    def graph(self, name: str) -> GeoGraph:
        return {"vis": self.vis, "theta6": self.ht.graph, "g9": self.g9, "g6": self.g6}[name]


def run_pipeline(inst: Instance) -> Pipeline:
    t0 = time.perf_counter()
    inst.require_valid()
    vis = build_visibility_graph(inst)
    t1 = time.perf_counter()
    ht = build_half_theta6(inst)
    t2 = time.perf_counter()
    red = reduce_degree(inst, ht)
    t3 = time.perf_counter()
    return Pipeline(inst, vis, ht, red, {"vis": t1 - t0, "theta6": t2 - t1, "reduce": t3 - t2})


def verify_pipeline(p: Pipeline, confined: bool = True) -> VerificationReport:
    inst = p.inst
    rep = VerificationReport()
    rep.checks.append(check_plane(p.ht.graph, inst, "plane_theta6"))
    rep.checks.append(check_plane(p.g9, inst, "plane_g9"))
    rep.checks.append(check_plane(p.g6, inst, "plane_g6"))
    rep.checks.append(check_spanning_ratio(p.ht.graph, p.vis, inst, 2.0, "ratio_theta6_vis"))
    if confined:
        rep.checks.append(check_theorem1(inst, p.ht))
    rep.checks.extend(check_theorem2(inst, p.ht, p.g9, p.red.records))
    rep.checks.append(check_spanning_ratio(p.g9, p.vis, inst, 6.0, "ratio_g9_vis"))
    rep.checks.append(check_g6_spanning(inst, p.ht, p.g6))
    rep.checks.append(check_spanning_ratio(p.g6, p.vis, inst, 6.0, "ratio_g6_vis"))
    rep.checks.append(check_degree_bounds(inst, p.g9, 9, "degree_g9"))
    rep.checks.append(check_degree_bounds(inst, p.g6, 6, "degree_g6"))
    rep.checks.append(check_ledger(inst, p.red.ledger, p.g9))
    rep.checks.append(check_recharge(inst, p.red))
    rep.checks.extend(check_structure(inst, p.ht, p.red.records, p.g9, p.vis))
    rep.checks.append(check_transformations(inst, p.red, p.vis))
    return rep


def verify_instance(inst: Instance, confined: bool = True):
    p = run_pipeline(inst)
    return p, verify_pipeline(p, confined=confined)

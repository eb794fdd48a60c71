"""Degree reduction: canonical paths, G9, the charging ledger and G6.

G9 keeps, for every negative subcone of every vertex u, the path through
u's neighbours in that subcone (counterclockwise) plus the edge from u to
the neighbour with the smallest bisector projection.  G6 then removes the
second charge on positive cones that G9 charges twice.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Optional

from .cones import ConeRef, Instance, SubconeRef, member, projection_key, subcones_of
from .exact import orient
from .spanner import HalfThetaGraph
from .visibility import GeoGraph


class UnchargeableEdge(RuntimeError):
    pass


class InconsistentState(RuntimeError):
    pass


class ConflictDetected(RuntimeError):
    pass


def _edge(u, v):
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class CanonicalPathRecord:
    source: int
    subcone: SubconeRef
    sequence: tuple
    closest_index: int

    @property
    def cone(self) -> ConeRef:
        return self.subcone.cone

    @property
    def closest(self) -> int:
        return self.sequence[self.closest_index]

    def path_edges(self) -> list:
        s = self.sequence
        return [_edge(s[j - 1], s[j]) for j in range(1, len(s))]

    def g9_edges(self) -> set:
        return set(self.path_edges()) | {_edge(self.source, self.closest)}


def _generated_toward(ht: HalfThetaGraph, sc, v: int) -> bool:
    """Whether edge (apex, v) was chosen by a positive subcone of v facing ``sc``.

    Only matters when (apex, v) is a constraint: then v lies on the line that
    splits the apex's cone, so it belongs to both neighbouring subcones, while
    v's own cone is split by the same line.  v joins the canonical sequence
    of a side only if it picked the apex from a subcone on that same side.
    """
    u = sc.apex
    gens = [g for g in ht.provenance[_edge(u, v)] if g.apex == v]
    if sc.cw == v:
        # sc lies left of u->v, i.e. right (clockwise) of v->u
        return any(_subcone_bound(ht, g, "ccw") == u for g in gens)
    if sc.ccw == v:
        return any(_subcone_bound(ht, g, "cw") == u for g in gens)
    return True


def _subcone_bound(ht, ref: SubconeRef, side: str):
    return getattr(ht.subcone(ref), side)


def canonical_paths(inst: Instance, ht: HalfThetaGraph) -> list:
    """One record per (vertex, negative subcone) holding at least one neighbour."""
    adj = ht.graph.adjacency
    records = []
    for u in range(inst.n):
        apex = inst.ipts[u]
        ccw = cmp_to_key(lambda a, b: -orient(apex, inst.ipts[a], inst.ipts[b]))
        for i in range(3):
            cone = ConeRef.neg(i)
            k = cone.sector
            for sc in subcones_of(inst, u, cone):
                seq = sorted((v for v in adj[u]
                              if member(inst, sc, v) and _generated_toward(ht, sc, v)), key=ccw)
                if not seq:
                    continue
                keys = [projection_key(inst, u, k, v) for v in seq]
                ci = min(range(len(seq)), key=keys.__getitem__)
                records.append(CanonicalPathRecord(u, sc.ref, tuple(seq), ci))
    return records


def build_g9(inst: Instance, ht: HalfThetaGraph):
    records = canonical_paths(inst, ht)
    edges = set()
    for r in records:
        edges |= r.g9_edges()
    return GeoGraph(inst.n, frozenset(edges)), records


# --- charging -------------------------------------------------------------

@dataclass(frozen=True)
class Charge:
    vertex: int
    cone: ConeRef
    edge: tuple
    source: int
    subcone: SubconeRef
    rule: str


@dataclass
class ChargeLedger:
    """Charges per (vertex, cone), one per canonical path that applies a rule.

    ``unchargeable`` lists path edges that no rule covers; they are charged
    to the cone of the endpoint that contains them.
    """

    charge: Counter = field(default_factory=Counter)
    constraints: dict = field(default_factory=dict)
    entries: list = field(default_factory=list)
    unchargeable: list = field(default_factory=list)

    def add(self, entry: Charge) -> None:
        self.entries.append(entry)
        self.charge[(entry.vertex, entry.cone)] += 1

    def total(self, v: int) -> int:
        return sum(self.charge[(v, ConeRef.from_sector(k))] for k in range(6))

    def bound(self, v: int, cone: ConeRef) -> int:
        """Per-cone ceiling: max(2, c+1) for positive cones, c+1 for negative."""
        c = self.constraints[(v, cone)]
        return max(2, c + 1) if cone.positive else c + 1

    def violations(self) -> list:
        return [(v, cone, n, self.bound(v, cone))
                for (v, cone), n in sorted(self.charge.items())
                if n > self.bound(v, cone)]

    def entries_for(self, v: int, cone: ConeRef) -> list:
        return [e for e in self.entries if e.vertex == v and e.cone == cone]

    def doubly_charged(self) -> list:
        """Positive cones carrying charge c+2."""
        return sorted((v, cone) for (v, cone), n in self.charge.items()
                      if cone.positive and n == self.constraints[(v, cone)] + 2)


def _path_charge_cone(inst: Instance, i: int, v: int, other: int):
    """Cone of v charged for path edge (v, other); None when no rule applies."""
    cone = ConeRef.from_sector(inst.sectors[v][other])
    if cone in (ConeRef.neg(i + 1), ConeRef.neg(i - 1)):
        return ConeRef.pos(i)
    if cone == ConeRef.pos(i + 1):
        return ConeRef.neg(i - 1)
    if cone == ConeRef.pos(i - 1):
        return ConeRef.neg(i + 1)
    return None


def compute_charges(inst: Instance, records, strict: bool = False) -> ChargeLedger:
    """Apply the five charging rules to every canonical path.

    A path edge lying in C_i or Cbar_i of an endpoint has no rule.  With
    ``strict`` that raises UnchargeableEdge; otherwise the edge is logged in
    ``ledger.unchargeable`` and charged to the cone that contains it.
    """
    ledger = ChargeLedger()
    for v in range(inst.n):
        for k in range(6):
            cone = ConeRef.from_sector(k)
            ledger.constraints[(v, cone)] = inst.c_cone(v, cone)
    for r in records:
        i = r.cone.index
        u, vc = r.source, r.closest
        e = _edge(u, vc)
        ledger.add(Charge(u, ConeRef.neg(i), e, u, r.subcone, "closest"))
        ledger.add(Charge(vc, ConeRef.pos(i), e, u, r.subcone, "closest"))
        s = r.sequence
        for j in range(1, len(s)):
            a, b = s[j - 1], s[j]
            for v, other in ((a, b), (b, a)):
                cone = _path_charge_cone(inst, i, v, other)
                rule = "path"
                if cone is None:
                    if strict:
                        raise UnchargeableEdge(
                            f"path edge ({v}, {other}) of {u} lies in "
                            f"{ConeRef.from_sector(inst.sectors[v][other])} of {v}")
                    ledger.unchargeable.append((r.source, r.subcone, v, other))
                    cone = ConeRef.from_sector(inst.sectors[v][other])
                    rule = "unchargeable"
                ledger.add(Charge(v, cone, _edge(a, b), u, r.subcone, rule))
    return ledger


def post_transformation_charges(ledger: ChargeLedger, configs) -> ChargeLedger:
    """Ledger after the re-charging argument: each doubly charged cone drops one.

    Charges moved between edges at x and y leave their totals unchanged, so
    only the centre cone changes.  Diagnostic only; G6 never reads it.
    """
    out = ChargeLedger(Counter(ledger.charge), dict(ledger.constraints),
                      list(ledger.entries), list(ledger.unchargeable))
    for cfg in configs:
        out.charge[(cfg.center, cfg.cone)] -= 1
    return out


# --- the G6 transformation ---------------------------------------------------

@dataclass(frozen=True)
class Charge2Config:
    """A vertex v in the middle of u's canonical path with neighbours x and y
    in the two negative cones next to C_i of v."""

    center: int
    cone: ConeRef
    path_source: int
    x: int
    y: int
    record: CanonicalPathRecord
    position: int
    resolved_by_recharge: bool


@dataclass(frozen=True)
class TransformationStep:
    """One G9 -> G6 rewrite around ``center``.

    ``x``/``y`` keep the order of the charge-2 configuration.  The near
    neighbour (between the centre and the closest vertex on the path) keeps
    its edge; the far one loses it and gets joined to the near one instead.
    """

    center: int
    cone: ConeRef
    path_source: int
    x: int
    y: int
    added: tuple
    removed_type1: tuple
    kept: tuple
    removed_type2: Optional[tuple] = None
    type2_neighbor: Optional[int] = None

    @property
    def near(self) -> int:
        return self.kept[0] if self.kept[1] == self.center else self.kept[1]

    @property
    def far(self) -> int:
        a, b = self.removed_type1
        return a if b == self.center else b

    @property
    def removed(self) -> list:
        out = [self.removed_type1]
        if self.removed_type2 is not None:
            out.append(self.removed_type2)
        return out


class _RecordIndex:
    def __init__(self, records):
        self.by_source_cone = defaultdict(list)
        for r in records:
            self.by_source_cone[(r.source, r.cone)].append(r)

    def containing(self, source: int, cone: ConeRef, v: int) -> list:
        return [r for r in self.by_source_cone[(source, cone)] if v in r.sequence]

    def is_closest(self, source: int, cone: ConeRef, v: int) -> bool:
        """v is the closest canonical vertex in some subcone of ``cone`` containing it."""
        return any(r.closest == v for r in self.containing(source, cone, v))


def charge2_configurations(inst: Instance, records) -> list:
    idx = _RecordIndex(records)
    out = []
    for r in records:
        i = r.cone.index
        left, right = ConeRef.neg(i - 1).sector, ConeRef.neg(i + 1).sector
        s = r.sequence
        for j in range(1, len(s) - 1):
            v, p, q = s[j], s[j - 1], s[j + 1]
            sp, sq = inst.sectors[v][p], inst.sectors[v][q]
            if {sp, sq} != {left, right}:
                continue
            if inst.c_cone(v, ConeRef.pos(i)):
                continue
            x, y = (p, q) if sp == left else (q, p)
            resolved = (idx.is_closest(v, ConeRef.neg(i - 1), x)
                        or idx.is_closest(v, ConeRef.neg(i + 1), y))
            out.append(Charge2Config(v, ConeRef.pos(i), r.source, x, y, r, j, resolved))
    return out


def find_transformations(inst: Instance, ht: HalfThetaGraph, records) -> list:
    """Transformation steps, all detected against the untouched G9."""
    idx = _RecordIndex(records)
    steps = []
    for cfg in charge2_configurations(inst, records):
        if cfg.resolved_by_recharge:
            continue
        r, j, v, i = cfg.record, cfg.position, cfg.center, cfg.cone.index
        if r.closest_index == j:
            raise InconsistentState(f"centre {v} is the closest vertex of its own configuration")
        near = r.sequence[j - 1] if r.closest_index < j else r.sequence[j + 1]
        far = cfg.y if near == cfg.x else cfg.x
        kept_cone = ConeRef.from_sector(inst.sectors[v][near])
        holders = [rec for rec in idx.containing(v, kept_cone, near) if len(rec.sequence) > 1]
        if len(holders) != 1:
            raise InconsistentState(
                f"vertex {near} sits on {len(holders)} canonical paths of {v} in {kept_cone}")
        seq = holders[0].sequence
        if seq[0] == near:
            w = seq[1]
        elif seq[-1] == near:
            w = seq[-2]
        else:
            raise InconsistentState(f"vertex {near} is not last on the canonical path of {v}")
        type2 = None
        if (inst.sectors[near][w] == ConeRef.neg(i).sector
                and not idx.is_closest(near, ConeRef.neg(i), w)):
            type2 = _edge(near, w)
        steps.append(TransformationStep(
            center=v, cone=cfg.cone, path_source=cfg.path_source, x=cfg.x, y=cfg.y,
            added=_edge(cfg.x, cfg.y), removed_type1=_edge(v, far), kept=_edge(v, near),
            removed_type2=type2, type2_neighbor=w))
    return steps


def build_g6(inst: Instance, ht: HalfThetaGraph, g9: GeoGraph, steps) -> GeoGraph:
    added = {s.added for s in steps}
    removed = {e for s in steps for e in s.removed}
    for e in sorted(added):
        if e in g9.edges:
            raise ConflictDetected(f"added edge {e} already in G9")
        if e in ht.graph.edges:
            raise ConflictDetected(f"added edge {e} already in the half-theta-6 graph")
        if e in removed:
            raise ConflictDetected(f"edge {e} is both added and removed")
    for e in sorted(removed):
        if e not in g9.edges:
            raise ConflictDetected(f"removed edge {e} is not in G9")
    return GeoGraph(inst.n, frozenset((g9.edges | added) - removed))


@dataclass
class DegreeReduction:
    ht: HalfThetaGraph
    g9: GeoGraph
    records: list
    ledger: ChargeLedger
    configs: list
    steps: list
    g6: GeoGraph


def reduce_degree(inst: Instance, ht: HalfThetaGraph) -> DegreeReduction:
    g9, records = build_g9(inst, ht)
    ledger = compute_charges(inst, records)
    configs = charge2_configurations(inst, records)
    steps = find_transformations(inst, ht, records)
    g6 = build_g6(inst, ht, g9, steps)
    return DegreeReduction(ht, g9, records, ledger, configs, steps, g6)

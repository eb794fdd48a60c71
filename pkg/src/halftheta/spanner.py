"""Constrained half-theta-6 graph.

For every positive subcone of every vertex u, connect u to the vertex of
that subcone (boundary included) that sees u and has the smallest
projection on the bisector of the whole cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .cones import ConeRef, Instance, Subcone, SubconeRef, member, projection_key, subcones_of
from .visibility import GeoGraph, visibility_matrix


@dataclass(frozen=True)
class HalfThetaGraph:
    graph: GeoGraph
    # edge -> frozenset of SubconeRef (apex + positive subcone) that chose it
    provenance: dict
    # SubconeRef -> Subcone for every positive subcone that was scanned
    subcones: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def edges(self) -> frozenset:
        return self.graph.edges

    def subcone(self, ref: SubconeRef) -> Subcone:
        return self.subcones[ref]


def closest_visible_in_subcone(inst: Instance, u: int, sc) -> Optional[int]:
    """Closest vertex of positive subcone ``sc`` of ``u`` that sees u, or None."""
    if isinstance(sc, SubconeRef):
        sc = subcones_of(inst, sc.apex, sc.cone)[sc.j]
    if sc.apex != u:
        raise ValueError(f"subcone {sc.ref} does not have apex {u}")
    if not sc.cone.positive:
        raise ValueError("half-theta-6 edges are chosen in positive subcones only")
    vis = visibility_matrix(inst)[u]
    k = sc.cone.sector
    best, best_key = None, None
    for v in range(inst.n):
        if v == u or not vis[v] or not member(inst, sc, v):
            continue
        key = projection_key(inst, u, k, v)
        if best is None or key < best_key:
            best, best_key = v, key
    return best


def build_half_theta6(inst: Instance) -> HalfThetaGraph:
    inst.require_valid()
    prov: dict = {}
    chosen: dict = {}
    for u in range(inst.n):
        for i in range(3):
            for sc in subcones_of(inst, u, ConeRef.pos(i)):
                chosen[sc.ref] = sc
                v = closest_visible_in_subcone(inst, u, sc)
                if v is None:
                    continue
                e = (u, v) if u < v else (v, u)
                prov.setdefault(e, set()).add(sc.ref)
    provenance = {e: frozenset(s) for e, s in sorted(prov.items())}
    return HalfThetaGraph(GeoGraph(inst.n, frozenset(provenance)), provenance, chosen)


def positive_subcones(inst: Instance, u: int) -> list[Subcone]:
    return [sc for i in range(3) for sc in subcones_of(inst, u, ConeRef.pos(i))]

import pathlib

import pytest
from hypothesis import given, settings, strategies as st

from halftheta.cones import ConeRef, Instance, SubconeRef
from halftheta.degree import (CanonicalPathRecord, ConflictDetected, TransformationStep,
                              UnchargeableEdge, build_g6, build_g9, canonical_paths,
                              compute_charges, reduce_degree)
from halftheta.instance_io import generate_instance, load_instance
from halftheta.report import campaign_instance
from halftheta.spanner import build_half_theta6
from halftheta.verify import check_g6_spanning, check_plane

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def test_record_edges():
    r = CanonicalPathRecord(0, SubconeRef(0, ConeRef.neg(0), 0), (11, 12, 13, 14), 1)
    assert r.closest == 12
    assert r.g9_edges() == {(11, 12), (12, 13), (13, 14), (0, 12)}


def test_short_paths_keep_everything():
    inst = Instance.build([(0, 0), (1, 2), (-1, 4)])
    ht = build_half_theta6(inst)
    g9, records = build_g9(inst, ht)
    assert all(len(r.sequence) == 1 for r in records)
    assert g9.edges == ht.edges


def test_single_edge_charges():
    inst = Instance.build([(0, 0), (1, 2)])
    ht = build_half_theta6(inst)
    _, records = build_g9(inst, ht)
    ledger = compute_charges(inst, records)
    assert [(r.source, r.sequence) for r in records] == [(1, (0,))]
    assert ledger.charge == {(1, ConeRef.neg(0)): 1, (0, ConeRef.pos(0)): 1}


def test_between_two_constraints():
    pts = [(0, 0), (-3, 10), (3, 9), (0, 5), (2, -3), (-1, 12), (5, 6)]
    # vertex 3 is closest to 0 between the constraints 0-1 and 0-2
    for cons, want in (([(0, 1), (0, 2)], (0,)), ([], (0, 4))):
        inst = Instance.build(pts, cons)
        recs = canonical_paths(inst, build_half_theta6(inst))
        rec = [r for r in recs if r.source == 3 and r.cone == ConeRef.neg(0)]
        assert [r.sequence for r in rec] == [want]


def test_unchargeable_in_strict_mode():
    inst = Instance.build([(0, 0), (1, 2), (7, 20)])
    # 0 and 1 share cone index 0 in both directions: no rule applies
    bogus = CanonicalPathRecord(2, SubconeRef(2, ConeRef.neg(0), 0), (0, 1), 1)
    with pytest.raises(UnchargeableEdge):
        compute_charges(inst, [bogus], strict=True)
    ledger = compute_charges(inst, [bogus])
    assert ledger.unchargeable


def test_charge_two_configurations():
    inst = campaign_instance(0)
    red = reduce_degree(inst, build_half_theta6(inst))
    assert red.configs
    for cfg in red.configs:
        i = cfg.cone.index
        cones = {ConeRef.from_sector(inst.sectors[cfg.center][z]) for z in (cfg.x, cfg.y)}
        assert cones == {ConeRef.neg(i + 1), ConeRef.neg(i - 1)}
        assert red.ledger.charge[(cfg.center, cfg.cone)] == inst.c_cone(cfg.center, cfg.cone) + 2
    stepped = {(s.center, s.cone) for s in red.steps}
    for cfg in red.configs:
        if cfg.resolved_by_recharge:
            assert (cfg.center, cfg.cone) not in stepped


def test_type2_fixture():
    inst = load_instance(FIXTURES / "type2_step.json")
    ht = build_half_theta6(inst)
    red = reduce_degree(inst, ht)
    full = [s for s in red.steps if s.removed_type2 is not None]
    assert full
    for s in full:
        assert s.added in red.g6.edges and s.kept in red.g6.edges
        assert s.removed_type1 not in red.g6.edges
        assert s.removed_type2 not in red.g6.edges
        assert red.g6.degree(s.center) < red.g9.degree(s.center)
    assert check_plane(red.g6, inst).passed
    assert check_g6_spanning(inst, ht, red.g6).passed


def test_no_steps_means_g6_is_g9():
    inst = generate_instance(3, 15)
    red = reduce_degree(inst, build_half_theta6(inst))
    assert not red.steps and red.g6 == red.g9


def test_conflicting_step_rejected():
    inst = load_instance(FIXTURES / "type2_step.json")
    ht = build_half_theta6(inst)
    red = reduce_degree(inst, ht)
    s = red.steps[0]
    clash = TransformationStep(s.center, s.cone, s.path_source, s.x, s.y,
                               added=s.kept, removed_type1=s.removed_type1, kept=s.kept)
    with pytest.raises(ConflictDetected):
        build_g6(inst, ht, red.g9, [clash])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 30), st.integers(0, 30))
def test_degree_reduction_invariants(seed, n, budget):
    inst = generate_instance(seed, n, budget, bbox=(200, 200))
    ht = build_half_theta6(inst)
    red = reduce_degree(inst, ht)
    assert red.g9.issubgraph(ht.graph)
    assert not red.ledger.unchargeable
    assert not red.ledger.violations()
    for v in range(n):
        assert red.ledger.total(v) >= red.g9.degree(v)
        assert red.g9.degree(v) <= inst.c(v) + 9
        assert red.g6.degree(v) <= inst.c(v) + 6
    for r in red.records:
        i = r.cone.index
        for a, b in zip(r.sequence, r.sequence[1:]):
            assert ConeRef.from_sector(inst.sectors[a][b]).index != i

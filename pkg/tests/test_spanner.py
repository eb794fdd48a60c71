import pathlib
import random

import pytest

import oracles
from halftheta.cones import ConeRef, Instance, InvalidInstance, subcones_of
from halftheta.instance_io import generate_instance, load_instance
from halftheta.spanner import build_half_theta6, closest_visible_in_subcone
from halftheta.verify import check_plane, inner_faces

FIXTURES = pathlib.Path(__file__).parent / "fixtures"
C0 = ConeRef.pos(0)


def test_three_point_example():
    inst = Instance.build([(0, 0), (1, 2), (-1, 4)])
    ht = build_half_theta6(inst)
    assert ht.edges == {(0, 1), (1, 2)}
    # (0,0) picks (1,2) in C0; (-1,4) picks (1,2) in C2
    assert {str(r.cone) for r in ht.provenance[(1, 2)]} == {"C2"}
    assert {r.apex for r in ht.provenance[(0, 1)]} == {0}


def test_closest_prefers_smaller_projection():
    inst = Instance.build([(0, 0), (1, 2), (-1, 3)])
    sc = subcones_of(inst, 0, C0)[0]
    assert closest_visible_in_subcone(inst, 0, sc) == 1


def test_blocked_candidate_skipped():
    # (1,3) sits behind the constraint (-1,4)-(2,2); its endpoint (-1,4) is next
    inst = Instance.build([(0, 0), (1, 3), (-1, 4), (2, 2)], [(2, 3)])
    assert inst.validation.ok
    sc = subcones_of(inst, 0, C0)[0]
    assert closest_visible_in_subcone(inst, 0, sc) == 2
    free = Instance.build([(0, 0), (1, 3), (-1, 4), (2, 2)])
    assert closest_visible_in_subcone(free, 0, subcones_of(free, 0, C0)[0]) == 1


def test_empty_subcone():
    inst = Instance.build([(0, 0), (2, 1)])
    assert closest_visible_in_subcone(inst, 0, subcones_of(inst, 0, C0)[0]) is None


def test_two_points():
    assert build_half_theta6(Instance.build([(0, 0), (1, 2)])).edges == {(0, 1)}


def test_rejects_invalid():
    with pytest.raises(InvalidInstance):
        build_half_theta6(Instance.build([(0, 0), (1, 1), (2, 2)]))


def test_matches_definition_oracle_with_constraints():
    rng = random.Random(11)
    for seed in range(120):
        n = rng.randint(3, 12)
        inst = generate_instance(seed, n, rng.randint(0, n), bbox=(50, 50))
        want = oracles.half_theta6_edges(inst.ipts, inst.constraints)
        assert build_half_theta6(inst).edges == want, seed


def test_pentagon_face_fixture():
    inst = load_instance(FIXTURES / "pentagon_face.json")
    ht = build_half_theta6(inst)
    assert check_plane(ht.graph, inst).passed
    big = [f for f in inner_faces(ht.graph, inst) if len(f) >= 4 and len(set(f)) == len(f)]
    assert big

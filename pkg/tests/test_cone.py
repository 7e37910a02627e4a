import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nefcone.chambers import CY322
from nefcone.cone import (
    Membership,
    Relation,
    cone_from_facets,
    cone_from_rays,
    contains,
    dual,
    intersect_cones,
    member,
    relate,
)
from nefcone.errors import DimensionMismatch
from oracles import fm_member, fm_project

E3 = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
CH1 = [(1, 0, 0), (0, 1, 0), (3, 2, -1)]


def random_rays(rng, rank, count, box=3):
    return [tuple(rng.randint(-box, box) for _ in range(rank)) for _ in range(count)]


def test_octant_facets():
    c = cone_from_rays(3, E3)
    assert set(c.facets) == set(E3)
    assert c.lineality == ()


def test_cy322_chamber_facets():
    c = cone_from_rays(3, CH1)
    assert set(c.facets) == {(0, 0, -1), (0, 1, 2), (1, 0, 3)}


def test_cy322_chamber_facets_against_fm():
    ineqs, eqs = fm_project(CH1, 3)
    assert not eqs
    prim = {tuple(int(x) for x in r) for r in ineqs}
    assert set(cone_from_rays(3, CH1).facets) == prim


def test_half_plane_from_rays():
    c = cone_from_rays(2, [(1, 0), (-1, 0), (0, 1)])
    assert c.facets == ((0, 1),)
    assert c.lineality == ((1, 0),)
    assert c.rays == ((0, 1),)


def test_empty_facets_whole_plane():
    c = cone_from_facets(2, [])
    assert c.rays == ()
    assert len(c.lineality) == 2


def test_line_from_facets():
    c = cone_from_facets(2, [(1, 0), (-1, 0)])
    assert c.rays == ()
    assert c.lineality == ((0, 1),)


def test_octant_round_trip():
    c = cone_from_facets(3, E3)
    assert set(c.rays) == set(E3)


def test_membership_examples():
    octant = cone_from_rays(3, E3)
    assert member(octant, (1, 1, 1), Membership.INTERIOR)
    ch = cone_from_rays(3, CH1)
    assert member(ch, (3, 2, -1), Membership.CLOSED)
    assert not member(ch, (3, 2, -1), Membership.INTERIOR)
    assert not member(ch, (0, 0, 1), Membership.CLOSED)


def test_membership_rank_check():
    with pytest.raises(DimensionMismatch):
        member(cone_from_rays(3, E3), (1, 1))


def test_relative_vs_full_interior():
    ray = cone_from_rays(2, [(1, 1)])
    assert member(ray, (2, 2), Membership.INTERIOR)
    assert not member(ray, (2, 2), Membership.FULL_INTERIOR)


def test_dual_examples():
    octant = cone_from_rays(3, E3)
    assert relate(dual(octant), octant) is Relation.EQUAL
    half = cone_from_facets(2, [(1, 0)])
    d = dual(half)
    assert d.rays == ((1, 0),) and d.lineality == ()


def test_dual_involution_random():
    rng = random.Random(7)
    for _ in range(100):
        rank = rng.randint(1, 4)
        c = cone_from_rays(rank, random_rays(rng, rank, rng.randint(0, 5)))
        assert dual(dual(c)) == c


def test_intersection_examples():
    inst = CY322()
    wall = intersect_cones(inst.chamber(0), inst.chamber(1))
    assert set(wall.rays) == {(1, 0, 0), (0, 1, 0)}
    octant = cone_from_rays(3, E3)
    face = intersect_cones(octant, cone_from_facets(3, [(-1, 0, 0)]))
    assert set(face.rays) == {(0, 1, 0), (0, 0, 1)}
    assert face.dim == 2


def test_relate_examples():
    inst = CY322()
    c = inst.chamber(0)
    assert relate(c, c) is Relation.EQUAL
    assert relate(inst.chamber(0), inst.chamber(1)) is Relation.SHARES_FACET
    assert relate(inst.chamber(0), inst.chamber(2)) is Relation.INTERIOR_DISJOINT
    octant = cone_from_rays(3, E3)
    face = cone_from_rays(3, [(0, 1, 0), (0, 0, 1)])
    assert relate(face, octant) is Relation.PROPER_FACE_OF
    assert relate(octant, face) is Relation.PROPER_FACE_OF
    other = cone_from_rays(3, [(1, 1, 0), (0, 0, 1), (-1, 2, 0)])
    assert relate(octant, other) is Relation.OTHER


def test_fm_membership_agreement():
    rng = random.Random(11)
    for _ in range(50):
        rank = rng.randint(1, 4)
        rays = random_rays(rng, rank, rng.randint(1, 5))
        c = cone_from_rays(rank, rays)
        for _ in range(10):
            z = tuple(rng.randint(-4, 4) for _ in range(rank))
            assert member(c, z) == fm_member(rays, z)
        for r in rays:
            assert member(c, r)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.tuples(
    st.just(r), st.lists(st.tuples(*[st.integers(-3, 3)] * r), min_size=0, max_size=5))))
def test_round_trip_property(data):
    rank, rays = data
    c = cone_from_rays(rank, rays)
    back = cone_from_facets(rank, c.facets, c.equations)
    assert relate(c, back) is Relation.EQUAL
    assert back == c


def test_fraction_input_normalized():
    c = cone_from_rays(2, [(Fraction(1, 2), 0), (0, Fraction(3, 7))])
    assert set(c.rays) == {(1, 0), (0, 1)}


def test_deterministic_output_order():
    rays = [(0, 1, 0), (3, 2, -1), (1, 0, 0)]
    a = cone_from_rays(3, rays)
    b = cone_from_rays(3, list(reversed(rays)))
    assert a == b and a.facets == b.facets and a.rays == b.rays


def test_contains():
    octant = cone_from_rays(3, E3)
    assert contains(octant, cone_from_rays(3, [(1, 1, 0)]))
    assert not contains(cone_from_rays(3, [(1, 1, 0)]), octant)

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nefcone import abelian, group
from nefcone.chambers import CY322, I2Versal
from nefcone.cone import member
from nefcone.errors import InvalidParameters, NotPositiveDefinite, RankMismatch
from nefcone.lattice import LatticeAutomorphism
from oracles import GL2_GENERATORS, congruence, forms_within_words


def test_empty_generators_orbit():
    gens = group.GeneratorSet([])
    assert group.orbit_bounded(gens, (1, 2), 5) == {(1, 2)}


def test_cy322_index_orbit():
    inst = CY322()
    gens = group.GeneratorSet(inst.group_generators)
    orbit = group.orbit_bounded(gens, 0, 3, act=inst.act_on_index)
    assert orbit == set(range(-3, 4))


def test_abelian_congruence_orbit():
    shear = abelian.generator_shear(2)
    gens = group.GeneratorSet([LatticeAutomorphism(shear)])

    def act(g, m):
        return abelian.congruence_action(g.matrix, m)

    orbit = group.orbit_bounded(gens, ((1, 0), (0, 1)), 1, act=act)
    assert orbit == {((1, 0), (0, 1)), ((1, -1), (-1, 2)), ((1, 1), (1, 2))}


def test_ball_shortest_words_and_evaluate():
    inst = CY322()
    gens = group.GeneratorSet(inst.group_generators)
    ball = gens.ball(4)
    mats = [g.matrix for g, _ in ball]
    assert len(mats) == len(set(mats))
    lengths = [len(w) for _, w in ball]
    assert lengths == sorted(lengths)
    for g, w in ball:
        assert gens.evaluate(w).matrix == g.matrix
    # infinite dihedral group: 1 + 2k elements of word length <= k
    assert len(ball) == 9


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        group.GeneratorSet([LatticeAutomorphism(((1, 0), (0, 1))), LatticeAutomorphism(((1,),))])


def test_i2_fundamental_domain():
    inst = I2Versal()
    gens = group.GeneratorSet(inst.group_generators)
    pts = [(x, y) for x in range(1, 4) for y in range(-8, 9)]
    rep = group.verify_fundamental_domain(gens, inst.chamber(0), region=lambda p: inst.degree(p) > 0,
                                          word_bound=9, points=pts)
    assert rep.fully_covered and rep.samples_covered == len(pts)
    assert rep.overlap_witnesses == []


def test_cy322_fundamental_domain():
    inst = CY322()
    gens = group.GeneratorSet(inst.group_generators)
    rep = group.verify_fundamental_domain(gens, inst.chamber(0), region=inst.is_movable,
                                          samples=120, word_bound=8, seed=3)
    assert rep.fully_covered and rep.samples_na == 0
    assert rep.overlap_witnesses == []
    # replay soundness: the reported word really moves the sample into the domain
    for s in rep.samples:
        g = gens.evaluate(s.word)
        assert member(inst.chamber(0), g.apply_vector(s.point))


def test_cy322_two_chamber_domain_overlaps():
    inst = CY322()
    gens = group.GeneratorSet(inst.group_generators, names=["g1", "g2"])
    rep = group.verify_fundamental_domain(gens, [inst.chamber(0), inst.chamber(1)],
                                          region=inst.is_movable, samples=20, word_bound=2, seed=1)
    assert rep.overlap_witnesses
    assert any(w.word2 == ("g1",) for w in rep.overlap_witnesses)
    for w in rep.overlap_witnesses:
        g = gens.evaluate(w.word2)
        i, j = w.pieces
        pieces = [inst.chamber(0), inst.chamber(1)]
        image = pieces[j].transform(g.matrix)
        assert member(pieces[i], w.point) and member(image, w.point)


def test_uncovered_at_bound_reported():
    inst = CY322()
    gens = group.GeneratorSet(inst.group_generators)
    z = tuple(p + q for p, q in zip(inst.chain_ray(30), inst.chain_ray(31)))
    rep = group.verify_fundamental_domain(gens, inst.chamber(0), region=inst.is_movable,
                                          word_bound=3, points=[z])
    assert rep.samples_uncovered == 1 and not rep.fully_covered
    assert rep.samples[0].verdict == "uncovered-at-bound"


@pytest.mark.parametrize("gram, reduced, u", [
    ([[2, 1], [1, 2]], ((2, 1), (1, 2)), ((1, 0), (0, 1))),
    ([[1, 0], [0, 1]], ((1, 0), (0, 1)), ((1, 0), (0, 1))),
    ([[5, 4], [4, 5]], ((2, 1), (1, 5)), None),
])
def test_reduction_examples(gram, reduced, u):
    red, trans = group.minkowski_reduce(gram)
    assert red == reduced
    if u is not None:
        assert trans == u
    assert congruence(trans, tuple(map(tuple, gram))) == red


def test_reduction_5445_against_search():
    forms = forms_within_words(((5, 4), (4, 5)), 6)
    reduced_forms = {f for f in forms if 0 <= 2 * f[0][1] <= f[0][0] <= f[1][1]}
    assert reduced_forms == {((2, 1), (1, 5))}


def test_reduction_errors():
    with pytest.raises(NotPositiveDefinite):
        group.minkowski_reduce([[1, 2], [2, 1]])
    with pytest.raises(InvalidParameters):
        group.minkowski_reduce([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def pd_forms():
    return st.tuples(st.integers(1, 40), st.integers(-40, 40), st.integers(1, 40)).filter(
        lambda t: t[0] * t[2] - t[1] * t[1] > 0).map(lambda t: ((t[0], t[1]), (t[1], t[2])))


@settings(max_examples=100, deadline=None)
@given(pd_forms())
def test_reduction_properties(g):
    red, u = group.minkowski_reduce(g)
    assert group.is_reduced(red)
    assert congruence(u, g) == red
    assert abs(u[0][0] * u[1][1] - u[0][1] * u[1][0]) == 1
    assert red[0][0] * red[1][1] - red[0][1] ** 2 == g[0][0] * g[1][1] - g[0][1] ** 2
    assert group.minkowski_reduce(red)[0] == red


@settings(max_examples=60, deadline=None)
@given(pd_forms(), st.lists(st.sampled_from(GL2_GENERATORS), max_size=4))
def test_reduction_class_function(g, word):
    h = g
    for u in word:
        h = congruence(u, h)
    assert group.minkowski_reduce(h)[0] == group.minkowski_reduce(g)[0]


def test_sample_points_reproducible():
    a = group.sample_points(3, 20, seed=5)
    b = group.sample_points(3, 20, seed=5)
    assert a == b
    rng = random.Random(5)
    assert a[0] == tuple(rng.randint(-10, 10) for _ in range(3))

from fractions import Fraction
from itertools import permutations, product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from nefcone import abelian
from nefcone.chambers import CY322
from nefcone.errors import (
    DuplicateTensorEntry,
    ForeignClass,
    IndexOutOfRange,
    NotUnimodular,
    OptionalClassWrongRank,
    WrongArity,
)
from nefcone.lattice import (
    LatticeAutomorphism,
    apply_automorphism,
    drop_component,
    fiber_circuit_gram,
    is_negative_definite,
    lattice_from_gram,
    make_lattice,
)
from oracles import quadratic_signs

small = st.integers(-5, 5)


def test_empty_tensor_is_zero_form():
    lat = make_lattice(3, 3, [])
    for idx in product(range(3), repeat=3):
        assert lat.intersect([lat.basis(i) for i in idx]) == 0


def test_abelian_two_has_rank_three():
    assert abelian.build_abelian(2).lattice.rank == 3


@pytest.mark.parametrize("kwargs, exc", [
    (dict(rank=0, degree=1), IndexOutOfRange),
    (dict(rank=2, degree=2, tensor_entries=[((0, 2), 1)]), IndexOutOfRange),
    (dict(rank=2, degree=2, tensor_entries=[((0,), 1)]), IndexOutOfRange),
    (dict(rank=2, degree=2, tensor_entries=[((0, 1), 1), ((1, 0), 1)]), DuplicateTensorEntry),
    (dict(rank=2, degree=2, ample_class=[1, 0, 0]), OptionalClassWrongRank),
])
def test_make_lattice_rejects(kwargs, exc):
    with pytest.raises(exc):
        make_lattice(**kwargs)


def test_intersect_abelian_two():
    ab = abelian.build_abelian(2)
    lat = ab.lattice
    assert lat.intersect([ab.D(1), ab.D(2)]) == 1
    assert lat.intersect([ab.D(1), ab.D(1)]) == 0
    assert lat.intersect([ab.F(1, 2), ab.F(1, 2)]) == -2


def test_intersect_arity_and_foreign():
    lat = lattice_from_gram([[0, 1], [1, 0]])
    other = lattice_from_gram([[0, 1], [1, 0]])
    with pytest.raises(WrongArity):
        lat.intersect([lat.basis(0)])
    with pytest.raises(ForeignClass):
        lat.intersect([lat.basis(0), other.basis(1)])


def test_parse_class_labels():
    ab = abelian.build_abelian(2)
    assert ab.lattice.parse_class("D1+D2-E12") == ab.F(1, 2)
    assert ab.lattice.parse_class("1,1,-1") == ab.F(1, 2)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_intersection_symmetric(vs):
    lat = CY322().lattice
    cs = [lat.cls(v) for v in vs]
    ref = lat.intersect(cs)
    for p in permutations(cs):
        assert lat.intersect(list(p)) == ref


@settings(max_examples=60, deadline=None)
@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3),
       st.lists(small, min_size=3, max_size=3), small)
def test_intersection_multilinear(x, y, w, k):
    lat = CY322().lattice
    x, y, w = lat.cls(x), lat.cls(y), lat.cls(w)
    lhs = lat.intersect([x + k * y, w, w])
    assert lhs == lat.intersect([x, w, w]) + k * lat.intersect([y, w, w])


def test_identity_automorphism():
    lat = CY322().lattice
    z = lat.cls([4, -1, 7])
    assert apply_automorphism(LatticeAutomorphism(((1, 0, 0), (0, 1, 0), (0, 0, 1))), z) == z


def test_gamma1_on_c_and_involution():
    inst = CY322()
    g1 = inst.group_generators[0]
    c = inst.lattice.cls([0, 0, 1])
    img = apply_automorphism(g1, c)
    assert img.coords == (3, 2, -1)
    assert apply_automorphism(g1, img) == c


def test_case_two_generator_on_e12():
    ab = abelian.build_abelian(2)
    theta = abelian.induced_automorphism(ab, abelian.generator_sign(2))
    assert apply_automorphism(theta, ab.E(1, 2)) == 2 * ab.D(1) + 2 * ab.D(2) - ab.E(1, 2)


def test_automorphism_requires_unimodular():
    with pytest.raises(NotUnimodular):
        LatticeAutomorphism(((2, 0), (0, 1)))


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3))
def test_reflection_preserves_form(x, y):
    lat = lattice_from_gram([[2, 0, 0], [0, -2, 0], [0, 0, -2]])
    refl = LatticeAutomorphism(((1, 0, 0), (0, -1, 0), (0, 0, 1)))
    assert refl.preserves_form(lat)
    a, b = lat.cls(x), lat.cls(y)
    assert lat.intersect([apply_automorphism(refl, a), apply_automorphism(refl, b)]) == lat.intersect([a, b])


@pytest.mark.parametrize("gram, expected", [
    ([[-2, 1], [1, -2]], True),
    ([[-2, 2], [2, -2]], False),
    ([[0]], False),
])
def test_negative_definite_examples(gram, expected):
    assert is_negative_definite(gram) is expected


def test_circuit_grams():
    assert fiber_circuit_gram(2) == ((-2, 2), (2, -2))
    full = fiber_circuit_gram(3)
    assert not is_negative_definite(full)
    assert is_negative_definite(drop_component(full))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda n: st.lists(small, min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2).map(lambda e: (n, e))))
def test_negative_definite_matches_brute_force(data):
    n, entries = data
    m = [[0] * n for _ in range(n)]
    it = iter(entries)
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = next(it)
    expected = bool(sympy.Matrix(m).is_negative_definite)
    assert is_negative_definite(m) is expected
    if quadratic_signs(m, 3) != {-1}:
        assert not expected


def test_fraction_entries_exact():
    lat = lattice_from_gram([["1/2", 0], [0, 3]])
    z = lat.cls([2, 1])
    assert lat.intersect([z, z]) == Fraction(5)

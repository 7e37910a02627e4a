import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nefcone import k3
from nefcone.cone import Membership, cone_from_facets, member
from nefcone.errors import NotARoot, NotInPositiveCone, StepLimitExceeded

HYP = [[0, 1], [1, 0]]
DIAG = [[2, 0, 0], [0, -2, 0], [0, 0, -2]]


def hyperbolic():
    # h = e+f, delta = e-f
    return k3.k3_lattice(HYP, [1, 1], [[1, -1]])


def rank3():
    return k3.k3_lattice(DIAG, [1, 0, 0], [[0, 1, 0], [0, 0, 1]])


def gram_dot(g, x, y):
    return sum(g[i][j] * x[i] * y[j] for i in range(len(x)) for j in range(len(y)))


def bfs_min_walk(gram, roots, z, depth):
    """Shortest reflection word (any order) reaching z.r >= 0 for all roots."""
    frontier = [tuple(z)]
    seen = {tuple(z)}
    for length in range(depth + 1):
        nxt = []
        for v in frontier:
            if all(gram_dot(gram, v, r) >= 0 for r in roots):
                return length
            for r in roots:
                c = gram_dot(gram, v, r)
                w = tuple(a + c * b for a, b in zip(v, r))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return None


def test_reflect_examples():
    lat = hyperbolic()
    z = lat.cls([2, 1])
    assert k3.reflect(lat, z, [1, -1]).coords == (1, 2)
    fixed = lat.cls([1, 1])
    assert k3.reflect(lat, fixed, [1, -1]) == fixed
    with pytest.raises(NotARoot):
        k3.reflect(lat, z, [1, 0])


@settings(max_examples=50, deadline=None)
@given(st.integers(-20, 20), st.integers(-20, 20))
def test_reflection_involution_and_isometry(a, b):
    lat = hyperbolic()
    z = lat.cls([a, b])
    w = k3.reflect(lat, z, [1, -1])
    assert k3.reflect(lat, w, [1, -1]) == z
    assert lat.dot(w, w) == lat.dot(z, z)


def test_reflection_matrix_preserves_form():
    lat = rank3()
    for r in lat.roots:
        assert k3.reflection_matrix(lat, r).preserves_form(lat.lattice)


def test_walk_examples():
    lat = hyperbolic()
    w = k3.to_nef_chamber(lat, lat.cls([2, 1]))
    assert w.end.coords == (1, 2)
    assert [r.coords for r in w.word] == [(1, -1)]
    nef = lat.cls([1, 3])
    w = k3.to_nef_chamber(lat, nef)
    assert w.end == nef and w.word == []


def test_walk_rank3_example_matches_bfs():
    lat = rank3()
    z = lat.cls([2, 1, 1])
    w = k3.to_nef_chamber(lat, z)
    assert all(lat.dot(w.end, r) >= 0 for r in lat.roots)
    assert len(w.word) <= 2
    assert bfs_min_walk(DIAG, [(0, 1, 0), (0, 0, 1)], (2, 1, 1), 4) == len(w.word)


def test_walk_errors():
    lat = hyperbolic()
    with pytest.raises(NotInPositiveCone):
        k3.to_nef_chamber(lat, lat.cls([-1, -1]))
    with pytest.raises(NotInPositiveCone):
        k3.to_nef_chamber(lat, lat.cls([1, 0]))
    with pytest.raises(StepLimitExceeded):
        k3.to_nef_chamber(lat, lat.cls([5, 1]), max_steps=0)


def test_walk_random_rank3_matches_bfs_length():
    lat = rank3()
    rng = random.Random(21)
    tried = 0
    while tried < 60:
        z = [rng.randint(1, 12), rng.randint(-6, 6), rng.randint(-6, 6)]
        zc = lat.cls(z)
        if not k3.in_positive_cone(lat, zc):
            continue
        tried += 1
        w = k3.to_nef_chamber(lat, zc)
        assert w.replay(lat) == w.end
        assert bfs_min_walk(DIAG, [(0, 1, 0), (0, 0, 1)], tuple(z), 4) == len(w.word)


def test_classify_examples():
    lat = k3.k3_lattice([[2, 1], [1, -2]], [1, 0], [[0, 1]])
    h, c = lat.cls([1, 0]), lat.cls([0, 1])
    r = k3.classify_k3(lat, h)
    assert r.nef and r.big
    r = k3.classify_k3(lat, c)
    assert not r.nef
    cert = r.effective_certificate
    assert cert.positive_part.is_zero() and cert.coefficients == (1,)
    assert cert.total(lat) == c
    r = k3.classify_k3(lat, -h)
    assert not r.nef and not r.big and r.effective_certificate is None


def test_nef_matches_cone_from_facets():
    # z = x e + y f has z.(e-f) = y - x; with x, y >= 0 this is the nef chamber
    lat = hyperbolic()
    nef_cone = cone_from_facets(2, [(0, 1), (1, 0), (-1, 1)])
    assert set(nef_cone.rays) == {(0, 1), (1, 1)}
    for x in range(-6, 7):
        for y in range(-6, 7):
            z = lat.cls([x, y])
            assert k3.is_nef(lat, z) == member(nef_cone, (x, y), Membership.CLOSED)

"""Rational polyhedral cones in double description.

A :class:`RationalCone` always carries both descriptions in canonical form:

* ``rays`` and ``lineality`` generate the cone,
* ``facets`` (inequalities ``f . x >= 0``) and ``equations`` (``e . x = 0``)
  cut it out.

``equations`` spans the orthogonal complement of the cone's linear span, so
it is empty exactly when the cone is full-dimensional. Rays are taken
orthogonal to the lineality space and facets orthogonal to the equation
space; all vectors are primitive integer tuples and every list is sorted.
With that normalization, two cones are equal iff their fields are equal.

Conversion between the descriptions is the incremental double description
method with an algebraic (rank) adjacency test, carried out in integer
arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .errors import DimensionMismatch


class Membership(enum.Enum):
    CLOSED = "closed"
    #: relative interior; for a full-dimensional cone this is the interior
    INTERIOR = "interior"
    #: interior in the ambient space (always False for lower-dimensional cones)
    FULL_INTERIOR = "full_interior"


class Relation(enum.Enum):
    EQUAL = "Equal"
    PROPER_FACE_OF = "ProperFaceOf"
    SHARES_FACET = "SharesFacet"
    INTERIOR_DISJOINT = "InteriorDisjoint"
    OTHER = "Other"


@dataclass(frozen=True)
class RationalCone:
    rank: int
    rays: tuple
    facets: tuple
    lineality: tuple
    equations: tuple

    @property
    def dim(self) -> int:
        return self.rank - len(self.equations)

    @property
    def is_pointed(self) -> bool:
        return not self.lineality

    @property
    def is_full_dimensional(self) -> bool:
        return not self.equations

    def is_zero(self) -> bool:
        return not self.rays and not self.lineality

    def interior_point(self) -> tuple:
        """A point of the relative interior (the sum of the rays)."""
        p = [0] * self.rank
        for r in self.rays:
            for i, x in enumerate(r):
                p[i] += x
        return tuple(p)

    def transform(self, matrix: Sequence[Sequence]) -> "RationalCone":
        """Image under an invertible linear map acting on column vectors."""
        if len(matrix) != self.rank:
            raise DimensionMismatch(f"{len(matrix)}x{len(matrix)} map on a rank-{self.rank} cone")
        return cone_from_rays(self.rank, [linalg.matvec(matrix, r) for r in self.rays],
                              lineality=[linalg.matvec(matrix, v) for v in self.lineality])

    def __repr__(self):
        return (f"RationalCone(rank={self.rank}, dim={self.dim}, rays={list(self.rays)}, "
                f"facets={list(self.facets)}, lineality={list(self.lineality)}, "
                f"equations={list(self.equations)})")


def _check_vectors(rank, vectors, what):
    out = []
    for v in vectors:
        if len(v) != rank:
            raise DimensionMismatch(f"{what} vector {tuple(v)} has length {len(v)}, expected {rank}")
        out.append(tuple(linalg.to_fraction(x) for x in v))
    return out


def _pointed_dd(rows: list[tuple], k: int) -> list[tuple]:
    """Extreme rays of the pointed cone ``{t in Q^k : row . t >= 0}``.

    ``rows`` are integer vectors whose matrix has full column rank ``k``.
    """
    basis_idx = []
    basis_rows = []
    for i, r in enumerate(rows):
        if linalg.rank(basis_rows + [r], k) > len(basis_rows):
            basis_idx.append(i)
            basis_rows.append(r)
            if len(basis_rows) == k:
                break
    inv = linalg.inverse(basis_rows)
    # column j of the inverse is tight on every basis row except j
    rays = [linalg.primitive([inv[i][j] for i in range(k)]) for j in range(k)]
    processed = list(basis_idx)
    zeros = [frozenset(basis_idx[i] for i in range(k) if i != j) for j in range(k)]

    for i, row in enumerate(rows):
        if i in basis_idx:
            continue
        vals = [linalg.dot(row, r) for r in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        zer = [j for j, v in enumerate(vals) if v == 0]
        new_rays = []
        new_zeros = []
        for j in pos:
            new_rays.append(rays[j])
            new_zeros.append(zeros[j])
        for j in zer:
            new_rays.append(rays[j])
            new_zeros.append(zeros[j] | {i})
        for p in pos:
            for n in neg:
                common = zeros[p] & zeros[n]
                if len(common) < k - 2:
                    continue
                if k >= 2 and linalg.rank([rows[c] for c in common], k) != k - 2:
                    continue
                r = linalg.primitive([vals[p] * a - vals[n] * b for a, b in zip(rays[n], rays[p])])
                new_rays.append(r)
                new_zeros.append(common | {i})
        rays, zeros = new_rays, new_zeros
        processed.append(i)
    return rays


def _h_to_v(rank: int, ineqs: list[tuple], eqs: list[tuple]):
    """Generators of ``{y : a.y >= 0 (a in ineqs), e.y = 0 (e in eqs)}``.

    Returns ``(rays, lineality)``: canonical primitive integer vectors, rays
    orthogonal to the lineality space.
    """
    lin = linalg.nullspace(list(ineqs) + list(eqs), rank)
    lineality = linalg.canonical_basis(lin, rank)
    space = linalg.nullspace(list(eqs) + lineality, rank)
    k = len(space)
    if k == 0:
        return [], lineality
    rows = []
    seen = set()
    for a in ineqs:
        r = linalg.primitive([linalg.dot(a, u) for u in space])
        if any(r) and r not in seen:
            seen.add(r)
            rows.append(r)
    if len(rows) < k:
        # cannot happen for a pointed section unless the cone is {0}
        return [], lineality
    t_rays = _pointed_dd(rows, k)
    rays = set()
    for t in t_rays:
        y = [sum(t[j] * space[j][i] for j in range(k)) for i in range(rank)]
        rays.add(linalg.primitive(y))
    return sorted(rays), lineality


def _build(rank, facets, equations) -> RationalCone:
    rays, lineality = _h_to_v(rank, facets, equations)
    gens = [tuple(r) for r in rays]
    # the dual cone's generators are the canonical inequalities
    cf, ce = _h_to_v(rank, gens, list(lineality))
    return RationalCone(rank, tuple(rays), tuple(cf), tuple(lineality), tuple(ce))


def cone_from_rays(rank: int, rays: Sequence[Sequence], lineality: Sequence[Sequence] = ()) -> RationalCone:
    """Cone generated by ``rays`` (plus the linear span of ``lineality``)."""
    if rank < 1:
        raise DimensionMismatch("ambient rank must be positive")
    rays = _check_vectors(rank, rays, "ray")
    lin = _check_vectors(rank, lineality, "lineality")
    facets, equations = _h_to_v(rank, [linalg.primitive(r) for r in rays if any(r)],
                                [linalg.primitive(v) for v in lin if any(v)])
    return _build(rank, facets, equations)


def cone_from_facets(rank: int, facets: Sequence[Sequence], equations: Sequence[Sequence] = ()) -> RationalCone:
    """Cone ``{x : f.x >= 0 for f in facets, e.x = 0 for e in equations}``."""
    if rank < 1:
        raise DimensionMismatch("ambient rank must be positive")
    facets = _check_vectors(rank, facets, "facet")
    eqs = _check_vectors(rank, equations, "equation")
    return _build(rank, [linalg.primitive(f) for f in facets if any(f)],
                  [linalg.primitive(e) for e in eqs if any(e)])


def _check_point(cone, z):
    if len(z) != cone.rank:
        raise DimensionMismatch(f"point of length {len(z)} for a rank-{cone.rank} cone")


def member(cone: RationalCone, z: Sequence, mode: Membership = Membership.CLOSED) -> bool:
    _check_point(cone, z)
    if any(linalg.dot(e, z) != 0 for e in cone.equations):
        return False
    if mode is Membership.CLOSED:
        return all(linalg.dot(f, z) >= 0 for f in cone.facets)
    if mode is Membership.FULL_INTERIOR and cone.equations:
        return False
    return all(linalg.dot(f, z) > 0 for f in cone.facets)


def dual(cone: RationalCone) -> RationalCone:
    """``{y : y.x >= 0 for all x in cone}``; an involution on canonical cones."""
    return RationalCone(cone.rank, cone.facets, cone.rays, cone.equations, cone.lineality)


def _same_rank(c1, c2):
    if c1.rank != c2.rank:
        raise DimensionMismatch(f"ambient ranks {c1.rank} and {c2.rank} differ")


def intersect_cones(c1: RationalCone, c2: RationalCone) -> RationalCone:
    _same_rank(c1, c2)
    return cone_from_facets(c1.rank, list(c1.facets) + list(c2.facets),
                            list(c1.equations) + list(c2.equations))


def contains(big: RationalCone, small: RationalCone) -> bool:
    """Closed containment ``small <= big``."""
    _same_rank(big, small)
    if not all(member(big, r) for r in small.rays):
        return False
    return all(member(big, v) and member(big, tuple(-x for x in v)) for v in small.lineality)


def face_generated(cone: RationalCone, sub: RationalCone) -> RationalCone:
    """Smallest face of ``cone`` containing ``sub`` (assumed ``sub <= cone``)."""
    gens = list(sub.rays) + list(sub.lineality)
    active = [f for f in cone.facets if all(linalg.dot(f, g) == 0 for g in gens)]
    return cone_from_facets(cone.rank, cone.facets, list(cone.equations) + active)


def is_face(cone: RationalCone, sub: RationalCone) -> bool:
    return contains(cone, sub) and face_generated(cone, sub) == sub


def relative_interiors_meet(c1: RationalCone, c2: RationalCone) -> bool:
    inter = intersect_cones(c1, c2)
    p = inter.interior_point()
    return member(c1, p, Membership.INTERIOR) and member(c2, p, Membership.INTERIOR)


def relate(c1: RationalCone, c2: RationalCone) -> Relation:
    """Classify the position of two cones.

    ``PROPER_FACE_OF`` is symmetric here: it is returned when either cone is
    a proper face of the other.
    """
    _same_rank(c1, c2)
    if c1 == c2:
        return Relation.EQUAL
    if is_face(c1, c2) or is_face(c2, c1):
        return Relation.PROPER_FACE_OF
    inter = intersect_cones(c1, c2)
    if (c1.dim == c2.dim and inter.dim == c1.dim - 1
            and not relative_interiors_meet(c1, c2)):
        return Relation.SHARES_FACET
    if inter.dim < c1.rank:
        return Relation.INTERIOR_DISJOINT
    return Relation.OTHER

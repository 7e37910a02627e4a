"""Numerical divisor classes and their intersection numbers.

A :class:`DivisorLattice` is the finite-dimensional space of divisor classes
modulo numerical equivalence, together with a symmetric multilinear
intersection form of degree ``n`` (the dimension of the generic fiber).
The form is stored sparsely: one rational value per sorted index tuple,
missing tuples meaning zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from math import lcm
from typing import Iterable, Mapping, Sequence

from . import linalg
from .errors import (
    DuplicateTensorEntry,
    ForeignClass,
    IndexOutOfRange,
    NotUnimodular,
    OptionalClassWrongRank,
    ParseError,
    RankMismatch,
    WrongArity,
)


@dataclass(frozen=True)
class IntersectionForm:
    degree: int
    entries: Mapping[tuple, Fraction]

    def value(self, idx: Sequence[int]) -> Fraction:
        return self.entries.get(tuple(sorted(idx)), Fraction(0))


class DivisorLattice:
    """The space N^1 with a basis and an intersection form.

    Instances are immutable after construction and compare by identity:
    two classes are only comparable when they live in the same lattice
    object.
    """

    def __init__(self, rank, degree, form, basis_labels=None, fiber_class=None,
                 ample_class=None, roots=None, vertical_basis=None, name=None):
        self.rank = rank
        self.degree = degree
        self.form = form
        self.basis_labels = tuple(basis_labels) if basis_labels else tuple(f"e{i}" for i in range(rank))
        self.name = name
        self.fiber_class = self._own(fiber_class, "fiber_class")
        self.ample_class = self._own(ample_class, "ample_class")
        self.roots = None if roots is None else tuple(self._own(r, "roots") for r in roots)
        self.vertical_basis = (None if vertical_basis is None
                               else tuple(self._own(v, "vertical_basis") for v in vertical_basis))

    def _own(self, coords, what):
        if coords is None:
            return None
        if isinstance(coords, DivisorClass):
            coords = coords.coords
        if len(coords) != self.rank:
            raise OptionalClassWrongRank(f"{what}: expected {self.rank} coordinates, got {len(coords)}")
        return DivisorClass(tuple(linalg.to_fraction(x) for x in coords), self)

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<DivisorLattice{tag} rank={self.rank} degree={self.degree}>"

    # -- classes ---------------------------------------------------------

    def cls(self, coords: Sequence) -> "DivisorClass":
        if len(coords) != self.rank:
            raise RankMismatch(f"expected {self.rank} coordinates, got {len(coords)}")
        return DivisorClass(tuple(linalg.to_fraction(x) for x in coords), self)

    def basis(self, i) -> "DivisorClass":
        if isinstance(i, str):
            i = self.basis_labels.index(i)
        return self.cls([int(j == i) for j in range(self.rank)])

    def zero(self) -> "DivisorClass":
        return self.cls([0] * self.rank)

    def parse_class(self, text: str) -> "DivisorClass":
        """Parse ``"12,5,-3"`` or a label expression like ``"D1+D2-E12"``."""
        text = text.strip()
        if not text:
            raise ParseError("empty class expression")
        if re.fullmatch(r"[\s\d/+\-,]+", text) and ("," in text or self.rank == 1):
            try:
                return self.cls([Fraction(t) for t in text.split(",")])
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad coordinate list {text!r}: {exc}") from None
        coords = [Fraction(0)] * self.rank
        labels = sorted(self.basis_labels, key=len, reverse=True)
        pattern = re.compile(
            r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*(" + "|".join(map(re.escape, labels)) + r")\s*"
        )
        pos = 0
        while pos < len(text):
            m = pattern.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"cannot parse class expression {text!r} at offset {pos}")
            sign = -1 if m.group(1) == "-" else 1
            coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            coords[self.basis_labels.index(m.group(3))] += sign * coef
            pos = m.end()
        return self.cls(coords)

    # -- intersection numbers ----------------------------------------------

    @cached_property
    def _ordered(self):
        # Expand sorted keys to every ordering, scaled to integers.
        den = lcm(*(v.denominator for v in self.form.entries.values())) if self.form.entries else 1
        out = {}
        for key, val in self.form.entries.items():
            num = int(val * den)
            for perm in set(permutations(key)):
                out[perm] = num
        return out, den

    def intersect(self, classes: Sequence["DivisorClass"]) -> Fraction:
        """Multilinear intersection number of exactly ``degree`` classes."""
        if len(classes) != self.degree:
            raise WrongArity(f"need {self.degree} classes, got {len(classes)}")
        for c in classes:
            if c.lattice is not self:
                raise ForeignClass("class belongs to a different lattice")
        ordered, den = self._ordered
        scales = []
        vecs = []
        for c in classes:
            s = lcm(*(x.denominator for x in c.coords))
            scales.append(s)
            vecs.append([int(x * s) for x in c.coords])
        # contract from the last slot inwards
        cur = ordered
        for v in reversed(vecs):
            nxt: dict = {}
            for key, val in cur.items():
                x = v[key[-1]]
                if x:
                    p = key[:-1]
                    nxt[p] = nxt.get(p, 0) + val * x
            cur = nxt
        total = cur.get((), 0)
        denom = den
        for s in scales:
            denom *= s
        return Fraction(total, denom)

    def self_intersection(self, z: "DivisorClass") -> Fraction:
        return self.intersect([z] * self.degree)

    def degree_of(self, z: "DivisorClass") -> Fraction:
        """``(z . F^(n-1))`` for the fiber class F; for n = 1 this is ``z``'s value."""
        if self.degree == 1:
            return self.intersect([z])
        if self.fiber_class is None:
            raise ValueError("lattice has no fiber class")
        return self.intersect([z] + [self.fiber_class] * (self.degree - 1))

    def gram_matrix(self, classes: Sequence["DivisorClass"], fill=()) -> tuple:
        """Matrix of ``(c_i . c_j . fill...)``; ``fill`` supplies the other n-2 slots."""
        fill = list(fill)
        if len(fill) != self.degree - 2:
            raise WrongArity(f"need {self.degree - 2} fill classes")
        return tuple(tuple(self.intersect([a, b] + fill) for b in classes) for a in classes)


@dataclass(frozen=True)
class DivisorClass:
    coords: tuple
    lattice: DivisorLattice = field(repr=False)

    def _check(self, other):
        if not isinstance(other, DivisorClass) or other.lattice is not self.lattice:
            raise ForeignClass("classes live in different lattices")

    def __add__(self, other):
        self._check(other)
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __sub__(self, other):
        self._check(other)
        return DivisorClass(tuple(a - b for a, b in zip(self.coords, other.coords)), self.lattice)

    def __neg__(self):
        return DivisorClass(tuple(-a for a in self.coords), self.lattice)

    def __mul__(self, scalar):
        s = linalg.to_fraction(scalar)
        return DivisorClass(tuple(a * s for a in self.coords), self.lattice)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def label(self) -> str:
        """Human-readable linear combination of basis labels."""
        parts = []
        for c, name in zip(self.coords, self.lattice.basis_labels):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            coef = "" if mag == 1 else f"{linalg.fraction_str(mag)}*"
            parts.append(f"{sign}{coef}{name}")
        if not parts:
            return "0"
        s = "".join(parts)
        return s[1:] if s[0] == "+" else s


def make_lattice(rank: int, degree: int, tensor_entries: Iterable = (), *, basis=None,
                 fiber_class=None, ample_class=None, roots=None, vertical_basis=None,
                 name=None) -> DivisorLattice:
    """Build a validated lattice from ``(index_tuple, value)`` pairs.

    Index tuples are sorted on entry; two entries landing on the same sorted
    tuple raise :class:`DuplicateTensorEntry`.
    """
    if not isinstance(rank, int) or rank < 1:
        raise IndexOutOfRange(f"rank must be a positive integer, got {rank!r}")
    if not isinstance(degree, int) or degree < 1:
        raise IndexOutOfRange(f"degree must be a positive integer, got {degree!r}")
    entries = {}
    for idx, val in tensor_entries:
        idx = tuple(idx)
        if len(idx) != degree:
            raise IndexOutOfRange(f"tensor index {idx} has length {len(idx)}, expected {degree}")
        for i in idx:
            if not isinstance(i, int) or not 0 <= i < rank:
                raise IndexOutOfRange(f"tensor index {idx} out of range for rank {rank}")
        key = tuple(sorted(idx))
        if key in entries:
            raise DuplicateTensorEntry(f"tensor entry {key} given twice")
        entries[key] = linalg.to_fraction(val)
    entries = {k: v for k, v in entries.items() if v != 0}
    if basis is not None and len(basis) != rank:
        raise OptionalClassWrongRank(f"basis has {len(basis)} labels for rank {rank}")
    form = IntersectionForm(degree, entries)
    return DivisorLattice(rank, degree, form, basis, fiber_class, ample_class, roots,
                          vertical_basis, name)


def lattice_from_gram(gram: Sequence[Sequence], **options) -> DivisorLattice:
    """Degree-2 lattice with the given symmetric Gram matrix."""
    n = len(gram)
    entries = []
    for i in range(n):
        if len(gram[i]) != n:
            raise RankMismatch("Gram matrix is not square")
        for j in range(i, n):
            if linalg.to_fraction(gram[i][j]) != linalg.to_fraction(gram[j][i]):
                raise DuplicateTensorEntry(f"Gram matrix not symmetric at ({i},{j})")
            entries.append(((i, j), gram[i][j]))
    return make_lattice(n, 2, entries, **options)


@dataclass(frozen=True)
class LatticeAutomorphism:
    """Integer matrix acting on column coordinate vectors, det = +1 or -1."""

    matrix: tuple
    form_preserving: bool = False

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if any(len(row) != len(m) for row in m):
            raise RankMismatch("automorphism matrix is not square")
        if linalg.det(m) not in (1, -1):
            raise NotUnimodular(f"determinant {linalg.det(m)} is not +-1")

    @property
    def size(self) -> int:
        return len(self.matrix)

    def __matmul__(self, other: "LatticeAutomorphism") -> "LatticeAutomorphism":
        return LatticeAutomorphism(linalg.matmul(self.matrix, other.matrix),
                                   self.form_preserving and other.form_preserving)

    def inverse(self) -> "LatticeAutomorphism":
        return LatticeAutomorphism(linalg.int_inverse(self.matrix), self.form_preserving)

    def is_identity(self) -> bool:
        return self.matrix == linalg.identity(self.size)

    def apply_vector(self, v: Sequence) -> tuple:
        return linalg.matvec(self.matrix, v)

    def preserves_form(self, lattice: DivisorLattice) -> bool:
        """Finite check of form invariance on every basis tuple."""
        from itertools import combinations_with_replacement

        images = [apply_automorphism(self, lattice.basis(i)) for i in range(lattice.rank)]
        for idx in combinations_with_replacement(range(lattice.rank), lattice.degree):
            lhs = lattice.intersect([images[i] for i in idx])
            if lhs != lattice.form.value(idx):
                return False
        return True


def apply_automorphism(theta: LatticeAutomorphism, z: DivisorClass) -> DivisorClass:
    if theta.size != z.lattice.rank:
        raise RankMismatch(f"{theta.size}x{theta.size} matrix on a rank-{z.lattice.rank} lattice")
    return DivisorClass(tuple(linalg.to_fraction(x) for x in theta.apply_vector(z.coords)), z.lattice)


# -- symmetric matrices and definiteness -----------------------------------

def sym_matrix(rows: Sequence[Sequence]) -> tuple:
    """Validate and freeze a symmetric rational matrix."""
    m = tuple(tuple(linalg.to_fraction(x) for x in row) for row in rows)
    n = len(m)
    for i in range(n):
        if len(m[i]) != n:
            raise RankMismatch("matrix is not square")
        for j in range(i):
            if m[i][j] != m[j][i]:
                raise ValueError(f"matrix not symmetric at ({i},{j})")
    return m


def leading_minors(m: Sequence[Sequence]) -> list:
    return [linalg.det([row[:k] for row in m[:k]]) for k in range(1, len(m) + 1)]


def is_positive_definite(m: Sequence[Sequence]) -> bool:
    return bool(m) and all(d > 0 for d in leading_minors(m))


def is_negative_definite(gram: Sequence[Sequence]) -> bool:
    """Sylvester's criterion: leading minors alternate in sign, starting negative."""
    if not gram:
        return False
    return all((d < 0) if k % 2 == 0 else (d > 0) for k, d in enumerate(leading_minors(gram)))


def is_positive_semidefinite(m: Sequence[Sequence]) -> bool:
    """All principal minors (not just leading ones) are nonnegative."""
    from itertools import combinations

    n = len(m)
    for k in range(1, n + 1):
        for idx in combinations(range(n), k):
            if linalg.det([[m[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


def fiber_circuit_gram(components: int) -> tuple:
    """Gram matrix of the components of a Kodaira I_k fiber (a cycle of (-2)-curves).

    ``components == 2`` gives the doubled-edge case ``[[-2, 2], [2, -2]]``.
    """
    k = components
    if k < 2:
        raise ValueError("an I_k circuit needs k >= 2")
    m = [[0] * k for _ in range(k)]
    for i in range(k):
        m[i][i] = -2
        m[i][(i + 1) % k] += 1
        m[(i + 1) % k][i] += 1
    return sym_matrix(m)


def drop_component(gram: Sequence[Sequence], index: int = -1) -> tuple:
    """Principal submatrix with one fiber component removed."""
    n = len(gram)
    index %= n
    keep = [i for i in range(n) if i != index]
    return sym_matrix([[gram[i][j] for j in keep] for i in keep])

"""Divisor classes on a self-product E x ... x E of an elliptic curve.

For an elliptic curve without complex multiplication, N^1(E^n) has basis
``D_i`` (pullbacks of the origin from the i-th factor) and ``E_ij``
(pullbacks of the diagonal from the (i, j) factor pair), of total rank
n(n+1)/2. The map

    tau(sum x_ii D_i + sum_{i<j} x_ij (D_i + D_j - E_ij)) = [x_ij]

identifies N^1 with symmetric n x n matrices; top self-intersection becomes
``n! det``, ampleness becomes positive definiteness, and GL(n, Z) acts by
``theta . M = theta^{-T} M theta^{-1}``.

The intersection tensor is built by polarizing the determinant, so every
identity among monomials is a consequence rather than an input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import factorial
from typing import Sequence

from . import linalg
from .errors import InvalidN, NotUnimodular, RankMismatch
from .lattice import (
    DivisorClass,
    DivisorLattice,
    LatticeAutomorphism,
    is_positive_definite,
    is_positive_semidefinite,
    make_lattice,
    sym_matrix,
)


@dataclass(frozen=True)
class AbelianLattice:
    n: int
    lattice: DivisorLattice

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(self.n), 2))

    def D(self, i: int) -> DivisorClass:
        """``D_i`` with 1-based index, as in the usual notation."""
        return self.lattice.basis(i - 1)

    def E(self, i: int, j: int) -> DivisorClass:
        """``E_ij`` with 1-based indices; ``E_ij = E_ji``."""
        i, j = sorted((i, j))
        if i == j:
            raise ValueError("E_ii is not a basis class")
        return self.lattice.basis(self.n + self.pairs.index((i - 1, j - 1)))

    def F(self, i: int, j: int) -> DivisorClass:
        """``D_i + D_j - E_ij``, the class with tau = e_ij + e_ji."""
        return self.D(i) + self.D(j) - self.E(i, j)


def _label_E(i, j, n):
    return f"E{i + 1}{j + 1}" if n < 10 else f"E{i + 1}_{j + 1}"


def _basis_tau(n: int, b: int) -> tuple:
    m = [[0] * n for _ in range(n)]
    if b < n:
        m[b][b] = 1
    else:
        i, j = list(combinations(range(n), 2))[b - n]
        m[i][i] = m[j][j] = 1
        m[i][j] = m[j][i] = -1
    return tuple(tuple(r) for r in m)


def mixed_determinant(mats: Sequence[Sequence[Sequence]]):
    """Coefficient of ``t_1 ... t_n`` in ``det(sum t_k M_k)``.

    Uses the polarization identity
    ``sum over nonempty S of (-1)^(n-|S|) det(sum_{k in S} M_k)``.
    """
    n = len(mats)
    total = 0
    for size in range(1, n + 1):
        sign = -1 if (n - size) % 2 else 1
        for subset in combinations(range(n), size):
            acc = [[0] * n for _ in range(n)]
            for k in subset:
                for i in range(n):
                    row = mats[k][i]
                    for j in range(n):
                        acc[i][j] += row[j]
            total += sign * linalg.det(acc)
    return total


@lru_cache(maxsize=None)
def build_abelian(n: int) -> AbelianLattice:
    if not isinstance(n, int) or n < 1:
        raise InvalidN(f"n must be a positive integer, got {n!r}")
    rank = n * (n + 1) // 2
    labels = [f"D{i + 1}" for i in range(n)] + [_label_E(i, j, n) for i, j in combinations(range(n), 2)]
    taus = [_basis_tau(n, b) for b in range(rank)]
    entries = []
    for key in combinations_with_replacement(range(rank), n):
        val = mixed_determinant([taus[b] for b in key])
        if val:
            entries.append((key, val))
    lat = make_lattice(rank, n, entries, basis=labels,
                       ample_class=[1] * n + [0] * (rank - n), name=f"abelian-{n}")
    return AbelianLattice(n, lat)


def tau(ab: AbelianLattice, z: DivisorClass) -> tuple:
    if z.lattice is not ab.lattice:
        raise RankMismatch("class does not belong to this abelian lattice")
    n = ab.n
    c = z.coords
    x = [[Fraction(0)] * n for _ in range(n)]
    for k, (i, j) in enumerate(ab.pairs):
        x[i][j] = x[j][i] = -c[n + k]
    for i in range(n):
        x[i][i] = c[i] - sum(x[i][j] for j in range(n) if j != i)
    return tuple(tuple(r) for r in x)


def tau_inv(ab: AbelianLattice, m: Sequence[Sequence]) -> DivisorClass:
    m = sym_matrix(m)
    n = ab.n
    if len(m) != n:
        raise RankMismatch(f"expected a {n}x{n} matrix, got {len(m)}x{len(m)}")
    coords = [m[i][i] + sum(m[i][j] for j in range(n) if j != i) for i in range(n)]
    coords += [-m[i][j] for i, j in ab.pairs]
    return ab.lattice.cls(coords)


@dataclass(frozen=True)
class AbelianClassification:
    ample: bool
    nef: bool
    big_given_nef: bool
    top_self_intersection: Fraction


def classify(ab: AbelianLattice, z: DivisorClass) -> AbelianClassification:
    t = tau(ab, z)
    nef = is_positive_semidefinite(t)
    top = factorial(ab.n) * linalg.to_fraction(linalg.det(t))
    return AbelianClassification(
        ample=is_positive_definite(t),
        nef=nef,
        big_given_nef=nef and top > 0,
        top_self_intersection=top,
    )


def _unimodular(theta, n):
    theta = tuple(tuple(int(x) for x in row) for row in theta)
    if len(theta) != n or any(len(r) != n for r in theta):
        raise RankMismatch(f"expected an {n}x{n} matrix")
    if linalg.det(theta) not in (1, -1):
        raise NotUnimodular(f"det = {linalg.det(theta)}")
    return theta


def congruence_action(theta: Sequence[Sequence[int]], m: Sequence[Sequence]) -> tuple:
    """``theta^{-T} m theta^{-1}``, the action on symmetric matrices."""
    theta = _unimodular(theta, len(m))
    inv = linalg.int_inverse(theta)
    return linalg.matmul(linalg.transpose(inv), linalg.matmul(m, inv))


def push_forward(ab: AbelianLattice, theta: Sequence[Sequence[int]], z: DivisorClass) -> DivisorClass:
    theta = _unimodular(theta, ab.n)
    return tau_inv(ab, congruence_action(theta, tau(ab, z)))


def induced_automorphism(ab: AbelianLattice, theta: Sequence[Sequence[int]]) -> LatticeAutomorphism:
    """The integer matrix of ``push_forward(theta, -)`` on N^1 (columns = basis images)."""
    cols = [push_forward(ab, theta, ab.lattice.basis(b)).coords for b in range(ab.lattice.rank)]
    return LatticeAutomorphism(linalg.transpose([[int(x) for x in c] for c in cols]), form_preserving=True)


# The three standard generators of GL(n, Z).

def generator_shear(n: int) -> tuple:
    """Identity plus a 1 in position (1, 2)."""
    if n < 2:
        raise InvalidN("the shear generator needs n >= 2")
    m = [list(r) for r in linalg.identity(n)]
    m[0][1] = 1
    return tuple(tuple(r) for r in m)


def generator_sign(n: int) -> tuple:
    """diag(-1, 1, ..., 1)."""
    m = [list(r) for r in linalg.identity(n)]
    m[0][0] = -1
    return tuple(tuple(r) for r in m)


def generator_swap(n: int) -> tuple:
    """Transposition of the first two coordinates."""
    if n < 2:
        raise InvalidN("the swap generator needs n >= 2")
    m = [list(r) for r in linalg.identity(n)]
    m[0][0] = m[1][1] = 0
    m[0][1] = m[1][0] = 1
    return tuple(tuple(r) for r in m)


def standard_generators(n: int) -> list[tuple]:
    if n == 1:
        return [generator_sign(1)]
    return [generator_shear(n), generator_sign(n), generator_swap(n)]

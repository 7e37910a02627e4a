"""Nef and effective classes on a K3-type lattice with a finite root list.

The lattice has a degree-2 (Gram) form, an ample class ``h`` and a caller-
supplied finite list of (-2)-classes playing the role of the (-2)-curves.
Nef means ``z^2 >= 0, z.h >= 0`` and ``z.delta >= 0`` for every root; a
class is walked into that chamber by reflections ``s(z) = z + (z.delta) delta``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .errors import NotARoot, NotInPositiveCone, StepLimitExceeded, ValidationError
from .lattice import DivisorClass, DivisorLattice, LatticeAutomorphism, lattice_from_gram


@dataclass(frozen=True)
class K3Lattice:
    lattice: DivisorLattice

    def __post_init__(self):
        lat = self.lattice
        if lat.degree != 2:
            raise ValidationError("a K3 lattice needs a degree-2 intersection form")
        if lat.ample_class is None:
            raise ValidationError("a K3 lattice needs an ample class")
        h = lat.ample_class
        if self.dot(h, h) <= 0:
            raise ValidationError("ample class must have positive square")
        for r in self.roots:
            if self.dot(r, r) != -2:
                raise NotARoot(f"root {r.label()} has square {self.dot(r, r)}, not -2")
            if self.dot(h, r) < 0:
                raise ValidationError(f"ample class is negative on root {r.label()}")

    @property
    def h(self) -> DivisorClass:
        return self.lattice.ample_class

    @property
    def roots(self) -> tuple:
        return self.lattice.roots or ()

    def dot(self, x: DivisorClass, y: DivisorClass) -> Fraction:
        return self.lattice.intersect([x, y])

    def cls(self, coords) -> DivisorClass:
        return self.lattice.cls(coords)


def k3_lattice(gram: Sequence[Sequence], ample: Sequence, roots: Sequence[Sequence] = (), **kw) -> K3Lattice:
    return K3Lattice(lattice_from_gram(gram, ample_class=ample, roots=list(roots), **kw))


def _as_root(k3: K3Lattice, delta) -> DivisorClass:
    if not isinstance(delta, DivisorClass):
        delta = k3.cls(delta)
    if delta not in k3.roots:
        raise NotARoot(f"{delta.label()} is not in the root list")
    return delta


def reflect(k3: K3Lattice, z: DivisorClass, delta) -> DivisorClass:
    delta = _as_root(k3, delta)
    return z + k3.dot(z, delta) * delta


def reflection_matrix(k3: K3Lattice, delta) -> LatticeAutomorphism:
    """Matrix of the reflection in ``delta`` (columns = images of basis classes)."""
    delta = _as_root(k3, delta)
    lat = k3.lattice
    cols = [reflect(k3, lat.basis(i), delta).coords for i in range(lat.rank)]
    return LatticeAutomorphism(tuple(tuple(int(cols[j][i]) for j in range(lat.rank)) for i in range(lat.rank)),
                               form_preserving=True)


def in_positive_cone(k3: K3Lattice, z: DivisorClass) -> bool:
    """Open positive cone component selected by the ample class."""
    return k3.dot(z, z) > 0 and k3.dot(z, k3.h) > 0


@dataclass
class Walk:
    start: DivisorClass
    end: DivisorClass
    word: list = field(default_factory=list)

    def replay(self, k3: K3Lattice) -> DivisorClass:
        z = self.start
        for delta in self.word:
            z = reflect(k3, z, delta)
        return z


def to_nef_chamber(k3: K3Lattice, z: DivisorClass, max_steps: int = 10_000) -> Walk:
    """Reflect ``z`` until it is nonnegative on every root.

    At each step the first root (in list order) with ``z.delta < 0`` is used.
    """
    if not in_positive_cone(k3, z):
        raise NotInPositiveCone(f"{z.label()} is not in the positive cone")
    square = k3.dot(z, z)
    start = z
    word = []
    while True:
        bad = next((r for r in k3.roots if k3.dot(z, r) < 0), None)
        if bad is None:
            return Walk(start, z, word)
        if len(word) >= max_steps:
            raise StepLimitExceeded(f"no nef representative within {max_steps} reflections")
        z = reflect(k3, z, bad)
        word.append(bad)
        assert k3.dot(z, z) == square, "reflection changed the square"


@dataclass(frozen=True)
class EffectiveCertificate:
    """``z = positive_part + sum coefficient_i * root_i`` with nonnegative coefficients."""

    positive_part: DivisorClass
    coefficients: tuple  # aligned with the root list

    def total(self, k3: K3Lattice) -> DivisorClass:
        z = self.positive_part
        for a, r in zip(self.coefficients, k3.roots):
            z = z + a * r
        return z


@dataclass(frozen=True)
class K3Classification:
    nef: bool
    big: bool
    effective_certificate: EffectiveCertificate | None


def is_nef(k3: K3Lattice, z: DivisorClass) -> bool:
    return (k3.dot(z, z) >= 0 and k3.dot(z, k3.h) >= 0
            and all(k3.dot(z, r) >= 0 for r in k3.roots))


def find_effective_certificate(k3: K3Lattice, z: DivisorClass, max_coefficient: int = 10):
    """Search integer root coefficients in ``[0, max_coefficient]`` by increasing total.

    Returns the first decomposition whose remainder lies in the closed
    positive cone, or None.
    """
    roots = k3.roots
    combos = sorted(product(range(max_coefficient + 1), repeat=len(roots)), key=lambda c: (sum(c), c))
    for coeffs in combos:
        p = z
        for a, r in zip(coeffs, roots):
            if a:
                p = p - a * r
        if k3.dot(p, p) >= 0 and k3.dot(p, k3.h) >= 0:
            return EffectiveCertificate(p, tuple(coeffs))
    return None


def classify_k3(k3: K3Lattice, z: DivisorClass, max_coefficient: int = 10) -> K3Classification:
    return K3Classification(
        nef=is_nef(k3, z),
        big=in_positive_cone(k3, z),
        effective_certificate=find_effective_certificate(k3, z, max_coefficient),
    )

"""Chamber complexes of marked minimal models and walking between them.

Three explicit families are provided:

``i2_versal``
    Versal deformation of an I_2 fiber. Rank 2, chambers
    ``<(1, k), (1, k + 1)>`` for every integer k, degree = first coordinate.
    The coordinates are a convention: only the rank, the degree functional
    and the chamber combinatorics are intrinsic.
``cy322``
    A general (3,2,2) hypersurface in P^2 x P^1 x P^1, basis A, B, C.
    Chamber n is ``<A, C_{n-1}, C_n>`` with
    ``C_n = 3/2 (n^2 + n) A + (n + 1) B - n C``.
``i_ab``
    Deformations of an I_{a+b} fiber, modelled combinatorially by cyclic
    labelings with a ones and b twos.

The two cone families share one shape: a fixed set of apex rays plus a
chain ``Q_j`` of rays, chamber n being ``<apex, Q_n, Q_{n+1}>``. A linear
ratio, the chain coordinate, takes the value j on ``Q_j``, so chamber n
covers chain coordinates in ``[n, n + 1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from . import linalg
from .cone import RationalCone, cone_from_rays, intersect_cones, member
from .errors import (
    BoundExceeded,
    InvalidParameters,
    NotAWall,
    NotFloppable,
    NotMovable,
    ProbeTouchesBoundary,
    StepLimitExceeded,
    UnknownInstance,
)
from .lattice import DivisorClass, DivisorLattice, LatticeAutomorphism, make_lattice


@dataclass(frozen=True)
class WallCrossing:
    source: int
    wall: tuple  # rays spanning the wall
    target: int


@dataclass
class FlopPath:
    start: object
    steps: list = field(default_factory=list)
    end: object = None

    def __len__(self):
        return len(self.steps)


class ChainInstance:
    """Integer-indexed chamber family ``<apex, Q_n, Q_{n+1}>``."""

    name = "chain"
    base_chamber = 0

    def __init__(self, lattice: DivisorLattice, apex, group_generators, metadata=None):
        self.lattice = lattice
        self.apex = tuple(tuple(r) for r in apex)
        self.group_generators = tuple(group_generators)
        self.metadata = dict(metadata or {})
        self._chamber = lru_cache(maxsize=None)(self._make_chamber)

    # subclasses supply the chain and the slope functionals
    def chain_ray(self, j: int) -> tuple:
        raise NotImplementedError

    def slope_parts(self, z: Sequence) -> tuple:
        """``(numerator, denominator)`` of the chain coordinate."""
        raise NotImplementedError

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def _vec(self, z):
        return z.coords if isinstance(z, DivisorClass) else tuple(linalg.to_fraction(x) for x in z)

    def degree(self, z) -> Fraction:
        if not isinstance(z, DivisorClass):
            z = self.lattice.cls(z)
        return self.lattice.degree_of(z)

    def chain_coordinate(self, z) -> Fraction:
        num, den = self.slope_parts(self._vec(z))
        if den <= 0:
            raise ValueError("chain coordinate needs positive degree")
        return Fraction(num) / Fraction(den)

    # -- chambers ----------------------------------------------------------

    def chamber_rays(self, n: int) -> list[tuple]:
        return list(self.apex) + [self.chain_ray(n), self.chain_ray(n + 1)]

    def _make_chamber(self, n: int) -> RationalCone:
        return cone_from_rays(self.rank, self.chamber_rays(n))

    def chamber(self, n: int) -> RationalCone:
        return self._chamber(n)

    def walls(self, n: int) -> dict:
        """Flop walls of chamber n keyed by the neighbouring index."""
        return {n - 1: tuple(self.apex) + (self.chain_ray(n),),
                n + 1: tuple(self.apex) + (self.chain_ray(n + 1),)}

    def flop_step(self, n: int, wall) -> int:
        """Neighbour of chamber n across ``wall``.

        ``wall`` is either a facet functional of the chamber or the list of
        rays spanning the wall.
        """
        walls = self.walls(n)
        if wall and not isinstance(wall[0], (list, tuple)):
            f = linalg.primitive(wall)
            if f not in self.chamber(n).facets:
                raise NotAWall(f"{f} is not a facet of chamber {n}")
            for target, rays in walls.items():
                if all(linalg.dot(f, r) == 0 for r in rays):
                    return target
            raise NotAWall(f"facet {f} of chamber {n} is not a flopping wall")
        want = {linalg.primitive(r) for r in wall}
        for target, rays in walls.items():
            if {linalg.primitive(r) for r in rays} == want:
                return target
        raise NotAWall(f"{sorted(want)} does not span a flopping wall of chamber {n}")

    def index_of_point(self, z) -> int:
        """Smallest n whose chain range ``[n, n + 1]`` contains z's chain coordinate."""
        t = self.chain_coordinate(z)
        n = math.floor(t)
        return n - 1 if t == n else n

    def is_movable(self, z) -> bool:
        """Membership in the union of all chambers (the effective movable cone)."""
        v = self._vec(z)
        if not any(v):
            return True
        d = self.degree(v)
        if d < 0:
            return False
        if d == 0:
            return member(cone_from_rays(self.rank, self.apex), v) if self.apex else False
        return member(self.chamber(self.index_of_point(v)), v)

    def locate_chamber(self, z, max_steps: int = 100_000) -> FlopPath:
        """Walk from the base chamber to one containing z, crossing one wall per step.

        In the current chamber z is written in the (simplicial) ray basis; a
        negative coefficient on a chain ray means z lies beyond the wall
        opposite that ray, which is then crossed.
        """
        v = self._vec(z)
        if not self.is_movable(v):
            raise NotMovable(f"{tuple(map(str, v))} is not in the movable cone")
        n = self.base_chamber
        path = FlopPath(start=n)
        while True:
            rays = self.chamber_rays(n)
            coeffs = linalg.solve_in_span(rays, v)
            left, right = coeffs[-2], coeffs[-1]
            if left >= 0 and right >= 0:
                # apex coefficients are then forced nonnegative by movability
                path.end = n
                return path
            if len(path.steps) >= max_steps:
                raise StepLimitExceeded(f"no chamber found within {max_steps} flops")
            target = n + 1 if left < 0 else n - 1
            wall = self.walls(n)[target]
            path.steps.append(WallCrossing(n, wall, target))
            n = target

    def replay(self, path: FlopPath) -> int:
        n = path.start
        for step in path.steps:
            if step.source != n:
                raise ValueError("path is not contiguous")
            n = self.flop_step(n, step.wall)
            if n != step.target:
                raise ValueError("wall leads elsewhere")
        return n

    # -- local finiteness ----------------------------------------------------

    def probe_index_range(self, probe: RationalCone) -> tuple[int, int]:
        """Indices that can possibly meet ``probe``; raises if the probe touches degree 0."""
        if probe.lineality or not probe.rays:
            if probe.lineality:
                raise ProbeTouchesBoundary("probe contains a line")
            return (0, -1)
        for r in probe.rays:
            if self.degree(r) <= 0:
                raise ProbeTouchesBoundary(
                    f"probe ray {r} has degree {self.degree(r)}: chambers accumulate there")
        ts = [self.chain_coordinate(r) for r in probe.rays]
        return math.floor(min(ts)) - 1, math.ceil(max(ts))

    def chambers_meeting(self, probe: RationalCone, index_bound: int) -> list[int]:
        """Chambers with ``|n| <= index_bound`` meeting ``probe`` outside the origin.

        Only indices inside :meth:`probe_index_range` are tested; the list is
        complete once ``index_bound`` covers that range.
        """
        lo, hi = self.probe_index_range(probe)
        lo, hi = max(lo, -index_bound), min(hi, index_bound)
        out = []
        for n in range(lo, hi + 1):
            if not intersect_cones(probe, self.chamber(n)).is_zero():
                out.append(n)
        return out

    # -- group action ----------------------------------------------------------

    def act_on_index(self, theta: LatticeAutomorphism, n: int) -> int:
        """Index m with ``theta(chamber n) = chamber m``."""
        image = self.chamber(n).transform(theta.matrix)
        m = self.index_of_point(image.interior_point())
        if self.chamber(m) != image:
            raise InvalidParameters(f"generator does not map chamber {n} onto a chamber")
        return m

    def slice_translation(self, theta: LatticeAutomorphism):
        """Translation vector of theta on the degree-1 slice, or None if it is not one."""
        base = self.chain_ray(0)
        d = self.degree(base)
        p0 = tuple(Fraction(x) / d for x in base)
        shift = tuple(a - b for a, b in zip(theta.apply_vector(p0), p0))
        # directions inside the slice: degree-0 vectors
        kernel = linalg.nullspace([[self.degree(self.lattice.basis(i)) for i in range(self.rank)]], self.rank)
        for u in kernel:
            if tuple(theta.apply_vector(u)) != tuple(u):
                return None
        return shift


def cy322_curve(n: int) -> tuple:
    """``C_n = 3/2 (n^2 + n) A + (n + 1) B - n C`` (integral since n^2 + n is even)."""
    return (3 * (n * n + n) // 2, n + 1, -n)


class CY322(ChainInstance):
    name = "cy322"

    def __init__(self):
        # (3,2,2) hypersurface: A^2B = A^2C = 2, ABC = 3, all other monomials 0
        lat = make_lattice(3, 3, [((0, 0, 1), 2), ((0, 0, 2), 2), ((0, 1, 2), 3)],
                           basis=["A", "B", "C"], fiber_class=[1, 0, 0], ample_class=[1, 1, 1],
                           vertical_basis=[], name="cy322")
        gamma1 = LatticeAutomorphism(((1, 0, 3), (0, 1, 2), (0, 0, -1)))
        gamma2 = LatticeAutomorphism(((1, 3, 0), (0, -1, 0), (0, 2, 1)))
        super().__init__(lat, apex=[(1, 0, 0)], group_generators=[gamma1, gamma2],
                         metadata={"flopped_curves_per_wall": 54})

    def chain_ray(self, j: int) -> tuple:
        return cy322_curve(j - 1)

    def curve(self, n: int) -> DivisorClass:
        return self.lattice.cls(cy322_curve(n))

    def slope_parts(self, z):
        return z[1], z[1] + z[2]


class I2Versal(ChainInstance):
    name = "i2_versal"

    def __init__(self):
        lat = make_lattice(2, 1, [((0,), 1)], basis=["u", "v"], vertical_basis=[], name="i2_versal")
        shift = LatticeAutomorphism(((1, 0), (1, 1)), form_preserving=True)
        super().__init__(lat, apex=[], group_generators=[shift])

    def chain_ray(self, j: int) -> tuple:
        return (1, j)

    def slope_parts(self, z):
        return z[1], z[0]


# -- I_{a+b}: combinatorial labelings ----------------------------------------

def canonical_labeling(word: Sequence[int]) -> tuple:
    """Lexicographically least rotation of the word or of its reversal."""
    w = tuple(word)
    n = len(w)
    cands = []
    for s in (w, w[::-1]):
        cands.extend(s[i:] + s[:i] for i in range(n))
    return min(cands)


@dataclass(frozen=True)
class IabInstance:
    a: int
    b: int
    name: str = "i_ab"

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)) or self.a < 1 or self.b < 1:
            raise InvalidParameters("i_ab needs positive integers a and b")

    @property
    def size(self) -> int:
        return self.a + self.b

    def is_valid(self, word: Sequence[int]) -> bool:
        w = tuple(word)
        return len(w) == self.size and set(w) <= {1, 2} and w.count(1) == self.a

    def base_labeling(self) -> tuple:
        return (1,) * self.a + (2,) * self.b

    def floppable_positions(self, word: Sequence[int]) -> list[int]:
        n = self.size
        return [i for i in range(1, n + 1) if word[i - 1] != word[(i - 2) % n]]

    def flop_step(self, word: Sequence[int], position: int) -> tuple:
        """Flop the curve at ``position`` (1-based): swap the labels at i-1 and i.

        Index 0 wraps around to a+b.
        """
        w = list(word)
        if not self.is_valid(w):
            raise InvalidParameters(f"{tuple(word)} is not a labeling with a={self.a}, b={self.b}")
        n = self.size
        if not 1 <= position <= n:
            raise NotAWall(f"position {position} outside 1..{n}")
        i, j = position - 1, (position - 2) % n
        if w[i] == w[j]:
            raise NotFloppable(f"labels at {j + 1} and {position} agree")
        w[i], w[j] = w[j], w[i]
        return tuple(w)


@dataclass(frozen=True)
class ModelEnumeration:
    count: int
    representatives: list
    flop_graph_connected: bool


def enumerate_models(a: int, b: int, bound: int = 12) -> ModelEnumeration:
    inst = IabInstance(a, b)
    if a + b > bound:
        raise BoundExceeded(f"a + b = {a + b} exceeds the bound {bound}")
    reps = set()
    for ones in combinations(range(a + b), a):
        reps.add(canonical_labeling([1 if i in ones else 2 for i in range(a + b)]))
    reps = sorted(reps)
    # flop graph on isomorphism classes
    start = reps[0]
    seen = {start}
    stack = [start]
    while stack:
        w = stack.pop()
        for pos in inst.floppable_positions(w):
            nxt = canonical_labeling(inst.flop_step(w, pos))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return ModelEnumeration(len(reps), reps, len(seen) == len(reps))


def load_instance(name: str, **params):
    key = name.lower().replace("-", "_")
    if key in ("i2", "i2_versal"):
        return I2Versal()
    if key == "cy322":
        return CY322()
    if key in ("i_ab", "iab"):
        try:
            return IabInstance(int(params["a"]), int(params["b"]))
        except KeyError as exc:
            raise InvalidParameters(f"i_ab needs parameter {exc.args[0]}") from None
    raise UnknownInstance(f"unknown instance {name!r}")

"""Orbits of finitely generated matrix groups and fundamental-domain checks.

Words are explored breadth-first with exact deduplication of group
elements, so the first word found for any element is a shortest one.
Coverage of a candidate fundamental domain is certified sample by sample;
nothing here claims a result for points that were not sampled.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Callable, Sequence

from . import linalg
from .cone import Membership, RationalCone, intersect_cones, member, relative_interiors_meet
from .errors import InvalidParameters, NotPositiveDefinite, RankMismatch
from .lattice import DivisorClass, LatticeAutomorphism, apply_automorphism, is_positive_definite, sym_matrix


class GeneratorSet:
    """Generators with their inverses adjoined (self-inverse ones only once)."""

    def __init__(self, generators: Sequence[LatticeAutomorphism], names: Sequence[str] | None = None):
        generators = [g if isinstance(g, LatticeAutomorphism) else LatticeAutomorphism(g) for g in generators]
        sizes = {g.size for g in generators}
        if len(sizes) > 1:
            raise RankMismatch(f"generators of different sizes {sorted(sizes)}")
        self.rank = sizes.pop() if sizes else None
        names = list(names) if names else [f"g{i + 1}" for i in range(len(generators))]
        self.base = list(zip(names, generators))
        self.elements = []
        for name, g in self.base:
            self.elements.append((name, g))
            inv = g.inverse()
            if inv.matrix != g.matrix:
                self.elements.append((name + "^-1", inv))

    def __len__(self):
        return len(self.elements)

    def ball(self, word_bound: int) -> list[tuple[LatticeAutomorphism, tuple]]:
        """All distinct group elements of word length <= word_bound, with a shortest word."""
        if word_bound < 0:
            raise InvalidParameters("word_bound must be >= 0")
        if self.rank is None:
            return []
        ident = LatticeAutomorphism(linalg.identity(self.rank), True)
        seen = {ident.matrix}
        out = [(ident, ())]
        frontier = out[:]
        for _ in range(word_bound):
            nxt = []
            for g, word in frontier:
                for name, s in self.elements:
                    h = s @ g  # apply g first, then s
                    if h.matrix not in seen:
                        seen.add(h.matrix)
                        nxt.append((h, word + (name,)))
            out.extend(nxt)
            frontier = nxt
        return out

    def evaluate(self, word: Sequence[str]) -> LatticeAutomorphism:
        """Element for a word listed in application order (first letter acts first)."""
        lookup = dict(self.elements)
        g = LatticeAutomorphism(linalg.identity(self.rank), True)
        for name in word:
            g = lookup[name] @ g
        return g


def _default_act(g: LatticeAutomorphism, x):
    if isinstance(x, DivisorClass):
        return apply_automorphism(g, x)
    return tuple(linalg.normalize_int(v) for v in g.apply_vector(x))


def orbit_bounded(gens: GeneratorSet, z, word_bound: int,
                  act: Callable | None = None) -> set:
    """Images of ``z`` under all words of length <= word_bound.

    ``act(g, x)`` defaults to the linear action on vectors / classes; pass
    another action (on indices, on Gram matrices, ...) as needed.
    """
    if word_bound < 0:
        raise InvalidParameters("word_bound must be >= 0")
    act = act or _default_act
    if isinstance(z, DivisorClass) and gens.rank is not None and gens.rank != z.lattice.rank:
        raise RankMismatch(f"generators of size {gens.rank} on a rank-{z.lattice.rank} lattice")
    seen = {z}
    frontier = [z]
    for _ in range(word_bound):
        nxt = []
        for x in frontier:
            for _, g in gens.elements:
                y = act(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# -- fundamental domains -------------------------------------------------------

@dataclass
class SampleVerdict:
    point: tuple
    verdict: str  # "covered" | "uncovered-at-bound" | "n.a."
    word: tuple | None = None
    piece: int | None = None


@dataclass
class OverlapWitness:
    point: tuple
    word1: tuple
    word2: tuple
    pieces: tuple


@dataclass
class DomainReport:
    samples_total: int
    samples_covered: int
    samples_uncovered: int
    samples_na: int
    max_word_length_used: int
    overlap_witnesses: list = field(default_factory=list)
    samples: list = field(default_factory=list)

    @property
    def fully_covered(self) -> bool:
        return self.samples_uncovered == 0

    def to_dict(self) -> dict:
        def vec(v):
            return [linalg.fraction_str(x) for x in v]

        return {
            "samples_total": self.samples_total,
            "samples_covered": self.samples_covered,
            "samples_uncovered": self.samples_uncovered,
            "samples_na": self.samples_na,
            "max_word_length_used": self.max_word_length_used,
            "overlap_witnesses": [
                {"point": vec(w.point), "word1": list(w.word1), "word2": list(w.word2),
                 "pieces": list(w.pieces)}
                for w in self.overlap_witnesses
            ],
            "samples": [
                {"point": vec(s.point), "verdict": s.verdict,
                 "word": None if s.word is None else list(s.word), "piece": s.piece}
                for s in self.samples
            ],
        }


def _interiors_meet(c1: RationalCone, c2: RationalCone):
    inter = intersect_cones(c1, c2)
    if c1.is_full_dimensional and c2.is_full_dimensional:
        return inter if inter.is_full_dimensional else None
    return inter if relative_interiors_meet(c1, c2) else None


def sample_points(rank: int, count: int, seed: int, box: int = 10,
                  region: Callable | None = None, max_tries: int | None = None) -> list[tuple]:
    """Reproducible integer points of ``[-box, box]^rank`` satisfying ``region``."""
    rng = random.Random(seed)
    out = []
    tries = 0
    max_tries = max_tries or 1000 * max(count, 1)
    while len(out) < count and tries < max_tries:
        tries += 1
        p = tuple(rng.randint(-box, box) for _ in range(rank))
        if region is None or region(p):
            out.append(p)
    return out


def verify_fundamental_domain(gens: GeneratorSet, domain, region: Callable | None = None,
                              samples: int = 100, word_bound: int = 8, seed: int = 0,
                              box: int = 10, points: Sequence[Sequence] | None = None) -> DomainReport:
    """Check a candidate fundamental domain on samples.

    Coverage: each sample is moved into the domain by the first (shortest)
    group element that works. Disjointness: every non-identity element of
    the word ball is tested for an interior overlap between the domain and
    its image. ``domain`` is a cone or a list of cones whose union is the
    candidate.
    """
    pieces = [domain] if isinstance(domain, RationalCone) else list(domain)
    rank = pieces[0].rank
    ball = gens.ball(word_bound) if gens.rank is not None else [
        (LatticeAutomorphism(linalg.identity(rank), True), ())]
    if points is None:
        points = sample_points(rank, samples, seed, box, region)

    verdicts = []
    covered = uncovered = na = 0
    longest = 0
    for p in points:
        p = tuple(p)
        if region is not None and not region(p):
            verdicts.append(SampleVerdict(p, "n.a."))
            na += 1
            continue
        hit = None
        for g, word in ball:
            q = g.apply_vector(p)
            for k, piece in enumerate(pieces):
                if member(piece, q, Membership.CLOSED):
                    hit = (word, k)
                    break
            if hit:
                break
        if hit:
            covered += 1
            longest = max(longest, len(hit[0]))
            verdicts.append(SampleVerdict(p, "covered", hit[0], hit[1]))
        else:
            uncovered += 1
            verdicts.append(SampleVerdict(p, "uncovered-at-bound"))

    witnesses = []
    for g, word in ball:
        if g.is_identity():
            continue
        for j, pj in enumerate(pieces):
            image = pj.transform(g.matrix)
            for i, pi in enumerate(pieces):
                inter = _interiors_meet(pi, image)
                if inter is not None:
                    witnesses.append(OverlapWitness(inter.interior_point(), (), word, (i, j)))
    return DomainReport(len(verdicts), covered, uncovered, na, longest, witnesses, verdicts)


# -- binary forms ----------------------------------------------------------------

def _round_half_down(x: Fraction) -> int:
    """Nearest integer, ties toward -inf, so that ``x - k`` lands in ``(-1/2, 1/2]``."""
    return -floor(Fraction(1, 2) - x)


def minkowski_reduce(gram: Sequence[Sequence]) -> tuple[tuple, tuple]:
    """Reduce a positive definite binary form under GL(2, Z) congruence.

    Returns ``(reduced, U)`` with ``U^T gram U = reduced`` and
    ``reduced = [[a, b], [b, c]]`` satisfying ``0 <= 2b <= a <= c``.
    Only size 2 is supported.
    """
    g = sym_matrix(gram)
    if len(g) != 2:
        raise InvalidParameters("reduction is implemented for binary forms only")
    if not is_positive_definite(g):
        raise NotPositiveDefinite("form is not positive definite")
    a, b, c = g[0][0], g[0][1], g[1][1]
    u = [[1, 0], [0, 1]]

    def reduced():
        return abs(2 * b) <= a <= c

    while not reduced():
        if a > c:
            # swap basis vectors
            a, c = c, a
            u = [[u[0][1], u[0][0]], [u[1][1], u[1][0]]]
            continue
        k = _round_half_down(b / a)
        # second basis vector y -> y - k x
        c = c - 2 * k * b + k * k * a
        b = b - k * a
        u = [[u[0][0], u[0][1] - k * u[0][0]], [u[1][0], u[1][1] - k * u[1][0]]]
    if b < 0:
        b = -b
        u = [[u[0][0], -u[0][1]], [u[1][0], -u[1][1]]]
    out = ((a, b), (b, c))
    out = tuple(tuple(linalg.normalize_int(x) for x in row) for row in out)
    return out, tuple(tuple(row) for row in u)


def is_reduced(gram: Sequence[Sequence]) -> bool:
    a, b, c = gram[0][0], gram[0][1], gram[1][1]
    return 0 <= 2 * b <= a <= c

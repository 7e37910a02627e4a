"""Exact linear algebra over the rationals.

Vectors are tuples, matrices are tuples of row tuples. Entries are ``int``
or :class:`fractions.Fraction`; nothing here ever produces a float.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple
Matrix = tuple


def to_fraction(x) -> Fraction:
    """Coerce ``x`` (int, Fraction, or a ``"p/q"`` string) to a Fraction.

    Floats are refused: they would silently smuggle rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def fraction_str(x) -> str:
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(m: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in m)


def normalize_int(x):
    """Return ``x`` as an int when it is an integral Fraction."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def rref(rows: Iterable[Sequence], ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.
    """
    m = [[to_fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Iterable[Sequence], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def primitive(v: Sequence) -> Vector:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [to_fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def canonical_basis(vectors: Iterable[Sequence], ncols: int) -> list[Vector]:
    """Deterministic integer basis of the span: primitive RREF rows, sorted."""
    vectors = list(vectors)
    if not vectors:
        return []
    red, _ = rref(vectors, ncols)
    return sorted(primitive(r) for r in red)


def project_out(v: Sequence, subspace: Sequence[Sequence]) -> Vector:
    """Component of ``v`` orthogonal (standard inner product) to ``subspace``.

    ``subspace`` must be a linearly independent list.
    """
    if not subspace:
        return tuple(to_fraction(x) for x in v)
    k = len(subspace)
    gram = [[to_fraction(dot(subspace[i], subspace[j])) for j in range(k)] for i in range(k)]
    rhs = [to_fraction(dot(subspace[i], v)) for i in range(k)]
    coeffs = solve(gram, rhs)
    out = [to_fraction(x) for x in v]
    for c, s in zip(coeffs, subspace):
        for i, x in enumerate(s):
            out[i] -= c * x
    return tuple(out)


def solve(a: Sequence[Sequence], b: Sequence) -> Vector:
    """Solve the square nonsingular system ``a x = b`` exactly."""
    n = len(a)
    aug = [list(a[i]) + [b[i]] for i in range(n)]
    red, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(row[n] for row in red)


def solve_in_span(columns: Sequence[Sequence], b: Sequence):
    """Coefficients ``c`` with ``sum c_j columns[j] = b``, or None.

    ``columns`` must be linearly independent.
    """
    k = len(columns)
    n = len(b)
    aug = [[columns[j][i] for j in range(k)] + [b[i]] for i in range(n)]
    red, pivots = rref(aug, k + 1)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for row, p in zip(red, pivots):
        coeffs[p] = row[k]
    return tuple(coeffs)


def det(m: Sequence[Sequence]):
    """Exact determinant.

    Integer matrices go through fraction-free Bareiss elimination and return
    an int; anything else is eliminated over Fractions.
    """
    n = len(m)
    if n == 0:
        return 1
    if all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for row in m for x in row):
        return _det_bareiss([[int(x) for x in row] for row in m])
    a = [[to_fraction(x) for x in row] for row in m]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result *= p
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / p
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * result


def _det_bareiss(a: list[list[int]]) -> int:
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m: Sequence[Sequence]) -> Matrix:
    n = len(m)
    aug = [list(m[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(normalize_int(x) for x in row[n:]) for row in red)


def int_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    inv = inverse(m)
    for row in inv:
        for x in row:
            if not isinstance(x, int):
                raise ValueError("matrix is not unimodular")
    return inv

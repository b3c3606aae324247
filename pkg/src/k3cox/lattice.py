"""Integer symmetric bilinear forms of hyperbolic signature.

Classes are plain tuples of Python ints; matrices are tuples of row tuples.
Everything is exact: ints for the lattice, :class:`fractions.Fraction` for
diagonalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]


class LatticeError(ValueError):
    """Raised for malformed forms or vectors of the wrong length."""


def as_vector(v: Sequence[int]) -> Vector:
    return tuple(int(x) for x in v)


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def content(v: Sequence[int]) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> Vector:
    """Divide by the content, keeping the direction."""
    g = content(v)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def add(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(k: int, v: Sequence[int]) -> Vector:
    return tuple(k * a for a in v)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def transpose(a: Sequence[Sequence]) -> tuple:
    return tuple(zip(*a))


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def determinant(a: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [list(row) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num / prev if isinstance(num, Fraction) else _exact_div(num, prev)
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _exact_div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        assert r == 0
        return q
    return Fraction(a) / b


def inverse(a: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse by Gauss-Jordan over the rationals."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise LatticeError("singular matrix")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def rank(vectors: Sequence[Sequence[int]]) -> int:
    """Rank over Q of a list of vectors."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


@dataclass(frozen=True)
class Lattice:
    """A nondegenerate even-or-odd integral form of signature (1, n-1)."""

    gram: Matrix

    def __post_init__(self):
        gram = as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if n == 0 or any(len(row) != n for row in gram):
            raise LatticeError("Gram matrix must be square and nonempty")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("Gram matrix is not symmetric")
        if determinant(gram) == 0:
            raise LatticeError("Gram matrix is degenerate")
        pos, neg = signature(gram)
        if pos != 1:
            raise LatticeError(f"signature is ({pos}, {neg}), expected (1, {n - 1})")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def _check(self, v: Sequence[int]) -> None:
        if len(v) != self.rank:
            raise LatticeError(f"vector {tuple(v)} has length {len(v)}, lattice rank is {self.rank}")

    def pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        self._check(u)
        self._check(v)
        q = self.gram
        return sum(u[i] * sum(q[i][j] * v[j] for j in range(len(v))) for i in range(len(u)))

    def square(self, v: Sequence[int]) -> int:
        s = self.pairing(v, v)
        if self.is_even:
            assert s % 2 == 0, "odd square in an even lattice"
        return s

    def form_image(self, v: Sequence[int]) -> Vector:
        """Q v: the functional x -> pairing(x, v) in standard coordinates."""
        self._check(v)
        return tuple(dot(row, v) for row in self.gram)


def _symmetric_reduce(q: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Congruence-diagonalize q: returns (diag, B) with B q B^T = diag(diag)."""
    n = len(q)
    a = [[Fraction(x) for x in row] for row in q]
    b = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def row_op(i, j, f):
        # basis change e_i <- e_i + f e_j, applied on both sides
        a[i] = [x + f * y for x, y in zip(a[i], a[j])]
        for r in range(n):
            a[r][i] += f * a[r][j]
        b[i] = [x + f * y for x, y in zip(b[i], b[j])]

    for k in range(n):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if p is not None:
                a[k], a[p] = a[p], a[k]
                for r in range(n):
                    a[r][k], a[r][p] = a[r][p], a[r][k]
                b[k], b[p] = b[p], b[k]
            else:
                j = next((i for i in range(k + 1, n) if a[k][i] != 0), None)
                if j is None:
                    raise LatticeError("degenerate form")
                # all later diagonal entries vanish: a_kk(new) = 2 a_kj != 0
                row_op(k, j, Fraction(1))
        piv = a[k][k]
        for i in range(k + 1, n):
            if a[i][k] != 0:
                row_op(i, k, -a[i][k] / piv)
    return [a[i][i] for i in range(n)], b


def signature(gram: Sequence[Sequence[int]]) -> tuple[int, int]:
    d, _ = _symmetric_reduce(gram)
    return sum(1 for x in d if x > 0), sum(1 for x in d if x < 0)


def diagonalize(lat: Lattice) -> tuple[tuple[tuple[Fraction, ...], ...], tuple[tuple[Fraction, ...], ...]]:
    """Return (Dg, B) with Dg = B Q B^T diagonal, Dg[0][0] > 0 and the rest negative."""
    d, b = _symmetric_reduce(lat.gram)
    pos = [i for i, x in enumerate(d) if x > 0]
    if len(pos) != 1 or any(x == 0 for x in d):
        raise LatticeError("form is not of signature (1, n-1)")
    order = pos + [i for i in range(len(d)) if i != pos[0]]
    n = len(d)
    dg = tuple(tuple(d[order[i]] if i == j else Fraction(0) for j in range(n)) for i in range(n))
    bb = tuple(tuple(b[i]) for i in order)
    return dg, bb


def apply(m: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    """Image of v under m, rows of m being the images of the basis vectors."""
    n = len(v)
    return tuple(sum(v[i] * m[i][j] for i in range(n)) for j in range(len(m[0])))


def is_isometry(lat: Lattice, m: Sequence[Sequence[int]]) -> bool:
    m = as_matrix(m)
    n = lat.rank
    if len(m) != n or any(len(row) != n for row in m):
        raise LatticeError("isometry candidate has the wrong shape")
    return mat_mul(mat_mul(m, lat.gram), transpose(m)) == lat.gram

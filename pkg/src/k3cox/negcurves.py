"""Enumeration of (-2)-curve classes by slicing the hyperboloid v^2 = -2.

The search walks slices of increasing height above a negative definite
hyperplane, in the manner of Vinberg's algorithm, and stops once every facet
of the cone spanned by the collected roots carries a negative semidefinite
configuration.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence

from .cones import ConeError, cone_from_generators, is_negative_semidefinite
from .lattice import (
    Lattice,
    LatticeError,
    Vector,
    diagonalize,
    dot,
    inverse,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_SLICES = 200


class FinitenessError(RuntimeError):
    """The slice budget ran out before the stopping test succeeded."""


def _unimodular_completion(a: Sequence[int]) -> tuple[int, list[list[int]]]:
    """Return (g, U) with U unimodular (columns) and a.U = (g, 0, ..., 0)."""
    n = len(a)
    a = list(a)
    u = [[int(i == j) for j in range(n)] for i in range(n)]  # u[row][col]

    def col_op(dst, src, f):  # column dst += f * column src
        a[dst] += f * a[src]
        for r in range(n):
            u[r][dst] += f * u[r][src]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for r in range(n):
            u[r][i], u[r][j] = u[r][j], u[r][i]

    for j in range(1, n):
        while a[j] != 0:
            q = a[0] // a[j]
            col_op(0, j, -q)
            swap(0, j)
    if a[0] < 0:
        a[0] = -a[0]
        for r in range(n):
            u[r][0] = -u[r][0]
    return a[0], u


def _ellipsoid_points(m: list[list[Fraction]], center: list[Fraction], radius: Fraction) -> Iterator[list[int]]:
    """Integer z with (z - c)^T M (z - c) == radius, M positive definite.

    Fincke-Pohst style enumeration on the LDL^T decomposition, with integer
    square-root bounds so no floating point is involved.
    """
    k = len(m)
    if k == 0:
        if radius == 0:
            yield []
        return
    # M = sum_i d_i (x_i + sum_{j>i} mu_ij x_j)^2
    a = [row[:] for row in m]
    d = [Fraction(0)] * k
    mu = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise LatticeError("complement form is not definite")
        for j in range(i + 1, k):
            mu[i][j] = a[i][j] / d[i]
        for r in range(i + 1, k):
            for s in range(i + 1, k):
                a[r][s] -= d[i] * mu[i][r] * mu[i][s]

    x = [0] * k

    def rec(i: int, budget: Fraction):
        # shift for coordinate i given x_{i+1..}
        shift = sum(mu[i][j] * (x[j] - center[j]) for j in range(i + 1, k))
        c = center[i] - shift
        # d_i (x_i - c)^2 <= budget
        q = budget / d[i]
        bound = isqrt(q.numerator * q.denominator) // q.denominator + 1
        lo = (c.numerator // c.denominator) - bound
        hi = -((-c.numerator) // c.denominator) + bound
        for xi in range(lo, hi + 1):
            used = d[i] * (xi - c) ** 2
            if used > budget:
                continue
            x[i] = xi
            if i == 0:
                if used == budget:
                    yield list(x)
            else:
                yield from rec(i - 1, budget - used)

    if radius < 0:
        return
    yield from rec(k - 1, Fraction(radius))


def affine_slice(lat: Lattice, functional: Sequence[Fraction], value: Fraction, target: int) -> list[Vector]:
    """All v in Z^n with functional.v == value and v^2 == target.

    The kernel of `functional` must be negative definite under the form, which
    makes the solution set finite.
    """
    n = lat.rank
    den = 1
    for f in functional:
        den = den * Fraction(f).denominator // _gcd(den, Fraction(f).denominator)
    a = [int(Fraction(f) * den) for f in functional]
    rhs = Fraction(value) * den
    g, u = _unimodular_completion(a)
    if g == 0:
        raise LatticeError("zero functional")
    if rhs.denominator != 1 or rhs.numerator % g:
        return []
    z1 = rhs.numerator // g
    cols = [[u[r][c] for r in range(n)] for c in range(n)]
    u0, kern = cols[0], cols[1:]
    # v = z1 u0 + sum z_j kern_j ; v^2 = -z'^T M z' + 2 b.z' + z1^2 u0^2
    mmat = [[Fraction(-lat.pairing(ki, kj)) for kj in kern] for ki in kern]
    b = [Fraction(z1 * lat.pairing(ki, u0)) for ki in kern]
    s0 = z1 * z1 * lat.pairing(u0, u0)
    if not kern:
        return [tuple(z1 * x for x in u0)] if s0 == target else []
    center = _solve(mmat, b)
    radius = sum(center[i] * sum(mmat[i][j] * center[j] for j in range(len(kern))) for i in range(len(kern))) + s0 - target
    out = []
    for z in _ellipsoid_points(mmat, center, radius):
        v = tuple(z1 * u0[r] + sum(z[j] * kern[j][r] for j in range(len(kern))) for r in range(n))
        out.append(v)
    return sorted(out)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _solve(m: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    inv = inverse(m)
    return [sum(inv[i][j] * b[j] for j in range(len(b))) for i in range(len(b))]


def pts(lat: Lattice, dg, b, t) -> list[Vector]:
    """(-2)-vectors v whose first coordinate in the diagonal basis, (B^{-T} v)_1, is t."""
    if not (dg[0][0] > 0 and all(dg[i][i] < 0 for i in range(1, lat.rank))):
        raise LatticeError("diagonal form must have sign pattern (+, -, ..., -)")
    binv = inverse(b)
    functional = [binv[j][0] for j in range(lat.rank)]
    return affine_slice(lat, functional, Fraction(t), -2)


def simple_roots(lat: Lattice, roots: Sequence[Vector], h: Sequence[int]) -> list[Vector]:
    """Positive roots (h.r > 0) that are not the sum of two positive roots."""
    vals = [lat.pairing(h, r) for r in roots]
    if any(v == 0 for v in vals):
        raise ValueError("h is orthogonal to a root; choose another h")
    positive = [r for r, v in zip(roots, vals) if v > 0]
    pset = set(positive)
    out = []
    for r in positive:
        decomposable = any(tuple(x - y for x, y in zip(r, p)) in pset for p in positive if p != r)
        if not decomposable:
            out.append(r)
    return sorted(out)


def _choose_h(lat: Lattice, roots: Sequence[Vector]) -> Vector:
    """First nonnegative integer combination of roots, in graded-lex order of
    the coefficient vector, that pairs nontrivially with every root."""
    m = len(roots)
    n = lat.rank
    deg = 1
    while True:
        for coeffs in _compositions(deg, m):
            h = tuple(sum(c * r[i] for c, r in zip(coeffs, roots)) for i in range(n))
            if all(lat.pairing(h, r) != 0 for r in roots):
                return h
        deg += 1
        if deg > 4 * m + 8:
            raise RuntimeError("no admissible combination of roots found")


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of `total` into `parts`, lexicographically descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def cone_test(lat: Lattice, vs: Sequence[Vector]) -> bool:
    """Every facet of cone(vs) carries a negative semidefinite set of vs."""
    try:
        cone = cone_from_generators(lat.rank, vs)
    except ConeError:
        return False
    for f in cone.facets:
        on = [v for v in vs if dot(f, v) == 0]
        if not is_negative_semidefinite(lat, on):
            return False
    return True


def slice_denominator(b) -> int:
    """Smallest d with (B^{-T} v)_1 in (1/d)Z for every integral v.

    For an integral B this divides |det B|.
    """
    binv = inverse(b)
    den = 1
    for row in binv:
        x = Fraction(row[0])
        den = den * x.denominator // _gcd(den, x.denominator)
    return den


def find_neg_curves(lat: Lattice, max_slices: int = DEFAULT_MAX_SLICES) -> list[Vector]:
    """Classes of (-2)-curves for one chamber of a Mori dream K3 lattice."""
    dg, b = diagonalize(lat)
    d = slice_denominator(b)
    roots = pts(lat, dg, b, 0)
    if len(roots) >= 2:
        h = _choose_h(lat, roots)
        collected = simple_roots(lat, roots, h)
    else:
        collected = list(roots)
    for i in range(1, max_slices + 1):
        new = [v for v in pts(lat, dg, b, Fraction(i, d))
               if all(lat.pairing(v, c) >= 0 for c in collected)]
        if new:
            collected.extend(new)
            log.debug("slice %d/%d: %d new roots", i, d, len(new))
            if cone_test(lat, collected):
                return sorted(collected)
    raise FinitenessError(f"stopping test not met within {max_slices} slices")


def match_curve_sets(lat: Lattice, s1: Sequence[Vector], s2: Sequence[Vector]) -> bool:
    """True iff some bijection s1 -> s2 preserves all pairwise intersection numbers."""
    if len(s1) != len(s2):
        return False
    g1 = [[lat.pairing(u, v) for v in s1] for u in s1]
    g2 = [[lat.pairing(u, v) for v in s2] for u in s2]
    k = len(s1)
    # refine by row multisets before permuting
    sig1 = [sorted(r) for r in g1]
    sig2 = [sorted(r) for r in g2]
    if sorted(map(tuple, sig1)) != sorted(map(tuple, sig2)):
        return False

    def extend(assign: list[int], used: set[int]) -> bool:
        i = len(assign)
        if i == k:
            return True
        for j in range(k):
            if j in used or sig1[i] != sig2[j]:
                continue
            if all(g1[i][p] == g2[j][assign[p]] for p in range(i)) and g1[i][i] == g2[j][j]:
                assign.append(j)
                used.add(j)
                if extend(assign, used):
                    return True
                assign.pop()
                used.discard(j)
        return False

    return extend([], set())

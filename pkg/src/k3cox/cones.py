"""Full-dimensional pointed rational polyhedral cones in Z^n.

A cone is stored twice, by its primitive extreme rays and by its primitive
inward facet normals (standard dot product). Conversion between the two uses
the double description method in exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .lattice import Lattice, Vector, as_vector, determinant, dot, primitive, rank


class ConeError(ValueError):
    pass


@dataclass(frozen=True)
class RationalCone:
    dim: int
    rays: tuple[Vector, ...]
    facets: tuple[Vector, ...]

    def contains(self, v: Sequence[int]) -> bool:
        return all(dot(f, v) >= 0 for f in self.facets)

    def interior_contains(self, v: Sequence[int]) -> bool:
        return all(dot(f, v) > 0 for f in self.facets)

    def grading(self) -> Vector:
        """An integral functional that is positive on every nonzero point of the cone."""
        return tuple(sum(f[i] for f in self.facets) for i in range(self.dim))

    def rays_on(self, facet: Sequence[int]) -> list[Vector]:
        return [r for r in self.rays if dot(facet, r) == 0]


def _cofactor_normal(vectors: Sequence[Sequence[int]]) -> Vector:
    """Integer normal of n-1 vectors in Z^n (generalized cross product)."""
    n = len(vectors[0])
    out = []
    for i in range(n):
        minor = [[v[j] for j in range(n) if j != i] for v in vectors]
        out.append((-1) ** i * int(determinant(minor)) if minor[0] else 1)
    return tuple(out)


def _extreme_rays_of_dual(gens: Sequence[Vector], n: int) -> list[Vector]:
    """Extreme rays of {y : g.y >= 0 for all g}, for gens spanning Q^n.

    Double description: start from n independent constraints (a simplicial
    cone) and add the remaining ones one at a time, keeping combinatorially
    adjacent pairs.
    """
    basis: list[Vector] = []
    for g in gens:
        if rank(basis + [g]) > len(basis):
            basis.append(g)
        if len(basis) == n:
            break
    if len(basis) < n:
        raise ConeError("generators do not span the ambient space")
    # Initial rays: the columns of basis^{-1}, scaled to integers.
    rays = []
    for i in range(n):
        others = [basis[j] for j in range(n) if j != i]
        r = _cofactor_normal(others) if n > 1 else (1,)
        if dot(basis[i], r) < 0:
            r = tuple(-x for x in r)
        rays.append(primitive(r))
    constraints = list(basis)
    for g in gens:
        if g in constraints:
            continue
        vals = [dot(g, r) for r in rays]
        pos = [r for r, s in zip(rays, vals) if s > 0]
        zero = [r for r, s in zip(rays, vals) if s == 0]
        negs = [(r, s) for r, s in zip(rays, vals) if s < 0]
        if not negs:
            constraints.append(g)
            continue
        tight = {r: frozenset(i for i, c in enumerate(constraints) if dot(c, r) == 0) for r in rays}
        new = []
        for p in pos:
            sp = dot(g, p)
            for q, sq in negs:
                common = tight[p] & tight[q]
                if len(common) < n - 2:
                    continue
                if rank([constraints[i] for i in common]) != n - 2:
                    continue
                # combinatorial adjacency: no other ray is tight on all of `common`
                if any(r != p and r != q and common <= tight[r] for r in rays):
                    continue
                new.append(primitive(tuple(sp * b - sq * a for a, b in zip(p, q))))
        rays = pos + zero + new
        constraints.append(g)
    return sorted(set(rays))


def _canonical(gens: Iterable[Sequence[int]], n: int) -> list[Vector]:
    out = set()
    for g in gens:
        g = as_vector(g)
        if len(g) != n:
            raise ConeError(f"vector {g} does not have length {n}")
        if any(g):
            out.add(primitive(g))
    return sorted(out)


def cone_from_generators(n: int, gens: Iterable[Sequence[int]]) -> RationalCone:
    gens = _canonical(gens, n)
    if not gens:
        raise ConeError("empty generator list")
    if rank(gens) < n:
        raise ConeError("cone is not full-dimensional")
    facets = _extreme_rays_of_dual(gens, n)
    if rank(facets) < n:
        raise ConeError("cone contains a line")
    rays = []
    for g in gens:
        on = [f for f in facets if dot(f, g) == 0]
        if len(on) >= n - 1 and rank(on) == n - 1:
            rays.append(g)
    return RationalCone(n, tuple(sorted(rays)), tuple(facets))


def cone_from_facets(n: int, facets: Iterable[Sequence[int]]) -> RationalCone:
    return dual_cone(cone_from_generators(n, facets))


def dual_cone(c: RationalCone) -> RationalCone:
    return RationalCone(c.dim, c.facets, c.rays)


def contains(c: RationalCone, v: Sequence[int]) -> bool:
    return c.contains(v)


def _adjugate(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    """(adj, det) with adj * m = det * I, for a square integer matrix."""
    n = len(m)
    det = int(determinant(m))
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[m[r][c] for c in range(n) if c != j] for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * (int(determinant(minor)) if minor else 1)
    return adj, det


def _parallelepiped_points(rays: Sequence[Vector]) -> set[Vector]:
    """Lattice points of {sum l_i r_i : 0 <= l_i < 1} for linearly independent rays."""
    n = len(rays)
    cols = [[rays[j][i] for j in range(n)] for i in range(n)]  # rays as columns
    adj, det = _adjugate(cols)
    if det < 0:
        adj = [[-x for x in row] for row in adj]
        det = -det

    def reduce(x):
        lam = [dot(row, x) for row in adj]  # det * coordinates in the ray basis
        fl = [l // det for l in lam]
        return tuple(x[i] - sum(cols[i][j] * fl[j] for j in range(n)) for i in range(n))

    zero = tuple([0] * n)
    seen = {zero}
    frontier = [zero]
    units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    while frontier:
        nxt = []
        for p in frontier:
            for e in units:
                q = reduce(tuple(a + b for a, b in zip(p, e)))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    assert len(seen) == det
    return seen


def _triangulate(c: RationalCone) -> list[tuple[Vector, ...]]:
    """Simplicial cones covering c (pulling triangulation from the least ray).

    Each face is triangulated by coning its least ray over the triangulations
    of its facets that avoid that ray; the facets of a face are its maximal
    intersections with facets of c.
    """
    facet_sets = [frozenset(c.rays_on(f)) for f in c.facets]
    return _triangulate_face(frozenset(c.rays), c.dim, facet_sets)


def _triangulate_face(face: frozenset, d: int, facet_sets) -> list[tuple[Vector, ...]]:
    if len(face) == d:
        return [tuple(sorted(face))]
    apex = min(face)
    subfaces = set()
    for fs in facet_sets:
        inter = face & fs
        if apex not in inter and inter and rank(list(inter)) == d - 1:
            subfaces.add(inter)
    out = []
    for sub in sorted(subfaces, key=sorted):
        for simplex in _triangulate_face(sub, d - 1, facet_sets):
            out.append((apex,) + simplex)
    return out


def hilbert_basis(c: RationalCone) -> list[Vector]:
    """Minimal generating set of the monoid c ∩ Z^n, sorted lexicographically."""
    candidates = set(c.rays)
    for simplex in _triangulate(c):
        candidates |= _parallelepiped_points(simplex)
    zero = tuple([0] * c.dim)
    candidates.discard(zero)
    grade = c.grading()
    ordered = sorted(candidates, key=lambda v: (dot(grade, v), v))
    basis: list[Vector] = []
    for x in ordered:
        gx = dot(grade, x)
        if not any(dot(grade, h) < gx and c.contains(tuple(a - b for a, b in zip(x, h))) for h in basis):
            basis.append(x)
    return sorted(basis)


def is_negative_semidefinite(lat: Lattice, vs: Sequence[Sequence[int]]) -> bool:
    """True iff the Gram matrix of vs under lat has no positive eigenvalue."""
    m = [[Fraction(-lat.pairing(u, v)) for v in vs] for u in vs]
    return _is_psd(m)


def _is_psd(m: list[list[Fraction]]) -> bool:
    n = len(m)
    m = [row[:] for row in m]
    for k in range(n):
        if m[k][k] < 0:
            return False
        if m[k][k] == 0:
            if any(m[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return True

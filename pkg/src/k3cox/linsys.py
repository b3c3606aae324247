"""Linear systems on a K3 surface, read off from its Picard lattice.

Given the (-2)-curve classes, h^0 is computed by peeling off fixed
components until the class is nef, where it is determined by the square;
h^2 follows by Serre duality and h^1 by Riemann-Roch.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .cones import RationalCone, cone_from_generators, dual_cone, hilbert_basis
from .lattice import Lattice, Vector, as_vector, content, primitive, sub
from .negcurves import affine_slice


class PreconditionError(ValueError):
    pass


class K3Surface:
    """A K3 surface known through its Picard lattice and its (-2)-curves."""

    def __init__(self, lattice: Lattice, neg: Sequence[Sequence[int]], ample: Sequence[int] | None = None):
        self.lattice = lattice
        self.neg: list[Vector] = sorted(as_vector(c) for c in neg)
        for c in self.neg:
            if lattice.square(c) != -2:
                raise PreconditionError(f"{c} does not have square -2")
        if ample is None:
            ample = self._default_ample()
        self.ample = as_vector(ample)
        if lattice.square(self.ample) <= 0 or any(lattice.pairing(self.ample, c) <= 0 for c in self.neg):
            raise PreconditionError(f"{self.ample} is not ample")
        self._h0: dict[Vector, int] = {}

    def _default_ample(self) -> Vector:
        if not self.neg:
            raise PreconditionError("an ample class is required when there are no (-2)-curves")
        rays = self.nef_cone.rays
        return tuple(sum(r[i] for r in rays) for i in range(self.rank))

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def pairing(self, u, v) -> int:
        return self.lattice.pairing(u, v)

    def square(self, v) -> int:
        return self.lattice.square(v)

    @cached_property
    def eff_cone(self) -> RationalCone:
        return cone_from_generators(self.rank, self.neg)

    @cached_property
    def nef_cone(self) -> RationalCone:
        return dual_cone(cone_from_generators(self.rank, [self.lattice.form_image(c) for c in self.neg]))

    @cached_property
    def hb_eff(self) -> list[Vector]:
        return hilbert_basis(self.eff_cone)

    @cached_property
    def hb_nef(self) -> list[Vector]:
        return hilbert_basis(self.nef_cone)

    def is_nef(self, d) -> bool:
        return all(self.pairing(d, c) >= 0 for c in self.neg)

    def h0(self, d) -> int:
        d = as_vector(d)
        hit = self._h0.get(d)
        if hit is not None:
            return hit
        path = []
        cur = d
        while True:
            if cur in self._h0:
                val = self._h0[cur]
                break
            path.append(cur)
            if not any(cur):
                val = 1
                break
            if self.pairing(cur, self.ample) < 0:
                val = 0
                break
            c = next((c for c in self.neg if self.pairing(cur, c) < 0), None)
            if c is not None:
                cur = sub(cur, c)
                continue
            sq = self.square(cur)
            if sq > 0:
                val = 2 + sq // 2
            elif sq == 0:
                val = content(cur) + 1
            else:  # nef classes have nonnegative square
                raise AssertionError(f"nef class {cur} with negative square")
            break
        for p in path:
            self._h0[p] = val
        return val

    def h2(self, d) -> int:
        return self.h0(tuple(-x for x in d))

    def h1(self, d) -> int:
        d = as_vector(d)
        val = self.h0(d) + self.h2(d) - 2 - self.square(d) // 2
        assert val >= 0, f"negative h1 for {d}"
        return val

    def is_effective(self, d) -> bool:
        return self.h0(d) > 0

    @cached_property
    def elliptic_classes(self) -> list[Vector]:
        """Primitive isotropic nef classes (fibers of elliptic fibrations)."""
        nef = self.nef_cone
        found = {r for r in nef.rays if self.square(r) == 0}
        if self.rank == 3:
            for f in nef.facets:
                r1, r2 = nef.rays_on(f)
                found.update(self._isotropic_between(r1, r2))
        elif self.rank > 3:
            raise NotImplementedError("facet isotropic search is implemented for rank <= 3")
        return sorted(found)

    def _isotropic_between(self, r1: Vector, r2: Vector) -> list[Vector]:
        """Primitive isotropic classes a r1 + b r2 with a, b > 0."""
        p, q, s = self.square(r1), self.pairing(r1, r2), self.square(r2)
        # p a^2 + 2 q a b + s b^2 = 0 with a, b > 0
        disc = q * q - p * s
        if disc < 0:
            return []
        root = _isqrt_exact(disc)
        if root is None:
            return []
        out = []
        if p == 0:
            # b (2 q a + s b) = 0; b = 0 is r1 itself
            ratios = [(-s, 2 * q)] if q != 0 else []
        else:
            ratios = [(-q + sign * root, p) for sign in (1, -1)]  # a / b = (-q ± root) / p
        for a, b in ratios:
            if b < 0:
                a, b = -a, -b
            if a > 0 and b > 0:
                v = primitive(tuple(a * x + b * y for x, y in zip(r1, r2)))
                assert self.square(v) == 0
                out.append(v)
        return out

    def isotropic_slice(self, d, k: int) -> list[Vector]:
        """Primitive isotropic nef classes F with d.F == k, by direct enumeration."""
        d = as_vector(d)
        if self.square(d) <= 0:
            raise PreconditionError("isotropic_slice needs a class of positive square")
        functional = self.lattice.form_image(d)
        out = []
        for v in affine_slice(self.lattice, functional, Fraction(k), 0):
            if content(v) == 1 and self.is_nef(v):
                out.append(v)
        return sorted(out)

    def is_bpf(self, d) -> bool:
        """Base point freeness of |d| for nef effective nonzero d."""
        d = as_vector(d)
        if not any(d) or not self.is_nef(d) or not self.is_effective(d):
            raise PreconditionError(f"{d} must be nonzero, nef and effective")
        fibers = set(self.elliptic_classes)
        for e in self.neg:
            rest = sub(d, e)
            k = content(rest)
            if k < 2:
                continue
            f = primitive(rest)
            if f in fibers and self.pairing(f, e) == 1:
                return False
        return True

    def is_hyperelliptic(self, d) -> bool:
        d = as_vector(d)
        sq = self.square(d)
        if not self.is_nef(d) or sq <= 0:
            raise PreconditionError(f"{d} must be nef of positive square")
        if sq == 2:
            return True
        if self.isotropic_slice(d, 2):
            return True
        return _is_twice_square_two(self, d)

    def is_very_ample(self, d) -> bool:
        d = as_vector(d)
        if not self.is_nef(d) or self.square(d) < 4:
            return False
        if self.isotropic_slice(d, 1) or self.isotropic_slice(d, 2):
            return False
        if any(self.pairing(d, c) == 0 for c in self.neg):
            return False
        return not _is_twice_square_two(self, d)


def _is_twice_square_two(s: K3Surface, d: Vector) -> bool:
    if any(x % 2 for x in d):
        return False
    return s.square(tuple(x // 2 for x in d)) == 2


def _isqrt_exact(n: int):
    from math import isqrt

    r = isqrt(n)
    return r if r * r == n else None

"""Certificates that a degree is needed in every generating set.

A degree D is necessary when every way of writing D as a nonnegative
combination of the other degrees forces a common base point on the span of
the products, while |D| itself is base point free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

from .cones import ConeError, cone_from_generators
from .lattice import Vector, apply, as_vector, dot, identity, is_isometry, mat_mul, rank, scale, sub, transpose
from .linsys import K3Surface, PreconditionError


class UnboundedError(ValueError):
    """The solution set of the system is not finite."""


def find_grading(columns: Sequence[Vector]) -> Vector:
    """An integer vector pairing strictly positively with every column.

    Exists exactly when no nonnegative nonzero combination of the columns
    vanishes, i.e. when the solution sets of the system are finite.
    """
    cols = [as_vector(c) for c in columns]
    if not cols:
        return ()
    m = len(cols[0])
    if any(not any(c) for c in cols):
        raise UnboundedError("zero column")
    k = rank(cols)
    # coordinates on which the column span projects isomorphically
    coords: list[int] = []
    for i in range(m):
        trial = coords + [i]
        if rank([tuple(c[j] for j in trial) for c in cols]) == len(trial):
            coords = trial
        if len(coords) == k:
            break
    proj = [tuple(c[j] for j in coords) for c in cols]
    if k == 1:
        signs = {(x > 0) - (x < 0) for (x,) in proj}
        if len(signs) != 1:
            raise UnboundedError("columns span a line in both directions")
        small = [signs.pop()]
    else:
        try:
            cone = cone_from_generators(k, proj)
        except ConeError as exc:
            raise UnboundedError(str(exc)) from exc
        small = list(cone.grading())
    g = [0] * m
    for j, x in zip(coords, small):
        g[j] = x
    g = tuple(g)
    assert all(dot(g, c) > 0 for c in cols)
    return g


def _columns(m: Sequence[Sequence[int]]) -> list[Vector]:
    return [tuple(col) for col in transpose(tuple(tuple(r) for r in m))] if m else []


def _check_grading(cols, grading) -> Vector:
    if grading is None:
        return find_grading(cols)
    g = as_vector(grading)
    if any(dot(g, c) <= 0 for c in cols):
        raise UnboundedError("grading is not positive on every column")
    return g


def iter_solutions(cols: Sequence[Vector], v, grading=None) -> Iterator[tuple[int, ...]]:
    """Nonnegative integer w with sum w_j cols[j] = v, depth first."""
    v = as_vector(v)
    cols = [as_vector(c) for c in cols]
    if not cols:
        if not any(v):
            yield ()
        return
    g = _check_grading(cols, grading)
    weights = [dot(g, c) for c in cols]
    n = len(cols)
    coef = [0] * n

    def rec(j: int, rest: Vector):
        budget = dot(g, rest)
        if budget < 0:
            return
        if j == n - 1:
            q, r = divmod(budget, weights[j])
            if r == 0 and scale(q, cols[j]) == rest:
                coef[j] = q
                yield tuple(coef)
            return
        for k in range(budget // weights[j], -1, -1):
            coef[j] = k
            yield from rec(j + 1, sub(rest, scale(k, cols[j])))
        coef[j] = 0

    yield from rec(0, v)


def nonneg_solutions(m: Sequence[Sequence[int]], v, grading=None) -> list[tuple[int, ...]]:
    """All nonnegative integer solutions of m w = v, sorted."""
    cols = _columns(m)
    if not cols:
        return [()] if not any(v) else []
    return sorted(iter_solutions(cols, v, grading))


def has_solution(cols: Sequence[Vector], v, grading=None) -> bool:
    """Whether v is a nonnegative integer combination of cols (memoized search)."""
    v = as_vector(v)
    cols = [as_vector(c) for c in cols]
    if not any(v):
        return True
    if not cols:
        return False
    g = _check_grading(cols, grading)
    cols.sort(key=lambda c: -dot(g, c))
    weights = [dot(g, c) for c in cols]
    n = len(cols)

    @lru_cache(maxsize=None)
    def rec(j: int, rest: Vector) -> bool:
        if not any(rest):
            return True
        if j == n:
            return False
        budget = dot(g, rest)
        for k in range(budget // weights[j], -1, -1):
            nxt = sub(rest, scale(k, cols[j]))
            if dot(g, nxt) >= 0 and rec(j + 1, nxt):
                return True
        return False

    return rec(0, v)


def _ample_grading(s: K3Surface) -> Vector:
    # pairing with the ample class is positive on nonzero effective classes
    return s.lattice.form_image(s.ample)


def support_set(s: K3Surface, d, g: Sequence) -> list[Vector]:
    d = as_vector(d)
    return sorted({as_vector(w) for w in g if as_vector(w) != d and s.is_effective(sub(d, as_vector(w)))})


def writings(s: K3Surface, d, g: Sequence) -> list[dict[Vector, int]]:
    """Every way to write d as a nonnegative combination of the other degrees."""
    sg = support_set(s, d, g)
    if not sg:
        return []
    out = []
    for w in iter_solutions(sg, d, _ample_grading(s)):
        out.append({c: k for c, k in zip(sg, w) if k})
    return sorted(out, key=lambda x: sorted(x.items()))


def lemma_l2_applies(s: K3Surface, e1, e2, e3, d) -> bool:
    es = [as_vector(e) for e in (e1, e2, e3)]
    d = as_vector(d)
    neg = set(s.neg)
    if any(e not in neg for e in es):
        return False
    if tuple(sum(x) for x in zip(*es)) != d:
        return False
    if not any(d) or not s.is_nef(d) or not s.is_effective(d) or not s.is_bpf(d):
        return False
    return all(s.h1(tuple(x + y for x, y in zip(a, b))) == 0 for a, b in combinations(es, 2))


@dataclass
class MinimalityEvidence:
    reason: str
    b1: list[Vector] = field(default_factory=list)
    b2: list[tuple[Vector, Vector]] = field(default_factory=list)
    b3: list[tuple[Vector, Vector, Vector]] = field(default_factory=list)
    koszul_pairs: list[tuple[Vector, Vector]] = field(default_factory=list)
    span_bound: int | None = None

    @property
    def certified(self) -> bool:
        if self.reason == "no-writings":
            return True
        return bool(self.b1 or self.b2 or self.b3 or self.koszul_pairs) or self.reason == "dimension-count"


def is_minimal_degree(s: K3Surface, d, g: Sequence) -> tuple[bool, MinimalityEvidence]:
    """Certify that a generator of degree d is needed; False means inconclusive.

    Obstructions are read universally: a curve (pair, triple) qualifies when
    no writing of d avoids it (avoids both, avoids all three). Besides the
    three base locus lists, a disjoint pair with a nonzero Koszul cokernel,
    or a plain dimension count of the product spaces, also certifies.
    """
    d = as_vector(d)
    gset = {as_vector(w) for w in g}
    if d not in gset:
        raise PreconditionError(f"{d} is not among the degrees")
    sg = support_set(s, d, gset)
    if not sg or not has_solution(sg, d, _ample_grading(s)):
        return True, MinimalityEvidence("no-writings")
    if not s.is_nef(d) or not s.is_bpf(d):
        return False, MinimalityEvidence("not-base-point-free")
    grading = _ample_grading(s)
    curves = [c for c in s.neg if c in sg]

    def avoidable(*cs) -> bool:
        rest = [w for w in sg if w not in cs]
        return has_solution(rest, d, grading)

    b1 = [c for c in curves if not avoidable(c)]
    b2 = [(a, b) for a, b in combinations(curves, 2) if s.pairing(a, b) > 0 and not avoidable(a, b)]
    b3 = [t for t in combinations(s.neg, 3) if lemma_l2_applies(s, *t, d) and not avoidable(*(c for c in t if c in sg))]
    kp = [(a, b) for a, b in combinations(curves, 2) if koszul_codimension(s, d, a, b) > 0 and not avoidable(a, b)]
    if b1 or b2 or b3 or kp:
        return True, MinimalityEvidence("obstructed", b1, b2, b3, kp)
    bound = span_bound(s, d, sg)
    if bound is not None and bound < s.h0(d):
        return True, MinimalityEvidence("dimension-count", span_bound=bound)
    return False, MinimalityEvidence("inconclusive", span_bound=bound)


def koszul_codimension(s: K3Surface, d, a, b) -> int:
    """Lower bound for the codimension of s_a H0(d-a) + s_b H0(d-b) in H0(d), for disjoint curves a, b.

    The Koszul sequence of two sections without common zeros gives
    H0(d-a) + H0(d-b) -> H0(d) -> H1(d-a-b) -> H1(d-a) + H1(d-b).
    """
    if s.pairing(a, b) != 0:
        return 0
    return s.h1(sub(sub(d, a), b)) - s.h1(sub(d, a)) - s.h1(sub(d, b))


def span_bound(s: K3Surface, d, sg: Sequence[Vector], limit: int = 500) -> int | None:
    """Upper bound for the dimension spanned by products of lower degree sections.

    A writing d = sum k_w w contributes at most prod dim Sym^{k_w} H0(w).
    Returns None when there are more than ``limit`` writings.
    """
    total = 0
    for count, w in enumerate(iter_solutions(sg, d, _ample_grading(s))):
        if count >= limit:
            return None
        term = 1
        for c, k in zip(sg, w):
            if k:
                term *= comb(s.h0(c) + k - 1, k)
        total += term
    return total


def replay_evidence(s: K3Surface, d, g: Sequence, ev: MinimalityEvidence) -> bool:
    """Recheck every witness against the full list of writings."""
    ws = writings(s, d, g)
    if ev.reason == "no-writings":
        return not ws
    used = [set(w) for w in ws]
    ok = all(all(c in u for u in used) for c in ev.b1)
    ok &= all(s.pairing(a, b) > 0 and all(a in u or b in u for u in used) for a, b in ev.b2)
    ok &= all(lemma_l2_applies(s, *t, d) and all(any(c in u for c in t) for u in used) for t in ev.b3)
    ok &= all(koszul_codimension(s, d, a, b) > 0 and all(a in u or b in u for u in used) for a, b in ev.koszul_pairs)
    if ev.reason == "dimension-count":
        ok &= span_bound(s, d, support_set(s, d, g)) == ev.span_bound < s.h0(d)
    return ok


# -- Involutions ------------------------------------------------------------

def validate_involution(s: K3Surface, iota, a=None) -> None:
    iota = tuple(tuple(r) for r in iota)
    if not is_isometry(s.lattice, iota):
        raise PreconditionError("involution is not an isometry")
    if mat_mul(iota, iota) != identity(s.rank):
        raise PreconditionError("involution does not square to the identity")
    if a is not None and apply(iota, a) != as_vector(a):
        raise PreconditionError("involution does not fix the class")


def lemma_l1_eliminates(s: K3Surface, a, e, iota) -> bool:
    """No generator in degree 3a when a curve moved by iota leaves 3a - e nef and base point free."""
    a = as_vector(a)
    if s.square(a) != 2:
        raise PreconditionError("a must have square 2")
    if not s.is_nef(a) or not s.is_bpf(a):
        raise PreconditionError("a must be nef and base point free")
    validate_involution(s, iota, a)
    e = as_vector(e)
    if e not in set(s.neg) or apply(iota, e) == e:
        return False
    rest = sub(scale(3, a), e)
    return any(rest) and s.is_effective(rest) and s.is_nef(rest) and s.is_bpf(rest)

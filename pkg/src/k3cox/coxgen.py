"""Candidate Cox ring generator degrees and the tests that rule them out.

Every nef degree needing a generator is a sum of at most three Hilbert basis
elements of the nef cone, or twice the sum of two fibers meeting in two
points. Each candidate is run through six vanishing criteria (Koszul type
sequences, multiplication maps, ray generation, a very ample splitting); a
criterion that applies proves the candidate is not a generator degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from .lattice import Vector, add, apply, as_vector, scale, sub
from .linsys import K3Surface, PreconditionError
from .minimal import lemma_l1_eliminates, validate_involution

TEST_ORDER = (4, 1, 3, 2, 5, 6)
L1_TEST = 7  # elimination through an involution rather than a vanishing test


@dataclass(frozen=True)
class DegreeVerdict:
    degree: Vector
    tiers: tuple[str, ...]
    eliminated_by: int | None = None
    witness: tuple[Vector, ...] = ()
    note: str = ""

    @property
    def kept(self) -> bool:
        return self.eliminated_by is None


class EliminationSets:
    """The sets T1..T4 for one surface, computed once."""

    def __init__(self, s: K3Surface):
        self.s = s
        neg = list(s.neg)
        hb = list(s.hb_nef)
        self.neg_set = set(neg)
        self.hb = hb
        pool = sorted(set(neg) | set(hb))
        self.pool = pool
        self.usable = {x: (x in self.neg_set) or s.is_bpf(x) for x in pool}

        t1 = []
        for a, b in combinations(pool, 2):
            if s.pairing(a, b) == 0 and self.usable[a] and self.usable[b]:
                t1.append((a, b))
        for a in hb:
            if s.square(a) == 0 and self.usable[a]:
                t1.append((a, a))
        self.t1 = t1

        self.t2_pool = [x for x in pool if self.usable[x]]

        t3 = []
        for a in hb:
            for b in hb:
                if not self.usable[b]:
                    continue
                if s.h1(sub(a, b)) == 0 and s.h1(a) == 0 and s.h0(sub(scale(2, b), a)) == 0:
                    t3.append((a, b))
        self.t3 = t3
        self.t3_sums = {}
        for a, b in t3:
            self.t3_sums.setdefault(add(a, b), (a, b))

        t4 = {}
        for a in hb:
            sq = s.square(a)
            if sq != 2:
                t4.setdefault(scale(3, a), a)
            if sq == 0 or sq == 2 or not s.is_hyperelliptic(a):
                t4.setdefault(scale(2, a), a)
        self.t4 = t4

    @property
    def sets(self):
        return self.t1, self.t2_pool, self.t3, self.t4


def t_sets(s: K3Surface) -> tuple[list, list, list, dict]:
    """(T1 pairs, T2 element pool, T3 ordered pairs, T4 degree -> base class).

    T2 is returned as the pool of admissible members; its triples are the
    3-subsets of the pool containing at least one nef class.
    """
    return EliminationSets(s).sets


def special_pairs(s: K3Surface) -> list[tuple[Vector, Vector]]:
    fibers = s.elliptic_classes
    return [(f, g) for f, g in combinations(fibers, 2) if s.pairing(f, g) == 2]


def candidate_tiers(s: K3Surface) -> dict[Vector, set[str]]:
    hb = s.hb_nef
    tiers: dict[Vector, set[str]] = {}
    for a in hb:
        tiers.setdefault(a, set()).add("hb")
    for a, b in combinations_with_replacement(hb, 2):
        tiers.setdefault(add(a, b), set()).add("sum2")
    for a, b, c in combinations_with_replacement(hb, 3):
        tiers.setdefault(add(add(a, b), c), set()).add("sum3")
    for f, g in special_pairs(s):
        tiers.setdefault(scale(2, add(f, g)), set()).add("special-2FF'")
    return tiers


def candidate_degrees(s: K3Surface) -> list[Vector]:
    return sorted(candidate_tiers(s))


class Eliminator:
    """Runs tests 1-6 on candidate degrees of one surface."""

    def __init__(self, s: K3Surface, sets: EliminationSets | None = None):
        self.s = s
        self.ts = sets or EliminationSets(s)
        self.hb_set = set(s.hb_nef)

    def _check(self, d):
        s = self.s
        if not any(d) or not s.is_nef(d) or not s.is_effective(d):
            raise PreconditionError(f"{d} must be nonzero, nef and effective")

    def test1(self, d) -> tuple[Vector, ...] | None:
        # a summand equal to d itself makes the Koszul step tautological
        s = self.s
        d = as_vector(d)
        for a, b in self.ts.t1:
            if a == d or b == d:
                continue
            if s.h1(sub(sub(d, a), b)) == 0:
                return (a, b)
        return None

    def test2(self, d) -> tuple[Vector, ...] | None:
        s = self.s
        d = as_vector(d)
        pool = [x for x in self.ts.t2_pool if x != d]
        neg = self.ts.neg_set
        m = len(pool)
        ok = [[False] * m for _ in range(m)]
        for i in range(m):
            di = sub(d, pool[i])
            for j in range(i + 1, m):
                if s.h1(sub(di, pool[j])) == 0:
                    ok[i][j] = ok[j][i] = True
        for i in range(m):
            for j in range(i + 1, m):
                if not ok[i][j]:
                    continue
                dij = sub(sub(d, pool[i]), pool[j])
                for k in range(j + 1, m):
                    if not (ok[i][k] and ok[j][k]):
                        continue
                    if pool[i] in neg and pool[j] in neg and pool[k] in neg:
                        continue
                    if s.h2(sub(dij, pool[k])) == 0:
                        return (pool[i], pool[j], pool[k])
        return None

    def test3(self, d) -> tuple[Vector, ...] | None:
        hit = self.ts.t3_sums.get(as_vector(d))
        return hit

    def test4(self, d) -> tuple[Vector, ...] | None:
        a = self.ts.t4.get(as_vector(d))
        return (a,) if a is not None else None

    def test5(self, d) -> tuple[Vector, ...] | None:
        s = self.s
        d = as_vector(d)
        for f in self.s.hb_nef:
            if s.square(f) != 0:
                continue
            dp = sub(d, f)
            if dp not in self.hb_set or not s.is_very_ample(dp):
                continue
            for e1, e2 in combinations(s.neg, 2):
                if add(e1, e2) != f:
                    continue
                image = s.h0(sub(d, e1)) + s.h0(sub(d, e2)) - s.h0(dp)
                if s.h0(d) - image == 2:
                    return (f, dp, e1, e2)
        return None

    def test6(self, d) -> tuple[Vector, ...] | None:
        s = self.s
        d = as_vector(d)
        for b in self.s.hb_nef:
            a = sub(d, b)
            if not self._is_sum_of_two(a):
                continue
            if not s.is_bpf(b):
                continue
            if s.h1(sub(a, b)) == 0 and s.h1(a) == 0 and s.h0(sub(scale(2, b), a)) == 0:
                return (a, b)
        return None

    def _is_sum_of_two(self, a) -> bool:
        return any(sub(a, x) in self.hb_set for x in self.s.hb_nef)

    def verdict(self, d, tiers: Iterable[str]) -> DegreeVerdict:
        d = as_vector(d)
        tiers = tuple(sorted(tiers))
        self._check(d)
        for t in TEST_ORDER:
            if t == 5 and "sum2" not in tiers:
                continue
            if t == 6 and "sum3" not in tiers:
                continue
            w = getattr(self, f"test{t}")(d)
            if w is not None:
                return DegreeVerdict(d, tiers, t, tuple(w))
        return DegreeVerdict(d, tiers)


def replay_witness(s: K3Surface, v: DegreeVerdict) -> bool:
    """Recheck the vanishing conditions behind an elimination."""
    d, w, t = v.degree, v.witness, v.eliminated_by
    if t is None:
        return True
    if t == 1:
        a, b = w
        return s.pairing(a, b) == 0 and s.h1(sub(sub(d, a), b)) == 0
    if t == 2:
        e1, e2, e3 = w
        return (all(s.h1(sub(sub(d, x), y)) == 0 for x, y in ((e1, e2), (e1, e3), (e2, e3)))
                and s.h2(sub(sub(sub(d, e1), e2), e3)) == 0)
    if t in (3, 6):
        a, b = w
        return (add(a, b) == d and s.h1(sub(a, b)) == 0 and s.h1(a) == 0
                and s.h0(sub(scale(2, b), a)) == 0 and s.is_bpf(b))
    if t == L1_TEST:
        return True  # replayed by lemma_l1_eliminates, which needs the involution
    if t == 4:
        (a,) = w
        k = 2 if scale(2, a) == d else 3
        return scale(k, a) == d
    if t == 5:
        f, dp, e1, e2 = w
        return (add(f, dp) == d and add(e1, e2) == f and s.square(f) == 0 and s.is_very_ample(dp)
                and s.h0(d) - (s.h0(sub(d, e1)) + s.h0(sub(d, e2)) - s.h0(dp)) == 2)
    return False


# -- Involutions ------------------------------------------------------------

def covering_involution(s: K3Surface, a) -> tuple[tuple[int, ...], ...]:
    """Lattice action x -> (x.a) a - x of the double cover defined by an ample a with a^2 = 2."""
    a = as_vector(a)
    if s.square(a) != 2 or any(s.pairing(a, c) <= 0 for c in s.neg):
        raise PreconditionError("needs an ample class of square 2")
    n = s.rank
    rows = []  # row i is the image of e_i
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        k = s.pairing(e, a)
        rows.append(tuple(k * a[j] - e[j] for j in range(n)))
    m = tuple(rows)
    neg = set(s.neg)
    if {apply(m, c) for c in neg} != neg:
        raise PreconditionError("the reflection does not permute the (-2)-curves")
    return m


@dataclass
class GeneratorResult:
    degrees: list[Vector]
    verdicts: list[DegreeVerdict]
    l1_unresolved: list[Vector]
    provenance: str = "computed"


def generators(
    s: K3Surface,
    involutions: Sequence = (),
    use_l1: bool = True,
    jobs: int = 1,
    stored: Sequence | None = None,
) -> GeneratorResult:
    """Degrees of a generating set: (-2)-curves plus candidates surviving every test.

    When ``stored`` is given the known answer is returned as is, tagged "stored".
    """
    curve_verdicts = [DegreeVerdict(c, ("neg-curve",)) for c in s.neg]
    if stored is not None:
        degrees = sorted({as_vector(d) for d in stored} | set(s.neg))
        return GeneratorResult(degrees, curve_verdicts, [], "stored")
    for m in involutions:
        validate_involution(s, m)
    tiers = candidate_tiers(s)
    cands = sorted(tiers)
    if jobs > 1:
        verdicts = _parallel_verdicts(s, cands, tiers, jobs)
    else:
        tester = Eliminator(s)
        verdicts = [tester.verdict(d, tiers[d]) for d in cands]
    l1_unresolved = []
    final = []
    for v in verdicts:
        a = _third(v.degree) if v.kept else None
        if a is not None and s.square(a) == 2:
            witness = None
            if use_l1:
                for iota in (m for m in involutions if apply(m, a) == a):
                    e = next((e for e in s.neg if lemma_l1_eliminates(s, a, e, iota)), None)
                    if e is not None:
                        witness = (a, e)
                        break
            if witness is not None:
                v = DegreeVerdict(v.degree, v.tiers, L1_TEST, witness, "lemma-l1")
            else:
                l1_unresolved.append(v.degree)
                v = DegreeVerdict(v.degree, v.tiers, None, (), "l1-unresolved")
        final.append(v)
    kept = {v.degree for v in final if v.kept}
    degrees = sorted(set(s.neg) | kept)
    return GeneratorResult(degrees, curve_verdicts + final, sorted(l1_unresolved))


def _third(d: Vector) -> Vector | None:
    if any(x % 3 for x in d):
        return None
    return tuple(x // 3 for x in d)


def _verdict_chunk(args):
    gram, neg, ample, chunk = args
    from .lattice import Lattice

    s = K3Surface(Lattice(gram), neg, ample)
    tester = Eliminator(s)
    return [tester.verdict(d, t) for d, t in chunk]


def _parallel_verdicts(s: K3Surface, cands, tiers, jobs: int) -> list[DegreeVerdict]:
    from concurrent.futures import ProcessPoolExecutor

    items = [(d, tuple(sorted(tiers[d]))) for d in cands]
    size = max(1, len(items) // (jobs * 4) + 1)
    chunks = [items[i:i + size] for i in range(0, len(items), size)]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        parts = ex.map(_verdict_chunk, [(s.lattice.gram, s.neg, s.ample, c) for c in chunks])
        out = [v for part in parts for v in part]
    return sorted(out, key=lambda v: v.degree)

import pytest

from k3cox.coxgen import (
    L1_TEST, EliminationSets, Eliminator, candidate_degrees, candidate_tiers, covering_involution, generators,
    replay_witness, special_pairs, t_sets,
)
from k3cox.cones import cone_from_generators
from k3cox.database import get_record
from k3cox.lattice import apply
from k3cox.linsys import PreconditionError

from conftest import NAMES, surface

IOTA = ((5, -6, -6), (2, -3, -2), (2, -2, -3))


def _expected(name):
    return {g.degree for g in get_record(name).expected_generators}


def test_t_sets_s1(s1):
    t1, t2_pool, t3, t4 = t_sets(s1)
    assert ((0, 0, 1), (0, 1, 0)) in t1
    assert (2, -2, -2) in t4
    assert (3, -3, -3) not in t4
    assert all(s1.pairing(a, b) == 0 for a, b in t1)
    assert set(t2_pool) == set(s1.neg) | set(s1.hb_nef)


def test_t1_self_pairs_only_for_fibers(s411):
    t1 = EliminationSets(s411).t1
    assert [a for a, b in t1 if a == b] == [(0, 1, 1), (1, 3, 5), (1, 4, 4)]


def test_t3_conditions(s411):
    for a, b in EliminationSets(s411).t3:
        assert s411.h1(tuple(x - y for x, y in zip(a, b))) == 0
        assert s411.h1(a) == 0


def test_special_pairs(s1, s411):
    assert special_pairs(s1) == []
    assert special_pairs(s411) == []
    assert special_pairs(surface("S_{1,1,2}")) == [((0, 2, 1), (1, 1, 1))]


def test_candidates(s1, s411):
    tiers = candidate_tiers(s411)
    assert len(candidate_degrees(s411)) == len(tiers) <= 4 + 10 + 20
    assert (3, -3, -3) in candidate_degrees(s1)
    assert all(s1.is_nef(d) for d in candidate_degrees(s1))
    assert "special-2FF'" in candidate_tiers(surface("S_{1,1,2}"))[(2, 6, 4)]


def test_single_tests(s1, s411):
    te = Eliminator(s1)
    assert te.test4((2, -2, -2)) == ((1, -1, -1),)
    assert te.verdict((1, -1, -1), ["hb"]).kept
    v = Eliminator(s411).verdict((1, 5, 6), ["sum2"])
    assert v.eliminated_by in (1, 2, 3, 5)
    with pytest.raises(PreconditionError):
        te.verdict((0, 1, 0), ["hb"])


def test_summand_equal_to_degree_not_a_witness(s411):
    # a fiber class is not split by the Koszul test against itself
    assert Eliminator(s411).test1((0, 1, 1)) is None


def test_s1_degrees(s1):
    res = generators(s1, [IOTA])
    assert res.degrees == sorted(set(s1.neg) | {(1, -1, -1)})
    assert len(res.degrees) == 7


def test_s411_degrees(s411):
    res = generators(s411)
    assert set(res.degrees) == set(s411.neg) | set(s411.hb_nef)
    assert len(res.degrees) == 7


def test_s113_degrees():
    s = surface("S_{1,1,3}")
    rec = get_record("S_{1,1,3}")
    res = generators(s, rec.involutions)
    assert set(res.degrees) - set(s.neg) == {(0, 3, 1), (1, 4, 2), (3, 9, 5)}


def test_stored_answer():
    s = surface("S_{1,1,1}")
    res = generators(s, stored=_expected("S_{1,1,1}"))
    assert res.provenance == "stored"
    assert set(res.degrees) == _expected("S_{1,1,1}")


@pytest.mark.parametrize("name", ["S_{1,1,1}", "S_{1,1,2}"])
def test_stored_rows_recomputed(name):
    res = generators(surface(name), get_record(name).involutions)
    assert res.provenance == "computed"
    assert set(res.degrees) - set(res.l1_unresolved) == _expected(name)


def test_covering_involution_s1(s1):
    assert covering_involution(s1, (1, -1, -1)) == IOTA
    with pytest.raises(PreconditionError):
        covering_involution(s1, (1, 0, 0))  # square 6


def test_bad_involution_rejected(s1):
    with pytest.raises(PreconditionError):
        generators(s1, [((2, 0, 0), (0, 1, 0), (0, 0, 1))])  # not an isometry
    with pytest.raises(PreconditionError):
        generators(s1, [((1, 0, 0), (0, 0, 1), (0, -1, 0))])  # order four


def test_l1_flag_without_involutions():
    # without the involution, 3A for the square-2 class survives with a flag
    s = surface("S_6")
    res = generators(s, use_l1=False)
    assert res.l1_unresolved
    for d in res.l1_unresolved:
        a = tuple(x // 3 for x in d)
        assert s.square(a) == 2 and d not in _expected("S_6")


@pytest.mark.parametrize("name", NAMES)
def test_generators_and_witnesses(name):
    rec = get_record(name)
    s = surface(name)
    res = generators(s, rec.involutions)
    flagged = set(res.l1_unresolved) - _expected(name)
    assert set(res.degrees) - flagged == _expected(name)
    for v in res.verdicts:
        if v.eliminated_by is not None and v.eliminated_by != L1_TEST:
            assert replay_witness(s, v), v
    # the degrees generate the effective cone and contain its Hilbert basis
    assert cone_from_generators(3, res.degrees).rays == s.eff_cone.rays
    assert set(s.hb_eff) <= set(res.degrees)


def test_involution_data_valid():
    for name in NAMES:
        rec = get_record(name)
        s = surface(name)
        for m in rec.involutions:
            assert {apply(m, c) for c in s.neg} == set(s.neg)


def test_parallel_matches_serial():
    s = surface("S_{7,1,1}")
    a = generators(s, jobs=1)
    b = generators(s, jobs=2)
    assert a.degrees == b.degrees
    assert [v.eliminated_by for v in a.verdicts] == [v.eliminated_by for v in b.verdicts]

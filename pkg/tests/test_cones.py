import pytest
from hypothesis import given, settings, strategies as st

from k3cox.cones import (
    ConeError, cone_from_facets, cone_from_generators, contains, dual_cone, hilbert_basis,
    is_negative_semidefinite,
)
from k3cox.lattice import Lattice

from conftest import surface
from oracles import check_hilbert_basis

S1 = Lattice(((6, 0, 0), (0, -2, 0), (0, 0, -2)))
E_S1 = [(0, 1, 0), (0, 0, 1), (1, -2, 0), (1, 0, -2), (2, -3, -2), (2, -2, -3)]


def test_interior_generator_dropped():
    assert cone_from_generators(2, [(1, 0), (0, 1), (1, 1)]).rays == ((0, 1), (1, 0))


def test_primitivized():
    c = cone_from_generators(2, [(2, 0), (0, 3)])
    assert c.rays == ((0, 1), (1, 0))


def test_curve_classes_are_extremal():
    assert sorted(cone_from_generators(3, E_S1).rays) == sorted(E_S1)


def test_line_rejected():
    with pytest.raises(ConeError, match="line"):
        cone_from_generators(2, [(1, 0), (-1, 0), (0, 1)])


def test_lower_dimensional_rejected():
    with pytest.raises(ConeError):
        cone_from_generators(3, [(1, 0, 0), (0, 1, 0)])


def test_duals():
    quadrant = cone_from_generators(2, [(1, 0), (0, 1)])
    assert dual_cone(quadrant).rays == quadrant.rays
    d = dual_cone(cone_from_generators(2, [(1, 0), (1, 2)]))
    assert sorted(d.rays) == [(0, 1), (2, -1)]


def test_facets_roundtrip():
    c = cone_from_generators(3, E_S1)
    assert cone_from_facets(3, c.facets).rays == c.rays


def test_membership(s1):
    nef = s1.nef_cone
    assert contains(nef, (1, -1, -1))
    assert not contains(nef, (0, 1, 0))
    assert contains(nef, (0, 0, 0))


def test_small_hilbert_basis():
    assert hilbert_basis(cone_from_generators(2, [(1, 0), (1, 2)])) == [(1, 0), (1, 1), (1, 2)]


def test_s1_bases(s1):
    assert hilbert_basis(s1.nef_cone) == [
        (1, -1, -1), (1, -1, 0), (1, 0, -1), (1, 0, 0), (2, -3, -1), (2, -3, 0), (2, -1, -3),
        (2, 0, -3), (3, -4, -3), (3, -3, -4), (4, -6, -3), (4, -3, -6), (5, -6, -6),
    ]
    assert hilbert_basis(s1.eff_cone) == sorted(E_S1 + [(1, -1, -1)])


def test_grading_positive_on_rays():
    c = surface("S_{1,9,1}").nef_cone
    g = c.grading()
    assert all(sum(a * b for a, b in zip(g, r)) > 0 for r in c.rays)


def test_negative_semidefinite():
    assert is_negative_semidefinite(S1, [(0, 1, 0)])
    assert is_negative_semidefinite(S1, [(0, 1, 0), (0, 0, 1)])
    assert not is_negative_semidefinite(S1, [(1, -1, -1)])
    # isotropic plus orthogonal root: semidefinite, not definite
    s = surface("S_{4,1,1}")
    assert is_negative_semidefinite(s.lattice, [(0, 1, 1), (0, 0, 1)])


gen2 = st.tuples(st.integers(0, 8), st.integers(0, 8))
gen3 = st.tuples(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))


def _cone_or_none(n, gens):
    gens = [g for g in gens if any(g)]
    if not gens:
        return None
    try:
        return cone_from_generators(n, gens)
    except ConeError:
        return None


@given(st.lists(gen3, min_size=3, max_size=5))
@settings(max_examples=40, deadline=None)
def test_biduality(gens):
    c = _cone_or_none(3, gens)
    if c is None:
        return
    dd = dual_cone(dual_cone(c))
    assert dd.rays == c.rays and sorted(dd.facets) == sorted(c.facets)


@given(st.lists(gen3, min_size=3, max_size=5))
@settings(max_examples=40, deadline=None)
def test_rays_satisfy_facets(gens):
    c = _cone_or_none(3, gens)
    if c is None:
        return
    for r in c.rays:
        assert all(sum(a * b for a, b in zip(f, r)) >= 0 for f in c.facets)
        assert sum(sum(a * b for a, b in zip(f, r)) == 0 for f in c.facets) >= 2
    assert set(c.rays) <= set(hilbert_basis(c))


@given(st.one_of(st.lists(gen2, min_size=2, max_size=4), st.lists(gen3, min_size=3, max_size=4)))
@settings(max_examples=25, deadline=None)
def test_hilbert_basis_brute_force(gens):
    n = len(gens[0])
    c = _cone_or_none(n, gens)
    if c is None:
        return
    ok, why = check_hilbert_basis(list(c.rays), hilbert_basis(c), bound=10)
    assert ok, why


def test_oracle_detects_broken_bases():
    gens = [(1, 0, 0), (0, 1, 0), (1, 1, 3)]
    basis = hilbert_basis(cone_from_generators(3, gens))
    assert check_hilbert_basis(gens, basis)[0]
    assert not check_hilbert_basis(gens, basis[1:])[0]
    assert not check_hilbert_basis(gens, sorted(basis + [(2, 0, 0)]))[0]

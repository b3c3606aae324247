from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3cox.lattice import (
    Lattice, LatticeError, apply, determinant, diagonalize, identity, inverse, is_isometry,
    mat_mul, primitive, signature, transpose,
)

S1 = Lattice(((6, 0, 0), (0, -2, 0), (0, 0, -2)))
S411 = Lattice(((-32, 0, 4), (0, -2, 2), (4, 2, -2)))
IOTA = ((5, -6, -6), (2, -3, -2), (2, -2, -3))

vec3 = st.tuples(*[st.integers(-20, 20)] * 3)


def test_pairing_basics():
    assert S1.pairing((1, 0, 0), (1, 0, 0)) == 6
    assert S1.pairing((0, 1, 0), (0, 0, 1)) == 0
    assert S1.pairing((0, 0, 0), (3, -1, 7)) == 0


def test_square():
    assert S1.square((2, -3, -2)) == -2
    assert S411.square((1, 4, 5)) == 6
    assert S411.square((0, 0, 0)) == 0


def test_dimension_mismatch():
    with pytest.raises(LatticeError):
        S1.pairing((1, 0), (1, 0, 0))


@pytest.mark.parametrize("gram", [
    ((1, 0), (0, 1)),            # definite
    ((2, 1), (1, 2)),
    ((1, 0, 0), (0, 1, 0), (0, 0, -1)),  # two positive directions
    ((1, 2), (2, 4)),            # degenerate
    ((1, 2), (3, 4)),            # not symmetric
])
def test_rejects_bad_forms(gram):
    with pytest.raises(LatticeError):
        Lattice(gram)


def test_signature():
    assert signature(S411.gram) == (1, 2)
    assert signature(((0, 1), (1, 0))) == (1, 1)


def test_diagonalize_identity_on_diagonal():
    dg, b = diagonalize(S1)
    assert dg == tuple(tuple(Fraction(x) for x in r) for r in S1.gram)
    assert b == tuple(tuple(Fraction(x) for x in r) for r in identity(3))


@pytest.mark.parametrize("lat", [S411, Lattice(((0, 1), (1, 0))), Lattice(((-2, 1, 0), (1, -2, 3), (0, 3, -2)))])
def test_diagonalize_congruence(lat):
    dg, b = diagonalize(lat)
    assert mat_mul(mat_mul(b, lat.gram), transpose(b)) == dg
    assert dg[0][0] > 0
    assert all(dg[i][i] < 0 for i in range(1, lat.rank))
    assert all(dg[i][j] == 0 for i in range(lat.rank) for j in range(lat.rank) if i != j)


def test_hyperbolic_plane_diagonal_up_to_scaling():
    # congruent to diag(1, -1): entries rescale by squares
    dg, b = diagonalize(Lattice(((0, 1), (1, 0))))
    assert dg[0][0] > 0 > dg[1][1]
    assert dg[0][0] * dg[1][1] == -determinant(b) ** 2


def test_isometries():
    assert is_isometry(S1, identity(3))
    assert is_isometry(S1, tuple(tuple(-x for x in r) for r in identity(3)))
    assert is_isometry(S1, IOTA)
    assert mat_mul(IOTA, IOTA) == identity(3)
    assert not is_isometry(S1, ((1, 1, 0), (0, 1, 0), (0, 0, 1)))


def test_involution_swaps_curves_in_pairs():
    curves = [(0, 1, 0), (0, 0, 1), (1, -2, 0), (1, 0, -2), (2, -3, -2), (2, -2, -3)]
    images = {c: apply(IOTA, c) for c in curves}
    assert set(images.values()) == set(curves)
    assert all(images[c] != c for c in curves)


def test_inverse_and_determinant():
    assert determinant(S411.gram) == -32 * (4 - 4) - 0 + 4 * (0 + 8)
    inv = inverse(S411.gram)
    assert mat_mul(inv, S411.gram) == identity(3)


def test_primitive():
    assert primitive((4, -6, 0)) == (2, -3, 0)
    assert primitive((0, 0, 0)) == (0, 0, 0)


@given(vec3, vec3, vec3)
def test_bilinear_symmetric(u, v, w):
    uw = tuple(a + b for a, b in zip(u, w))
    assert S411.pairing(uw, v) == S411.pairing(u, v) + S411.pairing(w, v)
    assert S411.pairing(u, v) == S411.pairing(v, u)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=3))
@settings(max_examples=200)
def test_diagonalize_random(rows):
    gram = [[rows[i][j] + rows[j][i] for j in range(3)] for i in range(3)]
    try:
        lat = Lattice(gram)
    except LatticeError:
        return
    dg, b = diagonalize(lat)
    assert mat_mul(mat_mul(b, lat.gram), transpose(b)) == dg


@given(st.sampled_from([identity(3), IOTA, tuple(tuple(-x for x in r) for r in IOTA)]),
       st.sampled_from([identity(3), IOTA]))
def test_isometries_compose(m, n):
    assert is_isometry(S1, mat_mul(m, n))

from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import det, invariant_factors
from relhom.snf import determinant, identity, matmul, smith_decomposition, smith_normal_form


def _check(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    return D


def test_two_three_gives_one_six():
    D = _check([[2, 0], [0, 3]])
    assert D == [[1, 0], [0, 6]]


def test_identity_and_zero():
    assert _check(identity(3)) == identity(3)
    assert _check([[0, 0], [0, 0]]) == [[0, 0], [0, 0]]


def test_inverses_are_inverses():
    M = [[4, 6, 2], [2, 8, 10]]
    dec = smith_decomposition(M)
    assert matmul(dec.U, dec.U_inv) == identity(2)
    assert matmul(dec.V, dec.V_inv) == identity(3)


def test_big_entries_stay_exact():
    big = 2**70 + 1
    D = _check([[big, 0], [0, 2**70 + 3]])
    # the two are coprime (odd numbers two apart)
    assert D[0][0] == 1 and D[1][1] == big * (2**70 + 3)


def test_determinant_matches_cofactor():
    M = [[3, 1, 4], [1, 5, 9], [2, 6, 5]]
    assert determinant(M) == det(M)


entries = st.integers(min_value=-12, max_value=12)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.integers(1, 3).flatmap(
    lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r))))
def test_diagonal_matches_determinantal_divisors(M):
    D = _check(M)
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    nonzero = [d for d in diag if d]
    assert nonzero == invariant_factors(M)
    # divisibility chain, zeros last
    for a, b in zip(diag, diag[1:]):
        assert a >= 0 and (b == 0 or (a and b % a == 0))

import itertools

import pytest
from hypothesis import given, strategies as st

from dgakit.linalg import (ExactMatrix, GF, ScalarDomain, ZZ, describe_factors, determinant, invariant_factors,
                           is_prime, kernel_basis, matmul, mat_vec, quotient_structure, smith_normal_form, solve)


def matrices(max_rows=4, max_cols=4, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=m, max_size=m)))


def test_scalar_domain_parse():
    assert ScalarDomain.parse("Z") == ZZ
    assert ScalarDomain.parse("F3") == GF(3)
    with pytest.raises(ValueError):
        ScalarDomain.parse("F4")
    assert GF(5).inverse(2) == 3
    assert is_prime(7) and not is_prime(9)


def test_snf_small():
    U, D, V = smith_normal_form([[2, 4], [6, 8]])
    assert [D.entries[i][i] for i in range(2)] == [2, 4]
    assert invariant_factors([[0, 0], [0, 0]]) == [0, 0]


def test_describe_factors():
    assert describe_factors([2, 0], 0) == "Z/2 + Z"
    assert describe_factors([], 0) == "0"


@given(matrices())
def test_snf_contract(M):
    m, n = len(M), len(M[0])
    U, D, V = smith_normal_form(M)
    assert (U @ ExactMatrix.from_rows(M, n) @ V) == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = [D.entries[i][i] for i in range(min(m, n))]
    assert all(D.entries[i][j] == 0 for i in range(m) for j in range(n) if i != j)
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)


def _brute(M, n, p, box):
    rng = range(p) if p else range(-box, box + 1)
    return itertools.product(rng, repeat=n)


@given(matrices(3, 3, -3, 3), st.sampled_from([0, 2, 3]))
def test_kernel_against_brute_force(M, p):
    n = len(M[0])
    if p:
        M = [[x % p for x in r] for r in M]
    K = kernel_basis(M, n, p)
    for v in K:
        assert all(x % p == 0 if p else x == 0 for x in mat_vec(M, v, p))
    # every small solution lies in the span of K
    span = set()
    box = 2
    for coeffs in itertools.product(range(p) if p else range(-4, 5), repeat=len(K)):
        w = [0] * n
        for c, v in zip(coeffs, K):
            w = [a + c * b for a, b in zip(w, v)]
        span.add(tuple(x % p for x in w) if p else tuple(w))
    for x in _brute(M, n, p, box):
        if all(y % p == 0 if p else y == 0 for y in mat_vec(M, list(x), p)):
            if p:
                assert tuple(x) in span
            else:
                # integrality: x is an integer combination of K
                assert solve(transpose_cols(K, n), list(x), len(K)) is not None


def transpose_cols(K, n):
    return [[v[i] for v in K] for i in range(n)]


@given(matrices(3, 3, -3, 3), st.sampled_from([0, 2, 5]))
def test_solve_against_brute_force(M, p):
    n = len(M[0])
    targets = {tuple(mat_vec(M, list(x), p)) for x in _brute(M, n, p, 1)}
    for b in list(targets)[:6]:
        x = solve(M, list(b), n, p)
        assert x is not None
        got = mat_vec(M, x, p)
        assert [g % p for g in got] == [c % p for c in b] if p else got == list(b)
    if not p:
        # outside the image: an odd vector when every column is even
        E = [[2 * a for a in r] for r in M]
        assert solve(E, [1] * len(M), n) is None


def test_quotient_structure():
    Q = quotient_structure(2, [[2, 0], [0, 3]])
    assert Q.order == 6
    assert Q.is_zero([2, 3])
    assert not Q.is_zero([1, 0])


def test_matmul_and_det():
    A = [[1, 2], [3, 4]]
    assert determinant(A) == -2
    assert matmul(A, [[1, 0], [0, 1]], 2) == A

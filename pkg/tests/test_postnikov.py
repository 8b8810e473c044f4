import functools

import pytest
from hypothesis import given, strategies as st

from dgakit.catalog import get_entry
from dgakit.errors import HypothesisError
from dgakit.homology import homology
from dgakit.postnikov import (apply_aut, automorphisms, brutal_truncation, classify_extensions, enumerate_dga_maps,
                              extension_from_class, homotopy_classes, k_invariant, path_object, postnikov_section,
                              recognize_square_zero, square_zero_extension)
from dgakit.presentation import parse, realize
from dgakit.semifree import semifree_replacement


@functools.lru_cache(maxsize=None)
def setup(p):
    """Q_C for C = P_1(F_p) = F_p, the square-zero target F_p ∨ Σ^3 F_p and its group of classes."""
    F = realize(parse(f'dga "F{p}" over Z {{ rel {p}; }}'), 6)
    C = brutal_truncation(F, 1)
    Q = semifree_replacement(C, 4)
    D = square_zero_extension(C, [p], 3)
    return C, Q, D, homotopy_classes(Q, D, None, 4)


def test_brutal_truncation():
    A = get_entry("C-5.4").realize(6)
    T = brutal_truncation(A, 2)
    H = homology(T, 5)
    assert [H.factors(n) for n in range(6)] == [[2], [], [2], [], [], []]
    with pytest.raises(HypothesisError):
        brutal_truncation(realize(parse('dga "x" over Z { gen a:1; }'), 2), 2)


def test_postnikov_section_c54():
    A = get_entry("C-5.4").realize(7)
    Q = semifree_replacement(A, 6)
    S = postnikov_section(Q, 2, 6)
    assert S.check_d_squared() == []
    H = homology(S.realize(6), 5)
    assert {n: H.factors(n) for n in range(6)} == {0: [2], 1: [], 2: [2], 3: [], 4: [], 5: []}
    assert max(S.stages.values()) > max(Q.stages.values())


@pytest.mark.parametrize("p", [2, 3])
def test_map_count_and_group(p):
    C, Q, D, G = setup(p)
    maps = enumerate_dga_maps(Q, D.dga, 4)
    assert len(maps) == p
    assert G.order == p
    assert G.check_equivalence() and G.check_addition()


def test_square_zero_recognition():
    D = get_entry("D-p2").realize(6)
    rec = recognize_square_zero(D)
    assert rec is not None and rec[1:] == ([2], 2)
    assert recognize_square_zero(get_entry("C-p2").realize(6)) is None


def test_path_object_evaluations_agree_on_constants():
    C, Q, D, G = setup(2)
    P = path_object(D)
    assert P.dga.check_d_squared() == []


def test_automorphisms():
    assert len(automorphisms([2])) == 1
    assert len(automorphisms([5])) == 4
    assert len(automorphisms([2, 2], 2)) == 6
    assert apply_aut(automorphisms([3])[-1], [1], [3]) in ([1], [2])


@pytest.mark.parametrize("ident, expected", [("C-p2", False), ("D-p2", True), ("C-p2b", False)])
def test_k_invariants(ident, expected):
    k = k_invariant(get_entry(ident).realize(4), 1)
    assert k.is_zero() is expected
    assert k.group.order == 2


def test_classify_counts():
    for p in (2, 3, 5):
        C = brutal_truncation(realize(parse(f'dga "F{p}" over Z {{ rel {p}; }}'), 5), 1)
        rep = classify_extensions(C, [p], 1)
        assert rep["group_order"] == p and rep["orbit_count"] == 2
        assert rep["aut_order"] == p - 1


@pytest.mark.parametrize("p", [2, 3])
def test_round_trip_exhaustive(p):
    C, Q, D, G = setup(p)
    for a in range(p):
        X = extension_from_class(Q, [p], 1, [a], N=5)
        assert not X.verify()
        k = k_invariant(X, 1, Q_C=Q, psi=X.psi, theta=X.theta)
        assert not any(G.project([x - y for x, y in zip(k.mpart, [a])]))


@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), st.integers(0, 4 * p))))
def test_round_trip_property(case):
    p, a = case
    C, Q, D, G = setup(p)
    X = extension_from_class(Q, [p], 1, [a], N=4)
    k = k_invariant(X, 1, Q_C=Q, psi=X.psi, theta=X.theta)
    assert G.project(k.mpart) == G.project([a % p])
    assert (a % p == 0) == k.is_zero()

from hypothesis import given, strategies as st

from dgakit.catalog import get_entry
from dgakit.homology import homology, homology_ring, ring_fingerprint
from dgakit.presentation import parse, realize
from dgakit.semifree import (augmentation_module, change_ground, derived_tensor, endomorphism_dga, homology_comparison,
                             opposite, prime_field_dga, semifree_module_resolution, semifree_replacement,
                             tensor_dga)


def test_replacement_of_f2():
    A = get_entry("F2").realize(6)
    Q = semifree_replacement(A, 5)
    assert [(g, k) for g, k in Q.generators] == [("e", 1), ("f", 3), ("g", 5)]
    assert Q.stages == {"e": 2, "f": 3, "g": 4}
    assert Q.check_d_squared() == [] and Q.check_order() == [] and Q.check_comparison() == []
    comp = homology_comparison(Q)
    assert all(inj and surj for n, (inj, surj) in comp.items() if n <= Q.valid)


def test_replacement_text_round_trip():
    Q = semifree_replacement(get_entry("F2").realize(6), 5)
    P = parse(Q.to_text())
    assert P.stages == Q.stages and P.differentials == Q.differentials


def test_replacement_c54_is_quasi_iso():
    A = get_entry("C-5.4").realize(7)
    Q = semifree_replacement(A, 6)
    assert Q.check_d_squared() == [] and Q.check_comparison() == []
    HQ, HA = homology(Q.realize(6), 5), homology(A, 5)
    assert all(HQ.factors(n) == HA.factors(n) for n in range(6))


def test_derived_tensor_f2_f2():
    dt = derived_tensor(get_entry("F2").presentation, prime_field_dga(2, 7), 6)
    assert dt.path == "semifree"
    assert [dt.ring.dim(n) for n in range(7)] == [1, 1, 0, 0, 0, 0, 0]
    fp = ring_fingerprint(dt.ring)
    assert fp.degree1_squares_zero is True


def test_tensor_and_opposite_are_dgas():
    A = get_entry("C-5.4").realize(6)
    assert opposite(A).verify() == {}
    T = tensor_dga(A, prime_field_dga(2, 6), 5)
    assert T.check_d_squared() == []


def test_change_ground():
    A = change_ground(get_entry("C-p2").realize(5), 2)
    H = homology(A, 4)
    assert [H.dim(n) for n in range(5)] == [1, 1, 1, 1, 0]


def test_module_resolution_and_endomorphisms():
    """Ext over Q(F_2) ⊗ F_2, an exterior algebra on a degree-1 class: one class in each even degree."""
    Q = semifree_replacement(get_entry("F2").realize(7), 6)
    E = change_ground(Q.realize(7), 2)
    R = semifree_module_resolution(augmentation_module(E), 5)
    assert R.complex(5).check_d_squared() == []
    H = homology(endomorphism_dga(R))
    assert H.table() == {-4: [0], -3: [], -2: [0], -1: [], 0: [0]}


@given(st.integers(1, 4))
def test_free_generator_has_no_homology_above_zero(k):
    """Z<x; dx = 0> with |x| = k: homology is the free algebra itself."""
    A = realize(parse(f'dga "x" over Z {{ gen x:{k}; }}'), 3 * k)
    H = homology(A, 3 * k - 1)
    assert all(H.factors(n) == ([0] if n % k == 0 else []) for n in H.valid)

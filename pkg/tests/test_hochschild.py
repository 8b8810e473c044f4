import functools
import math

import pytest
from hypothesis import given, strategies as st

from dgakit.catalog import catalog, get_entry
from dgakit.errors import HypothesisError
from dgakit.hochschild import (DividedPowerElement, THH_REFERENCE, derivation_groups, divided_power_multiply,
                               hh_to_thh, hochschild_cohomology, hochschild_ring, kinvariant_sigma, prepare,
                               sigma_multiply, sigma_powers, topological_equivalence_verdict)
from dgakit.homology import homology
from dgakit.postnikov import brutal_truncation, homotopy_classes, k_invariant, square_zero_extension
from dgakit.presentation import parse, realize
from dgakit.semifree import SemifreeDga, semifree_replacement


def fp_over_z(p, N=10):
    return realize(parse(f'dga "F{p}" over Z {{ rel {p}; }}'), N)


def test_hh_f2_over_z():
    t = hochschild_cohomology(fp_over_z(2), [2], 0, 6)
    assert {n: t.factors(n) for n in range(7)} == {n: ([2] if n % 2 == 0 else []) for n in range(7)}
    with pytest.raises(KeyError):
        t.factors(50)


@pytest.mark.parametrize("p", [2, 3])
def test_hh_over_field_is_trivial(p):
    k = realize(parse(f'dga "k" over F{p} {{ }}'), 8)
    t = hochschild_cohomology(k, [0], 0, 6)
    assert t.factors(0) == [0]
    assert all(t.factors(n) == [] for n in range(1, 7))


def test_hh_ring_polynomial():
    ring = hochschild_ring(fp_over_z(2), 2, 6)
    pw = sigma_powers(ring, 3)
    assert all(any(pw[k]) for k in range(4))


def test_derivations_and_les():
    F = fp_over_z(2)
    der = derivation_groups(F, [2], 0, 5)
    hh = hochschild_cohomology(F, [2], 0, 6)
    for n in range(1, 5):
        assert der.factors(n) == hh.factors(n + 1)
    assert der.les and der.les[0]["exceptional"]


def test_resolution_independence():
    """A non-greedy model of F_2: the greedy one with an acyclic pair x:2, y:3, dy = x inserted first."""
    F = fp_over_z(2)
    greedy = semifree_replacement(F, 8)
    gens = [("x", 2), ("y", 3)] + list(greedy.generators)
    diffs = dict(greedy.differentials)
    diffs["y"] = {("x",): 1}
    images = dict(greedy.images)
    images["x"], images["y"] = F.zero(2), F.zero(3)
    alt = SemifreeDga("alt", greedy.ground, gens, diffs, dict(greedy.stages), images, F, greedy.valid)
    assert alt.check_d_squared() == [] and alt.check_comparison() == []
    a = hochschild_cohomology(F, [2], 0, 4)
    b = hochschild_cohomology(F, [2], 0, 4, model=alt)
    lo, hi = max(a.certified[0], b.certified[0]), min(a.certified[1], b.certified[1])
    assert hi >= 4
    assert all(a.factors(n) == b.factors(n) for n in range(lo, hi + 1))


def _instances():
    out = []
    for e in catalog():
        for n in (0, 1, 2):
            for j in range(1, 6):
                out.append((e.id, n, j))
    return out


@functools.lru_cache(maxsize=None)
def _der_and_model(ident, n):
    A = get_entry(ident).realize(9)
    C = brutal_truncation(A, n)
    M = list(homology(C, 0).factors(0))
    return C, M, semifree_replacement(C, 7), derivation_groups(C, M, 0, 6)


@given(st.sampled_from(_instances()))
def test_derivations_count_homotopy_classes(case):
    """Der^j(C, M) has the order of the group of maps C -> C ∨ Σ^j M over C, up to homotopy."""
    ident, n, j = case
    C, M, Q, der = _der_and_model(ident, n)
    G = homotopy_classes(Q, square_zero_extension(C, M, j), None, j + 1)
    assert der.order(j) == G.order


def polys(p, top):
    return st.dictionaries(st.integers(0, top), st.integers(0, p - 1), max_size=top + 1)


@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), polys(p, 2 * p), polys(p, 2 * p))))
def test_hh_to_thh_is_multiplicative(case):
    p, f, g = case
    lhs = hh_to_thh(sigma_multiply(f, g, p), p)
    rhs = divided_power_multiply(hh_to_thh(f, p), hh_to_thh(g, p))
    assert lhs == rhs


@given(st.sampled_from([2, 3, 5]).flatmap(lambda p: st.tuples(st.just(p), polys(p, p * p))))
def test_kernel_is_generated_by_sigma_p(case):
    p, f = case
    in_ideal = all(c % p == 0 for k, c in f.items() if k < p)
    assert hh_to_thh(f, p).is_zero() == in_ideal


@pytest.mark.parametrize("p", [2, 3, 5])
def test_kernel_monomials(p):
    for k in range(p * p + 1):
        assert hh_to_thh({k: 1}, p).is_zero() == (k >= p)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_divided_powers_commutative_associative(p):
    g = [DividedPowerElement(p, {i: 1}) for i in range(8)]
    for a in g:
        for b in g:
            assert divided_power_multiply(a, b) == divided_power_multiply(b, a)
            for c in g:
                assert divided_power_multiply(divided_power_multiply(a, b), c) == \
                    divided_power_multiply(a, divided_power_multiply(b, c))
    assert divided_power_multiply(g[1], g[1]) == DividedPowerElement(p, {2: 2})
    assert str(divided_power_multiply(g[2], g[3])) == str(DividedPowerElement(p, {5: math.comb(5, 2)}))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_sigma_p_is_topologically_trivial(p):
    assert hh_to_thh({p: 1}, p).is_zero()
    v = topological_equivalence_verdict({p: 1}, {}, p)
    assert v["verdict"] == "topologically equivalent (matching THH k-invariant images)"
    assert v["reference"] == THH_REFERENCE
    w = topological_equivalence_verdict({1: 1}, {}, p)
    assert w["verdict"] == "inequivalent (THH images differ)" and not w["equivalent"]


def test_verdict_rejects_mixed_degrees():
    with pytest.raises(HypothesisError):
        topological_equivalence_verdict({1: 1, 2: 1}, {}, 2)


def test_kinvariant_sigma_cp2():
    k = k_invariant(get_entry("C-p2").realize(4), 1)
    assert kinvariant_sigma(k, 2) == {2: 1}
    assert kinvariant_sigma(k_invariant(get_entry("D-p2").realize(4), 1), 2) == {}


def test_prepare_bound():
    data = prepare(fp_over_z(2), 4)
    assert data.bound >= 5

import functools
import itertools

import pytest
from hypothesis import given, strategies as st

from dgakit.catalog import catalog, get_entry
from dgakit.homology import (NOT_QI, compare_fingerprints, distinguish, homology, homology_ring, ring_fingerprint,
                             universal_coefficient_check)
from dgakit.presentation import parse, realize
from dgakit.semifree import semifree_replacement

IDS = [e.id for e in catalog()]
TOP = 6


@functools.lru_cache(maxsize=None)
def realized(ident):
    return get_entry(ident).realize(TOP)


def _element(A, n, coeffs):
    k = A.dim(n)
    return [coeffs[i % len(coeffs)] for i in range(k)]


@given(st.sampled_from(IDS), st.integers(0, TOP), st.integers(0, TOP),
       st.lists(st.integers(-5, 5), min_size=1, max_size=6), st.lists(st.integers(-5, 5), min_size=1, max_size=6))
def test_d_squared_and_leibniz(ident, a, b, cx, cy):
    A = realized(ident)
    if a + b > TOP:
        a, b = a % (TOP // 2 + 1), b % (TOP // 2 + 1)
    x, y = _element(A, a, cx), _element(A, b, cy)
    if a >= 2:
        assert A.is_zero(a - 2, A.d(a - 1, A.d(a, x)))
    if a + b == 0:
        return
    lhs = A.d(a + b, A.mul(a, x, b, y))
    sign = -1 if a % 2 else 1
    parts = []
    if a > 0:
        parts.append(A.mul(a - 1, A.d(a, x), b, y))
    if b > 0:
        parts.append([sign * c for c in A.mul(a, x, b - 1, A.d(b, y))])
    rhs = [sum(t) for t in zip(*parts)] if parts else A.zero(a + b - 1)
    assert A.equal(a + b - 1, lhs, rhs)


@functools.lru_cache(maxsize=None)
def integral_model(ident):
    """A degreewise free model over Z: the dga itself when possible, otherwise a semifree replacement."""
    pres = get_entry(ident).presentation.over_integers()
    A = realize(pres, TOP + 1)
    if A.is_degreewise_free:
        return A
    return semifree_replacement(A, TOP).realize(TOP)


@given(st.sampled_from(IDS), st.sampled_from([2, 3, 5]))
def test_universal_coefficients(ident, p):
    assert universal_coefficient_check(integral_model(ident), p) == []


def test_homology_cp2():
    H = homology(realized("C-p2"), TOP)
    assert {n: H.factors(n) for n in range(TOP + 1)} == {0: [2], 1: [], 2: [2], 3: [], 4: [], 5: [], 6: []}
    assert H.format_rep(2, 0) == "e^2"


def test_ring_products_c54():
    A = get_entry("C-5.4").realize(6)
    R = homology_ring(A, 5)
    assert any(R.multiply(2, R.basis(2, 0), 3, R.basis(3, 0)))
    assert not any(R.multiply(2, R.basis(2, 0), 2, R.basis(2, 0)))


def _linear(coeffs, names):
    return [(c, n) for c, n in zip(coeffs, names) if c]


def _product_text(f, g):
    terms = {}
    for (a, x), (b, y) in itertools.product(f, g):
        terms[x + "*" + y] = terms.get(x + "*" + y, 0) + a * b
    body = " + ".join(f"{c % 3}*{w}" for w, c in terms.items() if c % 3)
    return body or "0"


@given(st.sampled_from([(a, b, c, d) for a, b, c, d in itertools.product(range(3), repeat=4)
                        if (a * d - b * c) % 3]))
def test_fingerprint_invariant_under_coordinate_change(m):
    """F_3[x,y]/(x^2, y^2, xy - yx) with |x| = |y| = 2, presented in new coordinates."""
    a, b, c, d = m
    x, y = _linear((a, b), ("u", "v")), _linear((c, d), ("u", "v"))
    rels = [_product_text(x, x), _product_text(y, y),
            _product_text(x, y) + " + " + _product_text([(-k, w) for k, w in y], x)]
    text = 'dga "R" over F3 { gen u:2, v:2; rel ' + ", ".join(rels) + "; }"
    base = 'dga "R" over F3 { gen u:2, v:2; rel u^2, v^2, u*v - v*u; }'
    f = ring_fingerprint(homology_ring(realize(parse(text), 6), 6))
    g = ring_fingerprint(homology_ring(realize(parse(base), 6), 6))
    assert compare_fingerprints(f, g) is None
    assert f.as_dict() == g.as_dict()


def test_distinguish_same_input():
    P = get_entry("C-p2").presentation
    rep = distinguish(P, P, 5)
    assert rep["witness"] is None
    assert rep["verdict"] == "no obstruction found through degree 5"


def test_distinguish_homology_witness():
    rep = distinguish(get_entry("C-p2").presentation, get_entry("C-5.4").presentation, 4)
    assert rep["verdict"] == NOT_QI
    assert rep["witness"]["check"] == "homology" and rep["witness"]["degree"] == 3

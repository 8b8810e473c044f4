import pytest
from hypothesis import given, strategies as st

from dgakit.errors import PresentationError, ResourceLimitError
from dgakit.linalg import GF
from dgakit.presentation import enumerate_words, parse, realize, validate

CP2 = 'dga "C" over Z { gen e:1; diff e = 2; rel e^4; }'


def test_parse_basic():
    P = parse(CP2)
    assert P.name == "C" and P.generators == [("e", 1)]
    assert P.differentials["e"]
    assert len(P.relations) == 1


def test_round_trip_text():
    text = 'dga "T" over Z { gen e:1, f:3; diff e = 2; diff f = e^2; stage 2: e; stage 3: f; }'
    P = parse(text)
    Q = parse(P.to_text())
    assert (Q.generators, Q.differentials, Q.relations, Q.stages) == \
        (P.generators, P.differentials, P.relations, P.stages)


def test_comments_and_fp_ground():
    P = parse('# exterior\ndga "L" over F2 {\n  gen g:2;  # one class\n  rel g^2;\n}')
    assert P.ground == GF(2)
    assert P.over_integers().ground.p == 0
    assert len(P.over_integers().relations) == 2


@pytest.mark.parametrize("text, fragment", [
    ('dga "x" over Z { gen a:1; diff b = 2; }', "unknown generator"),
    ('dga "x" over Z { gen a:1, a:2; }', "duplicate generator"),
    ('dga "x" over Z { gen a:0; }', "non-positive degree"),
    ('dga "x" over Z { gen a:1; diff a = a; }', "degree mismatch"),
    ('dga "x" over Z { gen a:1, b:2; rel a + b; }', "inhomogeneous"),
    ('dga "x" over F4 { }', "not prime"),
    ('dga "x" over Z { gen a:1 }', "expected"),
    ('dga "x" over Z { gen a:1; @ }', "unexpected character"),
    ('dga "x" over Z { frob a; }', "unknown statement"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(PresentationError) as exc:
        parse(text)
    assert fragment in str(exc.value)
    assert exc.value.line == 1


def test_validate_detects_bad_differential():
    P = parse('dga "x" over Z { gen a:1, b:2; diff b = a; diff a = 1; }')
    rep = validate(P, 3)
    assert not rep.ok
    assert rep.failures[0].kind == "d_squared"
    with pytest.raises(PresentationError):
        realize(P, 3)


def test_validate_relation_not_closed():
    P = parse('dga "x" over Z { gen e:1; diff e = 2; rel e^3; }')
    rep = validate(P, 3)
    assert [f.kind for f in rep.failures] == ["relation_not_closed"]


def test_realize_dims():
    A = realize(parse(CP2), 6)
    assert [A.quotient(n).order for n in range(6)] == [0, 0, 0, 0, 1, 1]  # 0 means infinite
    assert A.known(50)  # everything above degree 3 vanishes


def test_partial_relation_does_not_vanish():
    A = realize(parse('dga "x" over Z { gen e:1; rel 2*e^2; }'), 4)
    assert not A.known(6)


def test_monomial_cap():
    P = parse('dga "free" over Z { gen a:1, b:1, c:1; }')
    with pytest.raises(ResourceLimitError):
        enumerate_words(P, 8, cap=100)


@given(st.integers(0, 5), st.integers(1, 3))
def test_free_word_counts(N, k):
    gens = ", ".join(f"x{i}:1" for i in range(k))
    P = parse(f'dga "free" over Z {{ gen {gens}; }}')
    words = enumerate_words(P, N)
    assert [len(words[n]) for n in range(N + 1)] == [k ** n for n in range(N + 1)]

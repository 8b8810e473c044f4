"""Degreewise finite models of chain complexes and dgas.

Each degree ``n`` carries a spanning set (``basis[n]``, arbitrary labels) and
a list of relation vectors; the chain group is the free module on the
spanning set modulo the relations.  Elements are coordinate vectors on the
spanning set.  Degrees are homological (``d`` lowers degree by one).
"""

from __future__ import annotations

from functools import cached_property

from . import linalg
from .linalg import QuotientStructure, ScalarDomain, add_scaled


class GradedComplex:
    """Chain complex stored in degrees ``lo..top``.

    ``zero_below``: degrees below ``lo`` are known to vanish.
    ``complete``: degrees above ``top`` are known to vanish.
    ``diff[n][i]`` is the image of spanning element ``i`` of degree n, as a
    vector in degree n-1 (an empty list when degree n-1 is not stored).
    """

    def __init__(self, ground: ScalarDomain, basis, relations, diff, lo=0, top=None,
                 zero_below=True, complete=False, name=""):
        self.ground = ground
        self.basis = basis
        self.relations = relations
        self.diff = diff
        self.lo = lo
        self.top = max(basis) if top is None else top
        self.zero_below = zero_below
        self.complete = complete
        self.name = name
        self._quot = {}
        self._index = {}

    @property
    def p(self):
        return self.ground.p

    def degrees(self):
        return range(self.lo, self.top + 1)

    def stored(self, n):
        return self.lo <= n <= self.top

    def known(self, n):
        """Degree n is either stored or known to vanish."""
        return self.stored(n) or (n < self.lo and self.zero_below) or (n > self.top and self.complete)

    def dim(self, n):
        if self.stored(n):
            return len(self.basis[n])
        if self.known(n):
            return 0
        raise IndexError(f"degree {n} outside the validity range of {self.name or 'complex'}")

    def zero(self, n):
        return [0] * self.dim(n)

    def index(self, n, label):
        idx = self._index.get(n)
        if idx is None:
            idx = {b: i for i, b in enumerate(self.basis[n])}
            self._index[n] = idx
        return idx[label]

    def quotient(self, n) -> QuotientStructure:
        q = self._quot.get(n)
        if q is None:
            rel = self.relations.get(n, []) if self.stored(n) else []
            q = QuotientStructure(self.dim(n), rel, self.p)
            self._quot[n] = q
        return q

    def is_zero(self, n, v):
        if not v:
            return True
        return self.quotient(n).is_zero(v)

    def equal(self, n, u, v):
        return self.is_zero(n, [a - b for a, b in zip(u, v)])

    def d(self, n, v):
        """Differential of a degree-n vector."""
        out = self.zero(n - 1)
        if not out:
            return out
        p = self.p
        for c, img in zip(v, self.diff[n]):
            if c:
                add_scaled(out, img, c, p)
        return out

    def diff_matrix(self, n):
        """Columns = images of the spanning elements of degree n."""
        return [list(col) for col in self.diff[n]]

    def unit_vector(self, n, i):
        v = self.zero(n)
        v[i] = 1
        return v

    def format(self, n, v):
        terms = []
        for c, b in zip(v, self.basis[n]):
            if c:
                label = format_label(b)
                terms.append(label if c == 1 else f"{c}*{label}")
        return " + ".join(terms) if terms else "0"

    def check_d_squared(self):
        """Degrees where d∘d fails to vanish modulo relations."""
        bad = []
        for n in self.degrees():
            if not (self.known(n - 1) and self.known(n - 2)):
                continue
            for i in range(self.dim(n)):
                dd = self.d(n - 1, self.d(n, self.unit_vector(n, i)))
                if not self.is_zero(n - 2, dd):
                    bad.append((n, self.basis[n][i]))
        return bad

    def check_relations_closed(self):
        """d must carry relations to relations."""
        bad = []
        for n in self.degrees():
            if not self.known(n - 1):
                continue
            for r in self.relations.get(n, []):
                if not self.is_zero(n - 1, self.d(n, r)):
                    bad.append((n, r))
        return bad


def format_label(b):
    from .poly import fmt_word
    if isinstance(b, tuple) and all(isinstance(x, str) for x in b):
        return fmt_word(b)
    if isinstance(b, tuple):
        return "(" + ",".join(format_label(x) for x in b) + ")"
    return str(b)


class TruncatedDga(GradedComplex):
    """A dga known in degrees ``lo..top``.

    ``mul_basis(a, i, b, j)`` returns the product of spanning element i of
    degree a with spanning element j of degree b, as a vector in degree
    a+b (only called when a+b is stored).
    """

    def __init__(self, ground, basis, relations, diff, mul_basis, unit, **kw):
        super().__init__(ground, basis, relations, diff, **kw)
        self._mul_basis = mul_basis
        self.unit = unit
        self._table = {}

    def basis_product(self, a, i, b, j):
        key = (a, i, b, j)
        v = self._table.get(key)
        if v is None:
            v = self._mul_basis(a, i, b, j)
            self._table[key] = v
        return v

    def mul(self, a, x, b, y):
        """Product of a degree-a vector x and a degree-b vector y."""
        n = a + b
        out = self.zero(n)
        if not out:
            return out
        p = self.p
        for i, cx in enumerate(x):
            if not cx:
                continue
            for j, cy in enumerate(y):
                if cy:
                    add_scaled(out, self.basis_product(a, i, b, j), cx * cy, p)
        return out

    def power(self, n, x, k):
        deg, out = 0, list(self.unit)
        for _ in range(k):
            if not self.known(deg + n):
                return None
            out = self.mul(deg, out, n, x)
            deg += n
        return out

    def augmentation(self, v):
        """Scalar coefficient of a degree-0 element (degree 0 is spanned by the unit)."""
        if len(v) != 1:
            raise ValueError("augmentation needs degree 0 spanned by the unit")
        return v[0]

    def check_unit(self):
        bad = []
        for n in self.degrees():
            if not self.known(n):
                continue
            for i in range(self.dim(n)):
                e = self.unit_vector(n, i)
                if not self.equal(n, self.mul(0, self.unit, n, e), e) or \
                        not self.equal(n, self.mul(n, e, 0, self.unit), e):
                    bad.append((n, self.basis[n][i]))
        return bad

    def check_leibniz(self, limit=None):
        """Basis pairs (a, i, b, j) with a+b in range where Leibniz fails."""
        bad = []
        count = 0
        for a in self.degrees():
            for b in self.degrees():
                n = a + b
                if not self.stored(n) or not self.known(n - 1) or not self.known(a - 1) or not self.known(b - 1):
                    continue
                for i in range(self.dim(a)):
                    x = self.unit_vector(a, i)
                    dx = self.d(a, x)
                    for j in range(self.dim(b)):
                        y = self.unit_vector(b, j)
                        lhs = self.d(n, self.mul(a, x, b, y))
                        rhs = self.mul(a - 1, dx, b, y) if self.known(a - 1) and self.dim(a - 1) else self.zero(n - 1)
                        t = self.mul(a, x, b - 1, self.d(b, y)) if self.dim(b - 1) else self.zero(n - 1)
                        sign = -1 if a % 2 else 1
                        for k in range(len(rhs)):
                            rhs[k] += sign * t[k]
                        if not self.equal(n - 1, lhs, rhs):
                            bad.append((a, i, b, j))
                        count += 1
                        if limit and count >= limit:
                            return bad
        return bad

    def check_associative(self, limit=None):
        bad = []
        count = 0
        degs = [n for n in self.degrees() if self.dim(n)]
        for a in degs:
            for b in degs:
                for c in degs:
                    n = a + b + c
                    if not self.stored(n):
                        continue
                    for i in range(self.dim(a)):
                        x = self.unit_vector(a, i)
                        for j in range(self.dim(b)):
                            y = self.unit_vector(b, j)
                            xy = self.mul(a, x, b, y)
                            for k in range(self.dim(c)):
                                z = self.unit_vector(c, k)
                                lhs = self.mul(a + b, xy, c, z)
                                rhs = self.mul(a, x, b + c, self.mul(b, y, c, z))
                                if not self.equal(n, lhs, rhs):
                                    bad.append((a, i, b, j, c, k))
                                count += 1
                                if limit and count >= limit:
                                    return bad
        return bad

    def check_relations_ideal(self):
        """Products with a relation must again lie in the relation span."""
        bad = []
        for a in self.degrees():
            for r in self.relations.get(a, []):
                for b in self.degrees():
                    if not self.stored(a + b):
                        continue
                    for j in range(self.dim(b)):
                        y = self.unit_vector(b, j)
                        if not self.is_zero(a + b, self.mul(a, r, b, y)) or \
                                not self.is_zero(a + b, self.mul(b, y, a, r)):
                            bad.append((a, r, b, j))
        return bad

    def verify(self):
        problems = {}
        for name, fn in (("d_squared", self.check_d_squared),
                         ("relations_closed", self.check_relations_closed),
                         ("unit", self.check_unit),
                         ("leibniz", self.check_leibniz),
                         ("associativity", self.check_associative)):
            out = fn()
            if out:
                problems[name] = out
        return problems

    @cached_property
    def is_degreewise_free(self):
        """Every stored chain group is free over the ground ring."""
        if self.p:
            return True
        return all(all(f == 0 for f in self.quotient(n).factors) for n in self.degrees())


def from_words(ground, words_by_degree, relations, diff, mul_words, unit_word=(), **kw):
    """Helper: a TruncatedDga whose spanning elements are monomial words."""

    def mul_basis(a, i, b, j):
        w = mul_words(words_by_degree[a][i], words_by_degree[b][j])
        out = [0] * len(words_by_degree[a + b])
        if w is not None:
            out[dga_index[a + b][w]] += 1
        return out

    dga_index = {n: {w: i for i, w in enumerate(ws)} for n, ws in words_by_degree.items()}
    unit = [0] * len(words_by_degree.get(0, []))
    if unit:
        unit[dga_index[0][unit_word]] = 1
    return TruncatedDga(ground, words_by_degree, relations, diff, mul_basis, unit, **kw)


def reduce_vec(v, p):
    return [x % p for x in v] if p else v


__all__ = ["GradedComplex", "TruncatedDga", "from_words", "linalg"]

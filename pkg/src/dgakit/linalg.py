"""Exact linear algebra over the integers and prime fields.

Vectors are plain lists of Python ints; matrices are lists of rows.
Everything is exact: integers are arbitrary precision, and over F_p all
entries are kept reduced into ``range(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Matrices wider than this are eliminated row-by-row on their nonzero support
# only; narrower ones use straight dense loops.  Both paths give identical
# results, this only moves the crossover point.
SPARSE_THRESHOLD = 64


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class ScalarDomain:
    """Ground ring: the integers (``p == 0``) or the prime field F_p."""

    p: int = 0

    def __post_init__(self):
        if self.p != 0 and not is_prime(self.p):
            raise ValueError(f"F_{self.p}: modulus {self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.p != 0

    def reduce(self, x: int) -> int:
        return x % self.p if self.p else x

    def vec(self, v):
        p = self.p
        return [x % p for x in v] if p else list(v)

    def inverse(self, a: int) -> int:
        if not self.p:
            if a in (1, -1):
                return a
            raise ZeroDivisionError(f"{a} is not a unit in Z")
        return pow(a, -1, self.p)

    @property
    def name(self) -> str:
        return f"F{self.p}" if self.p else "Z"

    @classmethod
    def parse(cls, text: str) -> "ScalarDomain":
        text = text.strip()
        if text in ("Z", "ZZ"):
            return cls(0)
        if text.startswith("F") and text[1:].isdigit():
            return cls(int(text[1:]))
        raise ValueError(f"unknown ground ring {text!r}")

    def __str__(self):
        return self.name


ZZ = ScalarDomain(0)


def GF(p: int) -> ScalarDomain:
    return ScalarDomain(p)


def xgcd(a: int, b: int):
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


# --------------------------------------------------------------------------
# Small matrix helpers


@dataclass
class ExactMatrix:
    rows: int
    cols: int
    entries: list = field(default_factory=list)

    def __post_init__(self):
        if not self.entries:
            self.entries = [[0] * self.cols for _ in range(self.rows)]
        assert len(self.entries) == self.rows
        assert all(len(r) == self.cols for r in self.entries)

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns, nrows):
        columns = [list(c) for c in columns]
        entries = [[c[i] for c in columns] for i in range(nrows)]
        return cls(nrows, len(columns), entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, identity(n))

    def column(self, j):
        return [r[j] for r in self.entries]

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            return ExactMatrix(self.rows, other.cols, matmul(self.entries, other.entries, other.cols))
        return mat_vec(self.entries, other)

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def transpose(self):
        return ExactMatrix(self.cols, self.rows, transpose(self.entries, self.cols))

    def det(self):
        return determinant(self.entries)


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(rows, ncols):
    return [[r[j] for r in rows] for j in range(ncols)]


def matmul(A, B, bcols, p=0):
    out = []
    for row in A:
        acc = [0] * bcols
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(bcols):
                    b = bk[j]
                    if b:
                        acc[j] += a * b
        if p:
            acc = [x % p for x in acc]
        out.append(acc)
    return out


def mat_vec(A, v, p=0):
    out = []
    for row in A:
        s = 0
        for a, x in zip(row, v):
            if a and x:
                s += a * x
        out.append(s % p if p else s)
    return out


def determinant(M):
    """Exact determinant via fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def add_scaled(target, src, c, p=0, start=0):
    """target += c * src, in place."""
    if not c:
        return
    n = len(target)
    if n > SPARSE_THRESHOLD:
        for j in range(start, n):
            s = src[j]
            if s:
                target[j] += c * s
    else:
        for j in range(start, n):
            target[j] += c * src[j]
    if p:
        for j in range(start, n):
            target[j] %= p


def is_zero(v):
    return not any(v)


# --------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M, cols=None, track_u=True, track_v=True):
    """Smith normal form of an integer matrix.

    Returns ``(U, D, V)`` as ExactMatrix with ``U*M*V == D``, ``U`` and ``V``
    unimodular and the diagonal of ``D`` a nonnegative divisibility chain.
    Pivots are chosen as the smallest nonzero absolute value, ties going to
    the lowest (row, col).
    """
    if isinstance(M, ExactMatrix):
        rows, cols, data = M.rows, M.cols, M.entries
    else:
        data = M
        rows = len(M)
        if cols is None:
            cols = len(M[0]) if M else 0
    U, D, V, _ = _snf(data, rows, cols, track_u, track_v, False)
    return (ExactMatrix(rows, rows, U) if track_u else None,
            ExactMatrix(rows, cols, D),
            ExactMatrix(cols, cols, V) if track_v else None)


def _snf(data, m, n, track_u, track_v, track_vinv):
    D = [list(r) for r in data]
    U = identity(m) if track_u else None
    V = identity(n) if track_v else None
    Vi = identity(n) if track_vinv else None

    def row_comb(i1, i2, a, b, c, d):
        # (row i1, row i2) <- (a*r1 + b*r2, c*r1 + d*r2)
        for M_ in (D, U):
            if M_ is None:
                continue
            r1, r2 = M_[i1], M_[i2]
            for j in range(len(r1)):
                x, y = r1[j], r2[j]
                if x or y:
                    r1[j] = a * x + b * y
                    r2[j] = c * x + d * y

    def col_comb(j1, j2, a, b, c, d):
        # (col j1, col j2) <- (a*c1 + b*c2, c*c1 + d*c2)
        for M_ in (D, V):
            if M_ is None:
                continue
            for r in M_:
                x, y = r[j1], r[j2]
                if x or y:
                    r[j1] = a * x + b * y
                    r[j2] = c * x + d * y
        if Vi is not None:
            # V <- V*G with G = [[a, c], [b, d]]; keep Vi = V^-1 via Vi <- G^-1 * Vi
            det = a * d - b * c
            r1, r2 = Vi[j1], Vi[j2]
            for j in range(len(r1)):
                x, y = r1[j], r2[j]
                if x or y:
                    r1[j] = (d * x - c * y) * det
                    r2[j] = (-b * x + a * y) * det

    def swap_rows(i1, i2):
        if i1 != i2:
            row_comb(i1, i2, 0, 1, 1, 0)

    def swap_cols(j1, j2):
        if j1 != j2:
            col_comb(j1, j2, 0, 1, 1, 0)

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            changed = False
            # clear column t
            for i in range(t + 1, m):
                b = D[i][t]
                if not b:
                    continue
                a = D[t][t]
                if b % a == 0:
                    q = b // a
                    row_comb(t, i, 1, 0, -q, 1)
                else:
                    x, y, g = xgcd(a, b)
                    row_comb(t, i, x, y, -b // g, a // g)
                    changed = True
            # clear row t
            for j in range(t + 1, n):
                b = D[t][j]
                if not b:
                    continue
                a = D[t][t]
                if b % a == 0:
                    q = b // a
                    col_comb(t, j, 1, 0, -q, 1)
                else:
                    x, y, g = xgcd(a, b)
                    col_comb(t, j, x, y, -b // g, a // g)
                    changed = True
            if changed:
                continue
            a = D[t][t]
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % a:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_comb(t, bad, 1, 1, 0, 1)
        if D[t][t] < 0:
            _neg_row(D, U, t)
        t += 1
    return U, D, V, Vi


def _neg_row(D, U, t):
    D[t] = [-x for x in D[t]]
    if U is not None:
        U[t] = [-x for x in U[t]]


def invariant_factors(M, cols=None):
    """Diagonal of the Smith form, including trailing zeros up to min(rows, cols)."""
    _, D, _ = smith_normal_form(M, cols, track_u=False, track_v=False)
    return [D.entries[i][i] for i in range(min(D.rows, D.cols))]


# --------------------------------------------------------------------------
# Row echelon forms and spans


class Echelon:
    """Row echelon basis of the span of a list of vectors.

    Over Z the rows are a lattice basis of the integral span (Hermite-style,
    positive pivots); over F_p they are reduced with unit pivots.  When
    ``track`` is set, ``transform[i]`` expresses row ``i`` as a combination of
    the input vectors and ``kernel`` holds a basis of the relations among
    the inputs.
    """

    def __init__(self, vectors, n, p=0, track=False):
        self.n = n
        self.p = p
        rows = [list(v) if not p else [x % p for x in v] for v in vectors]
        k = len(rows)
        T = identity(k) if track else None
        pivots = []
        r = 0  # number of finished pivot rows; rows[:r] are the basis
        for c in range(n):
            if r == k:
                break
            cand = [i for i in range(r, k) if rows[i][c]]
            if not cand:
                continue
            if p:
                i0 = cand[0]
                self._swap(rows, T, r, i0)
                inv = pow(rows[r][c], -1, p)
                rows[r] = [(x * inv) % p for x in rows[r]]
                if T is not None:
                    T[r] = [(x * inv) % p for x in T[r]]
                for i in range(k):
                    if i != r and rows[i][c]:
                        q = rows[i][c]
                        add_scaled(rows[i], rows[r], -q, p, c)
                        if T is not None:
                            add_scaled(T[i], T[r], -q, p)
            else:
                # gcd-combine all candidates into row r
                i0 = min(cand, key=lambda i: (abs(rows[i][c]), i))
                self._swap(rows, T, r, i0)
                for i in range(r + 1, k):
                    b = rows[i][c]
                    if not b:
                        continue
                    a = rows[r][c]
                    if b % a == 0:
                        q = b // a
                        add_scaled(rows[i], rows[r], -q, 0, c)
                        if T is not None:
                            add_scaled(T[i], T[r], -q)
                    else:
                        x, y, g = xgcd(a, b)
                        ra, rb = rows[r], rows[i]
                        rows[r] = [x * u + y * v for u, v in zip(ra, rb)]
                        rows[i] = [(-b // g) * u + (a // g) * v for u, v in zip(ra, rb)]
                        if T is not None:
                            ta, tb = T[r], T[i]
                            T[r] = [x * u + y * v for u, v in zip(ta, tb)]
                            T[i] = [(-b // g) * u + (a // g) * v for u, v in zip(ta, tb)]
                if rows[r][c] < 0:
                    rows[r] = [-x for x in rows[r]]
                    if T is not None:
                        T[r] = [-x for x in T[r]]
                # size-reduce earlier rows to keep entries small
                a = rows[r][c]
                for i in range(r):
                    q = rows[i][c] // a
                    if q:
                        add_scaled(rows[i], rows[r], -q)
                        if T is not None:
                            add_scaled(T[i], T[r], -q)
            pivots.append(c)
            r += 1
        self.rows = rows[:r]
        self.pivots = pivots
        self.rank = r
        if track:
            self.transform = T[:r]
            self.kernel = T[r:]
        else:
            self.transform = None
            self.kernel = None

    @staticmethod
    def _swap(rows, T, a, b):
        if a != b:
            rows[a], rows[b] = rows[b], rows[a]
            if T is not None:
                T[a], T[b] = T[b], T[a]

    def coordinates(self, v):
        """Coefficients y with sum(y[i] * rows[i]) == v, or None if v is not in the span."""
        p = self.p
        v = [x % p for x in v] if p else list(v)
        y = []
        for row, c in zip(self.rows, self.pivots):
            b = v[c]
            if not b:
                y.append(0)
                continue
            a = row[c]
            if p:
                q = b  # pivots are 1
            else:
                if b % a:
                    return None
                q = b // a
            add_scaled(v, row, -q, p, c)
            y.append(q)
        if any(v):
            return None
        return y

    def reduce(self, v):
        """Remainder of v after subtracting the span greedily (canonical over F_p)."""
        p = self.p
        v = [x % p for x in v] if p else list(v)
        for row, c in zip(self.rows, self.pivots):
            b = v[c]
            if not b:
                continue
            q = b if p else b // row[c]
            add_scaled(v, row, -q, p, c)
        return v

    def contains(self, v):
        return self.coordinates(v) is not None


def span_basis(vectors, n, p=0):
    return Echelon(vectors, n, p).rows


def kernel_basis(A, cols=None, p=0):
    """Basis of {x : A x = 0}; over Z a basis of the integral kernel lattice."""
    if isinstance(A, ExactMatrix):
        cols, data = A.cols, A.entries
    else:
        data = A
        if cols is None:
            cols = len(A[0]) if A else 0
    columns = transpose(data, cols)  # one vector per column of A
    E = Echelon(columns, len(data), p, track=True)
    if not E.kernel:
        return []
    return Echelon(E.kernel, cols, p).rows


def solve(A, b, cols=None, p=0):
    """Some x with A x == b, or None when b is outside the column span."""
    if isinstance(A, ExactMatrix):
        cols, data = A.cols, A.entries
    else:
        data = A
        if cols is None:
            cols = len(A[0]) if A else 0
    m = len(data)
    if len(b) != m:
        raise ValueError("dimension mismatch")
    columns = transpose(data, cols)
    E = Echelon(columns, m, p, track=True)
    y = E.coordinates(b)
    if y is None:
        return None
    x = [0] * cols
    for yi, t in zip(y, E.transform):
        add_scaled(x, t, yi, p)
    return x


# --------------------------------------------------------------------------
# Quotients Z^n / span(relations)


class QuotientStructure:
    """Isomorphism type and coordinates of (ground)^ngens / span(relations).

    ``factors`` lists the invariant factors that are not units: 0 denotes a
    free summand, d > 1 a cyclic summand Z/d.  Over F_p every factor is 0
    (one free F_p coordinate per summand).
    """

    def __init__(self, ngens, relations, p=0):
        self.ngens = ngens
        self.p = p
        rel = Echelon(relations, ngens, p)
        self.relations = rel
        if p:
            piv = set(rel.pivots)
            self._free = [j for j in range(ngens) if j not in piv]
            self.factors = [0] * len(self._free)
            self._V = None
            return
        R = rel.rows
        k = len(R)
        _, D, V, Vi = _snf(R, k, ngens, False, True, True)
        diag = [D[i][i] for i in range(k)] + [0] * (ngens - k)
        keep = [i for i, d in enumerate(diag) if d != 1]
        self._keep = keep
        self._diag = diag
        self._V = V
        self._Vi = Vi
        self.factors = [diag[i] for i in keep]

    def __len__(self):
        return len(self.factors)

    @property
    def order(self):
        """Group order, or 0 when infinite."""
        if self.p:
            return self.p ** len(self.factors)
        out = 1
        for d in self.factors:
            if d == 0:
                return 0
            out *= d
        return out

    @property
    def is_finite(self):
        return self.order != 0

    def project(self, x):
        """Quotient coordinates of a generator-coordinate vector."""
        p = self.p
        if p:
            r = self.relations.reduce(x)
            return [r[j] for j in self._free]
        V = self._V
        out = []
        for i in self._keep:
            s = 0
            for xi, row in zip(x, V):
                if xi:
                    s += xi * row[i]
            d = self._diag[i]
            out.append(s % d if d else s)
        return out

    def lift(self, coords):
        """A generator-coordinate representative of the given quotient coordinates."""
        n = self.ngens
        p = self.p
        if p:
            v = [0] * n
            for c, j in zip(coords, self._free):
                v[j] = c % p
            return v
        v = [0] * n
        for c, i in zip(coords, self._keep):
            if c:
                add_scaled(v, self._Vi[i], c)
        return v

    def basis_lifts(self):
        k = len(self.factors)
        return [self.lift([1 if j == i else 0 for j in range(k)]) for i in range(k)]

    def is_zero(self, x):
        return not any(self.project(x))

    def equal(self, x, y):
        return self.project([a - b for a, b in zip(x, y)]) == [0] * len(self.factors) if self.factors else True

    def normalize(self, coords):
        if self.p:
            return [c % self.p for c in coords]
        return [c % d if d else c for c, d in zip(coords, self.factors)]

    def describe(self):
        return describe_factors(self.factors, self.p)


def quotient_structure(ngens, relations, p=0):
    """Quotient of the free module on ngens by the span of relation vectors.

    ``relations`` may be a list of vectors or an ExactMatrix whose columns are
    the relations.
    """
    if isinstance(relations, ExactMatrix):
        if relations.rows != ngens:
            raise ValueError("relations must have ngens rows")
        relations = relations.columns()
    return QuotientStructure(ngens, relations, p)


def describe_factors(factors, p=0):
    if not factors:
        return "0"
    parts = []
    for d in factors:
        if p:
            parts.append(f"F{p}")
        elif d == 0:
            parts.append("Z")
        else:
            parts.append(f"Z/{d}")
    return " + ".join(parts)


class Subquotient:
    """span(tops) / span(bottoms), with bottoms inside span(tops).

    Used for homology (cycles over boundaries) and for images of maps into
    homology.  Elements are given in ambient coordinates.
    """

    def __init__(self, tops, bottoms, n, p=0):
        self.n = n
        self.p = p
        self.top = Echelon(tops, n, p)
        rel = []
        for b in bottoms:
            y = self.top.coordinates(b)
            if y is None:
                raise ValueError("subquotient: a relation lies outside the top span")
            rel.append(y)
        self.quotient = QuotientStructure(self.top.rank, rel, p)
        self.factors = self.quotient.factors

    def project(self, v):
        """Quotient coordinates of v, or None if v is not in the top span."""
        y = self.top.coordinates(v)
        if y is None:
            return None
        return self.quotient.project(y)

    def lift(self, coords):
        y = self.quotient.lift(coords)
        v = [0] * self.n
        for yi, row in zip(y, self.top.rows):
            if yi:
                add_scaled(v, row, yi, self.p)
        return v

    def representatives(self):
        k = len(self.factors)
        return [self.lift([1 if j == i else 0 for j in range(k)]) for i in range(k)]

"""Postnikov sections, square-zero extensions, homotopy classes and k-invariants."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from . import poly as P
from .dga import TruncatedDga
from .errors import HypothesisError, InfiniteSearchSpace, ResourceLimitError
from .homology import homology
from .linalg import ScalarDomain, Subquotient, add_scaled
from .semifree import SemifreeDga, _solve_boundary, _unit, _vec_to_poly, semifree_replacement

MAP_CAP = 200_000


def brutal_truncation(A, n) -> TruncatedDga:
    """Degrees < n unchanged, A_n / im(A_{n+1}) in degree n, zero above."""
    if not A.known(n + 1):
        raise HypothesisError(f"brutal truncation at {n} needs degree {n + 1}")
    basis = {k: A.basis[k] for k in range(A.lo, n + 1)}
    relations = {k: list(A.relations.get(k, [])) for k in range(A.lo, n + 1)}
    if A.stored(n + 1):
        relations[n] = relations[n] + [list(c) for c in A.diff[n + 1]]
    diff = {k: A.diff[k] for k in range(A.lo, n + 1)}
    T = TruncatedDga(A.ground, basis, relations, diff, A.basis_product, A.unit, lo=A.lo, top=n,
                     zero_below=A.zero_below, complete=True, name=f"P{n}({A.name})")
    return T


def postnikov_section(Q: SemifreeDga, n, N, quiet=True) -> SemifreeDga:
    """Attach cells to Q killing homology in degrees n+1..N-1."""
    out = SemifreeDga(f"P{n}({Q.name})", Q.ground, list(Q.generators), dict(Q.differentials),
                      dict(Q.stages), {}, None, N - 1, list(Q.notes))
    if Q.target is not None and Q.target.known(n + 1):
        C = brutal_truncation(Q.target, n)
        out.target = C
        for g, k in Q.generators:
            out.images[g] = list(Q.images[g]) if k <= n else C.zero(k)
    used = {g for g, _ in out.generators}
    stage = max(out.stages.values(), default=0)
    from .semifree import _new_name
    for m in range(n + 1, N):
        T = out.realize(m + 1)
        H = homology(T, m)
        reps = H.representatives(m)
        if not reps:
            continue
        stage += 1
        for z in reps:
            g = _new_name(used)
            used.add(g)
            out.generators.append((g, m + 1))
            out.differentials[g] = _vec_to_poly(T, m, z)
            out.stages[g] = stage
            if out.target is not None:
                out.images[g] = out.target.zero(m + 1)
    return out


# --------------------------------------------------------------------------
# Extensions with a fibre concentrated in known degrees


class Extension:
    """A dga X containing a base C degreewise, with extra "fibre" coordinates.

    ``fiber[n]`` lists (index, order) of fibre coordinates in degree n
    (order 0 means free, p for an F_p coordinate).
    """

    def __init__(self, X, C, cpos, fiber):
        self.dga = X
        self.base = C
        self.cpos = cpos  # n -> list of X indices of C's spanning set
        self.fiber = fiber

    def inc(self, n, c):
        v = self.dga.zero(n)
        for i, x in zip(self.cpos.get(n, []), c):
            v[i] += x
        return v

    def proj(self, n, x):
        return [x[i] for i in self.cpos.get(n, [])]

    def fiber_coords(self, n, x):
        return [(x[i] % o) if o else x[i] for i, o in self.fiber.get(n, [])]

    def fiber_vector(self, n, coords):
        v = self.dga.zero(n)
        for (i, _), c in zip(self.fiber.get(n, []), coords):
            v[i] += c
        return v

    def fiber_elements(self, n):
        ranges = []
        for _, o in self.fiber.get(n, []):
            if not o:
                raise InfiniteSearchSpace(f"infinite search space: free fibre coordinate in degree {n}")
            ranges.append(range(o))
        return [list(t) for t in iproduct(*ranges)]


def _build(C, extra, r_diff, name):
    """Extension of C by extra labelled coordinates.

    ``extra``: n -> list of (label, order); ``r_diff``: (n, j) -> {(n-1, j'): c}
    on extra coordinates.  Products: C multiplies as before, degree-0 C
    elements act on extras by augmentation, everything else involving an
    extra coordinate vanishes.
    """
    p = C.p
    if C.dim(0) != 1:
        raise HypothesisError("base must have degree 0 spanned by the unit")
    u = C.unit[0]
    u_inv = pow(u, -1, p) if p else u
    top = max([C.top] + list(extra))
    complete = C.complete
    if not complete and any(n > C.top for n in extra):
        raise HypothesisError("extension above the range of an incomplete base")
    basis, rels, cpos, fiber = {}, {}, {}, {}
    for n in range(0, top + 1):
        labels = list(C.basis[n]) if C.stored(n) else []
        cpos[n] = list(range(len(labels)))
        fib = []
        for lab, o in extra.get(n, []):
            fib.append((len(labels), o))
            labels.append(lab)
        fiber[n] = fib
        basis[n] = labels
        rs = []
        for r in (C.relations.get(n, []) if C.stored(n) else []):
            rs.append(list(r) + [0] * len(fib))
        for i, o in fib:
            if o and not p:
                v = [0] * len(labels)
                v[i] = o
                rs.append(v)
        rels[n] = rs
    diff = {}
    for n in range(0, top + 1):
        cols = []
        m = len(basis[n - 1]) if n > 0 else 0
        for i in range(len(basis[n])):
            v = [0] * m
            if i < len(cpos[n]):
                if n > 0 and C.stored(n):
                    for k, c in enumerate(C.diff[n][i]):
                        v[k] += c
            else:
                j = [f[0] for f in fiber[n]].index(i)
                for (n1, j1), c in r_diff.get((n, j), {}).items():
                    v[fiber[n1][j1][0]] += c
            cols.append([x % p for x in v] if p else v)
        diff[n] = cols

    def mul_basis(a, i, b, j):
        n = a + b
        out = [0] * len(basis[n])
        ci = i < len(cpos[a])
        cj = j < len(cpos[b])
        if ci and cj:
            if C.known(n) and C.dim(n):
                for k, c in enumerate(C.basis_product(a, i, b, j)):
                    out[k] += c
        elif ci and a == 0:
            out[j] += u_inv * (1 if i == 0 else 0)
        elif cj and b == 0:
            out[i] += u_inv * (1 if j == 0 else 0)
        return [x % p for x in out] if p else out

    unit = [0] * len(basis[0])
    unit[0] = u
    X = TruncatedDga(C.ground, basis, rels, diff, mul_basis, unit, top=top, complete=complete, name=name)
    return Extension(X, C, cpos, fiber)


def _check_action(C, factors):
    """M (cyclic factors) must be a module over H_0(C)."""
    H0 = homology(C, 0) if C.known(1) else None
    if H0 is None or not H0.factors(0):
        return
    q = H0.factors(0)[0]
    for d in factors:
        if C.p:
            continue
        if q and (d == 0 or q % d):
            raise HypothesisError(f"action incompatibility: H_0 = Z/{q} cannot act on Z/{d or 0}")


@dataclass
class SquareZeroDga:
    base: TruncatedDga
    factors: list  # cyclic factors of M (0 = free, over F_p: one F_p per entry)
    degree: int
    ext: Extension = None

    @property
    def dga(self):
        return self.ext.dga

    def orders(self):
        p = self.base.p
        return [p if p else d for d in self.factors]


def square_zero_extension(C, factors, r, name=None) -> SquareZeroDga:
    """C ∨ Σ^r M with M a sum of cyclic groups on which C acts by augmentation."""
    factors = list(factors)
    _check_action(C, factors)
    p = C.p
    orders = [p if p else d for d in factors]
    extra = {r: [(("m", i), o) for i, o in enumerate(orders)]} if factors else {}
    ext = _build(C, extra, {}, name or f"{C.name}∨Σ{r}M")
    return SquareZeroDga(C, factors, r, ext)


def recognize_square_zero(A):
    """(base truncation, factors, degree) when A is ground-type in degree 0 plus one square-zero degree."""
    H = [n for n in A.degrees() if n > 0 and len(A.quotient(n).factors)]
    if len(H) != 1 or not A.complete:
        return None
    r = H[0]
    if any(any(c for c in col) for n in A.degrees() for col in A.diff.get(n, [])):
        return None
    if A.stored(2 * r):
        for i in range(A.dim(r)):
            for j in range(A.dim(r)):
                if not A.is_zero(2 * r, A.basis_product(r, i, r, j)):
                    return None
    return brutal_truncation(A, 0) if A.known(1) else A, A.quotient(r).factors, r


@dataclass
class PathObject:
    target: SquareZeroDga
    ext: Extension

    @property
    def dga(self):
        return self.ext.dga

    def evaluate(self, which, n, x):
        """ev0 / ev1: PX -> X."""
        D = self.target.ext
        c = self.ext.proj(n, x)
        out = D.inc(n, c)
        if n == self.target.degree:
            k = len(self.target.factors)
            coords = self.ext.fiber_coords(n, x)
            m = coords[:k] if which == 0 else coords[k:2 * k]
            add_scaled(out, D.fiber_vector(n, m), 1, D.dga.p)
        return out


def path_object(D: SquareZeroDga) -> PathObject:
    """C ∨ Hom(I, Σ^r M): (f(a0), f(a1)) in degree r, f(u) in degree r-1.

    d(a) = a0 - a1 on the interval gives δf(u) = -(-1)^r (f(a0) - f(a1)).
    """
    r = D.degree
    orders = D.orders()
    k = len(orders)
    extra = {}
    if k:
        extra[r] = [(("a0", i), o) for i, o in enumerate(orders)] + [(("a1", i), o) for i, o in enumerate(orders)]
        if r - 1 >= 0:
            extra.setdefault(r - 1, [])
            extra[r - 1] = extra[r - 1] + [(("u", i), o) for i, o in enumerate(orders)]
    s = -1 if r % 2 == 0 else 1  # -(-1)^r
    rd = {}
    if k and r >= 1:
        for i in range(k):
            rd[(r, i)] = {(r - 1, i): s}
            rd[(r, k + i)] = {(r - 1, i): -s}
    ext = _build(D.base, extra, rd, f"Path({D.dga.name})")
    return PathObject(D, ext)


# --------------------------------------------------------------------------
# Maps of dgas


@dataclass
class ChainAlgebraMap:
    source: object
    target: object
    images: dict  # generator -> vector

    def key(self):
        return tuple(tuple(self.images[g]) for g, _ in self.source.generators if g in self.images)


def evaluate(poly, degrees, images, X):
    """Value of a noncommutative polynomial under generator images in X."""
    n = P.word_degree(next(iter(poly)), degrees) if poly else None
    if n is None:
        return None
    out = X.zero(n)
    for w, c in poly.items():
        v = list(X.unit)
        d = 0
        for g in w:
            v = X.mul(d, v, degrees[g], images[g])
            d += degrees[g]
            if not v:
                break
        if v:
            add_scaled(out, v, c, X.p)
    return out


def _elements(X, n):
    q = X.quotient(n)
    if not q.is_finite:
        raise InfiniteSearchSpace(f"infinite search space: degree {n} of {X.name or 'target'} is not finite")
    ranges = [range(X.p)] * len(q.factors) if X.p else [range(d) for d in q.factors]
    return [q.lift(list(t)) for t in iproduct(*ranges)]


def enumerate_dga_maps(Q, X, max_degree=None, over=None, cap=MAP_CAP):
    """All dga maps from the semifree Q to X, determined on generators.

    ``over`` = (Extension, psi): only maps whose base part is psi (generator
    -> base vector); then only fibre coordinates are enumerated.
    """
    T = over[0].dga if over else X
    if max_degree is None:
        max_degree = T.top + 1 if T.complete else T.top
    degs = Q.degrees
    gens = [(g, k) for g, k in Q.generators if k <= max_degree]
    cands = []
    for g, k in gens:
        if not T.known(k):
            raise HypothesisError(f"target unknown in degree {k}")
        if T.dim(k) == 0:
            cands.append([[]])
        elif over:
            ext, psi = over
            c = psi.get(g)
            if c is None:
                c = ext.base.zero(k) if ext.base.known(k) else []
            base = ext.inc(k, c)
            lst = []
            for m in ext.fiber_elements(k):
                v = list(base)
                add_scaled(v, ext.fiber_vector(k, m), 1, T.p)
                lst.append(v)
            cands.append(lst)
        else:
            cands.append(_elements(T, k))
    out = []
    images = {}

    def rec(i):
        if i == len(gens):
            out.append(ChainAlgebraMap(Q, T, dict(images)))
            if len(out) > cap:
                raise ResourceLimitError(f"more than {cap} maps")
            return
        g, k = gens[i]
        dv = Q.differentials.get(g, {})
        target = evaluate(dv, degs, images, T) if dv else None
        for x in cands[i]:
            if k >= 1 and T.known(k - 1):
                dx = T.d(k, x) if x else T.zero(k - 1)
                rhs = target if target is not None else T.zero(k - 1)
                if not T.equal(k - 1, dx, rhs):
                    continue
            images[g] = x
            rec(i + 1)
        images.pop(g, None)

    rec(0)
    return out


# --------------------------------------------------------------------------
# Homotopy classes


@dataclass
class HoClassGroup:
    factors: list
    prime: int
    subquotient: Subquotient
    maps: list
    pairs: list  # (mpart0, mpart1) from path-object maps
    gens: list  # generators of the fibre degree, in coordinate order
    mdim: int
    orders: list

    @property
    def order(self):
        out = 1
        for d in self.factors:
            out *= self.prime if self.prime else d
        return out

    def project(self, mpart):
        c = self.subquotient.project(mpart)
        if c is None:
            raise ValueError("not a map M-part")
        return tuple(self.subquotient.quotient.normalize(c))

    def classes(self):
        out = {}
        for f in self.maps:
            out.setdefault(self.project(f.mpart), []).append(f)
        return dict(sorted(out.items()))

    def elements(self):
        ranges = [range(self.prime)] * len(self.factors) if self.prime else [range(d) for d in self.factors]
        return [tuple(t) for t in iproduct(*ranges)]

    def check_equivalence(self):
        """Homotopy (path-object pairs) is reflexive, symmetric and transitive on the map set."""
        keys = [tuple(f.mpart) for f in self.maps]
        rel = {(tuple(a), tuple(b)) for a, b in self.pairs}
        if any((k, k) not in rel for k in keys):
            return False
        if any((b, a) not in rel for a, b in rel):
            return False
        succ = {}
        for a, b in rel:
            succ.setdefault(a, set()).add(b)
        for a, bs in succ.items():
            for b in bs:
                if not succ.get(b, set()) <= bs:
                    return False
        return True

    def check_addition(self):
        """f ≃ f' implies f + g ≃ f' + g for all enumerated maps."""
        rel = {(tuple(a), tuple(b)) for a, b in self.pairs}
        keys = {tuple(f.mpart) for f in self.maps}

        def add(x, y):
            return tuple((a + b) % o if o else a + b for a, b, o in zip(x, y, self.orders * len(self.gens)))

        for a, b in rel:
            for g in keys:
                s, t = add(a, g), add(b, g)
                if s not in keys or t not in keys or (s, t) not in rel:
                    return False
        return True


def _mpart(ext, r, gens, f):
    out = []
    for g in gens:
        out.extend(ext.fiber_coords(r, f.images[g]))
    return out


def homotopy_classes(Q, D: SquareZeroDga, psi=None, max_degree=None, cap=MAP_CAP) -> HoClassGroup:
    """Maps Q -> C ∨ Σ^r M over C modulo homotopies through the path object."""
    r = D.degree
    psi = psi if psi is not None else default_psi(Q, D.base)
    max_degree = max_degree if max_degree is not None else r + 1
    gens = [g for g, k in Q.generators if k == r]
    maps = enumerate_dga_maps(Q, D.dga, max_degree, (D.ext, psi), cap)
    PD = path_object(D)
    hmaps = enumerate_dga_maps(Q, PD.dga, max_degree, (PD.ext, psi), cap)
    k = len(D.factors)
    for f in maps:
        f.mpart = _mpart(D.ext, r, gens, f)
    pairs = []
    for h in hmaps:
        a, b = [], []
        for g in gens:
            c = PD.ext.fiber_coords(r, h.images[g])
            a.extend(c[:k])
            b.extend(c[k:2 * k])
        pairs.append((a, b))
    orders = D.orders()
    p = D.base.p
    dim = len(gens) * k
    mrel = []
    if not p:
        for gi in range(len(gens)):
            for i, o in enumerate(orders):
                if o:
                    v = [0] * dim
                    v[gi * k + i] = o
                    mrel.append(v)
    tops = [f.mpart for f in maps] + mrel
    bottoms = [[x - y for x, y in zip(a, b)] for a, b in pairs] + mrel
    sq = Subquotient(tops, bottoms, dim, p)
    return HoClassGroup(list(sq.factors), p, sq, maps, pairs, gens, dim, orders)


def default_psi(Q, C):
    """Generator images in C taken from Q's comparison map where spanning sets agree."""
    out = {}
    for g, k in Q.generators:
        if C.known(k) and C.dim(k) and Q.target is not None and Q.target.stored(k) \
                and Q.target.basis[k] == C.basis[k] and g in Q.images:
            out[g] = list(Q.images[g])
        elif C.known(k):
            out[g] = C.zero(k)
    return out


# --------------------------------------------------------------------------
# Automorphisms of M


def automorphisms(factors, p=0, cap=100_000):
    """All automorphisms of ⊕ Z/d_i (or F_p^k) as lists of generator images."""
    orders = [p if p else d for d in factors]
    if any(o == 0 for o in orders):
        raise InfiniteSearchSpace("infinite search space: automorphisms of a free group")
    k = len(orders)
    elems = [list(t) for t in iproduct(*[range(o) for o in orders])]
    total = len(elems)

    def ok_image(i, x):
        return all((orders[i] * c) % o == 0 for c, o in zip(x, orders))

    cands = [[x for x in elems if ok_image(i, x)] for i in range(k)]
    out = []
    count = 0
    for imgs in iproduct(*cands):
        count += 1
        if count > cap:
            raise ResourceLimitError("too many candidate automorphisms")
        seen = set()
        for x in elems:
            y = tuple(sum(x[i] * imgs[i][j] for i in range(k)) % orders[j] for j in range(k))
            seen.add(y)
        if len(seen) == total:
            out.append([list(v) for v in imgs])
    return out


def apply_aut(aut, coords, orders):
    k = len(orders)
    return [sum(coords[i] * aut[i][j] for i in range(k)) % orders[j] for j in range(k)]


# --------------------------------------------------------------------------
# k-invariants


@dataclass
class KInvariantClass:
    n: int
    factors: list
    group: HoClassGroup
    coords: tuple
    mpart: list
    representative: ChainAlgebraMap = None
    orbit: list = field(default_factory=list)

    def is_zero(self):
        return not any(self.coords)

    def same_class(self, other):
        diff = [a - b for a, b in zip(self.mpart, other.mpart)]
        return not any(self.group.project(diff))

    def as_dict(self):
        return {"n": self.n, "M": self.factors, "group": self.group.factors,
                "coords": list(self.coords), "mpart": list(self.mpart),
                "orbit": [list(c) for c in self.orbit]}


def _lift_over(Q, psi, X, n):
    """Lift generator images psi (into the n-truncation of X) to X through degree n+1."""
    degs = Q.degrees
    lift = {}
    for g, k in Q.generators:
        if k > n + 1:
            continue
        if k <= n:
            lift[g] = list(psi[g])
            continue
        dv = Q.differentials.get(g, {})
        target = evaluate(dv, degs, lift, X) if dv else X.zero(n)
        x = _solve_boundary(X, n, target)
        if x is None:
            raise HypothesisError(f"cannot lift generator {g} over the truncation")
        lift[g] = x
    return lift


def k_invariant(X, n, Q_C=None, psi=None, theta=None, cap=MAP_CAP) -> KInvariantClass:
    """The n-th k-invariant of X as a class of maps Q_C -> P_n X ∨ Σ^{n+2} H_{n+1} X over P_n X.

    ``theta`` gives the images (in M coordinates) of the chosen generators of
    H_{n+1}(X); by default M = H_{n+1}(X) with its own coordinates, and the
    orbit under Aut(M) is recorded as well.
    """
    if not X.known(n + 2):
        raise HypothesisError(f"X must be known through degree {n + 2}")
    C = brutal_truncation(X, n)
    HX = homology(X, n + 1)
    factors = HX.factors(n + 1)
    if Q_C is None:
        Q_C = semifree_replacement(C, n + 3)
        psi = {g: list(Q_C.images[g]) for g, _ in Q_C.generators}
    D = square_zero_extension(C, factors, n + 2)
    degs = Q_C.degrees
    lift = _lift_over(Q_C, psi, X, n)
    orders = D.orders()
    mimg = {}
    for g, k in Q_C.generators:
        if k != n + 2:
            continue
        z = evaluate(Q_C.differentials.get(g, {}), degs, lift, X) or X.zero(n + 1)
        c = HX.project(n + 1, z)
        if c is None:
            raise HypothesisError("obstruction is not a cycle")
        if theta is not None:
            c = [sum(ci * theta[i][j] for i, ci in enumerate(c)) for j in range(len(orders))]
        mimg[g] = [(x % o) if o else x for x, o in zip(c, orders)]
    G = homotopy_classes(Q_C, D, psi, n + 3, cap)
    mpart = []
    for g in G.gens:
        mpart.extend(mimg[g])
    coords = G.project(mpart)
    rep = next((f for f in G.maps if f.mpart == mpart), None)
    orbit = []
    if theta is None and factors:
        seen = set()
        k = len(orders)
        for a in automorphisms(factors, X.p):
            tw = []
            for gi in range(len(G.gens)):
                tw.extend(apply_aut(a, mpart[gi * k:(gi + 1) * k], orders))
            seen.add(G.project(tw))
        orbit = sorted(seen)
    return KInvariantClass(n, factors, G, coords, mpart, rep, orbit)


def extension_from_class(Q_C, factors, n, mpart, N=None, p=None) -> TruncatedDga:
    """Twisted square-zero extension Q_C ⊕ Σ^{n+1} M with d(y) = dy - α(y)m for |y| = n+2.

    ``mpart`` lists the M coordinates α(y) for the degree-(n+2) generators of
    Q_C in order.  Its homology is H_{<=n}(Q_C) below and M in degree n+1;
    ``k_invariant`` of the result, computed on the same Q_C, recovers α.
    """
    N = N if N is not None else n + 3
    T = Q_C.realize(N)
    p = T.p
    orders = [p if p else d for d in factors]
    k = len(orders)
    gens = [g for g, d in Q_C.generators if d == n + 2]
    r = n + 1
    basis, rels, diff = {}, {}, {}
    for m in range(N + 1):
        labels = list(T.basis[m])
        if m == r:
            labels += [("m", i) for i in range(k)]
        basis[m] = labels
        rs = [list(v) + ([0] * k if m == r else []) for v in T.relations.get(m, [])]
        if m == r and not p:
            for i, o in enumerate(orders):
                if o:
                    v = [0] * len(labels)
                    v[T.dim(m) + i] = o
                    rs.append(v)
        rels[m] = rs
        cols = []
        for i, w in enumerate(T.basis[m]):
            col = list(T.diff[m][i]) + ([0] * k if m - 1 == r else [])
            if m == r + 1 and len(w) == 1 and w[0] in gens:
                gi = gens.index(w[0])
                for j in range(k):
                    col[T.dim(r) + j] -= mpart[gi * k + j]
            cols.append([c % p for c in col] if p else col)
        if m == r:
            cols += [[0] * len(basis[m - 1]) for _ in range(k)]
        diff[m] = cols

    def mul_basis(a, i, b, j):
        nn = a + b
        out = [0] * len(basis[nn])
        ti = i < T.dim(a)
        tj = j < T.dim(b)
        if ti and tj:
            for q, c in enumerate(T.basis_product(a, i, b, j)):
                out[q] += c
        elif ti and a == 0:
            out[j] += 1
        elif tj and b == 0:
            out[i] += 1
        return out

    X = TruncatedDga(T.ground, basis, rels, diff, mul_basis, list(T.unit), top=N, name=f"X({Q_C.name})")
    X.model = Q_C
    X.psi = {g: (_unit(T.dim(d), T.index(d, (g,))) if d <= n else []) for g, d in Q_C.generators
             if d <= n + 1}
    # theta: the class of m_i goes to the i-th coordinate of M
    HX = homology(X, r)
    J = [HX.project(r, _unit(len(basis[r]), T.dim(r) + i)) for i in range(k)]
    X.theta = _invert_on_group(J, HX.factors(r), orders, p)
    return X


def _invert_on_group(J, hfactors, orders, p):
    """theta with theta(J e_i) = e_i, found by search over M (desk scale)."""
    k = len(orders)
    hk = len(hfactors)
    ho = [p if p else d for d in hfactors]
    theta = []
    elems = [list(t) for t in iproduct(*[range(o) for o in orders])]
    for i in range(hk):
        target = [1 if j == i else 0 for j in range(hk)]
        found = None
        for x in elems:
            img = [sum(x[a] * J[a][b] for a in range(k)) % ho[b] for b in range(hk)]
            if img == target:
                found = x
                break
        if found is None:
            raise HypothesisError("M does not map onto the homology of the extension")
        theta.append(found)
    return theta


def classify_extensions(C, factors, n, Q_C=None, cap=MAP_CAP):
    """Orbits of Aut(M) acting on Ho(Q_C, C ∨ Σ^{n+2} M) over C."""
    if Q_C is None:
        Q_C = semifree_replacement(C, n + 3)
    psi = default_psi(Q_C, C)
    if not factors:
        return {"group": [], "group_order": 1, "aut_order": 1, "orbits": [[()]], "orbit_count": 1}
    D = square_zero_extension(C, factors, n + 2)
    G = homotopy_classes(Q_C, D, psi, n + 3, cap)
    orders = D.orders()
    k = len(orders)
    auts = automorphisms(factors, C.p)
    reps = {}
    for cls, fs in G.classes().items():
        reps[cls] = fs[0].mpart
    # classes with no enumerated representative cannot occur (the group is a quotient of the map set)
    remaining = set(reps)
    orbits = []
    for cls in sorted(reps):
        if cls not in remaining:
            continue
        orb = set()
        for a in auts:
            tw = []
            for gi in range(len(G.gens)):
                tw.extend(apply_aut(a, reps[cls][gi * k:(gi + 1) * k], orders))
            orb.add(G.project(tw))
        orbits.append(sorted(orb))
        remaining -= orb
    return {"group": G.factors, "group_order": G.order, "aut_order": len(auts),
            "orbits": orbits, "orbit_count": len(orbits), "ho_group": G}

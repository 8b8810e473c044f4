"""Semifree (kill-cycles) replacements, tensor products and derived tensors."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field

from . import poly as P
from .dga import GradedComplex, TruncatedDga
from .errors import HypothesisError
from .homology import GradedGroup, homology, homology_ring, induced_map, map_properties
from .linalg import Echelon, QuotientStructure, ScalarDomain, Subquotient, add_scaled, kernel_basis, solve
from .presentation import MONOMIAL_CAP, DgaPresentation, parse, realize

NAME_POOL = list("efghklmnqrstuvw")


def _progress(msg, quiet):
    if not quiet:
        print(msg, file=sys.stderr)


def _unit(n, i):
    v = [0] * n
    v[i] = 1
    return v


# --------------------------------------------------------------------------
# Tensor products and opposites


def _common_ground(A, B, ground=None):
    if ground is not None:
        return ground
    pa, pb = A.p, B.p
    if pa and pb and pa != pb:
        raise HypothesisError(f"cannot tensor over F_{pa} and F_{pb}")
    return ScalarDomain(pa or pb)


def _joint_top(A, B, N):
    if A.complete and B.complete:
        top, complete = A.top + B.top, True
    else:
        tops = [X.top for X in (A, B) if not X.complete]
        top, complete = min(tops), False
    if N is not None and N < top:
        top, complete = N, False
    return top, complete


def tensor_dga(A, B, N=None, ground=None) -> TruncatedDga:
    """A ⊗ B with (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa'⊗bb' and d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db."""
    if A.lo != 0 or B.lo != 0:
        raise HypothesisError("tensor_dga expects non-negatively graded factors")
    g = _common_ground(A, B, ground)
    p = g.p
    top, complete = _joint_top(A, B, N)
    basis, offset, where = {}, {}, {}
    for n in range(top + 1):
        labels, offs, locs = [], {}, []
        for a in range(n + 1):
            b = n - a
            if not (A.known(a) and B.known(b)):
                continue
            offs[a] = len(labels)
            for i in range(A.dim(a)):
                for j in range(B.dim(b)):
                    labels.append((A.basis[a][i], B.basis[b][j]))
                    locs.append((a, i, b, j))
        basis[n] = labels
        where[n] = locs
        offset[n] = offs

    def pos(a, i, b, j):
        return offset[a + b][a] + i * B.dim(b) + j

    def outer(a, x, b, y):
        v = [0] * len(basis[a + b])
        for i, cx in enumerate(x):
            if cx:
                for j, cy in enumerate(y):
                    if cy:
                        v[pos(a, i, b, j)] += cx * cy
        return [c % p for c in v] if p else v

    relations, diff = {}, {}
    for n in range(top + 1):
        rels, col = [], []
        for a in offset[n]:
            b = n - a
            da, db = A.dim(a), B.dim(b)
            for r in (A.relations.get(a, []) if A.stored(a) else []):
                for j in range(db):
                    rels.append(outer(a, r, b, _unit(db, j)))
            for s in (B.relations.get(b, []) if B.stored(b) else []):
                for i in range(da):
                    rels.append(outer(a, _unit(da, i), b, s))
        if p and not (A.p and B.p):
            rels = [v for v in rels if any(c % p for c in v)]
        relations[n] = rels
        for a in offset[n]:
            b = n - a
            for i in range(A.dim(a)):
                ea = _unit(A.dim(a), i)
                dxa = A.d(a, ea) if a > 0 else []
                for j in range(B.dim(b)):
                    eb = _unit(B.dim(b), j)
                    v = [0] * (len(basis[n - 1]) if n > 0 else 0)
                    if a > 0 and any(dxa):
                        add_scaled(v, outer(a - 1, dxa, b, eb), 1, p)
                    if b > 0:
                        dyb = B.d(b, eb)
                        if any(dyb):
                            add_scaled(v, outer(a, ea, b - 1, dyb), -1 if a % 2 else 1, p)
                    col.append(v)
        diff[n] = col

    def mul_basis(n1, k1, n2, k2):
        a1, i1, b1, j1 = where[n1][k1]
        a2, i2, b2, j2 = where[n2][k2]
        x = A.basis_product(a1, i1, a2, i2)
        y = B.basis_product(b1, j1, b2, j2)
        v = outer(a1 + a2, x, b1 + b2, y)
        if (b1 * a2) % 2:
            v = [(-c) % p if p else -c for c in v]
        return v

    unit = outer(0, A.unit, 0, B.unit)
    return TruncatedDga(g, basis, relations, diff, mul_basis, unit, top=top, complete=complete,
                        name=f"{A.name}⊗{B.name}")


def opposite(A) -> TruncatedDga:
    """A^op with a ·op b = (-1)^{|a||b|} b·a."""
    p = A.p

    def mul_basis(a, i, b, j):
        v = A.basis_product(b, j, a, i)
        if (a * b) % 2:
            v = [(-c) % p if p else -c for c in v]
        return v

    return TruncatedDga(A.ground, A.basis, A.relations, A.diff, mul_basis, A.unit, lo=A.lo, top=A.top,
                        zero_below=A.zero_below, complete=A.complete, name=f"{A.name}^op")


def change_ground(A, p) -> TruncatedDga:
    """A ⊗ F_p presented over F_p (reduce structure constants mod p)."""
    def red(v):
        return [c % p for c in v]

    rels = {n: [red(r) for r in rs if any(c % p for c in r)] for n, rs in A.relations.items()}
    diff = {n: [red(c) for c in cols] for n, cols in A.diff.items()}
    return TruncatedDga(ScalarDomain(p), A.basis, rels, diff,
                        lambda a, i, b, j: red(A.basis_product(a, i, b, j)), red(A.unit),
                        lo=A.lo, top=A.top, zero_below=A.zero_below, complete=A.complete,
                        name=f"{A.name}/{p}")


def reduce_mod_p(A, p):
    return change_ground(A, p)


def prime_field_dga(p, N=0):
    """F_p presented over Z by the scalar relation p."""
    return realize(parse(f'dga "F{p}" over Z {{ rel {p}; }}'), N)


# --------------------------------------------------------------------------
# Semifree dgas


@dataclass
class SemifreeDga:
    name: str
    ground: ScalarDomain
    generators: list = field(default_factory=list)  # [(name, degree)] in order
    differentials: dict = field(default_factory=dict)  # name -> poly in earlier generators
    stages: dict = field(default_factory=dict)  # name -> stage number
    images: dict = field(default_factory=dict)  # name -> vector in the target
    target: object = None
    valid: int = -1  # comparison is a homology isomorphism through this degree
    notes: list = field(default_factory=list)

    @property
    def degrees(self):
        return dict(self.generators)

    def presentation(self) -> DgaPresentation:
        return DgaPresentation(self.name, self.ground, list(self.generators), dict(self.differentials),
                               [], dict(self.stages))

    def to_text(self):
        return self.presentation().to_text()

    def realize(self, N, cap=MONOMIAL_CAP, check=False):
        return realize(self.presentation(), N, cap, check=check)

    def generators_in(self, n):
        return [g for g, k in self.generators if k == n]

    def check_d_squared(self):
        degs = self.degrees
        bad = []
        for g, _ in self.generators:
            dd = P.differential(self.differentials.get(g, {}), degs, self.differentials, self.ground.p)
            if dd:
                bad.append((g, P.fmt(dd)))
        return bad

    def check_order(self):
        """Each differential only involves earlier generators."""
        seen, bad = set(), []
        for g, _ in self.generators:
            for w in self.differentials.get(g, {}):
                if any(x not in seen for x in w):
                    bad.append(g)
                    break
            seen.add(g)
        return bad

    def comparison(self, T):
        """Chain map T -> target on the realization T, as a function (n, vec) -> vec."""
        return word_map(T, self.target, self.images)

    def check_comparison(self):
        """Generators where d∘φ and φ∘d disagree in the target."""
        A = self.target
        top = max([k for _, k in self.generators] + [0])
        T = self.realize(min(top, A.top))
        phi = self.comparison(T)
        bad = []
        for g, k in self.generators:
            if k > T.top or not A.known(k - 1):
                continue
            x = _unit(T.dim(k), T.index(k, (g,)))
            if not A.equal(k - 1, A.d(k, phi(k, x)), phi(k - 1, T.d(k, x))):
                bad.append(g)
        return bad


def word_map(T, A, images):
    """Multiplicative extension of generator images over monomial bases of T."""
    cache = {(): list(A.unit)}
    degs = {}
    for n in T.degrees():
        for w in T.basis[n]:
            if len(w) == 1:
                degs[w[0]] = n

    def img(w):
        v = cache.get(w)
        if v is None:
            head = w[0]
            rest = w[1:]
            a = degs[head]
            b = sum(degs[x] for x in rest)
            v = A.mul(a, images[head], b, img(rest))
            cache[w] = v
        return v

    def phi(n, vec):
        out = A.zero(n)
        for c, w in zip(vec, T.basis[n]):
            if c:
                add_scaled(out, img(w), c, A.p)
        return out

    return phi


def _vec_to_poly(T, n, v):
    return P.clean({w: c for w, c in zip(T.basis[n], v) if c}, T.p)


def _solve_boundary(A, n, target):
    """c in A_{n+1} with dc = target modulo the relations of A_n, or None."""
    if not any(target):
        return A.zero(n + 1)
    cols = list(A.diff[n + 1]) if A.stored(n + 1) else []
    k = len(cols)
    cols += list(A.relations.get(n, []))
    if not cols:
        return None
    rows = [[c[r] for c in cols] for r in range(A.dim(n))]
    x = solve(rows, target, len(cols), A.p)
    if x is None:
        return None
    return x[:k] if k else []


def _new_name(used):
    for c in NAME_POOL:
        if c not in used:
            return c
    i = 1
    while f"x{i}" in used:
        i += 1
    return f"x{i}"


def semifree_replacement(A, N, name=None, cap=MONOMIAL_CAP, quiet=True, names=None) -> SemifreeDga:
    """Kill-cycles replacement Q -> A, a homology isomorphism through N-1, onto in degree N.

    ``A`` is a TruncatedDga valid through N+1 or a presentation (realized to N+1).
    """
    if isinstance(A, DgaPresentation):
        A = realize(A, N + 1, cap)
    if not A.known(N):
        raise HypothesisError(f"target must be known through degree {N}")
    HA = homology(A, N)
    if HA.valid.stop <= N:
        raise HypothesisError(f"target homology only certified through {HA.valid.stop - 1}")
    Q = SemifreeDga(name or f"Q({A.name})", A.ground, target=A, valid=N - 1)
    Q.notes.append("kills a minimal generating set of each homology kernel, not all cycles")
    used = set()
    pool = list(names or [])

    def fresh():
        if pool:
            nm = pool.pop(0)
        else:
            nm = _new_name(used)
        used.add(nm)
        return nm

    # stage 1: algebra generators of H_*(A), degree by degree
    for d in range(1, N + 1):
        k = HA.dim(d)
        if not k:
            continue
        T = Q.realize(d)
        phi = Q.comparison(T)
        imgs = []
        for i in range(T.dim(d)):
            c = HA.project(d, phi(d, _unit(T.dim(d), i)))
            imgs.append(c)
        diag = [[f if j == i else 0 for j in range(k)] for i, f in enumerate(HA.factors(d)) if f]
        quot = QuotientStructure(k, imgs + diag, A.p)
        for coords in quot.basis_lifts():
            rep = HA.groups[d].lift(coords)
            g = fresh()
            Q.generators.append((g, d))
            Q.stages[g] = 1
            Q.images[g] = rep
        _progress(f"stage 1: degree {d} done", quiet)
    stage = 1
    while True:
        T = Q.realize(N, cap)
        HT = homology(T, N - 1)
        phi = Q.comparison(T)
        found = None
        for n in HT.valid:
            if not HT.dim(n):
                continue
            F = induced_map(HT, HA, n, phi)
            kern = _kernel_generators(F, HT.factors(n), HA.factors(n), A.p)
            if kern:
                found = (n, kern)
                break
        if found is None:
            break
        stage += 1
        n, kern = found
        for coords in kern:
            z = HT.groups[n].lift(coords)
            c = _solve_boundary(A, n, phi(n, z))
            if c is None:
                raise HypothesisError(f"degree {n}: a kernel class is not a boundary in the target")
            g = fresh()
            Q.generators.append((g, n + 1))
            Q.differentials[g] = _vec_to_poly(T, n, z)
            Q.stages[g] = stage
            Q.images[g] = c
        _progress(f"stage {stage}: killed {len(kern)} class(es) in degree {n}", quiet)
    return Q


def _kernel_generators(F, sfactors, tfactors, p):
    """Minimal generating set (source coordinates) of the kernel of a homology map."""
    k, l = len(sfactors), len(tfactors)
    srel = [[d if j == i else 0 for j in range(k)] for i, d in enumerate(sfactors) if d and not p]
    if l == 0:
        tops = [_unit(k, i) for i in range(k)]
    else:
        trel = [[d if j == i else 0 for j in range(l)] for i, d in enumerate(tfactors) if d and not p]
        cols = list(F) + trel
        rows = [[c[r] for c in cols] for r in range(l)]
        tops = [v[:k] for v in kernel_basis(rows, len(cols), p)]
    sq = Subquotient(tops + srel, srel, k, p)
    return [v for v in sq.representatives() if any(v)]


def homology_comparison(Q: SemifreeDga, N=None):
    """Per degree (injective, surjective) of the comparison map on homology."""
    A = Q.target
    N = Q.valid + 1 if N is None else N
    T = Q.realize(N)
    HT, HA = homology(T, N - 1), homology(A, N - 1)
    phi = Q.comparison(T)
    out = {}
    for n in HT.valid:
        if n in HA.groups:
            out[n] = map_properties(induced_map(HT, HA, n, phi), HT.factors(n), HA.factors(n), A.p)
    return out


# --------------------------------------------------------------------------
# Derived tensor products


@dataclass
class DerivedTensor:
    dga: TruncatedDga
    groups: GradedGroup
    ring: object
    path: str  # "direct" or "semifree"
    valid: int
    replacement: SemifreeDga = None


def derived_tensor(A, B, N, cap=MONOMIAL_CAP, force_resolve=False) -> DerivedTensor:
    """H_*(A ⊗^L B) as a ring through degree N."""
    if isinstance(A, DgaPresentation):
        A = realize(A.over_integers(), N + 2, cap)
    if isinstance(B, DgaPresentation):
        B = realize(B.over_integers(), N + 1, cap)
    Qs = None
    if A.is_degreewise_free and not force_resolve:
        left, path = A, "direct"
    else:
        Qs = semifree_replacement(A, N + 1, cap=cap)
        left, path = Qs.realize(N + 1, cap), "semifree"
    p = B.p or _killing_prime(B)
    T = tensor_dga(left, B, N + 1)
    if p and not T.p:
        T = change_ground(T, p)
    H = homology(T, N)
    R = homology_ring(T, groups=H)
    return DerivedTensor(T, H, R, path, H.valid.stop - 1, Qs)


def _killing_prime(B):
    """p when the unit of B has additive order p (B is an F_p-algebra), else 0."""
    q = B.quotient(0)
    if len(q.factors) == 1 and q.factors[0] > 1:
        d = q.factors[0]
        if all(d % k for k in range(2, int(d ** 0.5) + 1)):
            return d
    return 0


# --------------------------------------------------------------------------
# Modules


class DgModule(GradedComplex):
    """Left dg module over a TruncatedDga ``base``.

    ``act(a, i, m, j)`` is the product of base spanning element i (degree a)
    with module spanning element j (degree m), a vector in degree a+m.
    """

    def __init__(self, ground, basis, relations, diff, base, act, **kw):
        super().__init__(ground, basis, relations, diff, **kw)
        self.base = base
        self._act = act
        self._acts = {}

    def act_basis(self, a, i, m, j):
        key = (a, i, m, j)
        v = self._acts.get(key)
        if v is None:
            v = self._act(a, i, m, j)
            self._acts[key] = v
        return v

    def act_vec(self, a, x, m, y):
        out = self.zero(a + m)
        if not out:
            return out
        for i, cx in enumerate(x):
            if cx:
                for j, cy in enumerate(y):
                    if cy:
                        add_scaled(out, self.act_basis(a, i, m, j), cx * cy, self.p)
        return out

    def check_action(self):
        """Basis pairs violating d(e·m) = de·m + (-1)^|e| e·dm."""
        E = self.base
        bad = []
        for a in E.degrees():
            for m in self.degrees():
                n = a + m
                if not (self.stored(n) and self.known(n - 1) and self.known(m - 1) and E.known(a - 1)):
                    continue
                for i in range(E.dim(a)):
                    x = _unit(E.dim(a), i)
                    for j in range(self.dim(m)):
                        y = _unit(self.dim(m), j)
                        lhs = self.d(n, self.act_vec(a, x, m, y))
                        rhs = self.zero(n - 1)
                        if a > 0 and E.dim(a - 1):
                            add_scaled(rhs, self.act_vec(a - 1, E.d(a, x), m, y), 1, self.p)
                        if self.dim(m - 1):
                            add_scaled(rhs, self.act_vec(a, x, m - 1, self.d(m, y)), -1 if a % 2 else 1, self.p)
                        if not self.equal(n - 1, lhs, rhs):
                            bad.append((a, i, m, j))
        return bad


def augmentation_module(E, degree=0, factors=None):
    """A cyclic group (``factors``: [m], m=0 for free) in one degree; E acts by augmentation."""
    if E.dim(0) != 1:
        raise HypothesisError("augmentation needs degree 0 of the base spanned by the unit")
    p = E.p
    r = degree
    rels = []
    if factors and factors[0] and not p:
        rels = [[factors[0]]]
    u = E.unit[0]
    if p:
        u_inv = pow(u, -1, p)
    else:
        if u not in (1, -1):
            raise HypothesisError("unit of the base is not a generator of degree 0")
        u_inv = u

    def act(a, i, m, j):
        return [u_inv] if a == 0 else []

    return DgModule(E.ground, {r: [("m",)]}, {r: rels}, {r: [[]]}, E, act, lo=r, top=r,
                    complete=True, name=f"M{r}")


def free_module(E):
    """E as a left module over itself."""
    return DgModule(E.ground, E.basis, E.relations, E.diff, E, E.basis_product, lo=E.lo, top=E.top,
                    zero_below=E.zero_below, complete=E.complete, name=E.name)


@dataclass
class SemifreeModule:
    base: object
    basis: list = field(default_factory=list)  # [(name, degree)]
    differentials: dict = field(default_factory=dict)  # name -> {name': vector over base degree}
    images: dict = field(default_factory=dict)  # name -> vector in target
    target: object = None
    complete_through: int = -1  # every basis element of degree <= this is present
    valid: int = -1  # comparison is a homology isomorphism through this degree

    @property
    def degrees(self):
        return dict(self.basis)

    def complex(self, top) -> DgModule:
        E = self.base
        p = E.p
        degs = self.degrees
        basis, where, start = {}, {}, {}
        for n in range(top + 1):
            labels, locs, st = [], [], {}
            for b, k in self.basis:
                if k <= n and E.known(n - k):
                    st[b] = len(labels)
                    for i in range(E.dim(n - k)):
                        labels.append((b, E.basis[n - k][i]))
                        locs.append((b, i))
            basis[n], where[n], start[n] = labels, locs, st

        def embed(n, b, x):
            v = [0] * len(basis[n])
            o = start[n][b]
            for i, c in enumerate(x):
                if c:
                    v[o + i] += c
            return [c % p for c in v] if p else v

        relations, diff = {}, {}
        for n in range(top + 1):
            rels = []
            for b, k in self.basis:
                if b in start[n] and E.stored(n - k):
                    rels.extend(embed(n, b, r) for r in E.relations.get(n - k, []))
            relations[n] = rels
            cols = []
            for b, i in where[n]:
                k = degs[b]
                a = n - k
                e = _unit(E.dim(a), i)
                v = [0] * (len(basis[n - 1]) if n > 0 else 0)
                if a > 0 and E.dim(a - 1):
                    add_scaled(v, embed(n - 1, b, E.d(a, e)), 1, p)
                sign = -1 if a % 2 else 1
                for b2, x in self.differentials.get(b, {}).items():
                    xa = k - 1 - degs[b2]
                    add_scaled(v, embed(n - 1, b2, E.mul(a, e, xa, x)), sign, p)
                cols.append(v)
            diff[n] = cols

        def act(a, i, m, j):
            b, i2 = where[m][j]
            x = E.basis_product(a, i, m - degs[b], i2)
            return embed(a + m, b, x)

        M = DgModule(E.ground, basis, relations, diff, E, act, top=top, name="P")
        M.where = where
        M.start = start
        return M

    def split(self, Pc, n, v):
        """Vector of P_n as {basis name: base vector}."""
        out = {}
        degs = self.degrees
        for b, o in Pc.start[n].items():
            k = self.base.dim(n - degs[b])
            part = v[o:o + k]
            if any(part):
                out[b] = list(part)
        return out

    def comparison(self, Pc):
        M = self.target
        degs = self.degrees

        def psi(n, v):
            out = M.zero(n)
            for b, x in self.split(Pc, n, v).items():
                k = degs[b]
                add_scaled(out, M.act_vec(n - k, x, k, self.images[b]), 1, M.p)
            return out

        return psi

    def describe(self):
        lines = []
        for b, k in self.basis:
            terms = []
            for b2, x in self.differentials.get(b, {}).items():
                k2 = self.degrees[b2]
                terms.append(f"({self.base.format(k - 1 - k2, x)})*{b2}")
            lines.append(f"{b}:{k}" + (f"  d = {' + '.join(terms)}" if terms else ""))
        return lines


def semifree_module_resolution(M, N, quiet=True) -> SemifreeModule:
    """Kill-cycles resolution P -> M: homology isomorphism through N-1, onto in degree N."""
    E = M.base
    R = SemifreeModule(E, target=M)
    counter = [0]

    def fresh():
        nm = f"b{counter[0]}"
        counter[0] += 1
        return nm

    HM = homology(M, N)
    for n in range(0, N + 1):
        Pc = R.complex(n + 1)
        HP = homology(Pc, n)
        psi = R.comparison(Pc)
        k = HM.dim(n)
        if k:
            imgs = induced_map(HP, HM, n, psi) if n in HP.groups else []
            diag = [[f if j == i else 0 for j in range(k)] for i, f in enumerate(HM.factors(n)) if f]
            quot = QuotientStructure(k, imgs + diag, E.p)
            for coords in quot.basis_lifts():
                b = fresh()
                R.basis.append((b, n))
                R.images[b] = HM.groups[n].lift(coords)
        if n == N:
            break
        Pc = R.complex(n + 1)
        HP = homology(Pc, n)
        psi = R.comparison(Pc)
        if HP.dim(n):
            F = induced_map(HP, HM, n, psi)
            for coords in _kernel_generators(F, HP.factors(n), HM.factors(n), E.p):
                z = HP.groups[n].lift(coords)
                c = _solve_boundary(M, n, psi(n, z))
                if c is None:
                    raise HypothesisError(f"degree {n}: kernel class is not a boundary in the module")
                b = fresh()
                R.basis.append((b, n + 1))
                R.differentials[b] = R.split(Pc, n, z)
                R.images[b] = c
        _progress(f"module resolution: degree {n} done ({len(R.basis)} basis elements)", quiet)
    R.complete_through = N
    R.valid = N - 1
    return R


def hom_complex(R: SemifreeModule, Q: DgModule, name="Hom"):
    """Hom_E(P, Q) in homological degrees h: f(b) in Q_{|b|+h}, δf = d∘f - (-1)^h f∘d.

    Q must be finite (``complete``).  Degrees h >= Q.top - B are exact, where
    B is the degree through which the basis of P is complete.
    """
    if not Q.complete:
        raise HypothesisError("hom_complex needs a target known in all degrees")
    B = R.complete_through
    lo = Q.top - B
    hi = Q.top - min([k for _, k in R.basis] + [0])
    if Q.lo < 0:
        raise HypothesisError("target must be non-negatively graded")
    return _hom(R, Q, lo, hi, lambda k: k <= B, name, complete=True)


def _hom(R, Q, lo, hi, keep, name, complete):
    E = R.base
    p = E.p
    degs = R.degrees
    bs = [(b, k) for b, k in R.basis if keep(k)]
    basis, start, where = {}, {}, {}
    for h in range(lo, hi + 1):
        labels, st, locs = [], {}, []
        for b, k in bs:
            if Q.known(k + h) and Q.dim(k + h):
                st[b] = len(labels)
                for j in range(Q.dim(k + h)):
                    labels.append((b, Q.basis[k + h][j]))
                    locs.append((b, j))
        basis[h], start[h], where[h] = labels, st, locs

    def embed(h, b, y):
        v = [0] * len(basis[h])
        o = start[h].get(b)
        if o is None:
            return v
        for j, c in enumerate(y):
            if c:
                v[o + j] += c
        return [c % p for c in v] if p else v

    # terms of d(b): b -> [(b2, base degree, vector)]
    dterms = {b: [(b2, k - 1 - degs[b2], x) for b2, x in R.differentials.get(b, {}).items()] for b, k in bs}
    users = {}
    for b, terms in dterms.items():
        for b2, a, x in terms:
            users.setdefault(b2, []).append((b, a, x))
    relations, diff = {}, {}
    for h in range(lo, hi + 1):
        rels = []
        for b, k in bs:
            if b in start[h] and Q.stored(k + h):
                rels.extend(embed(h, b, r) for r in Q.relations.get(k + h, []))
        relations[h] = rels
        cols = []
        for b2, j in where[h]:
            if h == lo:
                cols.append([])
                continue
            k2 = degs[b2]
            y = _unit(Q.dim(k2 + h), j)
            v = [0] * len(basis[h - 1])
            if Q.known(k2 + h - 1) and Q.dim(k2 + h - 1):
                add_scaled(v, embed(h - 1, b2, Q.d(k2 + h, y)), 1, p)
            for b, a, x in users.get(b2, []):
                if b not in start[h - 1]:
                    continue
                sign = -1 if (h + h * a) % 2 == 0 else 1  # -(-1)^h (-1)^{h a}
                add_scaled(v, embed(h - 1, b, Q.act_vec(a, x, k2 + h, y)), sign, p)
            cols.append(v)
        diff[h] = cols
    out = GradedComplex(E.ground, basis, relations, diff, lo=lo, top=hi, zero_below=False,
                        complete=complete, name=name)
    out.start, out.where, out.embed = start, where, embed
    return out


def endomorphism_dga(R: SemifreeModule, B=None) -> TruncatedDga:
    """End_E(P) in homological degrees -B..1 with composition product.

    Restricting to the basis of degree <= B changes nothing in homology in
    degrees -B+1..0, which is the range reported by ``homology``.
    """
    B = R.complete_through if B is None else B
    E = R.base
    p = E.p
    Pc = R.complex(B + 1)
    degs = R.degrees
    H = _hom(R, Pc, -B, 1, lambda k: k <= B, "End", complete=False)
    start, where, embed = H.start, H.where, H.embed

    def mul_basis(hf, i, hg, j):
        b1, c1 = where[hf][i]  # f(b1) = spanning element c1 of P_{|b1|+hf}
        b2, c2 = where[hg][j]  # g(b2) = spanning element c2 of P_{|b2|+hg}
        n = hf + hg
        out = [0] * len(H.basis[n]) if n >= -B else []
        if not out:
            return out
        bb, ei = Pc.where[degs[b2] + hg][c2]  # g(b2) = e_ei · bb
        if bb != b1:
            return out
        a = degs[b2] + hg - degs[b1]
        val = Pc.act_basis(a, ei, degs[b1] + hf, c1)
        sign = -1 if (hf * a) % 2 else 1
        add_scaled(out, embed(n, b2, val), sign, p)
        return out

    unit = [0] * len(H.basis[0])
    for b, k in R.basis:
        if k <= B:
            o = start[0][b] + Pc.start[k][b]
            for i, c in enumerate(E.unit):
                unit[o + i] += c
    A = TruncatedDga(E.ground, H.basis, H.relations, H.diff, mul_basis, unit, lo=-B, top=1,
                     zero_below=False, complete=False, name="End(P)")
    return A

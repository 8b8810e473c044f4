"""Hochschild cohomology, derivation groups and the comparison with divided powers."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

from .dga import TruncatedDga
from .errors import HypothesisError
from .homology import homology, homology_ring, induced_map, map_properties
from .linalg import QuotientStructure, add_scaled, describe_factors
from .postnikov import _check_action
from .semifree import (DgModule, SemifreeDga, SemifreeModule, _unit, augmentation_module, change_ground,
                       endomorphism_dga, hom_complex, opposite, semifree_module_resolution,
                       semifree_replacement, tensor_dga)

THH_REFERENCE = ("THH^*(F_p, F_p) = Γ[α₂], a divided power algebra on a class of degree 2, "
                 "as calculated by Bökstedt; embedded here as reference data, not computed")
SINGLE_EXTENSION = ("criterion valid for dgas built from F_p by a single square-zero extension, "
                    "so that the k-invariant is the only invariant")


# --------------------------------------------------------------------------
# Resolutions over the enveloping algebra


def enveloping(T, N=None):
    """E = T ⊗ T^op."""
    return tensor_dga(T, opposite(T), N)


class _Env:
    """Helper turning (prefix word, suffix word) pairs into E vectors."""

    def __init__(self, E, degs):
        self.E = E
        self.degs = degs

    def deg(self, w):
        return sum(self.degs[g] for g in w)

    def vec(self, pre, suf):
        n = self.deg(pre) + self.deg(suf)
        v = self.E.zero(n)
        v[self.E.index(n, (tuple(pre), tuple(suf)))] = 1
        return n, v


def bimodule_resolution(Q: SemifreeDga, E, B) -> SemifreeModule:
    """Semifree E-module P -> Q with basis b0 (degree 0) and s_v (degree |v|+1).

    d(s_v) = v·b0 - b0·v - S(dv), with S(x1..xk) = Σ ± x1..x_{i-1} s_{x_i} x_{i+1}..xk.
    A bimodule is a left E-module by (a⊗b)·m = (-1)^{|b||m|} a m b.  The basis
    is complete through degree B, so generators of Q up to degree B-1 are used.
    """
    degs = Q.degrees
    env = _Env(E, degs)
    p = E.p
    R = SemifreeModule(E)
    R.basis.append(("b0", 0))
    for g, k in Q.generators:
        if k + 1 <= B:
            R.basis.append((f"s_{g}", k + 1))
    for g, k in Q.generators:
        if k + 1 > B:
            continue
        terms = {}
        _, a = env.vec((g,), ())
        _, b = env.vec((), (g,))
        terms["b0"] = [x - y for x, y in zip(a, b)]
        for w, c in Q.differentials.get(g, {}).items():
            for i, x in enumerate(w):
                pre, suf = w[:i], w[i + 1:]
                sign = (-1) ** (env.deg(pre) + env.deg(suf) * (degs[x] + 1))
                n, v = env.vec(pre, suf)
                cur = terms.setdefault(f"s_{x}", E.zero(n))
                add_scaled(cur, v, -c * sign, p)
        R.differentials[f"s_{g}"] = {b2: ([x % p for x in v] if p else v) for b2, v in terms.items() if any(v)}
    R.complete_through = B
    R.valid = B - 1
    return R


def omega_module(Q: SemifreeDga, E, B) -> SemifreeModule:
    """Ω: semifree E-module on ω_v (degree |v|), d(ω_v) = D(dv) for the universal derivation D.

    It is the kernel of multiplication E -> Q up to quasi-isomorphism (ω_v ↦ v⊗1 - 1⊗v).
    """
    degs = Q.degrees
    env = _Env(E, degs)
    p = E.p
    R = SemifreeModule(E)
    for g, k in Q.generators:
        if k <= B:
            R.basis.append((f"w_{g}", k))
    for g, k in Q.generators:
        if k > B:
            continue
        terms = {}
        for w, c in Q.differentials.get(g, {}).items():
            for i, x in enumerate(w):
                pre, suf = w[:i], w[i + 1:]
                sign = (-1) ** (env.deg(suf) * degs[x])
                n, v = env.vec(pre, suf)
                cur = terms.setdefault(f"w_{x}", E.zero(n))
                add_scaled(cur, v, c * sign, p)
        R.differentials[f"w_{g}"] = {b2: v for b2, v in terms.items() if any(v)}
    R.complete_through = B
    R.valid = B - 1
    return R


def bimodule_as_module(T, E, degs):
    """T as a left E-module: (a⊗b)·q = (-1)^{|b||q|} a q b."""
    def act(a, i, m, j):
        wa, wb = E.basis[a][i]
        nb = sum(degs[g] for g in wb)
        na = a - nb
        x = T.basis_product(na, T.index(na, wa), m, j)
        y = T.mul(na + m, x, nb, _unit(T.dim(nb), T.index(nb, wb)))
        if (nb * m) % 2:
            y = [(-c) % T.p if T.p else -c for c in y]
        return y

    M = DgModule(T.ground, T.basis, T.relations, T.diff, E, act, lo=T.lo, top=T.top,
                 complete=T.complete, name=T.name)
    return M


def check_resolution(R: SemifreeModule, Qmod, top):
    """Degrees n <= top where P -> Q fails to be a homology isomorphism."""
    T = Qmod
    R.target = T
    R.images = {}
    for b, k in R.basis:
        R.images[b] = _unit(T.dim(0), 0) if b == "b0" else (T.zero(k) if T.known(k) else [])
    Pc = R.complex(top + 1)
    HP = homology(Pc, top)
    HQ = homology(T, top)
    psi = R.comparison(Pc)
    bad = []
    for n in range(0, top + 1):
        F = induced_map(HP, HQ, n, psi)
        inj, surj = map_properties(F, HP.factors(n), HQ.factors(n), T.p)
        if not (inj and surj):
            bad.append(n)
    return bad


# --------------------------------------------------------------------------
# Tables


@dataclass
class CohomologyTable:
    name: str
    prime: int
    groups: dict  # cohomological degree -> factors
    certified: tuple  # (lo, hi) inclusive
    provenance: dict = field(default_factory=dict)
    ring: object = None
    reps: dict = field(default_factory=dict)

    def factors(self, n):
        if not (self.certified[0] <= n <= self.certified[1]):
            raise KeyError(f"degree {n} outside the certified range {self.certified}")
        return self.groups.get(n, [])

    def order(self, n):
        out = 1
        for d in self.factors(n):
            out *= self.prime if self.prime else d
        return out

    def describe(self, n):
        return describe_factors(self.factors(n), self.prime)

    def lines(self, symbol="HH"):
        return [f"{symbol}^{n} = {self.describe(n)}" for n in range(self.certified[0], self.certified[1] + 1)]

    def as_dict(self):
        return {"name": self.name, "prime": self.prime,
                "certified": list(self.certified),
                "groups": {str(n): {"factors": self.factors(n), "text": self.describe(n),
                                    "valid_through": self.certified[1]}
                           for n in range(self.certified[0], self.certified[1] + 1)},
                "provenance": self.provenance}


def _table_from_hom(H, name, r, lo_n, hi_n, provenance, p):
    HG = homology(H)
    groups = {}
    for n in range(lo_n, hi_n + 1):
        if -n > H.top:
            groups[n] = []  # Hom vanishes above the degree of M
            continue
        if -n not in HG.groups:
            raise HypothesisError(f"degree {n} outside the certified range")
        groups[n] = list(HG.factors(-n))
    tab = CohomologyTable(name, p, groups, (lo_n, hi_n), provenance)
    tab.homology = HG
    tab.hom = H
    return tab


@dataclass
class HochschildData:
    model: SemifreeDga
    enveloping: TruncatedDga
    resolution: SemifreeModule
    omega: SemifreeModule
    bound: int


def prepare(C, nmax, r=0, model=None, quiet=True) -> HochschildData:
    """Shared data for HH^n (n <= nmax+1) and Der^n (n <= nmax) with M in degree r."""
    NQ = nmax + r + 1
    Q = model or semifree_replacement(C, NQ, quiet=quiet)
    T = Q.realize(NQ)
    E = enveloping(T, NQ)
    R = bimodule_resolution(Q, E, NQ + 1)
    O = omega_module(Q, E, NQ)
    return HochschildData(Q, E, R, O, NQ)


def _coefficients(data, factors, r):
    mods = []
    for d in factors:
        mods.append(augmentation_module(data.enveloping, r, [d]))
    return mods


def _sum_tables(tables, name, p, certified, provenance):
    groups = {}
    for n in range(certified[0], certified[1] + 1):
        fs = []
        for t in tables:
            fs.extend(t.factors(n))
        groups[n] = fs
    return CohomologyTable(name, p, groups, certified, provenance)


def hochschild_cohomology(C, factors, r=0, nmax=6, nmin=None, model=None, data=None, quiet=True):
    """HH^n(C, M) for M = ⊕ cyclic factors in degree r, acted on through H_0(C).

    Computed as cohomology of Hom_E(P, M) for the bimodule resolution P of a
    semifree model Q over E = Q ⊗ Q^op.  Certified for -r <= n <= nmax+1
    (clipped to nmin..nmax when given).
    """
    _check_action(C, factors)
    data = data or prepare(C, nmax, r, model, quiet)
    p = data.enveloping.p
    lo_n = -r if nmin is None else nmin
    hi_n = data.bound - r
    hi_n = min(hi_n, nmax + 1)
    prov = {"resolution": "bar-type resolution b0, s_v over Q⊗Q^op",
            "model_generators": [f"{g}:{k}" for g, k in data.model.generators],
            "generators_final_through": data.bound, "certified": [lo_n, hi_n]}
    tables = []
    for M in _coefficients(data, factors, r):
        H = hom_complex(data.resolution, M, "HomE(P,M)")
        tables.append(_table_from_hom(H, "HH", r, lo_n, hi_n, prov, p))
    out = _sum_tables(tables, f"HH({C.name})", p, (lo_n, hi_n), prov)
    out.parts = tables
    return out


def derivation_groups(C, factors, r=0, nmax=6, nmin=None, model=None, data=None, hh=None, quiet=True):
    """Der^n(C, M) = H_{-n} Hom_E(Ω, M), checked against HH through the long exact sequence.

    Away from n in {-r, -r-1} the shift Der^n = HH^{n+1} is asserted.  At the
    two exceptional degrees the maps HH^{-r} -> M and M -> Der^{-r} are
    computed from chain-level formulas and exactness is checked by orders.
    """
    _check_action(C, factors)
    data = data or prepare(C, nmax, r, model, quiet)
    p = data.enveloping.p
    lo_n = -r - 1 if nmin is None else nmin
    hi_n = min(data.bound - r - 1, nmax)
    prov = {"resolution": "Ω as semifree E-module on ω_v",
            "generators_final_through": data.bound, "certified": [lo_n, hi_n]}
    hh = hh or hochschild_cohomology(C, factors, r, nmax, min(lo_n, -r), data=data)
    tables, les = [], []
    for idx, M in enumerate(_coefficients(data, factors, r)):
        H = hom_complex(data.omega, M, "HomE(Ω,M)")
        HG = homology(H)
        groups = {}
        for n in range(lo_n, hi_n + 1):
            groups[n] = list(HG.factors(-n)) if -n in HG.groups else []
        t = CohomologyTable("Der", p, groups, (lo_n, hi_n), prov)
        t.homology = HG
        tables.append(t)
        hpart = hh.parts[idx]
        les.append(_check_les(t, hpart, data, M, r, factors[idx], p))
    out = _sum_tables(tables, f"Der({C.name})", p, (lo_n, hi_n), prov)
    out.les = les
    out.parts = tables
    return out


def _order(factors, p):
    out = 1
    for d in factors:
        out *= p if p else d
    return out


def _check_les(der, hh, data, M, r, factor, p):
    """Verify the long exact sequence of Ω -> E ⊗ ... -> P against both tables."""
    report = {"shift": {}, "exceptional": {}}
    for n in range(der.certified[0], der.certified[1] + 1):
        if n in (-r, -r - 1):
            continue
        if hh.certified[0] <= n + 1 <= hh.certified[1]:
            a, b = der.factors(n), hh.factors(n + 1)
            if sorted(a) != sorted(b):
                raise AssertionError(f"Der^{n} = {a} but HH^{n + 1} = {b}")
            report["shift"][n] = a
    # exceptional degrees: rho: HH^{-r} -> M (evaluate at b0), ∂: M -> Der^{-r}
    HG = hh.homology
    Hh = hh.hom
    h = r
    if h in HG.groups:
        o = Hh.start[h].get("b0")
        rho = []
        for rep in HG.representatives(h):
            rho.append([rep[o]] if o is not None else [0])
        morder = p if p else factor
        q = QuotientStructure(1, rho + ([[factor]] if factor and not p else []), p)
        coker = q.order
        im = (morder // coker) if morder and coker else None
        hh_r = _order(HG.factors(h), p)
        ker = (hh_r // im) if im else None
        # connecting map: f(b0) = m, zero elsewhere; δf restricted to the s-part
        v = Hh.embed(h, "b0", [1]) if o is not None else None
        dv = Hh.d(h, v) if v is not None and Hh.stored(h - 1) else []
        conn_nonzero = any(dv)
        rep = {"rho_images": rho, "coker_order": coker, "ker_order": ker, "connecting_nonzero": conn_nonzero}
        if -r in der.groups and -r + 1 <= hh.certified[1] and -r + 1 >= hh.certified[0]:
            lhs = _order(der.factors(-r), p)
            rhs = coker * hh.order(-r + 1)
            rep["Der^-r"] = (lhs, rhs)
            if lhs != rhs:
                raise AssertionError(f"exactness fails at Der^{-r}: {lhs} != {rhs}")
        if -r - 1 in der.groups and ker is not None:
            lhs = _order(der.factors(-r - 1), p)
            rep["Der^-r-1"] = (lhs, ker)
            if lhs != ker:
                raise AssertionError(f"exactness fails at Der^{-r - 1}: {lhs} != {ker}")
        report["exceptional"] = rep
    return report


# --------------------------------------------------------------------------
# Ring structure


def hochschild_ring(C, p, nmax, model=None, quiet=True):
    """HH^*(C, F_p) with cup product, for C with homology F_p in degree 0.

    Computed as the Yoneda ring Ext over Q ⊗ F_p of F_p: the homology ring of
    End(P) for a semifree resolution P of F_p.  Returns a CohomologyTable whose
    ``ring`` is indexed by homological degree -n and ``sigma`` is the chosen
    degree-2 generator (coordinates in HH^2).
    """
    HC = homology(C, min(C.top, nmax + 3) if not C.complete else None)
    for n in HC.valid:
        fs = HC.factors(n)
        want = [p] if n == 0 else []
        if (C.p and fs != ([0] if n == 0 else [])) or (not C.p and fs != want):
            raise HypothesisError("ring structure is available when H(C) is F_p in degree 0")
    N = nmax + 3
    Q = model or semifree_replacement(C, N, quiet=quiet)
    A = change_ground(Q.realize(N), p)
    M = augmentation_module(A)
    R = semifree_module_resolution(M, nmax + 1, quiet)
    End = endomorphism_dga(R)
    ring = homology_ring(End)
    groups = {}
    for n in range(0, nmax + 1):
        groups[n] = [0] * ring.dim(-n) if -n in ring.groups.groups else None
        if groups[n] is None:
            raise HypothesisError(f"HH^{n} outside the certified range")
        groups[n] = list(ring.factors(-n))
    tab = CohomologyTable(f"HH({C.name})", p, groups, (0, nmax),
                          {"route": "Ext over Q⊗F_p of F_p", "resolution": [k for _, k in R.basis]}, ring)
    tab.sigma = _normalized_sigma(ring, R, End, A, p) if ring.defined(-2) and ring.dim(-2) else None
    return tab


def _normalized_sigma(ring, R, End, A, p):
    """Degree-2 class scaled to send the degree-2 resolution generator to b with unit e-coefficient."""
    if ring.dim(-2) != 1:
        return [1] * ring.dim(-2)
    rep = ring.groups.representatives(-2)[0]
    gens2 = [b for b, k in R.basis if k == 2]
    b0 = [b for b, k in R.basis if k == 0][0]
    if not gens2:
        return [1]
    b1 = gens2[0]
    x = R.differentials[b1].get(b0)
    e = next((i for i, c in enumerate(x or []) if c % p), None) if x else None
    o = End.start[-2].get(b1) if hasattr(End, "start") else None
    if e is None or o is None:
        return [1]
    val = rep[o] % p
    if not val:
        return [1]
    scale = pow(val * x[e] % p, -1, p)
    return [scale % p]


def sigma_powers(tab, kmax):
    """Coordinates of σ^k in HH^{2k} for k <= kmax."""
    ring = tab.ring
    out = {0: list(ring.unit)}
    cur = list(ring.unit)
    for k in range(1, kmax + 1):
        cur = ring.multiply(-2 * (k - 1), cur, -2, tab.sigma)
        if cur is None:
            break
        out[k] = cur
    return out


# --------------------------------------------------------------------------
# Divided powers and the comparison map


@dataclass
class DividedPowerElement:
    p: int
    coeffs: dict  # k -> coefficient of γ_k (degree 2k)

    def __post_init__(self):
        self.coeffs = {k: c % self.p for k, c in self.coeffs.items() if c % self.p}

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, DividedPowerElement) and self.p == other.p and self.coeffs == other.coeffs

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*γ{k}" if c != 1 else f"γ{k}" for k, c in sorted(self.coeffs.items()))


def divided_power_multiply(a, b, p=None):
    p = p or a.p
    out = {}
    for i, x in a.coeffs.items():
        for j, y in b.coeffs.items():
            out[i + j] = (out.get(i + j, 0) + comb(i + j, i) * x * y) % p
    return DividedPowerElement(p, out)


def sigma_multiply(a, b, p):
    """Product in F_p[σ] of dicts k -> coefficient."""
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = (out.get(i + j, 0) + x * y) % p
    return {k: c for k, c in out.items() if c}


def hh_to_thh(c, p):
    """σ^k ↦ k! γ_k."""
    return DividedPowerElement(p, {k: factorial(k) * x for k, x in c.items()})


def topological_equivalence_verdict(k1, k2, p, certified=None):
    """Compare THH images of two k-invariants given as σ-polynomials over F_p."""
    d1 = {k for k, c in k1.items() if c % p}
    d2 = {k for k, c in k2.items() if c % p}
    if len(d1) > 1 or len(d2) > 1 or (d1 and d2 and d1 != d2):
        raise HypothesisError("incomparable coordinates: classes must lie in one HH degree")
    i1, i2 = hh_to_thh(k1, p), hh_to_thh(k2, p)
    same = i1 == i2
    verdict = ("topologically equivalent (matching THH k-invariant images)" if same
               else "inequivalent (THH images differ)")
    return {"verdict": verdict, "k1": _sigma_str(k1, p), "k2": _sigma_str(k2, p),
            "image1": str(i1), "image2": str(i2), "criterion": SINGLE_EXTENSION,
            "reference": THH_REFERENCE, "certified": certified, "equivalent": same}


def _sigma_str(c, p):
    terms = [(k, x % p) for k, x in sorted(c.items()) if x % p]
    if not terms:
        return "0"
    return " + ".join((f"{x}*" if x != 1 else "") + ("σ" if k == 1 else f"σ^{k}" if k else "1") for k, x in terms)


def kinvariant_sigma(k, p):
    """σ-coordinates of a k-invariant in Der^{n+2} = HH^{n+3} when that group is F_p σ^j."""
    deg = k.n + 3
    if deg % 2:
        if any(k.coords):
            raise HypothesisError("odd HH degree carries no σ-power")
        return {}
    if len(k.group.factors) != 1 or (k.group.prime or k.group.factors[0]) != p:
        raise HypothesisError("k-invariant group is not F_p")
    return {deg // 2: k.coords[0] % p} if k.coords[0] % p else {}

"""Builtin example dgas with expected results."""

from __future__ import annotations

from dataclasses import dataclass, field

from .homology import distinguish, homology, homology_ring, ring_fingerprint
from .presentation import parse, realize
from .semifree import derived_tensor, prime_field_dga, semifree_replacement

TAGS = ("literature", "trivial", "derived")  # published value, immediate, computed by an independent route


@dataclass
class Expectation:
    check: str
    args: dict
    expected: object
    tag: str
    note: str = ""

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown tag {self.tag}")


@dataclass
class CatalogEntry:
    id: str
    text: str
    note: str
    expectations: list = field(default_factory=list)

    @property
    def presentation(self):
        return parse(self.text)

    def realize(self, N, cap=None):
        return realize(self.presentation, N) if cap is None else realize(self.presentation, N, cap)


def _hom(d):
    return {str(k): v for k, v in d.items()}


def _fp(p):
    return CatalogEntry(
        f"F{p}", f'dga "F{p}" over Z {{ rel {p}; }}', f"F_{p} over the integers",
        [Expectation("homology", {"N": 4}, _hom({n: ([p] if n == 0 else []) for n in range(5)}), "trivial"),
         Expectation("hh", {"nmax": 6, "coeff": [p]},
                     _hom({n: ([p] if n % 2 == 0 else []) for n in range(7)}), "literature",
                     "polynomial on a degree-2 class"),
         Expectation("ho_order", {"n": 1, "M": [p]}, p, "literature"),
         Expectation("orbits", {"n": 1, "M": [p]}, 2, "literature")])


def _field(p):
    return CatalogEntry(
        f"F{p}-field", f'dga "F{p}-field" over F{p} {{ }}', f"F_{p} over itself",
        [Expectation("hh", {"nmax": 6, "coeff": [0]},
                     _hom({n: ([0] if n == 0 else []) for n in range(7)}), "literature",
                     "trivial except in degree 0")])


_ENTRIES = [
    CatalogEntry(
        "C-p2", 'dga "C-p2" over Z {\n  gen e:1;\n  diff e = 2;\n  rel e^4;\n}',
        "Z[e; de=2]/(e^4), the exotic dga with homology an exterior algebra on a degree-2 class",
        [Expectation("homology", {"N": 6}, _hom({0: [2], 1: [], 2: [2], 3: [], 4: [], 5: [], 6: []}), "literature"),
         Expectation("square_zero", {"degree": 2}, True, "literature", "homology ring exterior on g2"),
         Expectation("derived_mod2", {"N": 6}, {"dims": [1, 1, 1, 1, 0, 0, 0], "degree1_squares_zero": False},
                     "derived"),
         Expectation("kinvariant", {"n": 1}, "nonzero", "literature")]),
    CatalogEntry(
        "D-p2", 'dga "D-p2" over Z {\n  gen g:2;\n  rel 2, g^2;\n}',
        "exterior algebra over F_2 on a degree-2 class, formal",
        [Expectation("homology", {"N": 6}, _hom({0: [2], 1: [], 2: [2], 3: [], 4: [], 5: [], 6: []}), "trivial"),
         Expectation("square_zero", {"degree": 2}, True, "trivial"),
         Expectation("derived_mod2", {"N": 6}, {"dims": [1, 1, 1, 1, 0, 0, 0], "degree1_squares_zero": True},
                     "derived"),
         Expectation("kinvariant", {"n": 1}, "zero", "trivial"),
         Expectation("distinguish", {"other": "C-p2", "N": 6}, "not quasi-isomorphic", "derived")]),
    CatalogEntry(
        "C-p2b", 'dga "C-p2b" over Z {\n  gen e:1;\n  diff e = 2;\n  rel e^3, 2*e^2;\n}',
        "Z[e; de=2]/(e^3, 2e^2), the nontrivial dga for n = 2",
        [Expectation("homology", {"N": 6}, _hom({0: [2], 1: [], 2: [2], 3: [], 4: [], 5: [], 6: []}), "literature"),
         Expectation("square_zero", {"degree": 2}, True, "literature"),
         Expectation("kinvariant", {"n": 1}, "nonzero", "literature")]),
    CatalogEntry(
        "C-p4",
        'dga "C-p4" over Z {\n  gen e:1, f:3;\n  diff e = 2;\n  diff f = e^2;\n'
        '  rel e^4, e^2*f, e*f*e, f*e^2, f*e*f, f^2, 2*e*f + 2*f*e;\n}',
        "the nontrivial dga for n = 4, with seven relations",
        [Expectation("homology", {"N": 8}, _hom({n: ([2] if n in (0, 4) else []) for n in range(9)}), "derived"),
         Expectation("kinvariant", {"n": 3}, "nonzero", "literature")]),
    CatalogEntry(
        "C-5.4", 'dga "C-5.4" over Z {\n  gen e:1, h:3;\n  diff e = 2;\n  rel e^4, h^2, e*h + h*e;\n}',
        "Z<e,h; de=2, dh=0>/(e^4, h^2, eh+he); the derived mod-2 ring is F_2[x,y]/(x^4, y^2) "
        "with |x| = 1 and |y| = 3, as forced by its dimension vector",
        [Expectation("homology", {"N": 6}, _hom({0: [2], 1: [], 2: [2], 3: [2], 4: [], 5: [2], 6: []}), "literature"),
         Expectation("product", {"a": 2, "b": 3}, True, "literature", "degree-5 class is the product"),
         Expectation("derived_mod2", {"N": 6}, {"dims": [1, 1, 1, 2, 1, 1, 1], "degree1_squares_zero": False,
                                                 "nilpotency1": 4}, "derived")]),
    CatalogEntry(
        "D-5.4", 'dga "D-5.4" over Z {\n  gen g:2, h:3;\n  rel 2, g^2, h^2, g*h + h*g;\n}',
        "exterior algebra over F_2 on classes of degrees 2 and 3",
        [Expectation("homology", {"N": 6}, _hom({0: [2], 1: [], 2: [2], 3: [2], 4: [], 5: [2], 6: []}), "trivial"),
         Expectation("derived_mod2", {"N": 6}, {"degree1_squares_zero": True}, "literature"),
         Expectation("distinguish", {"other": "C-5.4", "N": 6}, "not quasi-isomorphic", "literature")]),
    CatalogEntry(
        "T-F2", 'dga "T-F2" over Z {\n  gen e:1, f:3, g:5;\n  diff e = 2;\n  diff f = e^2;\n'
        '  diff g = e*f + f*e;\n  stage 2: e;\n  stage 3: f;\n  stage 4: g;\n}',
        "the first stages of the kill-cycles replacement of F_2",
        [Expectation("replacement_of", {"target": "F2", "N": 5}, "e:1 d=2; f:3 d=e^2; g:5 d=e*f + f*e", "literature"),
         Expectation("stage_homology", {"drop": ["g"], "degree": 4}, {"factors": [2], "rep": "e*f + f*e"},
                     "literature")]),
    _fp(2), _fp(3), _fp(5), _field(2), _field(3),
]


def catalog():
    return list(_ENTRIES)


def get_entry(ident):
    for e in _ENTRIES:
        if e.id == ident:
            return e
    raise KeyError(ident)


# --------------------------------------------------------------------------
# Checking


def _homology_dict(A, N):
    H = homology(A, N)
    return {str(n): H.factors(n) for n in range(0, N + 1)}


def run_expectation(entry, ex):
    """Computed value for one expectation."""
    from .hochschild import hochschild_cohomology
    from .postnikov import brutal_truncation, classify_extensions, k_invariant
    a = ex.args
    c = ex.check
    if c == "homology":
        return _homology_dict(entry.realize(a["N"] + 1), a["N"])
    if c == "square_zero":
        d = a["degree"]
        R = homology_ring(entry.realize(2 * d + 1), 2 * d)
        x = R.basis(d, 0)
        return not any(R.multiply(d, x, d, x))
    if c == "product":
        A = entry.realize(a["a"] + a["b"] + 1)
        R = homology_ring(A, a["a"] + a["b"])
        v = R.multiply(a["a"], R.basis(a["a"], 0), a["b"], R.basis(a["b"], 0))
        return any(v) and R.dim(a["a"] + a["b"]) == 1
    if c == "derived_mod2":
        N = a["N"]
        dt = derived_tensor(entry.realize(N + 2), prime_field_dga(2, N + 1), N)
        fp = ring_fingerprint(dt.ring)
        out = {"dims": [dt.ring.dim(n) for n in range(N + 1)], "degree1_squares_zero": fp.degree1_squares_zero,
               "nilpotency1": fp.nilpotency.get(1)}
        return {k: out[k] for k in ex.expected}
    if c == "kinvariant":
        n = a["n"]
        k = k_invariant(entry.realize(n + 3), n)
        return "zero" if k.is_zero() else "nonzero"
    if c == "distinguish":
        other = get_entry(a["other"])
        N = a["N"]
        rep = distinguish(entry.presentation, other.presentation, N)
        return rep["verdict"]
    if c == "hh":
        nmax = a["nmax"]
        C = entry.realize(nmax + 3)
        t = hochschild_cohomology(C, a["coeff"], 0, nmax)
        return {str(n): t.factors(n) for n in range(0, nmax + 1)}
    if c in ("ho_order", "orbits"):
        n = a["n"]
        A = entry.realize(n + 3)
        C = brutal_truncation(A, n)
        rep = classify_extensions(C, a["M"], n)
        return rep["group_order"] if c == "ho_order" else rep["orbit_count"]
    if c == "replacement_of":
        Q = semifree_replacement(get_entry(a["target"]).realize(a["N"] + 1), a["N"])
        parts = []
        for g, k in Q.generators:
            from .poly import fmt
            parts.append(f"{g}:{k} d={fmt(Q.differentials[g])}")
        return "; ".join(parts)
    if c == "stage_homology":
        P = entry.presentation
        keep = [(g, k) for g, k in P.generators if g not in a["drop"]]
        P.generators = keep
        P.differentials = {g: v for g, v in P.differentials.items() if g not in a["drop"]}
        P.stages = {g: v for g, v in P.stages.items() if g not in a["drop"]}
        d = a["degree"]
        A = realize(P, d + 1)
        H = homology(A, d)
        return {"factors": H.factors(d), "rep": H.format_rep(d, 0) if H.dim(d) else ""}
    raise ValueError(f"unknown check {c}")


def verify_catalog(ids=None, progress=None):
    """Run every expectation; returns a list of result dicts."""
    out = []
    for e in _ENTRIES:
        if ids and e.id not in ids:
            continue
        for ex in e.expectations:
            if progress:
                progress(f"{e.id}: {ex.check}")
            try:
                got = run_expectation(e, ex)
                ok = got == ex.expected
                err = None
            except Exception as exc:  # reported, not raised
                got, ok, err = None, False, f"{type(exc).__name__}: {exc}"
            out.append({"entry": e.id, "check": ex.check, "args": ex.args, "expected": ex.expected,
                        "got": got, "ok": ok, "tag": ex.tag, "error": err})
    return out

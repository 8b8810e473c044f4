"""The dga presentation language.

Grammar (whitespace-insensitive, ``#`` comments to end of line)::

    file      := 'dga' STRING 'over' GROUND '{' stmt* '}'
    GROUND    := 'Z' | 'F' PRIME
    stmt      := 'gen' ID ':' INT (',' ID ':' INT)* ';'
               | 'diff' ID '=' poly ';'
               | 'rel' poly (',' poly)* ';'
               | 'stage' INT ':' ID (',' ID)* ';'
    poly      := ['-'] term (('+' | '-') term)*
    term      := INT | [INT '*'] factor ('*' factor)*
    factor    := ID ['^' INT]

Generators must have positive degree.  A bare integer is a scalar in degree
0, so ``rel 3;`` presents F_3 over Z.  ``stage`` lines only annotate which
kill-cycles stage introduced a generator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import poly as P
from .dga import TruncatedDga, from_words
from .errors import PresentationError, ResourceLimitError
from .linalg import Echelon, ScalarDomain

MONOMIAL_CAP = 20_000


@dataclass
class DgaPresentation:
    name: str
    ground: ScalarDomain
    generators: list = field(default_factory=list)  # [(name, degree)]
    differentials: dict = field(default_factory=dict)  # name -> poly
    relations: list = field(default_factory=list)  # [poly]
    stages: dict = field(default_factory=dict)  # name -> stage number

    @property
    def degrees(self):
        return dict(self.generators)

    @property
    def names(self):
        return [g for g, _ in self.generators]

    def diff_of(self, g):
        return self.differentials.get(g, {})

    def to_text(self):
        lines = [f'dga "{self.name}" over {self.ground.name} {{']
        for g, deg in self.generators:
            lines.append(f"  gen {g}:{deg};")
        for g, _ in self.generators:
            dg = self.differentials.get(g)
            if dg:
                lines.append(f"  diff {g} = {P.fmt(dg)};")
        for r in self.relations:
            lines.append(f"  rel {P.fmt(r)};")
        by_stage = {}
        for g, s in self.stages.items():
            by_stage.setdefault(s, []).append(g)
        order = {g: i for i, g in enumerate(self.names)}
        for s in sorted(by_stage):
            gens = sorted(by_stage[s], key=order.get)
            lines.append(f"  stage {s}: {', '.join(gens)};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def with_ground(self, ground):
        return DgaPresentation(self.name, ground, list(self.generators), dict(self.differentials),
                               list(self.relations), dict(self.stages))

    def over_integers(self):
        """The same dga regarded over Z (an F_p ground becomes the scalar relation p)."""
        if not self.ground.p:
            return self
        rels = [dict(r) for r in self.relations] + [P.scalar(self.ground.p)]
        return DgaPresentation(self.name, ScalarDomain(0), list(self.generators),
                               dict(self.differentials), rels, dict(self.stages))


# --------------------------------------------------------------------------
# Tokenizer and parser

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+) | (?P<comment>\#[^\n]*) |
    (?P<string>"[^"\n]*") | (?P<int>\d+) | (?P<id>[A-Za-z_][A-Za-z_0-9']*) |
    (?P<op>[{}:;,=+\-*^])
""", re.X)


def _tokenize(text):
    pos, line, col = 0, 1, 1
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PresentationError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind not in ("ws", "comment"):
            out.append((kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    out.append(("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return PresentationError(msg, tok[2], tok[3])

    def expect(self, kind, value=None):
        t = self.next()
        if t[0] != kind or (value is not None and t[1] != value):
            want = value or kind
            got = t[1] or "end of input"
            raise PresentationError(f"expected {want!r}, found {got!r}", t[2], t[3])
        return t

    def accept(self, kind, value=None):
        t = self.peek()
        if t[0] == kind and (value is None or t[1] == value):
            self.i += 1
            return t
        return None

    def parse(self):
        self.expect("id", "dga")
        name = self.expect("string")[1][1:-1]
        self.expect("id", "over")
        gt = self.expect("id")
        try:
            ground = ScalarDomain.parse(gt[1])
        except ValueError as exc:
            raise PresentationError(str(exc), gt[2], gt[3]) from None
        pres = DgaPresentation(name, ground)
        self.expect("op", "{")
        degs = {}
        pending = []  # (kind, payload, token) checked once all gens are known
        while not self.accept("op", "}"):
            t = self.expect("id")
            kw = t[1]
            if kw == "gen":
                while True:
                    gt = self.expect("id")
                    self.expect("op", ":")
                    neg = self.accept("op", "-")
                    dt = self.expect("int")
                    deg = -int(dt[1]) if neg else int(dt[1])
                    if gt[1] in degs:
                        raise PresentationError(f"duplicate generator {gt[1]!r}", gt[2], gt[3])
                    if deg <= 0:
                        raise PresentationError(
                            f"generator {gt[1]!r} has non-positive degree {deg}", dt[2], dt[3])
                    degs[gt[1]] = deg
                    pres.generators.append((gt[1], deg))
                    if not self.accept("op", ","):
                        break
            elif kw == "diff":
                gt = self.expect("id")
                self.expect("op", "=")
                pt = self.peek()
                pending.append(("diff", (gt, self.poly()), pt))
            elif kw == "rel":
                while True:
                    pt = self.peek()
                    pending.append(("rel", self.poly(), pt))
                    if not self.accept("op", ","):
                        break
            elif kw == "stage":
                st = int(self.expect("int")[1])
                self.expect("op", ":")
                while True:
                    gt = self.expect("id")
                    pending.append(("stage", (gt, st), gt))
                    if not self.accept("op", ","):
                        break
            else:
                raise self.error(f"unknown statement {kw!r}", t)
            self.expect("op", ";")
        self.expect("eof")
        for kind, payload, tok in pending:
            if kind == "diff":
                gt, poly = payload
                if gt[1] not in degs:
                    raise PresentationError(f"unknown generator {gt[1]!r}", gt[2], gt[3])
                _check_known(poly, degs, tok)
                poly = _strip(poly)
                want = degs[gt[1]] - 1
                got = P.degrees_of(poly, degs)
                if len(got) > 1:
                    raise PresentationError(f"differential of {gt[1]} is inhomogeneous (degrees {sorted(got)})",
                                            tok[2], tok[3])
                if got and got != {want}:
                    raise PresentationError(
                        f"differential degree mismatch: d{gt[1]} has degree {got.pop()}, need {want}",
                        tok[2], tok[3])
                if gt[1] in pres.differentials:
                    raise PresentationError(f"second differential for {gt[1]!r}", gt[2], gt[3])
                pres.differentials[gt[1]] = P.clean(poly, ground.p)
            elif kind == "rel":
                _check_known(payload, degs, tok)
                payload = _strip(payload)
                got = P.degrees_of(payload, degs)
                if len(got) > 1:
                    raise PresentationError(f"inhomogeneous relation (degrees {sorted(got)})", tok[2], tok[3])
                r = P.clean(payload, ground.p)
                if r:
                    pres.relations.append(r)
            else:
                gt, st = payload
                if gt[1] not in degs:
                    raise PresentationError(f"unknown generator {gt[1]!r}", gt[2], gt[3])
                pres.stages[gt[1]] = st
        return pres

    def poly(self):
        out = {}
        sign = -1 if self.accept("op", "-") else 1
        while True:
            word, c = self.term()
            out[word] = out.get(word, 0) + sign * c
            if self.accept("op", "+"):
                sign = 1
            elif self.accept("op", "-"):
                sign = -1
            else:
                return P.clean(out)

    def term(self):
        c = 1
        t = self.peek()
        if t[0] == "int":
            self.next()
            c = int(t[1])
            if not self.accept("op", "*"):
                return (), c
        word = []
        while True:
            g = self.expect("id")
            k = 1
            if self.accept("op", "^"):
                k = int(self.expect("int")[1])
            word.extend([g] * k)
            if not self.accept("op", "*"):
                break
        return tuple(word), c


def _check_known(poly, degs, tok):
    for w in poly:
        for g in w:
            if g[1] not in degs:
                raise PresentationError(f"unknown generator {g[1]!r} in polynomial", g[2], g[3])


def _strip(poly):
    """Replace generator tokens in words by their names."""
    out = {}
    for w, c in poly.items():
        key = tuple(t[1] for t in w)
        out[key] = out.get(key, 0) + c
    return P.clean(out)


def parse(text: str) -> DgaPresentation:
    """Parse presentation text; raises PresentationError with line/column."""
    return _Parser(text).parse()


# --------------------------------------------------------------------------
# Degreewise realization


def enumerate_words(pres, n_max, cap=MONOMIAL_CAP):
    """Monomials of each degree 0..n_max ordered by length, then declaration order."""
    gens = pres.generators
    rank = {g: i for i, (g, _) in enumerate(gens)}
    words = {0: [()]}
    for n in range(1, n_max + 1):
        ws = []
        for g, k in gens:
            if k <= n:
                ws.extend((g,) + w for w in words[n - k])
        if len(ws) > cap:
            raise ResourceLimitError(f"{len(ws)} monomials in degree {n} exceed the cap of {cap}")
        ws.sort(key=lambda w: (len(w), [rank[x] for x in w]))
        words[n] = ws
    return words


class _Ideal:
    """Degreewise span of the two-sided ideal generated by the relations."""

    def __init__(self, pres, words):
        self.pres = pres
        self.words = words
        self.degs = pres.degrees
        self.p = pres.ground.p
        self.index = {n: {w: i for i, w in enumerate(ws)} for n, ws in words.items()}
        self._span = {}

    def vector(self, n, poly):
        v = [0] * len(self.words[n])
        idx = self.index[n]
        for w, c in poly.items():
            v[idx[w]] += c
        return [x % self.p for x in v] if self.p else v

    def generators(self, n):
        out = []
        for r in self.pres.relations:
            k = P.word_degree(next(iter(r)), self.degs)
            for a in range(n - k + 1):
                for m in self.words[a]:
                    for m2 in self.words[n - k - a]:
                        out.append(self.vector(n, {m + w + m2: c for w, c in r.items()}))
        return out

    def span(self, n) -> Echelon:
        e = self._span.get(n)
        if e is None:
            e = Echelon(self.generators(n), len(self.words[n]), self.p)
            self._span[n] = e
        return e

    def contains(self, n, poly):
        if not poly:
            return True
        if n < 0:
            return False
        return self.span(n).contains(self.vector(n, poly))


@dataclass
class ValidationFailure:
    kind: str  # "d_squared" or "relation_not_closed"
    element: str
    degree: int
    witness: str

    def __str__(self):
        return f"{self.kind}: {self.element} (degree {self.degree}) -> {self.witness}"


@dataclass
class ValidationReport:
    name: str
    max_degree: int
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def lines(self):
        head = f"{self.name}: {'ok' if self.ok else 'FAILED'} through degree {self.max_degree}"
        return [head] + [f"  {f}" for f in self.failures]


def validate(pres: DgaPresentation, N: int, cap=MONOMIAL_CAP) -> ValidationReport:
    """Check d∘d on generators and d(relation) in the ideal, degree by degree up to N."""
    degs = pres.degrees
    p = pres.ground.p
    top = max([N] + [k for _, k in pres.generators])
    words = enumerate_words(pres, top, cap)
    ideal = _Ideal(pres, words)
    report = ValidationReport(pres.name, N)
    for g, k in pres.generators:
        dd = P.differential(pres.diff_of(g), degs, pres.differentials, p)
        if dd and not ideal.contains(k - 2, dd):
            report.failures.append(ValidationFailure("d_squared", g, k, P.fmt(dd)))
    for r in pres.relations:
        k = P.word_degree(next(iter(r)), degs)
        if k - 1 > N:
            continue
        dr = P.differential(r, degs, pres.differentials, p)
        if dr and not ideal.contains(k - 1, dr):
            report.failures.append(ValidationFailure("relation_not_closed", P.fmt(r), k, P.fmt(dr)))
    return report


def realize(pres: DgaPresentation, N: int, monomial_cap=MONOMIAL_CAP, check=True) -> TruncatedDga:
    """The quotient of the free algebra by the relation ideal, in degrees 0..N."""
    if N < 0:
        raise ValueError("N must be non-negative")
    degs = pres.degrees
    p = pres.ground.p
    words = enumerate_words(pres, N, monomial_cap)
    ideal = _Ideal(pres, words)
    relations = {n: ideal.span(n).rows for n in range(N + 1)}
    diff = {}
    for n in range(N + 1):
        if n == 0:
            diff[0] = [[] for _ in words[0]]
            continue
        col = []
        for w in words[n]:
            dw = P.differential({w: 1}, degs, pres.differentials, p)
            col.append(ideal.vector(n - 1, dw))
        diff[n] = col
    complete = _vanishes_above(pres, words, ideal, N)
    A = from_words(pres.ground, words, relations, diff, lambda u, v: u + v,
                   top=N, complete=complete, name=pres.name)
    A.presentation = pres
    if check:
        report = validate(pres, N, monomial_cap)
        if not report.ok:
            raise PresentationError("inconsistent presentation: " + "; ".join(map(str, report.failures)))
    return A


def _vanishes_above(pres, words, ideal, N):
    """True when the realized degrees show that everything above N is zero."""
    if not pres.generators:
        return True
    width = max(k for _, k in pres.generators)
    run = 0
    for n in range(1, N + 1):
        span = ideal.span(n)
        k = len(words[n])
        if all(span.contains([int(i == j) for j in range(k)]) for i in range(k)):
            run += 1
            if run >= width:
                return True
        else:
            run = 0
    return False


def cell_pair(n, ground=None):
    """Presentations of the sphere cell (one cycle x in degree n) and its disk (dy = x)."""
    ground = ground or ScalarDomain(0)
    sphere = DgaPresentation(f"S{n}", ground, [("x", n)])
    disk = DgaPresentation(f"D{n + 1}", ground, [("x", n), ("y", n + 1)], {"y": P.gen("x")})
    return sphere, disk

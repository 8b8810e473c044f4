"""Command-line interface: ``dga <command> ...``."""

from __future__ import annotations

import argparse
import os
import re
import sys
import time

from .catalog import catalog, get_entry, verify_catalog
from .errors import HypothesisError, PresentationError, ResourceLimitError
from .homology import distinguish, homology, homology_ring, ring_fingerprint
from .linalg import ScalarDomain, describe_factors
from .presentation import MONOMIAL_CAP, parse, realize, validate
from .report import FORMATS, RunReport, export, group_entry

EXIT_OK, EXIT_HYPOTHESIS, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _progress(msg):
    print(msg, file=sys.stderr)


# --------------------------------------------------------------------------
# Inputs


def load(source, args=None):
    """A presentation from a file path or ``examples:<id>``."""
    if source.startswith("examples:"):
        try:
            pres = get_entry(source[len("examples:"):]).presentation
        except KeyError:
            raise UsageError(f"unknown input: {source}") from None
    elif os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            pres = parse(fh.read())
    else:
        raise UsageError(f"unknown input: {source}")
    if args is not None and getattr(args, "ground", None):
        try:
            pres = pres.with_ground(ScalarDomain.parse(args.ground))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    return pres


def _cap(args):
    return args.monomial_cap or MONOMIAL_CAP


def _need_degree(args):
    if args.max_degree is None:
        raise UsageError("--max-degree is required for this command")
    if args.max_degree < 0:
        raise UsageError("--max-degree must be non-negative")
    return args.max_degree


def _degrees(H, N=None):
    return [n for n in H.valid if N is None or n <= N]


def _groups(H, N):
    return [group_entry(n, H.factors(n), H.describe(n), N) for n in _degrees(H, N)]


def _table_lines(H, N=None, symbol="H"):
    return [f"{symbol}_{n} = {H.describe(n)}" for n in _degrees(H, N)]


_SIGMA = re.compile(r"^\s*(?:(\d+)\s*\*?\s*)?(?:(s|σ|sigma)(?:\s*\^\s*(\d+))?)?\s*$")


def parse_sigma(text, p):
    """'0', '1', 's', '2*s^3', 's^2 + s' -> {k: c} over F_p."""
    out = {}
    for part in text.replace("-", "+-").split("+"):
        part = part.strip()
        if not part:
            continue
        neg = part.startswith("-")
        part = part.lstrip("-")
        m = _SIGMA.match(part)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise UsageError(f"cannot read σ-polynomial {text!r}")
        c = int(m.group(1)) if m.group(1) else 1
        k = (int(m.group(3)) if m.group(3) else 1) if m.group(2) else 0
        out[k] = (out.get(k, 0) + (-c if neg else c)) % p
    return {k: c for k, c in out.items() if c}


# --------------------------------------------------------------------------
# Commands


def cmd_validate(args):
    pres = load(args.input, args)
    N = _need_degree(args)
    rep = validate(pres, N, _cap(args))
    r = RunReport("validate", [args.input], N, {"ok": rep.ok, "failures": [str(f) for f in rep.failures]},
                  text=rep.lines())
    if not rep.ok:
        r.exit = EXIT_HYPOTHESIS
    return r


def cmd_homology(args):
    pres = load(args.input, args)
    N = _need_degree(args)
    A = realize(pres, N + 1, _cap(args))
    H = homology(A, N)
    R = homology_ring(A, groups=H)
    fp = ring_fingerprint(R)
    N = min(N, H.valid.stop - 1)
    lines = [f"homology of {pres.name} through degree {N}"] + _table_lines(H, N)
    reps = {}
    for n in _degrees(H, N):
        for i in range(H.dim(n)):
            s = H.format_rep(n, i)
            reps.setdefault(str(n), []).append(s)
            lines.append(f"  class {n}.{i}: {s}")
    products = []
    for (a, i, b, j), v in sorted(R.mu.items()):
        if any(v) and a > 0 and b > 0 and a + b <= N:
            products.append({"left": [a, i], "right": [b, j], "product": v, "valid_through": N})
            lines.append(f"  {a}.{i} * {b}.{j} = {v} in degree {a + b}")
    return RunReport("homology", [args.input], N,
                     {"groups": _groups(H, N), "representatives": reps, "products": products,
                      "fingerprint": fp.as_dict()}, text=lines)


def cmd_resolve(args):
    from .semifree import homology_comparison, semifree_replacement
    pres = load(args.input, args)
    N = _need_degree(args)
    A = realize(pres, N + 1, _cap(args))
    Q = semifree_replacement(A, N, cap=_cap(args), quiet=args.quiet)
    comp = homology_comparison(Q)
    lines = Q.to_text().rstrip("\n").split("\n")
    lines.append(f"comparison: isomorphism through {Q.valid}, onto in degree {Q.valid + 1}")
    res = {"presentation": Q.to_text(),
           "generators": [{"name": g, "degree": k, "stage": Q.stages.get(g),
                           "valid_through": Q.valid} for g, k in Q.generators],
           "comparison": {str(n): {"injective": a, "surjective": b} for n, (a, b) in comp.items()}}
    return RunReport("resolve", [args.input], Q.valid, res, warnings=list(Q.notes), text=lines)


def cmd_postnikov(args):
    from .postnikov import brutal_truncation, postnikov_section
    from .semifree import semifree_replacement
    pres = load(args.input, args)
    N = _need_degree(args)
    n = args.n
    A = realize(pres, N + 1, _cap(args))
    T = brutal_truncation(A, n)
    HT = homology(T, N)
    Q = semifree_replacement(A, N, cap=_cap(args), quiet=args.quiet)
    S = postnikov_section(Q, n, N)
    HS = homology(S.realize(N), N - 1)
    lines = [f"brutal truncation at {n}:"] + _table_lines(HT, N)
    lines += [f"cell-attachment section at {n} (valid {HS.range_text()}):"] + _table_lines(HS)
    lines += S.to_text().rstrip("\n").split("\n")
    return RunReport("postnikov", [args.input], HS.valid.stop - 1,
                     {"truncation": _groups(HT, N), "section": _groups(HS, HS.valid.stop - 1),
                      "section_presentation": S.to_text()}, text=lines)


def cmd_tensor(args):
    from .semifree import derived_tensor
    A = load(args.inputs[0], args)
    B = load(args.inputs[1], args)
    N = _need_degree(args)
    dt = derived_tensor(A, realize(B, N + 1, _cap(args)), N, _cap(args))
    fp = ring_fingerprint(dt.ring)
    lines = [f"derived tensor {A.name} ⊗ {B.name} ({dt.path} path, valid through {dt.valid})"]
    lines += _table_lines(dt.groups, dt.valid)
    lines.append(f"degree-1 squares zero: {fp.degree1_squares_zero}")
    return RunReport("tensor", list(args.inputs), dt.valid,
                     {"path": dt.path, "groups": _groups(dt.groups, dt.valid), "fingerprint": fp.as_dict()},
                     text=lines)


def _coefficients(args, A):
    if args.coeff:
        return [int(x) for x in args.coeff.split(",")]
    H0 = homology(A, 0)
    return list(H0.factors(0)) or [0]


def cmd_hh(args):
    from .hochschild import hochschild_cohomology, hochschild_ring, sigma_powers
    pres = load(args.input, args)
    N = _need_degree(args)
    r = args.degree
    A = realize(pres, N + r + 3, _cap(args))
    coeff = _coefficients(args, A)
    t = hochschild_cohomology(A, coeff, r, N, quiet=args.quiet)
    lines = [f"HH^*({pres.name}; M = {describe_factors(coeff, A.p)} in degree {r}), "
             f"certified {t.certified[0]}..{t.certified[1]}"] + t.lines()
    res = {"groups": [group_entry(n, t.factors(n), t.describe(n), t.certified[1])
                      for n in range(t.certified[0], t.certified[1] + 1)],
           "certified": list(t.certified), "provenance": t.provenance}
    if args.ring:
        p = args.prime or (coeff[0] if coeff[0] else A.p)
        ring = hochschild_ring(A, p, N, quiet=args.quiet)
        pw = sigma_powers(ring, N // 2)
        res["ring"] = {"sigma_powers": {str(k): v for k, v in pw.items()}, "valid_through": N}
        for k, v in pw.items():
            lines.append(f"σ^{k} = {v} in HH^{2 * k}" + ("  (nonzero)" if any(v) else ""))
    return RunReport("hh", [args.input], t.certified[1], res, text=lines)


def cmd_der(args):
    from .hochschild import derivation_groups
    pres = load(args.input, args)
    N = _need_degree(args)
    r = args.degree
    A = realize(pres, N + r + 3, _cap(args))
    coeff = _coefficients(args, A)
    t = derivation_groups(A, coeff, r, N, quiet=args.quiet)
    lines = [f"Der^*({pres.name}; M = {describe_factors(coeff, A.p)} in degree {r}), "
             f"certified {t.certified[0]}..{t.certified[1]}"] + t.lines("Der")
    res = {"groups": [group_entry(n, t.factors(n), t.describe(n), t.certified[1])
                      for n in range(t.certified[0], t.certified[1] + 1)],
           "certified": list(t.certified),
           "long_exact_sequence": [{"shift_checked": sorted(x["shift"]),
                                    "exceptional": {str(k): v for k, v in x["exceptional"].items()}}
                                   for x in t.les]}
    return RunReport("der", [args.input], t.certified[1], res, text=lines)


def cmd_kinv(args):
    from .postnikov import k_invariant
    pres = load(args.input, args)
    n = args.n
    A = realize(pres, n + 3, _cap(args))
    k = k_invariant(A, n)
    lines = [f"k-invariant k_{n} of {pres.name}: M = H_{n + 1} = {describe_factors(k.factors, A.p)}",
             f"group Ho = {describe_factors(k.group.factors, k.group.prime)}, class {list(k.coords)}"
             + (" (zero)" if k.is_zero() else " (nonzero)"),
             f"Aut(M)-orbit: {[list(c) for c in k.orbit]}"]
    d = k.as_dict()
    d["valid_through"] = n + 2
    return RunReport("kinv", [args.input], n + 2, d, text=lines)


def cmd_classify(args):
    from .postnikov import brutal_truncation, classify_extensions
    pres = load(args.input, args)
    n = args.n
    A = realize(pres, n + 3, _cap(args))
    C = brutal_truncation(A, n)
    coeff = [int(x) for x in args.coeff.split(",")] if args.coeff else list(homology(A, 0).factors(0))
    rep = classify_extensions(C, coeff, n)
    lines = [f"extensions of P_{n}({pres.name}) by Σ^{n + 1} {describe_factors(coeff, A.p)}",
             f"Ho group {describe_factors(rep['group'], C.p)} of order {rep['group_order']}, "
             f"|Aut(M)| = {rep['aut_order']}, {rep['orbit_count']} orbits"]
    for o in rep["orbits"]:
        lines.append(f"  orbit {[list(c) for c in o]}")
    res = {"group": rep["group"], "group_order": rep["group_order"], "aut_order": rep["aut_order"],
           "orbit_count": rep["orbit_count"], "orbits": [[list(c) for c in o] for o in rep["orbits"]],
           "valid_through": n + 2}
    return RunReport("classify", [args.input], n + 2, res, text=lines)


def cmd_thh_compare(args):
    from .hochschild import kinvariant_sigma, topological_equivalence_verdict
    from .postnikov import k_invariant
    p = args.prime
    if args.inputs:
        if len(args.inputs) != 2 or args.n is None:
            raise UsageError("thh-compare needs two inputs and --n, or --k1/--k2 with --prime")
        ks = []
        for source in args.inputs:
            pres = load(source, args)
            A = realize(pres, args.n + 3, _cap(args))
            k = k_invariant(A, args.n)
            p = p or (k.group.prime or (k.group.factors[0] if k.group.factors else 0))
            ks.append(kinvariant_sigma(k, p))
        k1, k2 = ks
    else:
        if not p or args.k1 is None or args.k2 is None:
            raise UsageError("thh-compare needs --prime, --k1 and --k2 when no inputs are given")
        k1, k2 = parse_sigma(args.k1, p), parse_sigma(args.k2, p)
    v = topological_equivalence_verdict(k1, k2, p, certified=None)
    lines = [f"k1 = {v['k1']}  ->  {v['image1']}", f"k2 = {v['k2']}  ->  {v['image2']}",
             v["verdict"], f"criterion: {v['criterion']}", f"reference: {v['reference']}"]
    return RunReport("thh-compare", list(args.inputs or []), None, v, text=lines)


def cmd_distinguish(args):
    A = load(args.inputs[0], args)
    B = load(args.inputs[1], args)
    N = _need_degree(args)
    primes = [args.prime] if args.prime else None
    rep = distinguish(A, B, N, primes, _cap(args))
    lines = [rep["verdict"]]
    if rep["witness"]:
        lines.append(f"witness: {rep['witness']}")
    for c in rep["checks"]:
        lines.append(f"  {c['check']}: {c['result']}")
    return RunReport("distinguish", list(args.inputs), rep["valid_through"], rep, text=lines)


def cmd_catalog(args):
    items = []
    lines = []
    for e in catalog():
        items.append({"id": e.id, "note": e.note, "presentation": e.text,
                      "expectations": [{"check": x.check, "args": x.args, "expected": x.expected, "tag": x.tag}
                                       for x in e.expectations]})
        lines.append(f"{e.id:12s} {e.note}")
        if args.verbose:
            lines.extend("    " + ln for ln in e.text.split("\n"))
    return RunReport("catalog", [], None, {"entries": items}, text=lines)


def cmd_verify_catalog(args):
    progress = None if args.quiet else _progress
    rows = verify_catalog(args.ids or None, progress)
    lines = []
    for r in rows:
        mark = "PASS" if r["ok"] else "FAIL"
        lines.append(f"{mark} {r['entry']} {r['check']} [{r['tag']}]"
                     + ("" if r["ok"] else f" expected {r['expected']!r} got {r['got']!r} {r['error'] or ''}"))
    failed = sum(not r["ok"] for r in rows)
    lines.append(f"{len(rows) - failed}/{len(rows)} expectations verified")
    rep = RunReport("verify-catalog", list(args.ids or []), None, {"rows": rows, "failed": failed}, text=lines)
    if failed:
        rep.exit = EXIT_HYPOTHESIS
    return rep


# --------------------------------------------------------------------------
# Parser


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--max-degree", type=int, default=None)
    common.add_argument("--ground", default=None, help="override the ground ring: Z or Fp")
    common.add_argument("--prime", type=int, default=None)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--monomial-cap", type=int, default=None)
    common.add_argument("--seed", type=int, default=None, help="only used by randomized tests")
    common.add_argument("--quiet", action="store_true", help="no progress on stderr")

    parser = _Parser(prog="dga", description="Computations with finitely presented dgas over Z and F_p.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, inputs=1, **extra):
        sp = sub.add_parser(name, parents=[common])
        if inputs == 1:
            sp.add_argument("input")
        elif inputs == 2:
            sp.add_argument("inputs", nargs=2)
        for flag, kw in extra.items():
            sp.add_argument(flag, **kw)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate)
    add("homology", cmd_homology)
    add("resolve", cmd_resolve)
    add("postnikov", cmd_postnikov, **{"--n": dict(type=int, required=True)})
    add("tensor", cmd_tensor, inputs=2)
    add("hh", cmd_hh, **{"--degree": dict(type=int, default=0), "--coeff": dict(default=None),
                         "--ring": dict(action="store_true")})
    add("der", cmd_der, **{"--degree": dict(type=int, default=0), "--coeff": dict(default=None)})
    add("kinv", cmd_kinv, **{"--n": dict(type=int, required=True)})
    add("classify", cmd_classify, **{"--n": dict(type=int, required=True), "--coeff": dict(default=None)})
    sp = add("thh-compare", cmd_thh_compare, inputs=0)
    sp.add_argument("inputs", nargs="*")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--k1", default=None)
    sp.add_argument("--k2", default=None)
    add("distinguish", cmd_distinguish, inputs=2)
    add("catalog", cmd_catalog, inputs=0, **{"--verbose": dict(action="store_true")})
    sp = add("verify-catalog", cmd_verify_catalog, inputs=0)
    sp.add_argument("ids", nargs="*")
    return parser


def run(argv):
    """(exit code, RunReport or None); diagnostics go to stderr."""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"dga: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    t0 = time.perf_counter()
    try:
        rep = args.func(args)
    except UsageError as exc:
        print(f"dga: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except PresentationError as exc:
        print(f"dga: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except ResourceLimitError as exc:
        print(f"dga: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE, None
    except HypothesisError as exc:
        print(f"dga: hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS, None
    rep.timing = time.perf_counter() - t0
    sys.stdout.buffer.write(export(rep, args.format))
    sys.stdout.flush()
    if not args.quiet:
        print(f"done in {rep.timing:.2f} s", file=sys.stderr)
    return getattr(rep, "exit", EXIT_OK), rep


def main(argv=None):
    code, _ = run(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())

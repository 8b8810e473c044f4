"""Noncommutative polynomials over Z as ``{word: coefficient}`` dicts.

A word is a tuple of generator names; the empty tuple is the unit.
"""


def clean(poly, p=0):
    out = {}
    for w, c in poly.items():
        if p:
            c %= p
        if c:
            out[w] = c
    return out


def add(*polys, p=0):
    out = {}
    for poly in polys:
        for w, c in poly.items():
            out[w] = out.get(w, 0) + c
    return clean(out, p)


def scale(poly, k, p=0):
    return clean({w: k * c for w, c in poly.items()}, p)


def mul(a, b, p=0):
    out = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            w = w1 + w2
            out[w] = out.get(w, 0) + c1 * c2
    return clean(out, p)


def scalar(k):
    return {(): k} if k else {}


def gen(name):
    return {(name,): 1}


def word_degree(word, degrees):
    return sum(degrees[x] for x in word)


def degrees_of(poly, degrees):
    return {word_degree(w, degrees) for w in poly}


def differential(poly, degrees, diffs, p=0):
    """Extend d from generators to words: d(ab) = d(a)b + (-1)^|a| a d(b)."""
    out = {}
    for word, c in poly.items():
        pre_deg = 0
        for i, x in enumerate(word):
            dx = diffs.get(x)
            if dx:
                sign = -c if pre_deg % 2 else c
                pre, suf = word[:i], word[i + 1:]
                for w, k in dx.items():
                    nw = pre + w + suf
                    out[nw] = out.get(nw, 0) + sign * k
            pre_deg += degrees[x]
    return clean(out, p)


def fmt(poly, ground_p=0):
    if not poly:
        return "0"
    parts = []
    for word, c in sorted(poly.items(), key=lambda t: (len(t[0]), t[0])):
        body = fmt_word(word)
        if not word:
            term = str(abs(c))
        elif abs(c) == 1:
            term = body
        else:
            term = f"{abs(c)}*{body}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, term))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


def fmt_word(word):
    if not word:
        return "1"
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        n = j - i
        out.append(word[i] if n == 1 else f"{word[i]}^{n}")
        i = j
    return "*".join(out)

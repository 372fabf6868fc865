"""Orbit labels II..XXIII, their normal forms and the tabulated decompositions."""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum

from gmpy2 import mpq

from ..decomposition import Decomposition
from ..exterior import Multivector, sort_sign

LETTERS = "abcpqrst"


class OrbitLabel(str, Enum):
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"
    VIII = "VIII"
    IX = "IX"
    X = "X"
    XI = "XI"
    XII = "XII"
    XIII = "XIII"
    XIV = "XIV"
    XV = "XV"
    XVI = "XVI"
    XVII = "XVII"
    XVIII = "XVIII"
    XIX = "XIX"
    XX = "XX"
    XXI = "XXI"
    XXII = "XXII"
    XXIII = "XXIII"

    def __str__(self):
        return self.value

    @property
    def info(self):
        return TABLE[self]


@dataclass(frozen=True)
class LabelInfo:
    nf: str            # normal form in the letters a b c p q r s t
    sd: str            # tabulated decomposition, letters or generic v_i / m_j / l_j
    ambient: int       # number of essential variables
    table_rank: int    # SSR column as tabulated
    rank: int          # rank this library certifies (differs from the table only for VII)
    explicit_sd: bool  # sd written in the NF basis
    nf_printed: str = ""   # tabulated strings, kept where they had to be corrected
    sd_printed: str = ""

    def letters(self):
        used = {ch for ch in self.nf if ch in LETTERS}
        return [ch for ch in LETTERS if ch in used]


L = OrbitLabel
TABLE = {
    L.II: LabelInfo("qrs", "v0v1v2", 3, 1, 1, False),
    L.III: LabelInfo("aqp+brp", "v0v1v2+v0v3v4", 5, 2, 2, False),
    # the printed form a p r + b r p + c p q has only five essential variables;
    # a q r + b r p + c p q is the intended six-variable form (t^t = 0)
    L.IV: LabelInfo("aqr+brp+cpq", "v0v1v2+v0v3v4+v1v3v5", 6, 3, 3, False, nf_printed="apr+brp+cpq"),
    L.V: LabelInfo("abc+prq", "v0v1v2+v3v4v5", 6, 2, 2, False),
    L.VI: LabelInfo("aqp+brp+csp", "v0v1v2+v0v3v4+v0v5v6", 7, 3, 3, False),
    # tabulated rank 3; its tabulated sum lands in VIII, and VII itself needs 4 terms
    L.VII: LabelInfo("qrs+aqp+brp+csp", "v0v1v2+v0v3v4+v5v6(v0+v1+v2+v3+v4+v5+v6)", 7, 3, 4, False),
    L.VIII: LabelInfo("abc+qrs+aqp", "v0v1v2+v0v3v4+v3v5v6", 7, 3, 3, False),
    L.IX: LabelInfo("abc+qrs+aqp+brp", "v0v1v2+v3v4v5+v6(v0+v1+v2+v3+v4+v5)m0", 7, 3, 3, False),
    L.X: LabelInfo("abc+qrs+aqp+brp+csp",
                   "v0v1v2+v3v4v5+v6(v0+v1+v2+v3+v4+v5+v6)m0+m1m2m3", 7, 4, 4, False),
    L.XI: LabelInfo("aqp+brp+csp+crt", "v0v1v2+v0v3v4+v0v5v6+v1v3v7", 8, 4, 4, False),
    L.XII: LabelInfo("qrs+aqp+brp+csp+crt", "(a-s)qp+(q-c)(p+r)s+(t+s)cr+brp", 8, 4, 4, True),
    L.XIII: LabelInfo("abc+qrs+aqp+crt", "v0v1v2+v0v3v4+v1v5v6+v3v5v7", 8, 4, 4, False),
    L.XIV: LabelInfo("abc+qrs+aqp+brp+crt", "ab(c-p)+(a-r)(b+q)p+rq(p-s)+crt", 8, 4, 4, True),
    L.XV: LabelInfo("abc+qrs+aqp+brp+csp+crt", "crt+aqp+(b+s)(r-c)p+(a+p)bc+(p+q)rs", 8, 5, 5, True),
    L.XVI: LabelInfo("aqp+bst+crt", "v0v1v2+v0v3v4+v5v6v7", 8, 3, 3, False),
    L.XVII: LabelInfo("aqp+brp+bst+crt", "v0v1v2+v0v3v4+v1v3v5+v2v6v7", 8, 4, 4, False),
    L.XVIII: LabelInfo("qrs+aqp+brp+bst+crt", "(t-r)bs+crt+r(p-s)(b-q)+(a-r)qp", 8, 4, 4, True),
    L.XIX: LabelInfo("aqp+brp+csp+bst+crt", "v0v1v2+v3v4v5+v6v7(v0+v1+v2+v3+v4+v5)", 8, 3, 3, False),
    # printed with (s-p-t) in the last factor, which leaves 2brt - 2crt over
    L.XX: LabelInfo("qrs+aqp+brp+csp+bst+crt",
                    "(r+s)(t-r)b+(r+s)(r+p)(c-q)+(a-r-s)qp+r(b-c)(s-p+t)", 8, 4, 4, True,
                    sd_printed="(r+s)(t-r)b+(r+s)(r+p)(c-q)+(a-r-s)qp+r(b-c)(s-p-t)"),
    L.XXI: LabelInfo("abc+qrs+aqp+bst", "v0v1v2+v0v3v4+v1v5v6+v3v5v7", 8, 4, 4, False),
    L.XXII: LabelInfo("abc+qrs+aqp+brp+bst+crt",
                      "(a+r)(b+2q)(p-c+1/2s)+cr(t-3b-2q)+bs(1/2a+3/2r+t)+(b+q)(a+2r)(p-2c+s)",
                      8, 4, 4, True),
    L.XXIII: LabelInfo("abc+qrs+aqp+brp+csp+bst+crt",
                       "v0v1v2+v3v4v5+v6v7(v0+v1+v2+v3+v4+v5)+l0l1l2", 8, 4, 4, False),
}

ALL_LABELS = list(OrbitLabel)
LABELS_6 = [L.II, L.III, L.IV, L.V]
LABELS_7 = [L.VI, L.VII, L.VIII, L.IX, L.X]
LABELS_8 = [lab for lab in OrbitLabel if TABLE[lab].ambient == 8]


def as_label(x):
    return x if isinstance(x, OrbitLabel) else OrbitLabel(str(x).strip().upper())


def letter_map(label):
    """Letter -> basis index: the letters of the form, compressed in a b c p q r s t order."""
    info = TABLE[as_label(label)]
    if info.explicit_sd or info.ambient == 8:
        return {ch: i for i, ch in enumerate(LETTERS)}
    return {ch: i for i, ch in enumerate(info.letters())}


def _parse_monomials(expr, index):
    """'aqp+brp' -> Multivector terms (coefficient +1 each, product order as written)."""
    coeffs = {}
    for mono in expr.replace(" ", "").split("+"):
        sign, tup = sort_sign([index[ch] for ch in mono])
        if sign == 0:
            continue
        coeffs[tup] = coeffs.get(tup, 0) + sign
    return coeffs


def normal_form(label, dim=None, printed=False):
    label = as_label(label)
    info = TABLE[label]
    index = letter_map(label)
    n = info.ambient if dim is None else dim
    if n < info.ambient:
        raise ValueError(f"{label} needs {info.ambient} dimensions")
    nf = info.nf_printed if printed and info.nf_printed else info.nf
    return Multivector(n, 3, _parse_monomials(nf, index))


# ------------------------------------------------------------------ SD parsing

_FACTOR = re.compile(r"\(([^()]*)\)|([vml]\d)")


def _linear_form(text, index, dim):
    """'p-c+1/2s' -> coordinate vector in the letter basis."""
    vec = [mpq(0)] * dim
    for sign, coef, ch in re.findall(r"([+-]?)(\d+(?:/\d+)?)?([a-z])", text.replace(" ", "")):
        c = mpq(coef) if coef else mpq(1)
        if sign == "-":
            c = -c
        vec[index[ch]] += c
    return vec


def _explicit_terms(sd, index, dim):
    """Split '(a-s)qp+(q-c)(p+r)s+...' into lists of linear forms."""
    out = []
    for term in _split_top(sd):
        factors = []
        pos = 0
        while pos < len(term):
            if term[pos] == "(":
                end = term.index(")", pos)
                factors.append(_linear_form(term[pos + 1:end], index, dim))
                pos = end + 1
            else:
                factors.append(_linear_form(term[pos], index, dim))
                pos += 1
        out.append(factors)
    return out


def random_invertible(n, rng, lo=-9, hi=9):
    from ..linalg import det
    while True:
        g = [[mpq(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]
        if det(g) != 0:
            return g


def _generic_terms(sd, dim, rng):
    """Instantiate v_i, m_j, l_j of a generic tabulated decomposition."""
    g = random_invertible(dim, rng)
    v = [[g[i][j] for i in range(dim)] for j in range(dim)]   # columns of g

    def combo(k):
        cs = [mpq(rng.randint(-9, 9)) for _ in range(k)]
        return [sum((c * v[j][i] for j, c in enumerate(cs)), mpq(0)) for i in range(dim)]

    named = {}
    for j in range(4):
        named[f"m{j}"] = combo(min(7, dim))
    for j in range(3):
        named[f"l{j}"] = combo(dim)
    out = []
    for term in _split_top(sd):
        factors = []
        for paren, name in _FACTOR.findall(term):
            if paren:
                idx = [int(x[1:]) for x in paren.split("+")]
                factors.append([sum((v[j][i] for j in idx), mpq(0)) for i in range(dim)])
            elif name.startswith("v"):
                factors.append(list(v[int(name[1:])]))
            else:
                factors.append(list(named[name]))
        out.append(factors)
    return out


def _split_top(sd):
    terms, depth, cur = [], 0, ""
    for ch in sd.replace(" ", ""):
        depth += ch == "("
        depth -= ch == ")"
        if ch == "+" and depth == 0:
            terms.append(cur)
            cur = ""
        else:
            cur += ch
    terms.append(cur)
    return terms


def standard_decomposition(label, seed=0, dim=None, printed=False):
    """Tabulated decomposition: exact in the NF basis, or generic vectors drawn from seed.

    printed=True uses the table string verbatim where a correction was needed.
    """
    label = as_label(label)
    info = TABLE[label]
    n = info.ambient if dim is None else dim
    sd = info.sd_printed if printed and info.sd_printed else info.sd
    if info.explicit_sd:
        factors = _explicit_terms(sd, letter_map(label), n)
    else:
        factors = _generic_terms(info.sd, n, random.Random(seed))
    dec = Decomposition([], n, 3, note=f"tabulated decomposition of {label}")
    for fs in factors:
        dec.append(mpq(1), fs)
    return dec.refresh_field()

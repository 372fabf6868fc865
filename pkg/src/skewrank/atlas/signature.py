"""Basis-invariant signatures of trivectors and the shipped signature table.

For 8 essential variables the signature uses the covariant
    B8(x, y) = (x . t) ^ (y . t) ^ t   (a 7-vector for covectors x, y)
through the rank of its values, the determinant of y -> B8(x, y) along a
seeded line of x, and the bordered determinant of the forms
    M_l(x, y) = l ^ B8(x, y)
along a seeded line of l.  Both determinants are recorded by the degrees
and multiplicities of their factors over Q.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, asdict, fields
from importlib import resources

from gmpy2 import mpq

from ..apolarity import essential_space
from ..exterior import ContractViolation, Multivector, catalecticant, wedge, top_pairing_scalar
from ..linalg import BadPrime, det, intersect, image, rank
from ..polys import factor_degrees, interpolate, trim
from .invariants import (b_matrix, contractions, decomposable_l_locus, good_model,
                         multiplication_matrix, wedge_kernel, wedge_square_class)
from .labels import ALL_LABELS, TABLE, as_label, normal_form
from .sampling import orbit_sample

TABLE_FORMAT = "skewrank-signature-table"
TABLE_VERSION = 1
LOCUS_PRIMES = (5, 7, 11, 13)


@dataclass(frozen=True)
class Signature:
    n_essential: int
    ker_c12: int                  # on the input, so it depends on the ambient dimension
    ker_c21: int                  # on the essential tensor
    wedge_square: str = None      # "zero" / "nonzero", 6 essential variables
    detB: str = None              # "zero" / "nonzero", 7 essential variables
    b_rank: int = None
    wedge_kernel: int = None
    locus: tuple = None           # ((p, count, kernel_dim), ...) when requested
    r2: int = None                # rank of omega -> omega ^ t on 2-vectors
    xr: int = None                # rank of x -> (x . t) ^ t
    b8_span: int = None
    jacobian: str = None          # factor pattern of det(y -> B8(x, y)) on a line of x
    border: str = None            # factor pattern of the bordered M_l on a line of l

    def key(self):
        """Fields compared against the table (ambient-dependent and optional fields excluded)."""
        return tuple(getattr(self, f.name) for f in fields(self) if f.name not in ("locus", "ker_c12"))

    def to_dict(self):
        d = asdict(self)
        if d["locus"] is not None:
            d["locus"] = [list(x) for x in d["locus"]]
        return {k: v for k, v in d.items() if v is not None}

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if d.get("locus") is not None:
            d["locus"] = tuple(tuple(x) for x in d["locus"])
        return cls(**d)


def factor_pattern(f):
    """'0', '1', or '*'-joined 'deg^mult' items of the factorization over Q."""
    f = trim(f)
    if not f:
        return "0"
    items = factor_degrees(f)
    if not items:
        return "1"
    return "*".join(f"{d}^{m}" for d, m in items)


# ------------------------------------------------------------------ 8 variables

def b8_table(t):
    """T[i][j] = B8(e_i*, e_j*) as a 7-vector (Multivector of degree n-1)."""
    n = t.dim
    cs = contractions(t)
    ct = [wedge(c, t) for c in cs]
    T = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            T[i][j] = T[j][i] = wedge(cs[j], ct[i])
    return T


def m_forms(t, T=None):
    """M[k][i][j] = coefficient of e_k ^ B8(e_i*, e_j*) on the volume form."""
    n = t.dim
    T = b8_table(t) if T is None else T
    out = []
    for k in range(n):
        ek = Multivector.basis_element(n, (k,))
        out.append([[top_pairing_scalar(ek, T[i][j]) for j in range(n)] for i in range(n)])
    return out


def _combine(Ms, l):
    n = len(Ms[0])
    return [[sum((l[k] * Ms[k][i][j] for k in range(len(Ms)) if l[k]), mpq(0)) for j in range(n)]
            for i in range(n)]


def common_image(t, rounds=4, seed=0, Ms=None):
    """Intersection of the column spaces of M_l over seeded random l."""
    n = t.dim
    Ms = m_forms(t) if Ms is None else Ms
    rng = random.Random(f"common-image:{seed}")
    out = None
    for _ in range(rounds):
        l = [rng.randint(-9, 9) for _ in range(n)]
        im = image(_combine(Ms, l))
        out = im if out is None else intersect(out, im)
    return out


def _line(n, tag):
    rng = random.Random(f"signature-line:{tag}:{n}")
    return ([rng.randint(-60, 60) for _ in range(n)], [rng.randint(-60, 60) for _ in range(n)])


def jacobian_pattern(t, T=None):
    n = t.dim
    T = b8_table(t) if T is None else T
    a, b = _line(n, "jacobian")
    coords = [[T[i][j].coordinates() for j in range(n)] for i in range(n)]
    xs, ys = list(range(n + 1)), []
    for s in xs:
        x = [p + s * q for p, q in zip(a, b)]
        J = [[sum((x[i] * coords[i][j][c] for i in range(n) if x[i]), mpq(0)) for j in range(n)]
             for c in range(n)]
        ys.append(det(J))
    return factor_pattern(interpolate(xs, ys))


def border_pattern(t, Ms=None):
    n = t.dim
    Ms = m_forms(t) if Ms is None else Ms
    a, b = _line(n, "border")
    xs, ys = list(range(n + 2)), []
    for s in xs:
        l = [p + s * q for p, q in zip(a, b)]
        M = _combine(Ms, l)
        bordered = [row + [mpq(l[i])] for i, row in enumerate(M)] + [[mpq(x) for x in l] + [mpq(0)]]
        ys.append(det(bordered))
    return factor_pattern(interpolate(xs, ys))


def _x_rank(t):
    cols = [wedge(c, t).coordinates() for c in contractions(t)]
    return rank([list(r) for r in zip(*cols)])


# ------------------------------------------------------------------ 7 variables

def locus_counts(t, primes=LOCUS_PRIMES, need=2):
    """((p, count, kernel_dim), ...) for the first `need` primes with a good model.

    Counts are taken on good_model(t, p), a rational change of basis of t whose
    reduction mod p keeps the essential dimension and the rank of B.
    """
    out = []
    for p in primes:
        try:
            model = good_model(t, p)
        except BadPrime:
            continue
        sols, kdim = decomposable_l_locus(model, p)
        out.append((p, len(sols), kdim))
        if len(out) == need:
            break
    return tuple(out)


# ------------------------------------------------------------------ entry point

def signature(t, counts=False):
    """Signature of a trivector; `counts` adds the GF(p) locus counts (7 variables)."""
    if t.degree != 3:
        raise ContractViolation("signatures are defined for trivectors")
    E = essential_space(t)
    u = E.tensor
    m = E.dim
    base = dict(n_essential=m, ker_c12=E.kernel.dim,
                ker_c21=len(catalecticant(u, 2).col_basis) - rank(catalecticant(u, 2).matrix()))
    if m == 6:
        base["wedge_square"] = "nonzero" if wedge_square_class(u) != 0 else "zero"
    elif m == 7:
        B = b_matrix(u)
        base["b_rank"] = rank(B)
        base["detB"] = "nonzero" if base["b_rank"] == 7 else "zero"
        base["wedge_kernel"] = wedge_kernel(u).dim
        if counts:
            base["locus"] = locus_counts(u)
    elif m == 8:
        T = b8_table(u)
        Ms = m_forms(u, T)
        base["wedge_kernel"] = wedge_kernel(u).dim
        base["r2"] = rank(multiplication_matrix(u, 2))
        base["xr"] = _x_rank(u)
        base["b8_span"] = rank([T[i][j].coordinates() for i in range(8) for j in range(i, 8)])
        base["jacobian"] = jacobian_pattern(u, T)
        base["border"] = border_pattern(u, Ms)
    elif m > 8:
        raise ContractViolation(f"{m} essential variables: signatures cover at most 8")
    return Signature(**base)


# ------------------------------------------------------------------ table

def _label_signatures(label, seeds):
    label = as_label(label)
    sigs = [signature(normal_form(label))]
    sigs += [signature(orbit_sample(label, s)) for s in seeds]
    variants = []
    for s in sigs:
        if s not in variants:
            variants.append(s)
    return label, variants


def build_signature_table(labels=None, seeds=range(10), jobs=1):
    """Signatures of every label's normal form and seeded samples (variants kept)."""
    labels = [as_label(x) for x in (labels or ALL_LABELS)]
    seeds = list(seeds)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_label_signatures, labels, [seeds] * len(labels)))
    else:
        results = [_label_signatures(lab, seeds) for lab in labels]
    entries = []
    for label, variants in results:
        entries.append({"label": str(label), "rank": TABLE[label].rank,
                        "signatures": [v.to_dict() for v in variants]})
    return {"format": TABLE_FORMAT, "version": TABLE_VERSION, "seeds": len(seeds), "entries": entries}


def save_signature_table(table, path):
    with open(path, "w") as fh:
        json.dump(table, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_signature_table(path=None):
    if path is None:
        text = resources.files("skewrank.atlas").joinpath("data/signatures.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    table = json.loads(text)
    if table.get("format") != TABLE_FORMAT or table.get("version") != TABLE_VERSION:
        raise ValueError("unrecognised signature table")
    return table


_CACHE = {}


def match_signature(sig, table=None):
    """Labels whose recorded signatures include sig (finite-field counts ignored)."""
    if table is None:
        if "default" not in _CACHE:
            _CACHE["default"] = load_signature_table()
        table = _CACHE["default"]
    key = sig.key()
    out = []
    for entry in table["entries"]:
        if any(Signature.from_dict(d).key() == key for d in entry["signatures"]):
            out.append(as_label(entry["label"]))
    return out

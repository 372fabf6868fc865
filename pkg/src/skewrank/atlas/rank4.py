"""Four-term decompositions of generic trivectors on C^7 (orbit X).

A line t + s w through a rank-one w meets the detB = 0 hypersurface where
t + s0 w is a sum of three pure terms; t = (t + s0 w) - s0 w.  Rational s0
gives an exact answer; otherwise the three-term split runs in floating point
and the four terms are polished by Gauss-Newton.
"""

from __future__ import annotations

import random

import numpy as np
from gmpy2 import mpq

from ..decomposition import Decomposition, numeric_coordinates
from ..exterior import ContractViolation, decomposable
from ..linalg import rank
from ..polys import degree, rational_roots, squarefree_part, trim
from . import numeric
from .invariants import b_matrix, detB_on_line


class RetryBudgetExhausted(RuntimeError):
    pass


def random_rank_one(n, rng, lo=-9, hi=9):
    while True:
        vs = [[mpq(rng.randint(lo, hi)) for _ in range(n)] for _ in range(3)]
        if rank(vs) == 3:
            return vs


def _exact_attempt(t, w_vecs, s0):
    from .classify import classify
    u = t + decomposable(w_vecs, s0)
    cls = classify(u)
    dec = cls.decomposition
    if dec is None or not dec.exact or len(dec) != 3:
        return None
    out = Decomposition(list(dec.terms), t.dim, 3, note="exact: three-term point on a line + rank one")
    out.append(-s0, w_vecs)
    out.refresh_field()
    return out if out.expand() == t else None


def _numeric_attempt(t, w_vecs, s0, rng, tolerance):
    n = t.dim
    target = numeric_coordinates(t)
    scale = np.linalg.norm(target)
    w = numeric.pure([np.array([float(x) for x in v], dtype=complex) for v in w_vecs], n)
    u = (target + s0 * w) / scale
    terms = numeric.rank3_split(u, rng, n)
    terms = [[v * scale ** (1 / 3) for v in vs] for vs in terms]
    wv = [np.array([float(x) for x in v], dtype=complex) for v in w_vecs]
    wv[0] = -s0 * wv[0]
    terms.append(wv)
    terms, res = numeric.polish(target, terms, n)
    if res >= tolerance:
        return None
    dec = Decomposition([], n, 3, exact=False, note=f"numeric: relative residual {res:.1e}")
    for vs in terms:
        dec.append(complex(1), [[complex(x) for x in v] for v in vs])
    return dec


def rank4_decompose7(t, seed=0, tolerance=1e-9, max_attempts=8):
    """Four pure terms summing to t (7 variables, detB(t) != 0)."""
    if t.degree != 3 or t.dim != 7:
        raise ContractViolation("rank4_decompose7 needs a trivector on a 7-dimensional space")
    if rank(b_matrix(t)) != 7:
        raise ContractViolation("detB(t) = 0: t is a sum of at most three pure terms")
    rng = random.Random(f"rank4:{seed}")
    nrng = np.random.default_rng(rng.randrange(2**32))
    log = []
    for attempt in range(max_attempts):
        w_vecs = random_rank_one(7, rng)
        poly = detB_on_line(t, decomposable(w_vecs))
        sqf = squarefree_part(poly)
        for s0 in rational_roots(sqf):
            dec = _exact_attempt(t, w_vecs, s0)
            if dec is not None:
                return dec
            log.append(f"attempt {attempt}: rational root {s0} gave no exact split")
        coeffs = [complex(float(c)) for c in reversed(trim(sqf))]
        roots = sorted(np.roots(coeffs), key=lambda z: abs(z.imag)) if degree(sqf) > 0 else []
        for s0 in roots:
            try:
                dec = _numeric_attempt(t, w_vecs, complex(s0), nrng, tolerance)
            except numeric.NumericFailure as exc:
                log.append(f"attempt {attempt}: {exc}")
                continue
            if dec is not None:
                return dec
            log.append(f"attempt {attempt}: residual above {tolerance}")
    raise RetryBudgetExhausted("; ".join(log[-5:]))

"""Covariants of trivectors used for classification.

B(x, y) vol = (x . t) ^ (y . t) ^ t   for covectors x, y (7 essential variables)
K(x)(v) vol = v ^ (x . t) ^ t         for a covector x (6 essential variables)
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
from gmpy2 import mpq

from ..exterior import (Multivector, ContractViolation, contract, wedge, top_pairing_scalar,
                        basis_masks, basis_index, merge_sign, catalecticant, apply_linear_map)
from ..linalg import det, rank, kernel, image, BadPrime, modp
from ..polys import interpolate


def unit_covector(n, i):
    return Multivector.basis_element(n, (i,), dual=True)


def covector(coords):
    return Multivector.vector(coords, dual=True)


def contractions(t):
    """[e_i* . t for i in range(n)]."""
    return [contract(unit_covector(t.dim, i), t) for i in range(t.dim)]


def b_matrix(t):
    """Symmetric matrix of B for a trivector in 7 variables."""
    if t.degree != 3 or t.dim != 7:
        raise ContractViolation("B is defined for trivectors on a 7-dimensional space")
    cs = contractions(t)
    ct = [wedge(c, t) for c in cs]
    n = t.dim
    B = [[mpq(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            B[i][j] = B[j][i] = top_pairing_scalar(cs[j], ct[i])
    return B


def b_form(t, x, y):
    """B(x, y) for covectors given as coordinate lists."""
    hx, hy = contract(covector(x), t), contract(covector(y), t)
    return top_pairing_scalar(hx, wedge(hy, t))


def detB(t):
    return det(b_matrix(t))


def detB_on_line(t, w):
    """Exact univariate polynomial s -> detB(t + s w) (degree at most 21)."""
    xs = list(range(22))
    ys = [detB(t + w * s) for s in xs]
    return interpolate(xs, ys)


def wedge_square_class(t):
    """tr(K^2)/3 for a trivector with 6 essential variables: nonzero exactly on orbit V.

    K^2 is this scalar over 2 times the identity; t ^ t itself vanishes for every
    trivector, so it cannot tell IV from V.
    """
    if t.dim != 6:
        from ..apolarity import essential_space
        E = essential_space(t)
        if E.dim != 6:
            raise ContractViolation("wedge_square_class needs 6 essential variables")
        t = E.tensor
    K = k_matrix(t)
    return sum(K[i][j] * K[j][i] for i in range(6) for j in range(6)) / 3


def k_matrix(t):
    """K as a matrix: column i is K(e_i*) in dual coordinates (6 variables)."""
    if t.degree != 3 or t.dim != 6:
        raise ContractViolation("K is defined for trivectors on a 6-dimensional space")
    n = t.dim
    cs = contractions(t)
    cols = []
    for c in cs:
        ct = wedge(c, t)       # degree 5
        col = []
        for j in range(n):
            col.append(top_pairing_scalar(Multivector.basis_element(n, (j,)), ct))
        cols.append(col)
    return [[cols[i][j] for i in range(n)] for j in range(n)]


def multiplication_matrix(t, k=1):
    """Matrix of x -> x ^ t on the degree-k piece (rows: target basis)."""
    n, d = t.dim, t.degree
    tgt = basis_index(n, k + d)
    src = basis_masks(n, k)
    M = [[mpq(0)] * len(src) for _ in range(len(tgt))]
    for j, m in enumerate(src):
        for mt, x in t.mask_coeffs().items():
            if m & mt:
                continue
            sgn = merge_sign(m, mt)
            M[tgt[m | mt]][j] += x if sgn > 0 else -x
    return M


def wedge_kernel(t):
    """Vectors l with l ^ t = 0."""
    return kernel(multiplication_matrix(t, 1), t.dim)


def b_image(t):
    return image(b_matrix(t))


def b_rank(t):
    return rank(b_matrix(t))


# ------------------------------------------------------------------ GF(p) search

def _relation_pairs(n, d):
    """Index data for the Pluecker quadrics of degree-d multivectors in n variables."""
    idx = basis_index(n, d)
    out = []
    for A in combinations(range(n), d - 1):
        for B in combinations(range(n), d + 1):
            terms = []
            for k, b in enumerate(B):
                if b in A:
                    continue
                left = list(A) + [b]
                sl = 1
                for u in range(len(left)):
                    for v in range(u + 1, len(left)):
                        if left[u] > left[v]:
                            sl = -sl
                rest = B[:k] + B[k + 1:]
                mL = sum(1 << i for i in left)
                mR = sum(1 << i for i in rest)
                sign = sl * (1 if k % 2 == 0 else -1)
                terms.append((sign, idx[mL], idx[mR]))
            if len(terms) >= 3:
                out.append(terms)
    return out


_PAIRS = {}


def _pairs(n, d):
    if (n, d) not in _PAIRS:
        _PAIRS[(n, d)] = _relation_pairs(n, d)
    return _PAIRS[(n, d)]


def projective_points(n, p):
    """All points of P^{n-1}(GF(p)), first nonzero coordinate 1, as an int array."""
    chunks = []
    for lead in range(n):
        free = n - lead - 1
        grid = np.indices((p,) * free).reshape(free, -1).T if free else np.zeros((1, 0), dtype=np.int64)
        block = np.zeros((grid.shape[0], n), dtype=np.int64)
        block[:, lead] = 1
        block[:, lead + 1:] = grid
        chunks.append(block)
    return np.concatenate(chunks)


def projective_chunks(n, p, dtype=np.int64):
    """projective_points(n, p) in blocks, one per (leading position, next coordinate)."""
    for lead in range(n):
        free = n - lead - 1
        if free == 0:
            block = np.zeros((1, n), dtype=dtype)
            block[0, lead] = 1
            yield block
            continue
        if free > 1:
            inner = np.indices((p,) * (free - 1), dtype=dtype).reshape(free - 1, -1).T
        else:
            inner = np.zeros((1, 0), dtype=dtype)
        block = np.zeros((len(inner), n), dtype=dtype)
        block[:, lead] = 1
        block[:, lead + 2:] = inner
        for a in range(p):
            block[:, lead + 1] = a
            yield block.copy()


def _screen(P, Qs, p):
    """Rows of P (float32) on which every quadric in Qs vanishes mod p."""
    for Q in Qs:
        if not len(P):
            break
        vals = np.einsum("ij,ij->i", P @ Q, P) % p
        P = P[vals == 0]
    return P


def _quadric_common_zeros(Qs, n, p):
    """Projective common zeros over GF(p) of the quadratic forms Qs (int arrays).

    Points are enumerated by their first n-1 coordinates; along the last one a
    quadric is a x^2 + 2 b x + c, solved with a table of square roots.  Float32
    products are exact here (|values| < n p^3 < 2^24).
    """
    Qs = (Qs + Qs.transpose(0, 2, 1)) * ((p + 1) // 2) % p      # same forms, symmetric
    Qf = Qs.astype(np.float32)
    roots = np.full(p, -1, dtype=np.int64)
    for x in range(p - 1, -1, -1):
        roots[x * x % p] = x
    inv = np.zeros(p, dtype=np.int64)
    inv[1:] = [pow(x, -1, p) for x in range(1, p)]
    last = n - 1
    a = int(Qs[0][last, last]) % p
    if a == 0:
        k = next((k for k, Q in enumerate(Qs) if Q[last, last] % p), None)
        if k is None:
            found = [_screen(P, Qf, p) for P in projective_chunks(n, p, np.float32)]
            return np.concatenate(found).astype(np.int64)
        Qf = np.concatenate([Qf[k:k + 1], Qf[:k], Qf[k + 1:]])
        a = int(Qs[k][last, last]) % p
    first, rest = Qf[0], Qf[1:]
    found = [_screen(np.eye(n, dtype=np.float32)[last:], Qf, p)]
    for U in projective_chunks(n - 1, p, np.float32):
        U = np.concatenate([U, np.zeros((len(U), 1), dtype=np.float32)], axis=1)
        UQ = U @ first
        c = np.einsum("ij,ij->i", UQ, U).astype(np.int64) % p
        b = UQ[:, last].astype(np.int64) % p
        disc = (b * b - a * c) % p
        r = roots[disc]
        ok = r >= 0
        ia = inv[a]
        for sgn in (1, -1):
            keep = ok if sgn == 1 else ok & (disc != 0)
            x = ((-b + sgn * r) * ia) % p
            P = U[keep].copy()
            P[:, last] = x[keep]
            found.append(_screen(P, rest, p))
    return np.concatenate(found).astype(np.int64)


def _rank_mod_p_small(M, p):
    from ..linalg import rank_mod_p
    return rank_mod_p(M, p)


def good_prime(t, p, ref_rank=None):
    """t reduces mod p without denominators and keeps its essential dimension."""
    try:
        C = [[modp(x, p) for x in row] for row in catalecticant(t, 1).matrix()]
    except BadPrime:
        return False
    r = _rank_mod_p_small(C, p)
    if ref_rank is None:
        ref_rank = rank(catalecticant(t, 1).matrix())
    return r == ref_rank


def _p_primitive(t, p):
    """Scale t by a power of p so it is p-integral with some coefficient a p-adic unit."""
    vals = []
    for x in t.coeffs.values():
        x, v = mpq(x), 0
        num, den = int(x.numerator), int(x.denominator)
        while den % p == 0:
            den //= p
            v -= 1
        while num % p == 0:
            num //= p
            v += 1
        vals.append(v)
    return t * mpq(p) ** -min(vals) if vals else t


def good_model(t, p, b_check=True, max_steps=40):
    """A GL(Q)-translate of t with good reduction at p.

    Good means: p-integral, C^{1,2} keeps full rank n mod p, and (7 variables,
    b_check) B keeps its rational rank mod p.  A sample g . NF with p | det g
    usually reduces into a smaller orbit; each step takes a covector x with
    x . t = 0 mod p, moves it to e_i* by a map invertible over Z_(p), and
    divides the e_i direction by p.  Raises BadPrime when the steps run out.
    """
    from ..linalg import kernel_mod_p
    n = t.dim
    C = catalecticant(t, 1).matrix()
    if rank(C) != n:
        raise ContractViolation("good_model needs t essential in its ambient space")
    b_target = rank(b_matrix(t)) if b_check and n == 7 else None
    t = _p_primitive(t, p)
    for _ in range(max_steps):
        Cp = [[modp(x, p) for x in row] for row in catalecticant(t, 1).matrix()]
        ker = kernel_mod_p(Cp, p, n)
        if not ker:
            if b_target is None:
                return t
            Bp = [[modp(x, p) for x in row] for row in b_matrix(t)]
            if _rank_mod_p_small(Bp, p) == b_target:
                return t
            ker = [v for v in kernel_mod_p(Bp, p, n)]
        x = [int(c) % p for c in ker[-1]]
        i = max(k for k in range(n) if x[k])
        g = [[mpq(int(r == c)) for c in range(n)] for r in range(n)]
        g[i] = [mpq(c) for c in x]
        g[i] = [c / p for c in g[i]]          # row i of D g, D = diag(.., 1/p at i, ..)
        t = _p_primitive(apply_linear_map(g, t), p)
    raise BadPrime(f"no good model of the tensor at p = {p}")


def _c13_index(n, d):
    """For a degree-d multivector w: C^{1,d-1}_w[r, i] = sign * w[src] (src = -1 for zero)."""
    ridx = basis_index(n, d - 1)
    src = np.full((len(ridx), n), -1, dtype=np.int64)
    sgn = np.zeros((len(ridx), n), dtype=np.int64)
    widx = basis_index(n, d)
    for rest, r in ridx.items():
        for i in range(n):
            bit = 1 << i
            if rest & bit:
                continue
            src[r, i] = widx[rest | bit]
            sgn[r, i] = merge_sign(bit, rest)
    return src, sgn


def decomposable_l_locus(t, p, n_filters=12, seed=0):
    """Projective l over GF(p) with l ^ t decomposable, by exhaustive enumeration.

    Each candidate is screened with random combinations of the Pluecker quadrics
    of l ^ t (quadratic forms in l); survivors are confirmed by the rank of
    C^{1,3}_{l ^ t} over GF(p) (rank <= 4 means l ^ t is zero or rank one).
    Returns (points, kernel_dim) with kernel_dim = dim{l : l ^ t = 0} over GF(p).
    Raises BadPrime when t has a denominator divisible by p.
    """
    from ..linalg import kernel_mod_p, batched_rank_mod_p
    n, d = t.dim, t.degree
    M = multiplication_matrix(t, 1)                # rows: degree-(d+1) basis, cols: l
    Mp = np.array([[modp(x, p) for x in row] for row in M], dtype=np.int64)
    ker = kernel_mod_p(Mp.tolist(), p, n)
    rng = np.random.default_rng(seed)
    pairs = _pairs(n, d + 1)
    # each quadric is l -> sum sign (Mp[a] . l)(Mp[b] . l); screen with random combinations
    W = rng.integers(0, p, size=(n_filters, len(pairs)))
    Qs = np.zeros((n_filters, n, n), dtype=np.int64)
    for j, terms in enumerate(pairs):
        block = np.zeros((n, n), dtype=np.int64)
        for sign, a, b in terms:
            block += sign * np.outer(Mp[a], Mp[b])
        block %= p
        Qs = (Qs + W[:, j, None, None] * block[None]) % p
    cand = _quadric_common_zeros(Qs, n, p)
    src, sgn = _c13_index(n, d + 1)
    ok = np.zeros(len(cand), dtype=bool)
    for s in range(0, len(cand), 20000):
        P = cand[s:s + 20000]
        lt = P @ Mp.T % p                           # coordinates of l ^ t
        padded = np.concatenate([lt, np.zeros((len(P), 1), dtype=np.int64)], axis=1)
        C = padded[:, src] * sgn[None]
        ok[s:s + 20000] = batched_rank_mod_p(C, p) <= d + 1
    sols = [tuple(int(x) for x in l) for l in cand[ok]]
    return sols, len(ker)

"""Complex floating-point mirror of the trivector operations (rank-4 path only).

Multivectors are numpy vectors in the lex basis; products go through cached
index/sign tables built from the exact bitmask conventions.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..exterior import basis, basis_index, basis_masks, merge_sign


class NumericFailure(RuntimeError):
    pass


@lru_cache(maxsize=None)
def _wedge_table(n, p, q):
    tgt = basis_index(n, p + q)
    ia, ib, ic, sg = [], [], [], []
    for i, a in enumerate(basis_masks(n, p)):
        for j, b in enumerate(basis_masks(n, q)):
            if a & b:
                continue
            ia.append(i)
            ib.append(j)
            ic.append(tgt[a | b])
            sg.append(merge_sign(a, b))
    return np.array(ia), np.array(ib), np.array(ic), np.array(sg, dtype=float)


@lru_cache(maxsize=None)
def _contract_table(n, s, d):
    tgt = basis_index(n, d - s)
    ia, ib, ic, sg = [], [], [], []
    for i, S in enumerate(basis_masks(n, s)):
        for j, T in enumerate(basis_masks(n, d)):
            if S & T != S:
                continue
            ia.append(i)
            ib.append(j)
            ic.append(tgt[T ^ S])
            sg.append(merge_sign(S, T ^ S))
    return np.array(ia), np.array(ib), np.array(ic), np.array(sg, dtype=float)


def _size(n, k):
    return len(basis(n, k))


def wedge(a, b, n, p, q):
    ia, ib, ic, sg = _wedge_table(n, p, q)
    out = np.zeros(_size(n, p + q), dtype=complex)
    np.add.at(out, ic, sg * a[ia] * b[ib])
    return out


def contract(h, v, n, s, d):
    ia, ib, ic, sg = _contract_table(n, s, d)
    out = np.zeros(_size(n, d - s), dtype=complex)
    np.add.at(out, ic, sg * h[ia] * v[ib])
    return out


def wedge_matrix(w, n, p, q):
    """Matrix of x -> x ^ w for x of degree p and fixed w of degree q."""
    ia, ib, ic, sg = _wedge_table(n, p, q)
    M = np.zeros((_size(n, p + q), _size(n, p)), dtype=complex)
    np.add.at(M, (ic, ia), sg * w[ib])
    return M


def unit(n, i):
    e = np.zeros(n, dtype=complex)
    e[i] = 1
    return e


def pure(vectors, n):
    """Coordinates of v_1 ^ ... ^ v_k."""
    out = np.asarray(vectors[0], dtype=complex)
    for k, v in enumerate(vectors[1:], start=1):
        out = wedge(out, np.asarray(v, dtype=complex), n, k, 1)
    return out


def expand(terms, n):
    return sum(pure(vs, n) for vs in terms)


def null_space(A, dim):
    """Orthonormal basis (columns) of {v : A v = 0}, taking the last `dim` singular vectors."""
    _u, _s, vh = np.linalg.svd(np.atleast_2d(A))
    return vh[vh.shape[0] - dim:].conj().T


def contractions(u, n):
    return [contract(unit(n, i), u, n, 1, 3) for i in range(n)]


def b_matrix(u, n=7):
    cs = contractions(u, n)
    B = np.zeros((n, n), dtype=complex)
    for i in range(n):
        ct = wedge(cs[i], u, n, 2, 3)
        for j in range(i, n):
            B[i, j] = B[j, i] = wedge(cs[j], ct, n, 2, 5)[0]
    return B


def k_matrix(u, n=6):
    """Column i holds K(e_i*) in dual coordinates: K(x)(v) vol = v ^ (x . u) ^ u."""
    cs = contractions(u, n)
    K = np.zeros((n, n), dtype=complex)
    for i in range(n):
        ct = wedge(cs[i], u, n, 2, 3)
        for j in range(n):
            K[j, i] = wedge(unit(n, j), ct, n, 1, 5)[0]
    return K


def two_form_factors(beta, n, tol):
    """beta = a ^ b for a numerically rank-one 2-form."""
    S = np.zeros((n, n), dtype=complex)
    for (i, j), x in zip(basis(n, 2), beta):
        S[i, j], S[j, i] = x, -x
    U, s, _vh = np.linalg.svd(S)
    if s[0] == 0 or s[2] > tol * s[0]:
        raise NumericFailure("contraction is not rank one")
    a, b = U[:, 0], U[:, 1]
    w = wedge(a, b, n, 1, 1)
    c = np.vdot(w, beta) / np.vdot(w, w)
    return c * a, b


def split_two_planes(u, n, tol):
    """u = w1 + w2 with w_i pure and complementary factor spaces (K^2 scalar, K != 0)."""
    K = k_matrix(u, n)
    vals, vecs = np.linalg.eig(K)
    ref = vals[np.argmax(np.abs(vals))]
    if abs(ref) == 0:
        raise NumericFailure("K vanishes")
    side = np.real(vals * np.conj(ref)) > 0
    if side.sum() != n // 2:
        raise NumericFailure("eigenvalues do not split evenly")
    planes = []
    for mask in (side, ~side):
        E = vecs[:, mask].T                 # rows: eigen-covectors
        planes.append(null_space(E, n - E.shape[0]))
    ws = [pure(list(P.T), n) for P in planes]
    coef, *_ = np.linalg.lstsq(np.stack(ws, axis=1), u, rcond=None)
    out = []
    for c, P in zip(coef, planes):
        vs = [P[:, k] for k in range(P.shape[1])]
        vs[0] = c * vs[0]
        out.append(vs)
    res = np.linalg.norm(expand(out, n) - u) / max(np.linalg.norm(u), 1e-300)
    if res > tol:
        raise NumericFailure(f"two-plane split residual {res:.2e}")
    return out


def rank3_split(u, rng, n=7, tol=1e-7):
    """Three pure terms summing to u, for u generic on the third secant (orbit IX).

    Mirrors the exact route: a rank-one contraction from the conic in ker B,
    then the two-plane split of the remainder inside a hyperplane.
    """
    B = b_matrix(u, n)
    _U, s, vh = np.linalg.svd(B)
    if s[0] == 0 or s[n - 3] > tol * s[0] * 1e3:
        raise NumericFailure("B does not have a 3-dimensional kernel")
    ker = vh[n - 3:].conj()                 # rows: covectors with B k = 0
    cs = contractions(u, n)
    betas = [sum(k[j] * cs[j] for j in range(n)) for k in ker]
    phi = rng.standard_normal(_size(n, 4)) + 1j * rng.standard_normal(_size(n, 4))
    Q = np.array([[phi @ wedge(a, b, n, 2, 2) for b in betas] for a in betas])
    y0 = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    y1 = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    # (y0 + s y1)^T Q (y0 + s y1) = 0
    roots = np.roots([y1 @ Q @ y1, 2 * (y0 @ Q @ y1), y0 @ Q @ y0])
    y = y0 + roots[0] * y1
    h = y @ ker
    beta = sum(h[j] * cs[j] for j in range(n))
    a, b = two_form_factors(beta, n, tol)
    x = np.conj(h) / np.vdot(h, h)           # h(x) = 1
    rest = u - wedge(x, wedge(a, b, n, 1, 1), n, 1, 2)
    N = null_space(h[None, :], n - 1)        # orthonormal basis of ker h
    lam = np.stack([pure([N[:, i] for i in S], n) for S in basis(n - 1, 3)], axis=1)
    inner = lam.conj().T @ rest
    terms = [[x, a, b]]
    for vs in split_two_planes(inner, n - 1, tol):
        terms.append([N @ v for v in vs])
    return terms


def polish(target, terms, n, iters=30, tol=1e-14):
    """Gauss-Newton on all factor vectors so that sum of terms matches target."""
    terms = [[np.asarray(v, dtype=complex).copy() for v in vs] for vs in terms]
    ref = max(np.linalg.norm(target), 1e-300)
    for _ in range(iters):
        r = expand(terms, n) - target
        if np.linalg.norm(r) / ref < tol:
            break
        cols = []
        for a, b, c in terms:
            cols.append(wedge_matrix(wedge(b, c, n, 1, 1), n, 1, 2))
            cols.append(-wedge_matrix(wedge(a, c, n, 1, 1), n, 1, 2))
            cols.append(wedge_matrix(wedge(a, b, n, 1, 1), n, 1, 2))
        J = np.concatenate(cols, axis=1)
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        k = 0
        for vs in terms:
            for i in range(3):
                vs[i] = vs[i] + step[k:k + n]
                k += n
    res = float(np.linalg.norm(expand(terms, n) - target) / ref)
    return terms, res

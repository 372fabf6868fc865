"""Exact dense linear algebra over Q, Q(sqrt D) and GF(p).

Matrices are plain lists of rows.  Over Q the work is done fraction-free on
integer-scaled rows (Jordan-Bareiss); over Q(sqrt D) by ordinary field
elimination; over GF(p) on Python ints.
"""

from __future__ import annotations

from math import lcm

import gmpy2
from gmpy2 import mpq, mpz

from .scalars import QuadNumber, Q


class BadPrime(ValueError):
    pass


class ReconstructionError(ValueError):
    pass


# fixed list used wherever a "next good prime" is needed
PRIMES = (101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
          179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257)


def _has_quad(rows):
    for r in rows:
        for x in r:
            if isinstance(x, QuadNumber):
                return True
    return False


def _integer_rows(rows):
    out = []
    for r in rows:
        dens = [int(Q(x).denominator) for x in r]
        L = lcm(*dens) if dens else 1
        out.append([int(Q(x).numerator) * (L // d) for x, d in zip(r, dens)])
    return out


def _ff_gauss_jordan(A, ncols):
    """Fraction-free Gauss-Jordan in place on integer rows.

    Returns (pivot columns, final pivot value); pivot rows are A[:rank] and
    every pivot entry equals the final pivot value.
    """
    nrows = len(A)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        rowr = A[r]
        p = rowr[c]
        for i in range(nrows):
            if i == r:
                continue
            rowi = A[i]
            a = rowi[c]
            if a:
                A[i] = [(p * x - a * y) // prev for x, y in zip(rowi, rowr)]
            elif prev == p:
                continue
            elif prev == 1:
                A[i] = [p * x for x in rowi]
            else:
                A[i] = [(p * x) // prev for x in rowi]
        prev = p
        pivots.append(c)
        r += 1
    return pivots, prev


def _field_gauss_jordan(A, ncols):
    nrows = len(A)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c] if not isinstance(A[r][c], QuadNumber) else A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        rowr = A[r]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                a = A[i][c]
                A[i] = [x - a * y for x, y in zip(A[i], rowr)]
        pivots.append(c)
        r += 1
    return pivots


def rref(rows, ncols=None):
    """Reduced row echelon form: (nonzero rows as tuples, pivot columns)."""
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [], []
    if _has_quad(rows):
        A = [[x if isinstance(x, QuadNumber) else Q(x) for x in r] for r in rows]
        piv = _field_gauss_jordan(A, ncols)
        out = []
        for r in A[:len(piv)]:
            out.append(tuple(x.a if isinstance(x, QuadNumber) and x.b == 0 else x for x in r))
        return out, piv
    A = _integer_rows(rows)
    piv, p = _ff_gauss_jordan(A, ncols)
    k = len(piv)
    if k == 0:
        return [], []
    if p < 0:
        p = -p
        A = [[-x for x in r] for r in A[:k]]
    return [tuple(mpq(x, p) for x in r) for r in A[:k]], piv


def rank(rows):
    rows = [list(r) for r in rows]
    if not rows or not rows[0]:
        return 0
    if _has_quad(rows):
        return len(rref(rows)[1])
    A = _integer_rows(rows)
    # forward Bareiss only
    nrows, ncols = len(A), len(A[0])
    prev, r = 1, 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        rowr = A[r]
        for i in range(r + 1, nrows):
            a = A[i][c]
            A[i] = [(p * x - a * y) // prev for x, y in zip(A[i], rowr)]
        prev = p
        r += 1
    return r


def transpose(rows):
    return [list(c) for c in zip(*rows)]


def det(rows):
    n = len(rows)
    if n == 0:
        return mpq(1)
    if _has_quad(rows):
        A = [list(r) for r in rows]
        sign = 1
        total = mpq(1)
        for c in range(n):
            piv = next((i for i in range(c, n) if A[i][c] != 0), None)
            if piv is None:
                return mpq(0)
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                sign = -sign
            p = A[c][c]
            total = total * p
            inv = p.inverse() if isinstance(p, QuadNumber) else 1 / p
            for i in range(c + 1, n):
                a = A[i][c] * inv
                if a != 0:
                    A[i] = [x - a * y for x, y in zip(A[i], A[c])]
        return total * sign
    scale = mpq(1)
    A = []
    for r in rows:
        dens = [int(Q(x).denominator) for x in r]
        L = lcm(*dens)
        scale *= L
        A.append([int(Q(x).numerator) * (L // d) for x, d in zip(r, dens)])
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return mpq(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        p = A[c][c]
        for i in range(c + 1, n):
            a = A[i][c]
            A[i] = [(p * x - a * y) // prev for x, y in zip(A[i], A[c])]
        prev = p
    return mpq(sign * A[n - 1][n - 1]) / scale


class Subspace:
    """Subspace of K^ambient, stored as its canonical RREF basis."""

    __slots__ = ("ambient", "basis", "pivots")

    def __init__(self, ambient, vectors=()):
        self.ambient = ambient
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise ValueError("vector length does not match ambient dimension")
        if vectors:
            self.basis, self.pivots = rref(vectors, ambient)
            self.basis = tuple(self.basis)
            self.pivots = tuple(self.pivots)
        else:
            self.basis, self.pivots = (), ()

    @classmethod
    def full(cls, n):
        return cls(n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.ambient == other.ambient and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"

    def matrix(self):
        return [list(r) for r in self.basis]

    def contains(self, v):
        return self.coordinates(v) is not None

    def contains_space(self, other):
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, v):
        """Coefficients of v in the RREF basis, or None if v is outside."""
        v = list(v)
        coords = [v[p] for p in self.pivots]
        for j in range(self.ambient):
            acc = 0
            for c, row in zip(coords, self.basis):
                if row[j] != 0 and c != 0:
                    acc = acc + c * row[j]
            if acc != v[j]:
                return None
        return coords

    def __add__(self, other):
        if self.ambient != other.ambient:
            raise ValueError("ambient mismatch")
        return Subspace(self.ambient, list(self.basis) + list(other.basis))


def kernel(rows, ncols=None):
    """Right kernel {x : M x = 0}."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    R, piv = rref(rows, ncols) if rows else ([], [])
    free = [j for j in range(ncols) if j not in piv]
    vecs = []
    for f in free:
        x = [mpq(0)] * ncols
        x[f] = mpq(1)
        for row, p in zip(R, piv):
            if row[f] != 0:
                x[p] = -row[f]
        vecs.append(x)
    return Subspace(ncols, vecs)


def image(rows):
    """Column space of M."""
    if not rows:
        return Subspace(0)
    return Subspace(len(rows), transpose(rows))


def row_space(rows, ncols=None):
    if ncols is None:
        ncols = len(rows[0])
    return Subspace(ncols, rows)


def perp(A):
    """Orthogonal complement under the coordinate dot pairing."""
    if A.dim == 0:
        return Subspace.full(A.ambient)
    return kernel(A.matrix(), A.ambient)


def intersect(A, B):
    if A.ambient != B.ambient:
        raise ValueError("ambient mismatch")
    return perp(perp(A) + perp(B))


def complement_basis(A, B):
    """Vectors of B's basis completing a basis of A into one of A + B (greedy)."""
    chosen = []
    cur = A
    for v in B.basis:
        if not cur.contains(v):
            chosen.append(list(v))
            cur = cur + Subspace(A.ambient, [v])
    return chosen


def matmul(A, B):
    Bt = transpose(B)
    return [[sum((x * y for x, y in zip(r, c)), mpq(0)) for c in Bt] for r in A]


def matvec(A, v):
    return [sum((x * y for x, y in zip(r, v)), mpq(0)) for r in A]


def identity(n):
    return [[mpq(1) if i == j else mpq(0) for j in range(n)] for i in range(n)]


def inverse(M):
    n = len(M)
    aug = [list(M[i]) + identity(n)[i] for i in range(n)]
    R, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [list(r[n:]) for r in R[:n]]


def solve(A, b):
    """One solution of A x = b (free variables set to 0), or None."""
    ncols = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [mpq(0)] * ncols
    for row, p in zip(R, piv):
        x[p] = row[ncols]
    return x


# ---------------------------------------------------------------- GF(p)

def modp(x, p):
    if isinstance(x, QuadNumber):
        raise BadPrime("quadratic-field entries have no GF(p) mirror here")
    x = Q(x)
    den = int(x.denominator)
    if den % p == 0:
        raise BadPrime(f"denominator {den} divisible by {p}")
    return int(x.numerator) * pow(den, -1, p) % p


def modp_mirror(rows, p):
    return [[modp(x, p) for x in r] for r in rows]


def rref_mod_p(rows, p, ncols=None):
    A = [[x % p for x in r] for r in rows]
    if ncols is None:
        ncols = len(A[0]) if A else 0
    nrows = len(A)
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        rowr = A[r]
        for i in range(nrows):
            if i != r and A[i][c]:
                a = A[i][c]
                A[i] = [(x - a * y) % p for x, y in zip(A[i], rowr)]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod_p(rows, p):
    return len(rref_mod_p(rows, p)[1])


def kernel_mod_p(rows, p, ncols=None):
    if ncols is None:
        ncols = len(rows[0])
    R, piv = rref_mod_p(rows, p, ncols)
    out = []
    for f in (j for j in range(ncols) if j not in piv):
        x = [0] * ncols
        x[f] = 1
        for row, q in zip(R, piv):
            x[q] = -row[f] % p
        out.append(x)
    return out


def crt(residues, primes):
    r, M = 0, 1
    for a, p in zip(residues, primes):
        # r + M*k = a mod p
        k = ((a - r) * pow(M, -1, p)) % p
        r += M * k
        M *= p
    return r, M


def rational_reconstruct(residues, primes):
    """Smallest a/b with a/b = residue mod prod(primes) and |a|, b <= sqrt(M/2)."""
    r, M = crt(residues, primes)
    bound = int(gmpy2.isqrt(mpz(M) // 2))
    r0, r1 = M, r % M
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        raise ReconstructionError("no rational with small height matches the residues")
    val = mpq(r1, s1)
    for a, p in zip(residues, primes):
        if int(val.denominator) % p == 0 or modp(val, p) != a % p:
            raise ReconstructionError("reconstructed value does not match all residues")
    return val


def batched_rank_mod_p(A, p):
    """Ranks of a stack of matrices A[k] (numpy int array, shape (N, r, c)) over GF(p)."""
    import numpy as np
    A = np.array(A, dtype=np.int64) % p
    N, r, c = A.shape
    rk = np.zeros(N, dtype=np.int64)
    rows = np.arange(r)
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv[x] = pow(x, -1, p)
    for j in range(c):
        live = rk < r
        if not live.any():
            break
        col = A[:, :, j]
        cand = (col != 0) & (rows[None, :] >= rk[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        piv = cand[b].argmax(axis=1)
        dst = rk[b]
        # swap pivot row into position rk
        tmp = A[b, piv].copy()
        A[b, piv] = A[b, dst]
        A[b, dst] = tmp
        prow = A[b, dst] * inv[A[b, dst, j]][:, None] % p
        A[b, dst] = prow
        below = rows[None, :] > dst[:, None]
        f = A[b, :, j] * below
        A[b] = (A[b] - f[:, :, None] * prow[:, None, :]) % p
        rk[b] += 1
    return rk

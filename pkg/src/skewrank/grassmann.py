"""Rank-one (decomposable) multivectors: tests, factors, Pluecker quadrics, 2-forms."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from gmpy2 import mpq

from .decomposition import Decomposition
from .exterior import ContractViolation, catalecticant, decomposable, mask_of, tuple_of
from .linalg import kernel, perp, intersect, Subspace, rank


@dataclass
class DecomposableCertificate:
    factors: list      # echelon basis of the factor space, as coordinate lists
    scale: object

    def tensor(self, dual=False):
        return decomposable(self.factors, self.scale, dual=dual)

    def space(self):
        return Subspace(len(self.factors[0]), self.factors)


def factor_space(t):
    """(ker C^{1,d-1})^perp; equals the factor space when t is rank one."""
    C = catalecticant(t, 1)
    K = kernel(C.matrix(), t.dim)
    return perp(K)


def is_decomposable(t):
    """Certificate if t is a nonzero pure wedge, else None."""
    if t.is_zero():
        raise ContractViolation("the zero tensor has no decomposability certificate")
    d = t.degree
    if d == 0:
        return DecomposableCertificate([], t.mask_coeffs()[0])
    W = factor_space(t)
    if W.dim != d:
        return None
    factors = [list(r) for r in W.basis]
    w = decomposable(factors, dual=t.dual)
    # lex-first nonzero coordinate of t fixes the scale
    masks = sorted(t.mask_coeffs(), key=tuple_of)
    m = masks[0]
    scale = t.mask_coeffs()[m] / w.mask_coeffs()[m]
    return DecomposableCertificate(factors, scale)


def _signed(t, indices):
    """Pluecker coordinate p_{indices} for a possibly unsorted index list."""
    if len(set(indices)) != len(indices):
        return 0
    sign = 1
    idx = list(indices)
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    val = t.mask_coeffs().get(mask_of(idx), 0)
    return val if sign > 0 else -val


def plucker_relation(t, A, B):
    """sum_k (-1)^k p_{A + b_k} p_{B minus b_k} for a (d-1)-tuple A and (d+1)-tuple B."""
    total = mpq(0)
    for k, b in enumerate(B):
        rest = B[:k] + B[k + 1:]
        x = _signed(t, list(A) + [b])
        if x == 0:
            continue
        y = _signed(t, list(rest))
        if y == 0:
            continue
        total = total + (x * y if k % 2 == 0 else -(x * y))
    return total


def plucker_residuals(t):
    """Values of all quadrics plucker_relation(A, B), A and B in lex order."""
    d, n = t.degree, t.dim
    if d == 0:
        return []
    out = []
    for A in combinations(range(n), d - 1):
        for B in combinations(range(n), d + 1):
            out.append(plucker_relation(t, A, B))
    return out


@dataclass
class RankOneSum:
    rank: int
    certificate: object = None


def rank_one_sum(v1, v2):
    """Is v1 + v2 rank one?  Decided by dim(v1-space meet v2-space) >= d - 1."""
    c1, c2 = is_decomposable(v1), is_decomposable(v2)
    if c1 is None or c2 is None:
        raise ContractViolation("rank_one_sum needs decomposable inputs")
    d = v1.degree
    s = v1 + v2
    if s.is_zero():
        return RankOneSum(0, None)
    shared = intersect(c1.space(), c2.space())
    if shared.dim < d - 1:
        return RankOneSum(2, None)
    if shared.dim == d:
        return RankOneSum(1, is_decomposable(s))
    # v_i = a_i x_i ^ w with w spanning the shared (d-1)-space
    w = [list(r) for r in shared.basis]
    parts = []
    for c in (c1, c2):
        x = next(list(r) for r in c.space().basis if not shared.contains(r))
        base = decomposable([x] + w)
        m = next(iter(base.mask_coeffs()))
        val = (v1 if c is c1 else v2).mask_coeffs().get(m, 0)
        parts.append([val / base.mask_coeffs()[m] * xi for xi in x])
    direction = [a + b for a, b in zip(*parts)]
    built = decomposable([direction] + w)
    assert built == s, "rank_one_sum certificate does not reproduce the sum"
    return RankOneSum(1, is_decomposable(s))


def line_in_grassmannian(v1, v2):
    c1, c2 = is_decomposable(v1), is_decomposable(v2)
    if c1 is None or c2 is None:
        raise ContractViolation("line_in_grassmannian needs decomposable inputs")
    if c1.space() == c2.space():
        raise ContractViolation("points coincide projectively")
    return intersect(c1.space(), c2.space()).dim >= v1.degree - 1


def skew_matrix(t):
    n = t.dim
    M = [[mpq(0)] * n for _ in range(n)]
    for (i, j), x in t.coeffs.items():
        M[i][j] = x
        M[j][i] = -x
    return M


def two_form_decompose(t):
    """Split a 2-form into rank/2 decomposable terms by pivot elimination."""
    if t.degree != 2:
        raise ContractViolation("two_form_decompose needs a degree-2 tensor")
    n = t.dim
    dec = Decomposition([], n, 2)
    cur = t
    while not cur.is_zero():
        (i, j), p = next(iter(cur.coeffs.items()))
        M = skew_matrix(cur)
        a, b = M[i], M[j]
        dec.append(1 / p, [a, b])
        cur = cur - decomposable([a, b], 1 / p)
    return dec.refresh_field()


def two_form_rank(t):
    return rank(skew_matrix(t))

"""Multivectors over Q / Q(sqrt D): wedge, dual pairing, contraction, catalecticants.

Basis elements e_{i1}^...^e_{id} (i1 < ... < id) are keyed internally by the
bitmask sum(1 << i).  Every basis listed anywhere is in lex order of index tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from gmpy2 import mpq

from .scalars import QuadNumber, Q

MAX_DIM = 16


class ContractViolation(ValueError):
    pass


def mask_of(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def tuple_of(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def merge_sign(a, b):
    """Sign of e_A ^ e_B relative to e_{A u B}; 0 if A and B overlap."""
    if a & b:
        return 0
    inv = 0
    while a:
        low = a & -a
        inv += (b & (low - 1)).bit_count()
        a ^= low
    return -1 if inv & 1 else 1


def sort_sign(indices):
    """(sign, sorted tuple) for a list of indices; sign 0 on repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


@lru_cache(maxsize=None)
def basis(dim, d):
    """Lex-ordered tuples of the standard basis of the degree-d piece."""
    return tuple(combinations(range(dim), d))


@lru_cache(maxsize=None)
def basis_masks(dim, d):
    return tuple(mask_of(t) for t in basis(dim, d))


@lru_cache(maxsize=None)
def basis_index(dim, d):
    return {m: k for k, m in enumerate(basis_masks(dim, d))}


@lru_cache(maxsize=None)
def sub_masks(mask, s):
    """All submasks of popcount s, lex order of their index tuples."""
    return tuple(mask_of(c) for c in combinations(tuple_of(mask), s))


def _scalar(x):
    if isinstance(x, QuadNumber):
        return x.a if x.b == 0 else x
    return Q(x)


class Multivector:
    """Element of the degree-d exterior power of V (or V* when dual=True)."""

    __slots__ = ("dim", "degree", "dual", "_c")

    def __init__(self, dim, degree, coeffs=None, dual=False, _trusted=False):
        if not 1 <= dim <= MAX_DIM:
            raise ContractViolation(f"ambient dimension {dim} outside 1..{MAX_DIM}")
        if not 0 <= degree <= dim:
            raise ContractViolation(f"degree {degree} outside 0..{dim}")
        self.dim, self.degree, self.dual = dim, degree, bool(dual)
        if _trusted:
            self._c = coeffs
            return
        c = {}
        for key, val in (coeffs or {}).items():
            if isinstance(key, int):
                sign, mask = 1, key
                if mask.bit_count() != degree or mask >> dim:
                    raise ContractViolation(f"bad basis mask {key}")
            else:
                if any(i < 0 or i >= dim for i in key):
                    raise ContractViolation(f"index out of range in {key}")
                sign, tup = sort_sign(key)
                if sign == 0:
                    continue
                if len(tup) != degree:
                    raise ContractViolation(f"term {key} has wrong degree")
                mask = mask_of(tup)
            val = _scalar(val)
            if sign < 0:
                val = -val
            c[mask] = c.get(mask, 0) + val
        self._c = {m: v for m, v in c.items() if v != 0}

    # ---- construction helpers
    @classmethod
    def zero(cls, dim, degree, dual=False):
        return cls(dim, degree, {}, dual, _trusted=True)

    @classmethod
    def basis_element(cls, dim, indices, coeff=1, dual=False):
        return cls(dim, len(indices), {tuple(indices): coeff}, dual)

    @classmethod
    def vector(cls, coords, dual=False):
        coords = list(coords)
        c = {1 << i: _scalar(x) for i, x in enumerate(coords) if x != 0}
        return cls(len(coords), 1, c, dual, _trusted=True)

    @classmethod
    def scalar(cls, dim, value, dual=False):
        v = _scalar(value)
        return cls(dim, 0, {0: v} if v != 0 else {}, dual, _trusted=True)

    @classmethod
    def from_coordinates(cls, dim, degree, coords, dual=False):
        """Inverse of coordinates(): coefficient list in lex basis order."""
        masks = basis_masks(dim, degree)
        c = {m: _scalar(x) for m, x in zip(masks, coords) if x != 0}
        return cls(dim, degree, c, dual, _trusted=True)

    # ---- accessors
    @property
    def coeffs(self):
        """Coefficient map keyed by increasing index tuples, in lex order."""
        return {tuple_of(m): self._c[m] for m in sorted(self._c, key=tuple_of)}

    def mask_coeffs(self):
        return self._c

    def terms(self):
        return list(self.coeffs.items())

    def coordinates(self):
        return [self._c.get(m, mpq(0)) for m in basis_masks(self.dim, self.degree)]

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def field(self):
        D = 0
        for v in self._c.values():
            if isinstance(v, QuadNumber):
                if D and D != v.D:
                    raise ValueError("mixed quadratic fields")
                D = v.D
        return D

    def support(self):
        """Mask of all indices that occur in some term."""
        m = 0
        for k in self._c:
            m |= k
        return m

    # ---- linear structure
    def _check_same(self, other):
        if not isinstance(other, Multivector):
            raise ContractViolation("expected a Multivector")
        if (self.dim, self.degree, self.dual) != (other.dim, other.degree, other.dual):
            raise ContractViolation(
                f"shape mismatch: ({self.dim},{self.degree},{self.dual}) vs "
                f"({other.dim},{other.degree},{other.dual})")

    def __add__(self, other):
        self._check_same(other)
        c = dict(self._c)
        for m, v in other._c.items():
            w = c.get(m, 0) + v
            if w != 0:
                c[m] = w
            else:
                c.pop(m, None)
        return Multivector(self.dim, self.degree, c, self.dual, _trusted=True)

    def __neg__(self):
        return Multivector(self.dim, self.degree, {m: -v for m, v in self._c.items()},
                           self.dual, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, Multivector):
            return NotImplemented
        k = _scalar(k)
        if k == 0:
            return Multivector.zero(self.dim, self.degree, self.dual)
        return Multivector(self.dim, self.degree, {m: k * v for m, v in self._c.items()},
                           self.dual, _trusted=True)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / _scalar(k))

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return ((self.dim, self.degree, self.dual) == (other.dim, other.degree, other.dual)
                and self._c == other._c)

    def __hash__(self):
        return hash((self.dim, self.degree, self.dual, frozenset(self._c.items())))

    def __repr__(self):
        return f"Multivector(dim={self.dim}, degree={self.degree}, dual={self.dual}, {self})"

    def __str__(self):
        if not self._c:
            return "0"
        star = "*" if self.dual else ""
        parts = []
        for tup, v in self.coeffs.items():
            name = "^".join(f"e{i}{star}" for i in tup) or "1"
            parts.append(f"({v})*{name}")
        return " + ".join(parts)

    def map_coefficients(self, f):
        return Multivector(self.dim, self.degree, {m: _scalar(f(v)) for m, v in self._c.items()},
                           self.dual)


def wedge(a, b):
    if a.dim != b.dim or a.dual != b.dual:
        raise ContractViolation("wedge needs equal ambient dimension and dual flag")
    deg = a.degree + b.degree
    if deg > a.dim:
        # past the top power the product vanishes; the top degree carries the zero
        return Multivector.zero(a.dim, a.dim, a.dual)
    c = {}
    for ma, va in a._c.items():
        for mb, vb in b._c.items():
            if ma & mb:
                continue
            sgn = merge_sign(ma, mb)
            m = ma | mb
            prod = va * vb
            c[m] = c.get(m, 0) + (prod if sgn > 0 else -prod)
    c = {m: v for m, v in c.items() if v != 0}
    return Multivector(a.dim, deg, c, a.dual, _trusted=True)


def wedge_all(items):
    items = list(items)
    out = items[0]
    for x in items[1:]:
        out = wedge(out, x)
    return out


def pair(h, v):
    """Dual pairing of equal-degree forms: det[h_a(v_b)] on rank-one arguments."""
    if h.dual == v.dual:
        raise ContractViolation("pair needs one dual and one primal argument")
    if h.dim != v.dim or h.degree != v.degree:
        raise ContractViolation("pair needs equal degree and ambient dimension")
    total = mpq(0)
    small, big = (h, v) if len(h._c) <= len(v._c) else (v, h)
    for m, x in small._c.items():
        y = big._c.get(m)
        if y is not None:
            total = total + x * y
    return total


def contract(h, v):
    """Skew-apolarity action h . v (degree d - s), also with primal/dual roles swapped.

    On basis elements e*_S . e_T = sign(S, T minus S) e_{T minus S} when S is inside T,
    where sign is that of the permutation (S ascending, rest ascending).
    """
    if h.dual == v.dual:
        raise ContractViolation("contract needs one dual and one primal argument")
    if h.dim != v.dim:
        raise ContractViolation("ambient dimension mismatch")
    s, d = h.degree, v.degree
    if s > d:
        raise ContractViolation(f"contraction degree {s} exceeds tensor degree {d}")
    c = {}
    for mh, xh in h._c.items():
        for mv, xv in v._c.items():
            if mh & mv != mh:
                continue
            rest = mv ^ mh
            prod = xh * xv
            if merge_sign(mh, rest) < 0:
                prod = -prod
            c[rest] = c.get(rest, 0) + prod
    c = {m: x for m, x in c.items() if x != 0}
    return Multivector(v.dim, d - s, c, v.dual, _trusted=True)


def top_pairing_scalar(a, b):
    """Coefficient of e_0^...^e_n in a ^ b (a, b of complementary degree)."""
    if a.degree + b.degree != a.dim:
        raise ContractViolation("top_pairing_scalar needs complementary degrees")
    w = wedge(a, b)
    return w._c.get((1 << a.dim) - 1, mpq(0))


@dataclass(frozen=True)
class CatalecticantMatrix:
    """Matrix of h -> h . t from degree-s dual forms to degree (d-s) multivectors."""
    s: int
    d: int
    dim: int
    rows: tuple          # tuple of row tuples, C(dim, d-s) x C(dim, s)
    row_basis: tuple     # index tuples of the target basis
    col_basis: tuple     # index tuples of the source (dual) basis

    @property
    def shape(self):
        return len(self.row_basis), len(self.col_basis)

    def matrix(self):
        return [list(r) for r in self.rows]


def catalecticant(t, s):
    d = t.degree
    if not 0 <= s <= d:
        raise ContractViolation(f"s={s} outside 0..{d}")
    n = t.dim
    ridx = basis_index(n, d - s)
    cidx = basis_index(n, s)
    rows = [[mpq(0)] * len(cidx) for _ in range(len(ridx))]
    for mv, x in t._c.items():
        for ms in sub_masks(mv, s):
            rest = mv ^ ms
            val = x if merge_sign(ms, rest) > 0 else -x
            r, c = ridx[rest], cidx[ms]
            rows[r][c] = rows[r][c] + val
    return CatalecticantMatrix(s, d, n, tuple(tuple(r) for r in rows), basis(n, d - s), basis(n, s))


def apply_linear_map(g, t):
    """Push t forward by g (g[i][j] = i-th coordinate of g(e_j)).

    Dual multivectors are transported by g^{-T} so that pairings are preserved.
    """
    from .linalg import inverse
    n = t.dim
    if t.dual:
        gi = inverse(g)
        g = [[gi[j][i] for j in range(n)] for i in range(n)]
    images = [Multivector.vector([g[i][j] for i in range(n)], dual=t.dual) for j in range(n)]
    out = Multivector.zero(n, t.degree, t.dual)
    acc = {}
    for m, x in t._c.items():
        idx = tuple_of(m)
        if not idx:
            acc[0] = acc.get(0, 0) + x
            continue
        w = wedge_all([images[i] for i in idx])
        for mm, y in w._c.items():
            acc[mm] = acc.get(mm, 0) + x * y
    acc = {m: v for m, v in acc.items() if v != 0}
    return Multivector(n, t.degree, acc, t.dual, _trusted=True) if acc else out


def decomposable(vectors, coeff=1, dual=False):
    """coeff * v_1 ^ ... ^ v_k for coordinate lists v_i."""
    vs = [Multivector.vector(v, dual=dual) for v in vectors]
    return wedge_all(vs) * coeff


def embed(t, dim):
    """View t inside a larger ambient space (same indices)."""
    if dim < t.dim:
        raise ContractViolation("cannot embed into a smaller space")
    return Multivector(dim, t.degree, dict(t._c), t.dual, _trusted=True)

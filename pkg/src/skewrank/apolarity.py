"""Annihilators, apolar ideals of Grassmannian points, essential variables."""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .exterior import (Multivector, ContractViolation, catalecticant, basis, basis_index,
                       basis_masks, mask_of, merge_sign)
from .grassmann import is_decomposable
from .linalg import Subspace, kernel, perp, intersect, solve


@dataclass
class GradedAnnihilator:
    """pieces[s] = ker C_t^{s,d-s} inside the degree-s dual forms (lex coordinates)."""
    dim: int
    degree: int
    pieces: dict

    def dims(self):
        return {s: P.dim for s, P in sorted(self.pieces.items())}

    def forms(self, s):
        return [Multivector.from_coordinates(self.dim, s, row, dual=True)
                for row in self.pieces[s].basis]

    def generator_counts(self, max_degree=None):
        """Minimal generators of t-perp per degree (forms above degree d all annihilate t)."""
        top = self.dim if max_degree is None else max_degree
        pieces = {s: self.pieces[s] if s in self.pieces else Subspace.full(len(basis(self.dim, s)))
                  for s in range(top + 1)}
        return {s: len(g) for s, g in _minimal_generators(pieces, self.dim).items()}


def annihilator(t):
    pieces = {}
    for s in range(t.degree + 1):
        C = catalecticant(t, s)
        pieces[s] = kernel(C.matrix(), len(C.col_basis))
    return GradedAnnihilator(t.dim, t.degree, pieces)


def wedge_with_linear(P, dim, s):
    """Span of V* ^ P for a subspace P of degree-(s-1) dual forms."""
    if P.dim == 0:
        return Subspace(len(basis(dim, s)))
    idx = basis_index(dim, s)
    src = basis_masks(dim, s - 1)
    rows = []
    for row in P.basis:
        for i in range(dim):
            bit = 1 << i
            v = [mpq(0)] * len(idx)
            nz = False
            for m, x in zip(src, row):
                if x == 0 or m & bit:
                    continue
                sgn = merge_sign(bit, m)
                v[idx[m | bit]] += x if sgn > 0 else -x
                nz = True
            if nz:
                rows.append(v)
    return Subspace(len(idx), rows)


def _minimal_generators(pieces, dim):
    """Per degree s, rows of pieces[s] completing V* ^ pieces[s-1] to a basis."""
    out = {}
    prev = None
    for s in sorted(pieces):
        piece = pieces[s]
        below = Subspace(piece.ambient) if prev is None else wedge_with_linear(prev, dim, s)
        assert below.dim <= piece.dim and piece.contains_space(below)
        gens = []
        cur = below
        for row in piece.basis:
            if not cur.contains(row):
                gens.append(list(row))
                cur = cur + Subspace(piece.ambient, [row])
        out[s] = gens
        prev = piece
    return out


@dataclass
class PointIdealReport:
    points: list
    dims: dict = field(default_factory=dict)          # s -> dim of the ideal in degree s
    generator_counts: dict = field(default_factory=dict)
    generators: dict = field(default_factory=dict)    # s -> list of coordinate rows
    pieces: dict = field(default_factory=dict)
    contained_in_annihilator: object = None           # optional Skew-Apolarity check

    def generator_degrees(self):
        return sorted(s for s, c in self.generator_counts.items() if c > 0)


def point_ideal(points, t=None, max_degree=None):
    """Graded pieces and minimal generators of the intersection of the point annihilators."""
    if not points:
        raise ValueError("need at least one point")
    dim, d = points[0].dim, points[0].degree
    for v in points:
        if v.dim != dim or v.degree != d:
            raise ContractViolation("points must share ambient dimension and degree")
        if v.is_zero() or is_decomposable(v) is None:
            raise ContractViolation(f"point is not decomposable: {v}")
    if max_degree is None:
        max_degree = min(d + 1, dim)
    anns = [annihilator(v) for v in points]
    rep = PointIdealReport(list(points))
    for s in range(max_degree + 1):
        if s <= d:
            piece = anns[0].pieces[s]
            for a in anns[1:]:
                piece = intersect(piece, a.pieces[s])
        else:
            # forms of degree above d annihilate every degree-d point
            piece = Subspace.full(len(basis(dim, s)))
        rep.pieces[s] = piece
        rep.dims[s] = piece.dim
    rep.generators = _minimal_generators(rep.pieces, dim)
    rep.generator_counts = {s: len(g) for s, g in rep.generators.items()}
    if t is not None:
        rep.contained_in_annihilator = ideal_in_annihilator(rep, t)
    return rep


def ideal_in_annihilator(rep, t):
    """Degree-d inclusion I_d contained in (t-perp)_d."""
    d = t.degree
    ann_d = kernel(catalecticant(t, d).matrix(), len(basis(t.dim, d)))
    return ann_d.contains_space(rep.pieces[d]) if d in rep.pieces else None


@dataclass
class ApolarityResult:
    holds: bool
    coefficients: list = None
    ideal_condition: bool = None     # I(points) inside t-perp in every degree <= d
    degree_condition: bool = None    # degree-d inclusion only


def apolarity_check(t, points):
    """Skew-Apolarity: t in the span of points iff I_d(points) lies in (t-perp)_d."""
    rep = point_ideal(points, max_degree=t.degree)
    ann = annihilator(t)
    deg_ok = ann.pieces[t.degree].contains_space(rep.pieces[t.degree])
    all_ok = all(ann.pieces[s].contains_space(rep.pieces[s]) for s in range(t.degree + 1))
    coeffs = None
    if deg_ok:
        A = list(zip(*[v.coordinates() for v in points]))
        coeffs = solve([list(r) for r in A], t.coordinates())
        assert coeffs is not None, "ideal inside the annihilator but t is not in the span of the points"
    return ApolarityResult(deg_ok, coeffs, all_ok, deg_ok)


@dataclass
class EssentialSpace:
    space: Subspace            # W, RREF basis as vectors of V
    tensor: Multivector        # t written in the basis of W
    kernel: Subspace           # ker C^{1,d-1} in V*

    @property
    def dim(self):
        return self.space.dim

    def lift(self, coords):
        """Vector of V with the given coordinates in the basis of W."""
        out = [mpq(0)] * self.space.ambient
        for c, row in zip(coords, self.space.basis):
            if c != 0:
                out = [o + c * r for o, r in zip(out, row)]
        return out

    def lift_vectors(self, vectors):
        return [self.lift(v) for v in vectors]


def restrict(t, W, K=None):
    """t rewritten in the RREF basis of a subspace W with t in the d-th power of W."""
    d, m, piv = t.degree, W.dim, W.pivots
    # the RREF basis has identity minors on pivot columns, so coordinates in the
    # basis of W are read off at pivot index tuples
    coeffs = {}
    cm = t.mask_coeffs()
    for tup in basis(m, d):
        x = cm.get(mask_of([piv[i] for i in tup]))
        if x is not None:
            coeffs[tup] = x
    return EssentialSpace(W, Multivector(m, d, coeffs, t.dual), perp(W) if K is None else K)


def essential_space(t):
    if t.is_zero():
        raise ContractViolation("the zero tensor has no essential space")
    C = catalecticant(t, 1)
    K = kernel(C.matrix(), t.dim)
    return restrict(t, perp(K), K)


def generator_forms(rep, s, dim):
    return [Multivector.from_coordinates(dim, s, g, dual=True) for g in rep.generators.get(s, [])]

"""Sums of decomposable terms and their verification."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .exterior import Multivector, decomposable, basis
from .linalg import rank
from .scalars import common_field, to_complex


@dataclass
class Decomposition:
    """terms: list of (scalar, [vector, ...]); vectors are coordinate lists.

    Exact decompositions hold Q or Q(sqrt D) scalars (D recorded in `field`);
    numeric ones hold complex floats and carry exact=False.
    """
    terms: list = field(default_factory=list)
    dim: int = 0
    degree: int = 0
    field: int = 0
    exact: bool = True
    note: str = ""

    def __len__(self):
        return len(self.terms)

    def append(self, coeff, vectors):
        self.terms.append((coeff, [list(v) for v in vectors]))

    def refresh_field(self):
        if self.exact:
            vals = []
            for c, vs in self.terms:
                vals.append(c)
                for v in vs:
                    vals.extend(v)
            self.field = common_field(vals)
        return self

    def expand(self):
        if not self.exact:
            raise ValueError("numeric decomposition: use expand_numeric")
        out = Multivector.zero(self.dim, self.degree)
        for c, vs in self.terms:
            out = out + decomposable(vs, c)
        return out

    def expand_numeric(self):
        return sum((complex_term(c, vs, self.dim) for c, vs in self.terms),
                   np.zeros(len(basis(self.dim, self.degree)), dtype=complex))

    def term_tensors(self):
        return [decomposable(vs, c) for c, vs in self.terms]


def complex_term(c, vectors, dim):
    """Coordinates (lex basis) of c * v1 ^ ... ^ vk in floating point."""
    k = len(vectors)
    M = np.array([[to_complex(x) for x in v] for v in vectors], dtype=complex)
    out = []
    for S in basis(dim, k):
        out.append(np.linalg.det(M[:, S]) if k else 1.0)
    return to_complex(c) * np.array(out, dtype=complex)


def numeric_coordinates(t):
    return np.array([to_complex(x) for x in t.coordinates()], dtype=complex)


def verify_decomposition(t, dec, tolerance=1e-9):
    """Expand dec and compare with t.

    Returns a dict with term_count, exact, residual (0 exactly, or relative
    2-norm for numeric input), ok, and per-term factor independence.
    """
    report = {"term_count": len(dec), "exact": dec.exact, "field": dec.field}
    independent = True
    for _c, vs in dec.terms:
        if dec.exact:
            independent &= rank([list(v) for v in vs]) == len(vs)
        else:
            independent &= np.linalg.matrix_rank(np.array(vs, dtype=complex), tol=1e-12) == len(vs)
    report["terms_nondegenerate"] = bool(independent)
    if dec.exact:
        diff = dec.expand() - t
        report["residual"] = 0 if diff.is_zero() else None
        report["residual_terms"] = len(diff)
        report["ok"] = diff.is_zero()
        if not diff.is_zero():
            ref = np.linalg.norm(numeric_coordinates(t)) or 1.0
            report["residual"] = float(np.linalg.norm(numeric_coordinates(diff)) / ref)
        return report
    target = numeric_coordinates(t)
    got = dec.expand_numeric()
    ref = np.linalg.norm(target) or 1.0
    res = float(np.linalg.norm(got - target) / ref)
    report["residual"] = res
    report["ok"] = res < tolerance
    return report


def pairwise_intersections(dec):
    """dim of the intersection of the factor spaces of each pair of terms."""
    out = {}
    for (i, (_a, u)), (j, (_b, w)) in combinations(enumerate(dec.terms), 2):
        out[(i, j)] = len(u) + len(w) - rank([list(x) for x in u] + [list(x) for x in w])
    return out

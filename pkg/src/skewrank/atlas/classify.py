"""Orbit, skew-symmetric rank and a minimal decomposition for trivectors.

classify6 handles up to 6 essential variables, classify7 seven, classify8
eight (signature table); classify dispatches on the essential dimension.
Every exact decomposition is expanded and compared with the input before it
is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from gmpy2 import mpq

from ..apolarity import essential_space, restrict
from ..decomposition import Decomposition
from ..exterior import ContractViolation, Multivector, contract, decomposable, tuple_of, wedge
from ..grassmann import factor_space, is_decomposable, plucker_residuals, two_form_decompose
from ..linalg import Subspace, complement_basis, inverse, kernel, perp, rank, solve
from ..polys import gcd, quadratic_roots, rational_roots, trim
from ..scalars import QuadNumber, common_field, is_rational_square, sqrt_in_field
from .conic import quadratic_conic_point, rational_conic_point
from .invariants import b_matrix, covector, k_matrix, wedge_kernel, wedge_square_class
from .labels import TABLE, OrbitLabel, normal_form, standard_decomposition

L = OrbitLabel


class UnsupportedDimension(ContractViolation):
    pass


class ExactUnavailable(RuntimeError):
    """No decomposition over Q or a single quadratic field was found."""


class InternalInvariantError(RuntimeError):
    """Invariants contradict each other: a bug, never an input problem."""


@dataclass
class Classification:
    label: OrbitLabel = None
    rank: int = None
    decomposition: Decomposition = None
    essential_dim: int = 0
    candidates: tuple = ()
    signature: object = None
    note: str = ""

    def __iter__(self):
        head = self.label if self.essential_dim <= 7 else frozenset(self.candidates)
        return iter((head, self.rank, self.decomposition))


def _field_of_tensor(t):
    return common_field(t.mask_coeffs().values())


def _lift(dec, E, n):
    out = Decomposition([], n, dec.degree, exact=dec.exact, note=dec.note)
    for c, vs in dec.terms:
        if dec.exact:
            out.append(c, E.lift_vectors(vs))
        else:
            rows = E.space.basis
            lifted = [[sum(complex(x) * complex(float(r[i])) for x, r in zip(v, rows)) for i in range(n)]
                      for v in vs]
            out.append(c, lifted)
    return out.refresh_field()


def _check(dec, t):
    if dec.expand() != t:
        raise InternalInvariantError("decomposition does not expand to the tensor")
    return dec


def _ratio(a, b):
    """a = k b for multivectors a, b (b nonzero); returns k or None."""
    m = min(b.mask_coeffs(), key=tuple_of)
    k = a.mask_coeffs().get(m, 0) / b.mask_coeffs()[m]
    return k if a == b * k else None


# ------------------------------------------------------------------ recipes

def peel_vector(t, l):
    """t = l ^ gamma: split gamma into pure 2-forms and prepend l to each term."""
    j = next(i for i, x in enumerate(l) if x != 0)
    e = Multivector.basis_element(t.dim, (j,), 1 / l[j], dual=True)
    gamma = contract(e, t)
    if wedge(Multivector.vector(l), gamma) != t:
        raise InternalInvariantError("tensor is not divisible by the given vector")
    dec = Decomposition([], t.dim, 3)
    for c, (a, b) in two_form_decompose(gamma).terms:
        dec.append(c, [l, a, b])
    return dec.refresh_field()


def split_two_planes(t):
    """6 essential variables, K^2 = mu^2 I != 0: t = c1 (^ P1) + c2 (^ P2) with P1 + P2 = V."""
    n = t.dim
    K = k_matrix(t)
    mu2 = sum(K[i][j] * K[j][i] for i in range(n) for j in range(n)) / n
    mu = sqrt_in_field(mu2, _field_of_tensor(t))
    if mu is None:
        raise ExactUnavailable(f"eigenvalues +-sqrt({mu2}) need a second quadratic extension")
    planes = []
    for sgn in (1, -1):
        A = [[K[i][j] - (sgn * mu if i == j else 0) for j in range(n)] for i in range(n)]
        E = kernel(A, n)
        P = perp(E)
        if P.dim != 3:
            raise InternalInvariantError("eigenspaces of K are not 3-dimensional")
        planes.append([list(r) for r in P.basis])
    w = [decomposable(P) for P in planes]
    cols = [list(r) for r in zip(w[0].coordinates(), w[1].coordinates())]
    c = solve(cols, t.coordinates())
    if c is None:
        raise InternalInvariantError("tensor is not in the span of the two planes")
    dec = Decomposition([], n, 3)
    for ci, P in zip(c, planes):
        dec.append(ci, P)
    return dec.refresh_field()


def iv_decompose(t):
    """6 essential variables, K nilpotent: P = ann(ker K) is 3-dimensional and t lies in
    (^2 P) ^ V, which gives three terms p_i ^ p_j ^ x_ij."""
    n = t.dim
    K = k_matrix(t)
    P = perp(kernel(K, n))
    if P.dim != 3:
        raise InternalInvariantError(f"ann(ker K) has dimension {P.dim}, expected 3")
    from ..exterior import apply_linear_map
    cols = [list(r) for r in P.basis] + complement_basis(P, Subspace.full(n))
    g = [[cols[j][i] for j in range(n)] for i in range(n)]
    local = apply_linear_map(inverse(g), t)
    x = {}
    for (i, j, k), c in local.coeffs.items():
        if j >= 3:
            raise InternalInvariantError("tensor has a component outside (^2 P) ^ V")
        key = (0, 1) if k < 3 else (i, j)
        vec = x.setdefault(key, [mpq(0)] * n)
        vec[k] += c
    dec = Decomposition([], n, 3)
    for (i, j), vec in sorted(x.items()):
        img = [sum(g[r][k] * vec[k] for k in range(n)) for r in range(n)]
        dec.append(1, [cols[i], cols[j], img])
    return dec.refresh_field()


def complete_through(t, l):
    """l ^ t pure: C = pure term with l ^ C = l ^ t, then peel l off t - C."""
    lt = wedge(Multivector.vector(l), t)
    F = factor_space(lt)
    comp = complement_basis(Subspace(t.dim, [l]), F)
    if len(comp) != 3:
        raise InternalInvariantError("l ^ t is not a pure 4-vector containing l")
    k = _ratio(lt, wedge(Multivector.vector(l), decomposable(comp)))
    rest = t - decomposable(comp, k)
    dec = Decomposition([], t.dim, 3)
    dec.append(k, comp)
    for c, vs in peel_vector(rest, l).terms:
        dec.append(c, vs)
    return dec.refresh_field()


def _pencil_points(t, x, y):
    """Points l of the pencil x + s y (and y itself) with l ^ t pure."""
    vals = []
    for s in (0, 1, -1):
        l = [a + s * b for a, b in zip(x, y)]
        vals.append(plucker_residuals(wedge(Multivector.vector(l), t)))
    g = None
    for r0, r1, rm in zip(*vals):
        f = trim([r0, (r1 - rm) / 2, (r1 + rm) / 2 - r0])
        if f:
            g = f if g is None else gcd(g, f)
    if g is None:
        raise InternalInvariantError("whole pencil lies in the decomposable locus")
    roots = []
    if len(g) == 3:
        disc = g[1] * g[1] - 4 * g[2] * g[0]
        roots = quadratic_roots(g) if disc != 0 else [-g[1] / (2 * g[2])]
    elif len(g) == 2:
        roots = [-g[0] / g[1]]
    pts = [[a + s * b for a, b in zip(x, y)] for s in roots]
    yt = wedge(Multivector.vector(y), t)
    if len(g) < 3 and not yt.is_zero() and is_decomposable(yt) is not None:
        pts.append(list(y))
    return pts


def viii_decompose(t, B):
    im = perp(kernel(B, t.dim))
    x, y = [list(r) for r in im.basis]
    pts = _pencil_points(t, x, y)
    if len(pts) != 2:
        raise InternalInvariantError(f"expected two decomposable points, found {len(pts)}")
    l1, l2 = pts
    lt = wedge(Multivector.vector(l2), t)
    comp = complement_basis(Subspace(t.dim, [l1, l2]), factor_space(lt))
    A0 = decomposable([l1] + comp)
    k = _ratio(lt, wedge(Multivector.vector(l2), A0))
    if k is None:
        raise InternalInvariantError("l2 ^ t is not l2 ^ (pure term through l1)")
    dec = Decomposition([], t.dim, 3)
    dec.append(k, [l1] + comp)
    for c, vs in peel_vector(t - A0 * k, l2).terms:
        dec.append(c, vs)
    return dec.refresh_field()


def _hyperplane_candidates(h, span, tries, seed):
    """Vectors x in span with h(x) = 1: the spanning vectors first, then seeded combinations."""
    rng = random.Random(f"hyperplane:{seed}")
    combos = [[int(i == j) for i in range(len(span))] for j in range(len(span))]
    combos += [[rng.randint(-3, 3) for _ in span] for _ in range(tries)]
    for cs in combos:
        v = [sum(c * s[i] for c, s in zip(cs, span) if c) for i in range(len(h))]
        hv = sum(a * b for a, b in zip(h, v))
        if hv != 0:
            yield [c / hv for c in v]


def _height(q):
    q = mpq(q)
    return abs(q.numerator) * q.denominator


def _quadric(f, m):
    """Symmetric G with f(c) = (c, 1)^T G (c, 1) for a quadratic polynomial f on Q^m."""
    unit = lambda *ks: [mpq(sum(v for k, v in ks if k == i)) for i in range(m)]
    g0 = f(unit())
    fp = [f(unit((k, 1))) for k in range(m)]
    fm = [f(unit((k, -1))) for k in range(m)]
    G = [[mpq(0)] * (m + 1) for _ in range(m + 1)]
    for k in range(m):
        G[k][k] = (fp[k] + fm[k]) / 2 - g0
        G[k][m] = G[m][k] = (fp[k] - fm[k]) / 4
        for l in range(k + 1, m):
            G[k][l] = G[l][k] = (f(unit((k, 1), (l, 1))) - fp[k] - fp[l] + g0) / 2
    G[m][m] = g0
    return G


def _square_value(f, m):
    """c in Q^m with f(c) a nonzero rational square, f quadratic; None if not found.

    Homogenized, f is a form on Q^(m+1).  An isotropic vector p of its
    nondegenerate part spans a hyperbolic plane with any q, H(p, q) != 0,
    and a p + q takes the value 1 for one rational a.  Radical vectors
    shift the point off the plane at infinity.
    """
    G = _quadric(f, m)
    form = lambda u, v: sum(u[i] * G[i][j] * v[j] for i in range(m + 1) for j in range(m + 1) if u[i] and v[j])
    R = kernel(G, m + 1)
    U = complement_basis(R, Subspace.full(m + 1))
    if not U:
        return None
    H = [[form(u, v) for v in U] for u in U]
    k = len(U)
    iso = None
    if k == 2:
        r = quadratic_roots([H[1][1], 2 * H[0][1], H[0][0]]) if H[0][0] else None
        if H[0][0] == 0:
            iso = [mpq(1), mpq(0)]
        elif r and not isinstance(r[0], QuadNumber):
            iso = [r[0], mpq(1)]
    elif k >= 3:
        y = rational_conic_point([row[:3] for row in H[:3]])
        if y is not None:
            iso = list(y) + [mpq(0)] * (k - 3)
    cands = []
    if iso is not None:
        pv = [sum(iso[i] * U[i][j] for i in range(k)) for j in range(m + 1)]
        for qv in U:
            b = form(pv, qv)
            if b != 0:
                a = (1 - form(qv, qv)) / (2 * b)
                cands.append([a * x + y for x, y in zip(pv, qv)])
    cands += [list(u) for u in U if is_rational_square(form(u, u)) and form(u, u) != 0]
    for z in cands:
        if z[m] == 0:
            r = next((list(v) for v in R.basis if v[m] != 0), None)
            if r is None:
                continue
            z = [x + y for x, y in zip(z, r)]
        return [x / z[m] for x in z[:m]]
    return None


def _rank_one_hyperplane_split(t, h, span, tries=60, seed=0):
    """h . t pure: look for x in span with h(x) = 1 and t - x ^ (h . t) a two-plane tensor.

    The remainder lives on ker h, where its K-scalar is quadratic along lines
    of x; a rational split is a rational point of a conic.  Failing that, the
    candidate with the smallest K-scalar is split over Q(sqrt D).
    """
    beta = contract(covector(h), t)
    cert = is_decomposable(beta)
    if cert is None:
        raise InternalInvariantError("contraction is not pure")
    cands = list(_hyperplane_candidates(h, span, tries, seed))
    if not cands:
        raise ExactUnavailable("no vector of the span is off the hyperplane")
    W = perp(Subspace(t.dim, [h]))
    if W.dim > 6:
        # the remainders share a 6-dimensional essential space (checked below)
        W = essential_space(t - wedge(Multivector.vector(cands[0]), beta)).space
        if W.dim != 6:
            raise ExactUnavailable("remainder does not have 6 essential variables")
    W_perp = [covector(list(r)) for r in perp(W).basis]

    def remainder(xv):
        rest = t - wedge(Multivector.vector(xv), beta)
        if any(not contract(g, rest).is_zero() for g in W_perp):
            raise ExactUnavailable("remainders leave the common 6-dimensional space")
        E = restrict(rest, W)
        return E, wedge_square_class(E.tensor)

    choice = None
    if _field_of_tensor(t) == 0 and not any(isinstance(x, QuadNumber) for x in h):
        x0 = cands[0]
        dirs = Subspace(t.dim, [[a - b for a, b in zip(x, x0)] for x in cands[1:] if x != x0]).basis
        m = len(dirs)
        at = lambda c: [x0[i] + sum(c[k] * dirs[k][i] for k in range(m) if c[k]) for i in range(t.dim)]
        c = _square_value(lambda c: remainder(at(c))[1] / 2, m) if m else None
        if c is not None:
            choice = at(c)
    if choice is None:
        found = [(xv, lam) for xv in cands for lam in [remainder(xv)[1]] if lam != 0]
        if not found:
            raise ExactUnavailable("no hyperplane split found")
        rational = [f for f in found if not isinstance(f[1], QuadNumber)]
        if rational:
            found = sorted(rational, key=lambda f: (not is_rational_square(f[1] / 2), _height(f[1])))
        choice = found[0][0]
    E, lam = remainder(choice)
    if lam == 0:
        raise InternalInvariantError("chosen remainder is not a two-plane tensor")
    part = _lift(split_two_planes(E.tensor), E, t.dim)
    dec = Decomposition([], t.dim, 3)
    dec.append(cert.scale, [choice] + cert.factors)
    for c, vs in part.terms:
        dec.append(c, vs)
    return dec.refresh_field()


def ix_decompose(t, B):
    """A point h of the conic {h in ker B : h . t pure}, then t = x ^ (h . t) + V-part."""
    n = t.dim
    K = [list(r) for r in kernel(B, n).basis]
    betas = [contract(covector(k), t) for k in K]
    prods = [[wedge(betas[i], betas[j]).coordinates() for j in range(3)] for i in range(3)]
    c = next(c for c in range(len(prods[0][0])) if any(prods[i][j][c] for i in range(3) for j in range(3)))
    Q = [[prods[i][j][c] for j in range(3)] for i in range(3)]
    y = rational_conic_point(Q)
    if y is None:
        y = quadratic_conic_point(Q)
    h = [sum(y[i] * K[i][j] for i in range(3)) for j in range(n)]
    units = [[mpq(int(i == j)) for i in range(n)] for j in range(n)]
    return _rank_one_hyperplane_split(t, h, units)


def vii_decompose(t, B):
    l = list(perp(kernel(B, t.dim)).basis[0])
    return complete_through(t, l)


# ------------------------------------------------------------------ 8 variables

def split_pure_through(t, l):
    """t = C + l ^ w with C pure and w of rank 4 modulo l, given l ^ t pure.

    In a basis (l, F, R) adapted to the factor space of l ^ t, w has the
    coefficient matrix [[A, B], [-B^T, D]] on R + F; rank 4 forces the F-block
    to -B^T A^-1 B, and the difference moves into the pure term.
    """
    n = t.dim
    F = factor_space(wedge(Multivector.vector(l), t))
    fs = complement_basis(Subspace(n, [l]), F)
    rs = complement_basis(F, Subspace.full(n))
    basis_ = [list(l)] + fs + rs
    if len(fs) != 3 or len(basis_) != n:
        raise InternalInvariantError("l ^ t is not a pure 4-vector containing l")
    duals = [list(r) for r in inverse([list(c) for c in zip(*basis_)])]
    beta = contract(covector(duals[0]), t)
    coef = [[mpq(0)] * n for _ in range(n)]
    for i in range(1, n):
        di = contract(covector(duals[i]), beta).coordinates()
        for j in range(1, n):
            coef[i][j] = sum(a * b for a, b in zip(di, duals[j]) if a and b)
    Ri, Fi = list(range(4, n)), [1, 2, 3]
    A = [[coef[i][j] for j in Ri] for i in Ri]
    if rank(A) != len(Ri):
        raise ExactUnavailable("the complementary block is singular")
    Ainv = inverse(A)
    Bm = [[coef[i][j] for j in Fi] for i in Ri]
    sigma = Multivector.zero(n, 2)
    for x in range(3):
        for y in range(x + 1, 3):
            target = -sum(Bm[p][x] * Ainv[p][q] * Bm[q][y] for p in range(len(Ri)) for q in range(len(Ri)))
            c = coef[Fi[x]][Fi[y]] - target
            if c:
                sigma = sigma + decomposable([basis_[Fi[x]], basis_[Fi[y]]], c)
    lw = wedge(Multivector.vector(l), beta - sigma)
    C = t - lw
    cert = is_decomposable(C)
    if cert is None:
        raise InternalInvariantError("corrected term is not pure")
    dec = Decomposition([], n, 3)
    dec.append(cert.scale, cert.factors)
    for c, vs in peel_vector(lw, l).terms:
        dec.append(c, vs)
    return dec.refresh_field()


def xvi_decompose(t, seed=0):
    from .signature import common_image
    im = common_image(t, seed=seed)
    if im.dim != 1:
        raise InternalInvariantError(f"common image has dimension {im.dim}, expected 1")
    return split_pure_through(t, list(im.basis[0]))


def xix_decompose(t, seed=0):
    """Pi = common image of the M_l; on ann(Pi) the rank-one contractions form
    2-planes H = ker(A_y - mu A_x); x from the factor spaces over H, then the
    remainder is a two-plane tensor."""
    from .signature import common_image
    from ..polys import interpolate
    from ..linalg import det
    n = t.dim
    Pi = common_image(t, seed=seed)
    if Pi.dim != 2:
        raise InternalInvariantError(f"common image has dimension {Pi.dim}, expected 2")
    piv = Pi.pivots
    pis = [list(r) for r in Pi.basis]
    rest = [j for j in range(n) if j not in piv]
    f = [Multivector.basis_element(n, (p,), dual=True) for p in piv]
    H = [list(r) for r in perp(Pi).basis]

    def mod_pi(v):
        for a, p in enumerate(piv):
            if v[p]:
                v = [x - v[p] * y for x, y in zip(v, pis[a])]
        return [v[j] for j in rest]

    Ax, Ay = [], []
    for h in H:
        om = contract(covector(h), t)
        Ax.append(mod_pi(contract(f[0], om).coordinates()))
        Ay.append(mod_pi(contract(f[1], om).coordinates()))
    Ax, Ay = [list(r) for r in zip(*Ax)], [list(r) for r in zip(*Ay)]
    m = len(H)

    def pencil(mu):
        return [[Ay[i][j] - mu * Ax[i][j] for j in range(m)] for i in range(m)]

    poly = interpolate(list(range(m + 1)), [det(pencil(mu)) for mu in range(m + 1)])
    mats = [pencil(mu) for mu in rational_roots(poly)] + [Ax]
    err = None
    for A in mats:
        Kd = kernel(A, m)
        if Kd.dim != 2:
            continue
        hs = [[sum(c * H[k][i] for k, c in enumerate(kv)) for i in range(n)] for kv in Kd.basis]
        P3 = factor_space(contract(covector(hs[0]), t)) + factor_space(contract(covector(hs[1]), t))
        if P3.dim != 3:
            continue
        try:
            return _rank_one_hyperplane_split(t, hs[0], [list(r) for r in P3.basis])
        except ExactUnavailable as exc:
            err = exc
    raise err or ExactUnavailable("no rational rank-one plane found on ann(Pi)")


# ------------------------------------------------------------------ classifiers

def _reduce(t):
    if t.degree != 3:
        raise ContractViolation("classification is defined for trivectors")
    if t.is_zero():
        raise ContractViolation("the zero tensor has rank 0 and no orbit")
    return essential_space(t)


def _finish(label, E, t, recipe, *args):
    info = TABLE[label]
    out = Classification(label, info.rank, None, E.dim, (label,))
    try:
        dec = recipe(E.tensor, *args)
    except ExactUnavailable as exc:
        out.note = f"exact decomposition unavailable: {exc}"
        return out
    dec = _lift(dec, E, t.dim)
    if dec.exact:
        _check(dec, t)
    if len(dec) != info.rank:
        raise InternalInvariantError(f"{label}: {len(dec)} terms, expected {info.rank}")
    dec.note = f"{label} recipe"
    out.decomposition = dec
    return out


def _single_term(u):
    (idx, c), = u.coeffs.items()
    n = u.dim
    dec = Decomposition([], n, 3)
    dec.append(c, [[mpq(int(i == j)) for i in range(n)] for j in idx])
    return dec.refresh_field()


def classify6(t):
    E = _reduce(t)
    m = E.dim
    if m > 6:
        raise UnsupportedDimension(f"{m} essential variables: use classify7 or classify8")
    if m == 3:
        return _finish(L.II, E, t, _single_term)
    if m == 5:
        v0 = wedge_kernel(E.tensor)
        if v0.dim != 1:
            raise InternalInvariantError("five essential variables but no unique common vector")
        return _finish(L.III, E, t, peel_vector, list(v0.basis[0]))
    if m == 6:
        if wedge_square_class(E.tensor) != 0:
            return _finish(L.V, E, t, split_two_planes)
        return _finish(L.IV, E, t, iv_decompose)
    raise InternalInvariantError(f"a trivector cannot have {m} essential variables")


def classify7(t, seed=0, tolerance=1e-9):
    E = _reduce(t)
    if E.dim < 7:
        return classify6(t)
    if E.dim > 7:
        raise UnsupportedDimension(f"{E.dim} essential variables: use classify8")
    u = E.tensor
    B = b_matrix(u)
    r = rank(B)
    if r == 7:
        from .rank4 import rank4_decompose7
        return _finish(L.X, E, t, lambda v: rank4_decompose7(v, seed=seed, tolerance=tolerance))
    if r == 4:
        return _finish(L.IX, E, t, ix_decompose, B)
    if r == 2:
        return _finish(L.VIII, E, t, viii_decompose, B)
    if r == 1:
        v0 = wedge_kernel(u)
        if v0.dim:
            return _finish(L.VI, E, t, peel_vector, list(v0.basis[0]))
        return _finish(L.VII, E, t, vii_decompose, B)
    raise InternalInvariantError(f"B has rank {r} on 7 essential variables")


def classify8(t, seed=0, table=None):
    from .signature import match_signature, signature
    E = _reduce(t)
    if E.dim < 8:
        return classify7(t, seed=seed)
    if E.dim > 8:
        raise UnsupportedDimension(f"{E.dim} essential variables: at most 8 are classified")
    sig = signature(E.tensor)
    cands = tuple(match_signature(sig, table))
    if not cands:
        raise InternalInvariantError(f"signature matches no orbit: {sig}")
    ranks = {TABLE[c].rank for c in cands}
    rk = ranks.pop() if len(ranks) == 1 else None
    recipes = {L.XVI: xvi_decompose, L.XIX: xix_decompose}
    literal = [c for c in cands if TABLE[c].explicit_sd and E.tensor == normal_form(c)]
    if len(cands) == 1 and cands[0] in recipes:
        out = _finish(cands[0], E, t, recipes[cands[0]], seed)
    elif literal:
        # the input is a tabulated normal form, so its table row is a certificate
        out = _finish(literal[0], E, t, lambda u: standard_decomposition(literal[0]))
    else:
        out = Classification(cands[0] if len(cands) == 1 else None, rk, None, 8, cands)
        if len(cands) > 1:
            out.note = "signature shared by " + ", ".join(str(c) for c in cands)
    out.candidates = cands
    out.signature = sig
    return out


def classify(t, seed=0, tolerance=1e-9):
    """Dispatch on the number of essential variables."""
    E = _reduce(t)
    if E.dim <= 6:
        return classify6(t)
    if E.dim == 7:
        return classify7(t, seed=seed, tolerance=tolerance)
    if E.dim == 8:
        return classify8(t, seed=seed)
    raise UnsupportedDimension(f"{E.dim} essential variables: at most 8 are classified")

"""Points on plane conics y^T Q y = 0: rational when one exists, else quadratic."""

from __future__ import annotations

import math
from gmpy2 import mpq

from ..linalg import det, kernel
from ..polys import quadratic_roots


def _form_value(Q, y):
    return sum(Q[i][j] * y[i] * y[j] for i in range(3) for j in range(3))


def _integer_matrix(Q):
    den = 1
    for row in Q:
        for x in row:
            den = math.lcm(den, int(mpq(x).denominator))
    return [[int(mpq(x) * den) for x in row] for row in Q]


def _primitive(v):
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    if g == 0:
        return None
    v = [int(x) // g for x in v]
    if next(x for x in v if x) < 0:
        v = [-x for x in v]
    return v


def _bilinear(Q, u, v):
    return sum(Q[i][j] * u[i] * v[j] for i in range(3) for j in range(3))


def _legendre_normal(coef):
    """Square-free, pairwise coprime coefficients for sum coef_i x_i^2 = 0.

    Returns (coef', m) with x_i = m_i X_i mapping solutions of the new form
    back.  sympy's own normalization mishandles a prime shared by two
    coefficients, so only already-normal forms are handed to it.
    """
    import sympy
    coef = list(coef)
    m = [mpq(1)] * 3
    for i, c in enumerate(coef):
        sq = 1
        for p, e in sympy.factorint(abs(c)).items():
            sq *= int(p) ** (e // 2)
        coef[i] = c // (sq * sq)
        m[i] /= sq
    changed = True
    while changed:
        changed = False
        g = math.gcd(*coef)
        if g > 1:
            coef = [c // g for c in coef]
        for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            p = math.gcd(coef[i], coef[j])
            if p > 1:
                # p (c_i x^2 + c_j y^2 + c_k z^2) = (c_i/p)(p x)^2 + (c_j/p)(p y)^2 + p c_k z^2
                coef[i] //= p
                coef[j] //= p
                coef[k] *= p
                m[i] /= p
                m[j] /= p
                changed = True
    return coef, m


def rational_conic_point(Q):
    """A nonzero rational y with y^T Q y = 0, or None when the conic has no rational point.

    Q is diagonalized by exact Gram-Schmidt; the diagonal form a x^2 + b y^2 + c z^2
    is normalized here and goes to sympy's Legendre solver.
    """
    import sympy
    from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

    Q = [[mpq(x) for x in row] for row in Q]
    if det(Q) == 0:
        return [mpq(x) for x in kernel(Q, 3).basis[0]]
    orth, diag = [], []
    for k in range(3):
        v = [mpq(int(i == k)) for i in range(3)]
        w = list(v)
        for u, d in zip(orth, diag):
            c = _bilinear(Q, u, v) / d
            w = [a - c * b for a, b in zip(w, u)]
        d = _bilinear(Q, w, w)
        if d == 0:
            return w
        orth.append(w)
        diag.append(d)
    den = 1
    for d in diag:
        den = math.lcm(den, int(d.denominator))
    coef, scale = _legendre_normal([int(d * den) for d in diag])
    if sum(1 for c in coef if c > 0) in (0, 3):
        return None
    x = sympy.symbols("x0:3", integer=True)
    sol = diop_ternary_quadratic_normal(sum(c * xi**2 for c, xi in zip(coef, x)))
    if sol is None or sol[0] is None or not any(sol):
        return None
    y = [sum(int(sol[k]) * scale[k] * orth[k][i] for k in range(3)) for i in range(3)]
    den = 1
    for a in y:
        den = math.lcm(den, int(a.denominator))
    y = [mpq(v) for v in _primitive([int(a * den) for a in y])]
    assert _form_value(Q, y) == 0
    return y


def quadratic_conic_point(Q):
    """A point over some Q(sqrt D), on the line through e_0 and e_1."""
    if Q[1][1] == 0:
        return [mpq(0), mpq(1), mpq(0)]
    # (e_0 + s e_1)^T Q (e_0 + s e_1) = Q_00 + 2 Q_01 s + Q_11 s^2
    s = quadratic_roots([mpq(Q[0][0]), 2 * mpq(Q[0][1]), mpq(Q[1][1])])[0]
    return [mpq(1), s, mpq(0)]

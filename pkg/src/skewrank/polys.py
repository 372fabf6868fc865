"""Univariate polynomials over Q as coefficient lists, lowest degree first."""

from __future__ import annotations

from gmpy2 import mpq

from .linalg import det
from .scalars import Q, sqrt_exact


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f):
    return len(trim(f)) - 1


def evaluate(f, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def add(f, g):
    n = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)])


def mul(f, g):
    if not f or not g:
        return []
    out = [mpq(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim(out)


def scale(f, k):
    return trim([k * c for c in f])


def derivative(f):
    return trim([i * c for i, c in enumerate(f)][1:])


def divmod_poly(f, g):
    f, g = trim(f), trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [mpq(0)] * max(len(f) - len(g) + 1, 1)
    r = [Q(c) for c in f]
    lead = Q(g[-1])
    while len(r) >= len(g) and r:
        k = len(r) - len(g)
        c = r[-1] / lead
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] -= c * b
        r = trim(r)
    return trim(q), r


def monic(f):
    f = trim(f)
    if not f:
        return f
    lead = Q(f[-1])
    return [Q(c) / lead for c in f]


def gcd(f, g):
    a, b = monic(f), monic(g)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, monic(r)
    return a


def squarefree_part(f):
    f = trim(f)
    if degree(f) <= 0:
        return monic(f)
    g = gcd(f, derivative(f))
    q, r = divmod_poly(f, g)
    assert not r
    return monic(q)


def interpolate(xs, ys):
    """Newton interpolation through the points (xs[i], ys[i])."""
    xs = [Q(x) for x in xs]
    coef = [Q(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [coef[-1]]
    for i in range(n - 2, -1, -1):
        poly = add(mul(poly, [-xs[i], mpq(1)]), [coef[i]])
    return trim(poly)


def charpoly(M):
    """det(x I - M) via interpolation of exact determinants."""
    n = len(M)
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        A = [[(x if i == j else 0) - M[i][j] for j in range(n)] for i in range(n)]
        ys.append(det(A))
    return interpolate(xs, ys)


def quadratic_roots(f):
    """Roots of a degree-2 polynomial, in Q or a common Q(sqrt D)."""
    c, b, a = [Q(x) for x in trim(f)]
    disc = b * b - 4 * a * c
    r = sqrt_exact(disc)
    return [(-b + r) / (2 * a), (-b - r) / (2 * a)]


def rational_roots(f):
    """Distinct rational roots of f (factorization done by sympy)."""
    import sympy
    f = trim(f)
    if degree(f) <= 0:
        return []
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(int(Q(c).numerator), int(Q(c).denominator)) * x**i
               for i, c in enumerate(f))
    _, factors = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    out = []
    for fac, _mult in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            root = -sympy.Rational(b) / sympy.Rational(a)
            out.append(mpq(int(root.p), int(root.q)))
    return sorted(out)


def factor_degrees(f):
    import sympy
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(int(Q(c).numerator), int(Q(c).denominator)) * x**i
               for i, c in enumerate(trim(f)))
    _, factors = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    return sorted((fac.degree(), m) for fac, m in factors)

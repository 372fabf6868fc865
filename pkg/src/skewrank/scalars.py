"""Exact scalars: rationals (gmpy2.mpq) and elements of a quadratic field Q(sqrt D)."""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz


def squarefree_split(n):
    """Return (c, D) with n = c^2 * D and D square-free (sign kept in D)."""
    n = int(n)
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    if gmpy2.is_square(mpz(n)):
        return int(gmpy2.isqrt(mpz(n))), sign
    if n > 10**12:
        import sympy
        c, D = 1, 1
        for q, e in sympy.factorint(n).items():
            c *= q ** (e // 2)
            D *= q ** (e % 2)
        return c, sign * D
    c = 1
    d = 2
    while d * d <= n:
        while n % (d * d) == 0:
            n //= d * d
            c *= d
        d += 1 if d == 2 else 2
    return c, sign * n


def Q(x):
    """Coerce an int / Fraction / 'p/q' string / mpq into mpq."""
    if isinstance(x, QuadNumber):
        raise TypeError("QuadNumber is not rational")
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


class QuadNumber:
    """a + b*sqrt(D) with a, b rational and D square-free, D != 0, 1."""

    __slots__ = ("a", "b", "D")

    def __init__(self, a, b, D):
        a, b = Q(a), Q(b)
        c, D = squarefree_split(D)
        if D == 0:
            raise ValueError("D must be nonzero")
        if D == 1:
            a, b = a + b * c, mpq(0)
        else:
            b = b * c
        self.a, self.b, self.D = a, b, D

    @classmethod
    def _raw(cls, a, b, D):
        """D already square-free."""
        q = object.__new__(cls)
        q.a, q.b, q.D = a, b, D
        return q

    # constructor that collapses to a rational when possible
    @staticmethod
    def make(a, b, D):
        q = QuadNumber(a, b, D)
        if q.b == 0 or q.D == 1:
            return q.a
        return q

    @staticmethod
    def _make(a, b, D):
        return a if b == 0 else QuadNumber._raw(a, b, D)

    def _coerce(self, other):
        if isinstance(other, QuadNumber):
            if other.D != self.D:
                raise ValueError(f"mixed quadratic fields D={self.D} and D={other.D}")
            return other.a, other.b
        return Q(other), mpq(0)

    def __add__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadNumber._make(self.a + a, self.b + b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber._raw(-self.a, -self.b, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadNumber._make(self.a - a, self.b - b, self.D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            a, b = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadNumber._make(self.a * a + self.b * b * self.D, self.a * b + self.b * a, self.D)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadNumber._raw(self.a, -self.b, self.D)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.D

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt D)")
        return QuadNumber._make(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        if isinstance(other, QuadNumber):
            return self * other.inverse()
        o = Q(other)
        if o == 0:
            raise ZeroDivisionError("division by zero")
        return QuadNumber._make(self.a / o, self.b / o, self.D)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        out = mpq(1)
        base = self
        while k:
            if k & 1:
                out = base * out
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, QuadNumber):
            return self.D == other.D and self.a == other.a and self.b == other.b
        try:
            return self.b == 0 and self.a == Q(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.D))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __complex__(self):
        r = complex(gmpy2.sqrt(self.D)) if self.D > 0 else complex(0, float(gmpy2.sqrt(-self.D)))
        return complex(float(self.a)) + float(self.b) * r

    def __repr__(self):
        return f"QuadNumber({self.a}, {self.b}, {self.D})"

    def __str__(self):
        return format_scalar(self)


def field_of(x):
    """0 for rationals, D for an element of Q(sqrt D)."""
    return x.D if isinstance(x, QuadNumber) else 0


def common_field(values):
    D = 0
    for v in values:
        if isinstance(v, QuadNumber):
            if D and v.D != D:
                raise ValueError(f"mixed quadratic fields D={D} and D={v.D}")
            D = v.D
    return D


def is_rational(x):
    return not isinstance(x, QuadNumber)


def is_rational_square(x):
    if isinstance(x, QuadNumber):
        return False
    x = Q(x)
    return x >= 0 and gmpy2.is_square(x.numerator) and gmpy2.is_square(x.denominator)


def sqrt_exact(q):
    """Square root of a rational as a rational or a QuadNumber."""
    q = Q(q)
    if q == 0:
        return mpq(0)
    num, den = int(q.numerator), int(q.denominator)
    # sqrt(num/den) = sqrt(num*den)/den
    c, D = squarefree_split(num * den)
    if D == 1:
        return mpq(c, den)
    return QuadNumber(0, mpq(c, den), D)


def sqrt_in_field(x, D=0):
    """A square root of x inside Q (D = 0) or Q(sqrt D), or None if there is none."""
    if isinstance(x, QuadNumber):
        if D and x.D != D:
            return None
        D = x.D
        # (c + e sqrt D)^2 = a + b sqrt D  <=>  c^2 + D e^2 = a, 2 c e = b
        root = sqrt_exact(x.norm())
        if isinstance(root, QuadNumber):
            return None
        for c2 in ((x.a + root) / 2, (x.a - root) / 2):
            c = sqrt_exact(c2)
            if isinstance(c, QuadNumber) or c == 0:
                continue
            cand = QuadNumber.make(c, x.b / (2 * c), D)
            if cand * cand == x:
                return cand
        return None
    r = sqrt_exact(x)
    if isinstance(r, QuadNumber) and D and r.D != D:
        return None
    return r


def to_complex(x):
    if isinstance(x, complex):
        return x
    if isinstance(x, QuadNumber):
        return complex(x)
    return complex(float(x))


def format_scalar(x):
    """Canonical text: '3', '-1/2', '1/2+3/4√5', '-√-3'."""
    if not isinstance(x, QuadNumber):
        return str(Q(x))
    a, b = x.a, x.b
    root = f"√{x.D}"
    if b == 1:
        bpart = root
    elif b == -1:
        bpart = "-" + root
    else:
        bpart = f"{b}{root}"
    if a == 0:
        return bpart
    return f"{a}{'' if bpart.startswith('-') else '+'}{bpart}"


def parse_scalar(text, D=0):
    """Inverse of format_scalar. Also accepts 'sqrt' in place of '√'."""
    s = text.strip().replace(" ", "").replace("sqrt", "√")
    if "√" not in s:
        return mpq(s)
    # split rational part and radical part at the last +/- before the radical
    root_at = s.index("√")
    head, tail = s[:root_at], s[root_at + 1:]
    Dv = int(tail.removeprefix("(").removesuffix(")"))
    if D and Dv != D:
        raise ValueError(f"radical √{Dv} does not match declared D={D}")
    cut = max(head.rfind("+", 1), head.rfind("-", 1))
    if cut <= 0:
        a_txt, b_txt = "0", head
    else:
        a_txt, b_txt = head[:cut], head[cut:]
    if b_txt in ("", "+"):
        b = mpq(1)
    elif b_txt == "-":
        b = mpq(-1)
    else:
        b = mpq(b_txt.lstrip("+"))
    return QuadNumber.make(mpq(a_txt), b, Dv)


def is_square_int(n):
    return n >= 0 and gmpy2.is_square(mpz(n))

"""Exact scalar arithmetic.

Plain rationals are stdlib ``fractions.Fraction``.  Computations that need a
quadratic irrationality use :class:`QuadExt`, an element ``a + b*sqrt(d)`` of
the field Q(sqrt(d)) with ``a``, ``b`` rational and ``d`` a fixed positive
non-square integer.  The extension is chosen per computation; elements over
different ``d`` never mix.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import factorial, isqrt
import re

Rat = (int, Fraction)


def binom(m: int, s: int) -> Fraction:
    """Generalized binomial coefficient.

    Defined by the falling factorial m(m-1)...(m-s+1)/s! for s >= 0 (so any
    integer m, including negatives, is allowed) and 0 for s < 0.
    """
    if s < 0:
        return Fraction(0)
    num = reduce(lambda acc, t: acc * (m - t), range(s), 1)
    return Fraction(num, factorial(s))


class QuadExt:
    """An element a + b*sqrt(d) of the real quadratic field Q(sqrt(d))."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 0):
        if d <= 0:
            raise ValueError("d must be a positive non-square integer")
        r = isqrt(d)
        if r * r == d:
            raise ValueError(f"d={d} is a perfect square; use Fraction")
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    @classmethod
    def sqrt(cls, d: int) -> "QuadExt":
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"mixed extensions sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, Rat):
            return QuadExt(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a * o.a + self.b * o.b * self.d,
                       self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadExt":
        n = self.a * self.a - self.b * self.b * self.d
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadExt(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, Rat):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return scalar_str(self)


def scalar_str(x) -> str:
    """Canonical exact string form: '3/2', '-5', '-5/2+1/2*sqrt(19)'."""
    if isinstance(x, Rat):
        return str(Fraction(x))
    if not isinstance(x, QuadExt):
        raise TypeError(f"not an exact scalar: {x!r}")
    if x.b == 0:
        return str(x.a)
    root = f"sqrt({x.d})" if abs(x.b) == 1 else f"{abs(x.b)}*sqrt({x.d})"
    bpart = root if x.b > 0 else "-" + root
    if x.a == 0:
        return bpart
    sign = "+" if x.b > 0 else "-"
    return f"{x.a}{sign}{root}"


_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|([+\-*/()])|$)")


def parse_scalar(text: str):
    """Parse an exact scalar literal.

    Accepts signed rationals 'p/q' and sums of terms 'p/q*sqrt(d)'.  Floating
    point forms are rejected (exactness is part of the contract).
    """
    s = text.strip()
    if not s:
        raise ValueError("empty scalar literal")
    if re.search(r"[.eE]", s) and "sqrt" not in s:
        raise ValueError(f"floating point literal rejected: {text!r}")
    if "." in s:
        raise ValueError(f"floating point literal rejected: {text!r}")
    pos = 0

    def tok():
        nonlocal pos
        m = _TOKEN.match(s, pos)
        if m is None or m.end() == pos and pos < len(s):
            raise ValueError(f"bad scalar literal {text!r} at offset {pos}")
        pos = m.end()
        return m.group(1) or m.group(2) or m.group(3) or ""

    def peek():
        m = _TOKEN.match(s, pos)
        if m is None:
            return ""
        return m.group(1) or m.group(2) or m.group(3) or ""

    def parse_rational():
        t = tok()
        if not t.isdigit():
            raise ValueError(f"expected integer in {text!r}")
        num = int(t)
        if peek() == "/":
            tok()
            den = tok()
            if not den.isdigit() or int(den) == 0:
                raise ValueError(f"bad denominator in {text!r}")
            return Fraction(num, int(den))
        return Fraction(num)

    def parse_term():
        if peek() == "sqrt":
            coeff = Fraction(1)
        else:
            coeff = parse_rational()
            if peek() == "*":
                tok()
            elif peek() != "sqrt":
                return coeff, None
        t = tok()
        if t != "sqrt":
            raise ValueError(f"expected sqrt in {text!r}")
        if tok() != "(":
            raise ValueError(f"expected '(' after sqrt in {text!r}")
        d = tok()
        if not d.isdigit():
            raise ValueError(f"expected integer radicand in {text!r}")
        if tok() != ")":
            raise ValueError(f"expected ')' in {text!r}")
        return coeff, int(d)

    total_rat = Fraction(0)
    total_irr = Fraction(0)
    ext_d = None
    sign = 1
    if peek() in "+-":
        if tok() == "-":
            sign = -1
    while True:
        coeff, d = parse_term()
        if d is None:
            total_rat += sign * coeff
        else:
            if ext_d is not None and ext_d != d:
                raise ValueError(f"mixed radicands in {text!r}")
            ext_d = d
            total_irr += sign * coeff
        nxt = peek()
        if nxt == "":
            if s[pos:].strip():
                raise ValueError(f"trailing characters in scalar literal {text!r}")
            break
        t = tok()
        if t == "+":
            sign = 1
        elif t == "-":
            sign = -1
        else:
            raise ValueError(f"unexpected {t!r} in scalar literal {text!r}")
    if ext_d is None:
        return total_rat
    return QuadExt(total_rat, total_irr, ext_d)

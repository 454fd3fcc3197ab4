"""Exact arithmetic in Q(sqrt(d)) for a non-square positive integer d."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Rational


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class QuadExt:
    """The number ``a + b*sqrt(d)`` with rational a, b.

    ``d`` must not be a perfect square, which makes (a, b) canonical.
    Plain ints and Fractions coerce into the same field.
    """

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))
        if self.d <= 0 or math.isqrt(self.d) ** 2 == self.d:
            raise ValueError(f"radicand {self.d} must be a positive non-square")

    @classmethod
    def zero(cls, d: int) -> "QuadExt":
        return cls(Fraction(0), Fraction(0), d)

    @classmethod
    def one(cls, d: int) -> "QuadExt":
        return cls(Fraction(1), Fraction(0), d)

    @classmethod
    def sqrt(cls, d: int) -> "QuadExt":
        return cls(Fraction(0), Fraction(1), d)

    def _coerce(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"mixing Q(sqrt({self.d})) and Q(sqrt({other.d}))")
            return other
        if isinstance(other, (int, Rational)):
            return QuadExt(Fraction(other), Fraction(0), self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def field_norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.field_norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        num = self * o.conjugate()
        return QuadExt(num.a / n, num.b / n, self.d)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return QuadExt.one(self.d) / self ** (-e)
        out, base = QuadExt.one(self.d), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with d*b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d)) if self.b else hash(self.a)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def to_decimal(self, digits: int = 40) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            val = Decimal(self.a.numerator) / Decimal(self.a.denominator)
            if self.b:
                val += Decimal(self.b.numerator) / Decimal(self.b.denominator) * Decimal(self.d).sqrt()
            ctx.prec = digits
            return +val

    def __float__(self):
        return float(self.to_decimal(30))

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, d={self.d})"

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.d})"


def sqrt_power(q: int, n: int) -> QuadExt:
    """q^(n/2) as an element of Q(sqrt(q)); n may be negative."""
    if n % 2 == 0:
        return QuadExt(Fraction(q) ** (n // 2), Fraction(0), q)
    return QuadExt(Fraction(0), Fraction(q) ** ((n - 1) // 2), q)

"""Eisenstein integers Z[xi], xi a primitive cube root of unity (xi^2 = -1 - xi)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _round_half_up(x: Fraction) -> int:
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


@dataclass(frozen=True)
class EisensteinInt:
    """The element a + b*xi."""
    a: int
    b: int = 0

    @staticmethod
    def coerce(x) -> "EisensteinInt":
        return x if isinstance(x, EisensteinInt) else EisensteinInt(int(x), 0)

    def __add__(self, o):
        o = EisensteinInt.coerce(o)
        return EisensteinInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-EisensteinInt.coerce(o))

    def __rsub__(self, o):
        return EisensteinInt.coerce(o) - self

    def __mul__(self, o):
        o = EisensteinInt.coerce(o)
        # (a + b xi)(c + d xi) = ac + (ad + bc) xi + bd xi^2,  xi^2 = -1 - xi
        a, b, c, d = self.a, self.b, o.a, o.b
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def conjugate(self) -> "EisensteinInt":
        # conj(xi) = xi^2 = -1 - xi
        return EisensteinInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __divmod__(self, o):
        """Euclidean division: remainder has norm < norm(o)."""
        o = EisensteinInt.coerce(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[xi]")
        num = self * o.conjugate()
        q = EisensteinInt(_round_half_up(Fraction(num.a, n)), _round_half_up(Fraction(num.b, n)))
        return q, self - q * o

    def __floordiv__(self, o):
        return divmod(self, o)[0]

    def __mod__(self, o):
        return divmod(self, o)[1]

    def divides(self, o) -> bool:
        o = EisensteinInt.coerce(o)
        if self.is_zero():
            return o.is_zero()
        return (o % self).is_zero()

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*xi"
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*xi"


ZERO = EisensteinInt(0, 0)
ONE = EisensteinInt(1, 0)
XI = EisensteinInt(0, 1)
THETA = EisensteinInt(1, 2)          # xi - xi^{-1} = 1 + 2 xi, theta^2 = -3
UNITS = (ONE, XI, XI * XI, -ONE, -XI, -(XI * XI))


def gcd(*xs) -> EisensteinInt:
    """A generator of the ideal generated by xs (determined up to a unit)."""
    g = ZERO
    for x in xs:
        x = EisensteinInt.coerce(x)
        a, b = g, x
        while not b.is_zero():
            a, b = b, a % b
        g = a
    return g


def associated(x, y) -> bool:
    """Do x and y generate the same ideal?"""
    x, y = EisensteinInt.coerce(x), EisensteinInt.coerce(y)
    return any(u * x == y for u in UNITS)

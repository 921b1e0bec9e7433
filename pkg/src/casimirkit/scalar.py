"""Exact coefficients in Q(sqrt(r)), optionally adjoined with the imaginary unit.

A :class:`Scalar` stores ``((a + b*sqrt(r)) + (c + d*sqrt(r))*i) / den`` with
Python integers, so every operation is exact and arbitrary precision.  All
scalars of one computation share a :class:`Field`; mixing fields raises
:class:`FieldMismatchError`.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "Field",
    "Scalar",
    "FieldMismatchError",
    "field",
    "QQ",
]


class FieldMismatchError(ValueError):
    """Raised when scalars from different coefficient fields are combined."""


def _squarefree(n: int) -> bool:
    if n < 2:
        return True
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class Field:
    """Coefficient field ``Q(sqrt(radicand))`` or ``Q(sqrt(radicand), i)``.

    Instances are interned: ``field(3, True) is field(3, True)``.  A radicand
    of 0 or 1 collapses to the rationals (or Gaussian rationals).
    """

    __slots__ = ("radicand", "imaginary", "_zero", "_one")

    def __init__(self, radicand: int, imaginary: bool):
        self.radicand = radicand
        self.imaginary = imaginary
        self._zero = Scalar._raw(self, 0, 0, 0, 0, 1)
        self._one = Scalar._raw(self, 1, 0, 0, 0, 1)

    def __repr__(self):
        return f"field(radicand={self.radicand}, imaginary={self.imaginary})"

    def __reduce__(self):
        return (field, (self.radicand, self.imaginary))

    @property
    def has_sqrt(self) -> bool:
        return self.radicand > 1

    @property
    def zero(self) -> "Scalar":
        return self._zero

    @property
    def one(self) -> "Scalar":
        return self._one

    def __call__(self, value) -> "Scalar":
        return self.coerce(value)

    def coerce(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field is not self:
                raise FieldMismatchError(f"{value.field!r} vs {self!r}")
            return value
        if isinstance(value, int):
            return Scalar._raw(self, value, 0, 0, 0, 1)
        if isinstance(value, Rational):
            q = Fraction(value)
            return Scalar._raw(self, q.numerator, 0, 0, 0, q.denominator)
        raise TypeError(f"cannot convert {type(value).__name__} to Scalar")

    def make(self, rational=0, sqrt_part=0, imag=0, imag_sqrt=0) -> "Scalar":
        """Build ``rational + sqrt_part*sqrt(r) + (imag + imag_sqrt*sqrt(r))*i``."""
        parts = [Fraction(x) for x in (rational, sqrt_part, imag, imag_sqrt)]
        if not self.imaginary and (parts[2] or parts[3]):
            raise ValueError(f"{self!r} has no imaginary unit")
        if self.radicand == 1:
            parts = [parts[0] + parts[1], Fraction(0), parts[2] + parts[3], Fraction(0)]
        elif self.radicand == 0:
            parts[1] = parts[3] = Fraction(0)
        den = math.lcm(*(p.denominator for p in parts))
        a, b, c, d = (p.numerator * (den // p.denominator) for p in parts)
        return Scalar._normal(self, a, b, c, d, den)

    def sqrt(self) -> "Scalar":
        """The adjoined square root (the integer 0/1 for degenerate radicands)."""
        if not self.has_sqrt:
            return self.coerce(self.radicand)
        return Scalar._raw(self, 0, 1, 0, 0, 1)

    def imag_unit(self) -> "Scalar":
        if not self.imaginary:
            raise ValueError(f"{self!r} has no imaginary unit")
        return Scalar._raw(self, 0, 0, 1, 0, 1)


@lru_cache(maxsize=None)
def field(radicand: int = 0, imaginary: bool = False) -> Field:
    """Return the interned coefficient field for ``radicand`` and ``imaginary``."""
    radicand = int(radicand)
    if radicand < 0:
        raise ValueError("radicand must be non-negative; use imaginary=True for i")
    if not _squarefree(radicand):
        raise ValueError(f"radicand {radicand} is not square-free")
    return Field(radicand, bool(imaginary))


class Scalar:
    """Immutable exact element of a :class:`Field`.

    Stored as integers ``(a, b, c, d, den)`` in lowest terms with ``den > 0``
    meaning ``((a + b*sqrt(r)) + (c + d*sqrt(r))*i) / den``.
    """

    __slots__ = ("a", "b", "c", "d", "den", "field", "_hash")

    @classmethod
    def _raw(cls, fld, a, b, c, d, den):
        obj = object.__new__(cls)
        obj.a = a
        obj.b = b
        obj.c = c
        obj.d = d
        obj.den = den
        obj.field = fld
        obj._hash = None
        return obj

    @classmethod
    def _normal(cls, fld, a, b, c, d, den):
        if den < 0:
            a, b, c, d, den = -a, -b, -c, -d, -den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if not (a or b or c or d):
            return fld._zero
        g = math.gcd(a, b, c, d, den)
        if g != 1:
            a //= g
            b //= g
            c //= g
            d //= g
            den //= g
        return cls._raw(fld, a, b, c, d, den)

    # -- inspection -------------------------------------------------------

    def __bool__(self):
        return bool(self.a or self.b or self.c or self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_one(self) -> bool:
        return self.a == 1 and self.den == 1 and not (self.b or self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def is_real(self) -> bool:
        return not (self.c or self.d)

    def is_imaginary(self) -> bool:
        """True for nonzero purely imaginary values."""
        return not (self.a or self.b) and bool(self.c or self.d)

    def parts(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Rational coordinates ``(a, b, c, d)`` over the basis 1, sqrt(r), i, sqrt(r)*i."""
        den = self.den
        return (Fraction(self.a, den), Fraction(self.b, den),
                Fraction(self.c, den), Fraction(self.d, den))

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.a, self.den)

    def sort_key(self) -> tuple:
        """Total order used for canonical sign choices."""
        return self.parts()

    def is_positive_lead(self) -> bool:
        """Whether the first nonzero rational coordinate is positive."""
        for x in (self.a, self.b, self.c, self.d):
            if x:
                return x > 0
        return False

    def to_complex(self) -> complex:
        r = self.field.radicand
        den = self.den
        root = math.sqrt(r) if r > 1 else 0.0
        re = self.a / den + (self.b / den) * root
        im = self.c / den + (self.d / den) * root
        return complex(re, im)

    def to_float(self) -> float:
        z = self.to_complex()
        if z.imag:
            raise ValueError(f"{self} is not real")
        return z.real

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, int):
            return Scalar._raw(self.field, other, 0, 0, 0, 1)
        if isinstance(other, Rational):
            q = Fraction(other)
            return Scalar._raw(self.field, q.numerator, 0, 0, 0, q.denominator)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self.den, o.den
        if d1 == d2:
            return Scalar._normal(self.field, self.a + o.a, self.b + o.b,
                                  self.c + o.c, self.d + o.d, d1)
        return Scalar._normal(self.field, self.a * d2 + o.a * d1, self.b * d2 + o.b * d1,
                              self.c * d2 + o.c * d1, self.d * d2 + o.d * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.field, -self.a, -self.b, -self.c, -self.d, self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        r = self.field.radicand
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        if not (c1 or d1 or c2 or d2):
            if not (b1 or b2):
                return Scalar._normal(self.field, a1 * a2, 0, 0, 0, self.den * o.den)
            return Scalar._normal(self.field, a1 * a2 + r * b1 * b2, a1 * b2 + b1 * a2,
                                  0, 0, self.den * o.den)
        # (A1 + C1 i)(A2 + C2 i) with A, C in Q(sqrt r)
        aa = (a1 * a2 + r * b1 * b2, a1 * b2 + b1 * a2)
        cc = (c1 * c2 + r * d1 * d2, c1 * d2 + d1 * c2)
        ac = (a1 * c2 + r * b1 * d2, a1 * d2 + b1 * c2)
        ca = (c1 * a2 + r * d1 * b2, c1 * b2 + d1 * a2)
        return Scalar._normal(self.field, aa[0] - cc[0], aa[1] - cc[1],
                              ac[0] + ca[0], ac[1] + ca[1], self.den * o.den)

    __rmul__ = __mul__

    def conjugate(self) -> "Scalar":
        """Complex conjugate (sqrt(r) is real)."""
        return Scalar._raw(self.field, self.a, self.b, -self.c, -self.d, self.den)

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero Scalar")
        r = self.field.radicand
        a, b, c, d, den = self.a, self.b, self.c, self.d, self.den
        # |x|^2 * den^2 = A^2 + C^2 = p + q sqrt(r)
        p = a * a + r * b * b + c * c + r * d * d
        q = 2 * (a * b + c * d)
        # 1/(p + q sqrt r) = (p - q sqrt r) / (p^2 - r q^2)
        norm = p * p - r * q * q
        # conj(x) * den = (a + b s) - (c + d s) i ; multiply by (p - q s)
        na = a * p - r * b * q
        nb = b * p - a * q
        nc = -(c * p - r * d * q)
        nd = -(d * p - c * q)
        return Scalar._normal(self.field, na * den, nb * den, nc * den, nd * den, norm)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by zero Scalar")
        if o.is_rational():
            return Scalar._normal(self.field, self.a * o.den, self.b * o.den,
                                  self.c * o.den, self.d * o.den, self.den * o.a)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return (self.field is other.field and self.a == other.a and self.b == other.b
                    and self.c == other.c and self.d == other.d and self.den == other.den)
        if isinstance(other, Rational):
            return self.is_rational() and Fraction(self.a, self.den) == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            if self.is_rational():
                h = hash(Fraction(self.a, self.den))
            else:
                h = hash((self.a, self.b, self.c, self.d, self.den))
            self._hash = h
        return h

    # -- rendering --------------------------------------------------------

    def term_strings(self) -> list[str]:
        """Signed summands, e.g. ``['1/2', '-3*sqrt(3)', 'i']``."""
        r = self.field.radicand
        out = []
        for num, suffix in ((self.a, ""), (self.b, f"sqrt({r})"),
                            (self.c, "i"), (self.d, f"sqrt({r})*i")):
            if not num:
                continue
            q = Fraction(num, self.den)
            if suffix:
                if q == 1:
                    out.append(suffix)
                elif q == -1:
                    out.append("-" + suffix)
                else:
                    out.append(f"{q}*{suffix}")
            else:
                out.append(str(q))
        return out

    def __str__(self):
        terms = self.term_strings()
        if not terms:
            return "0"
        s = terms[0]
        for t in terms[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s

    def __repr__(self):
        return f"Scalar({self})"


QQ = field(0, False)

"""Reduced quotients of Laurent polynomials."""
from __future__ import annotations

from typing import Sequence

from ..scalar import Scalar
from .gcd import divide_exact, poly_gcd, split_monomial
from .poly import LaurentPoly, PoleError, Ring

__all__ = ["RationalFn"]


class RationalFn:
    """``num / den`` in canonical form.

    ``den`` is a monic polynomial with no monomial factor and no common factor
    with ``num``; monomial denominators are absorbed into negative exponents of
    ``num``.  Equal functions therefore have identical representations.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly | None = None, *, _reduced=False):
        if den is None:
            self.num, self.den = num, num.ring.one()
            return
        if _reduced:
            self.num, self.den = num, den
            return
        self.num, self.den = _reduce(num, den)

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RationalFn":
        return cls(p)

    @property
    def ring(self) -> Ring:
        return self.num.ring

    # -- inspection -------------------------------------------------------

    def __bool__(self):
        return bool(self.num.terms)

    def is_zero(self) -> bool:
        return not self.num.terms

    def is_laurent(self) -> bool:
        return self.den.is_constant()

    def as_laurent(self) -> LaurentPoly:
        if not self.den.is_constant():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    def is_constant(self) -> bool:
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self) -> Scalar:
        return self.num.constant_value()

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, LaurentPoly):
            return RationalFn(other)
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            return RationalFn(self.ring.const(other))
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not o.num.terms:
            return self
        if not self.num.terms:
            return o
        if self.den == o.den:
            if self.den.is_constant():
                return RationalFn(self.num + o.num, self.den, _reduced=True)
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return RationalFn(self.num.scale(other), self.den, _reduced=True) if other else \
                RationalFn(self.ring.zero())
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not self.num.terms or not o.num.terms:
            return RationalFn(self.ring.zero())
        if self.den.is_constant() and o.den.is_constant():
            return RationalFn(self.num * o.num, self.den, _reduced=True)
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFn(self.den, self.num)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if self.den.is_constant():
            return RationalFn(self.num ** n, self.den, _reduced=True)
        return RationalFn(self.num ** n, self.den ** n, _reduced=True)

    def diff(self, var: int) -> "RationalFn":
        """Partial derivative via the quotient rule."""
        if self.den.is_constant():
            return RationalFn(self.num.diff(var), self.den, _reduced=True)
        n, d = self.num, self.den
        return RationalFn(n.diff(var) * d - n * d.diff(var), d * d)

    def evaluate(self, point: Sequence) -> Scalar:
        dv = self.den.evaluate(point)
        if not dv:
            raise PoleError(f"pole: denominator {self.den.render()} vanishes at the point")
        return self.num.evaluate(point) / dv

    def evaluate_numeric(self, values):
        return self.num.evaluate_numeric(values) / self.den.evaluate_numeric(values)

    # -- comparison & rendering ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, RationalFn):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (LaurentPoly, int, Scalar)):
            return self.den.is_constant() and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def render(self) -> str:
        if self.den.is_constant():
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    __str__ = render

    def __repr__(self):
        return f"RationalFn({self.render()})"


def _reduce(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    ring = num.ring
    if not den.terms:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num.terms:
        return num, ring.one()
    en, n = split_monomial(num)
    ed, d = split_monomial(den)
    shift = [a - b for a, b in zip(en, ed)]
    if d.is_constant():
        out = num.mul_monomial([-x for x in ed]) if any(ed) else num
        c = d.constant_value()
        return (out if c.is_one() else out.scale(c.inverse())), ring.one()
    if not n.is_constant():
        g = poly_gcd(n, d)
        if not g.is_constant():
            n = divide_exact(n, g)
            d = divide_exact(d, g)
    lc = d.lead_coeff()
    if not lc.is_one():
        inv = lc.inverse()
        n, d = n.scale(inv), d.scale(inv)
    if d.is_constant():
        c = d.constant_value()
        n = n.scale(c.inverse())
        d = ring.one()
    if any(shift):
        n = n.mul_monomial(shift)
    return n, d

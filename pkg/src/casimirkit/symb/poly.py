"""Sparse multivariate Laurent polynomials over a :class:`~casimirkit.scalar.Field`.

Exponent vectors are packed into one Python integer per monomial: the total
degree occupies the high bits and each exponent a biased 16-bit slot below it,
most significant coordinate first.  Integer comparison of packed keys is then
exactly graded-lexicographic order, and monomial multiplication is a single
integer addition.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from ..scalar import Field, FieldMismatchError, Scalar

__all__ = ["Ring", "LaurentPoly", "PoleError"]

_BITS = 16
_MASK = (1 << _BITS) - 1
_BIAS = 1 << (_BITS - 1)
_TBIAS = 1 << 24
_EXP_LIMIT = 1 << 13

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_RESERVED = {"i", "sqrt"}


class PoleError(ZeroDivisionError):
    """Evaluation hit a vanishing denominator or a Laurent pole."""


class Ring:
    """Coordinate names plus coefficient field; the parent of polynomials."""

    __slots__ = ("coords", "field", "nvars", "_shifts", "_tshift", "_one_key", "_var_keys",
                 "_unit", "__weakref__")

    def __init__(self, coords: Sequence[str], field: Field):
        coords = tuple(coords)
        if not coords:
            raise ValueError("at least one coordinate is required")
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinate names in {coords}")
        for name in coords:
            if not _IDENT.match(name) or name in _RESERVED:
                raise ValueError(f"invalid coordinate name {name!r}")
        self.coords = coords
        self.field = field
        n = self.nvars = len(coords)
        self._shifts = tuple((n - 1 - i) * _BITS for i in range(n))
        self._tshift = n * _BITS
        self._one_key = self.pack((0,) * n)
        self._unit = tuple(1 << s for s in self._shifts)
        self._var_keys = tuple(self._one_key + u + (1 << self._tshift) for u in self._unit)

    def __repr__(self):
        return f"Ring({', '.join(self.coords)}; {self.field!r})"

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Ring) and self.coords == other.coords and self.field is other.field

    def __hash__(self):
        return hash((self.coords, self.field))

    # -- key packing ------------------------------------------------------

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError(f"expected {self.nvars} exponents, got {len(exps)}")
        key = (sum(exps) + _TBIAS) << (self.nvars * _BITS)
        for e, s in zip(exps, self._shifts):
            if not -_EXP_LIMIT < e < _EXP_LIMIT:
                raise OverflowError(f"exponent {e} out of range")
            key |= (e + _BIAS) << s
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        return tuple(((key >> s) & _MASK) - _BIAS for s in self._shifts)

    def exponent(self, key: int, var: int) -> int:
        return ((key >> self._shifts[var]) & _MASK) - _BIAS

    def key_degree(self, key: int) -> int:
        return (key >> self._tshift) - _TBIAS

    # -- constructors -----------------------------------------------------

    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return LaurentPoly(self, {self._one_key: self.field.one})

    def const(self, value) -> "LaurentPoly":
        c = self.field.coerce(value)
        return LaurentPoly(self, {self._one_key: c} if c else {})

    def var(self, index: int) -> "LaurentPoly":
        return LaurentPoly(self, {self._var_keys[index]: self.field.one})

    def gens(self) -> list["LaurentPoly"]:
        return [self.var(i) for i in range(self.nvars)]

    def index(self, name: str) -> int:
        try:
            return self.coords.index(name)
        except ValueError:
            raise KeyError(f"unknown coordinate {name!r}") from None

    def monomial(self, exps: Sequence[int], coeff=1) -> "LaurentPoly":
        c = self.field.coerce(coeff)
        return LaurentPoly(self, {self.pack(exps): c} if c else {})

    def from_dict(self, data: Mapping[tuple, object]) -> "LaurentPoly":
        terms: dict[int, Scalar] = {}
        fld = self.field
        for exps, c in data.items():
            c = fld.coerce(c)
            if c:
                k = self.pack(exps)
                s = terms.get(k)
                s = c if s is None else s + c
                if s:
                    terms[k] = s
                else:
                    del terms[k]
        return LaurentPoly(self, terms)

    def monomials(self, degree: int) -> list[tuple[int, ...]]:
        """Exponent vectors of all monomials of exactly ``degree``, in descending grlex order."""
        out = []

        def rec(prefix, left, remaining):
            if remaining == 1:
                out.append(prefix + (left,))
                return
            for e in range(left, -1, -1):
                rec(prefix + (e,), left - e, remaining - 1)

        rec((), degree, self.nvars)
        return out


class LaurentPoly:
    """Immutable sparse Laurent polynomial; ``terms`` maps packed keys to nonzero scalars."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: dict[int, Scalar]):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- inspection -------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and self.ring._one_key in t)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_polynomial(self) -> bool:
        """No negative exponents."""
        ring = self.ring
        return all(e >= 0 for k in self.terms for e in ring.unpack(k))

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(self.ring._one_key, self.ring.field.zero)

    def __len__(self):
        return len(self.terms)

    def items(self) -> list[tuple[tuple[int, ...], Scalar]]:
        """(exponents, coefficient) pairs in descending grlex order."""
        unpack = self.ring.unpack
        return [(unpack(k), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    def lead_key(self) -> int:
        return max(self.terms)

    def lead_coeff(self) -> Scalar:
        if not self.terms:
            return self.ring.field.zero
        return self.terms[max(self.terms)]

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return self.ring.key_degree(max(self.terms))

    def min_total_degree(self) -> int:
        return self.ring.key_degree(min(self.terms))

    def is_homogeneous(self) -> bool:
        kd = self.ring.key_degree
        return len({kd(k) for k in self.terms}) <= 1

    def degree_in(self, var: int) -> int:
        ex = self.ring.exponent
        return max((ex(k, var) for k in self.terms), default=-1)

    def min_exponents(self) -> tuple[int, ...]:
        ring = self.ring
        vecs = [ring.unpack(k) for k in self.terms]
        return tuple(min(col) for col in zip(*vecs))

    def variables(self) -> set[int]:
        ring = self.ring
        used = set()
        for k in self.terms:
            for i, e in enumerate(ring.unpack(k)):
                if e:
                    used.add(i)
        return used

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, LaurentPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise FieldMismatchError("polynomials from different rings")
            return other
        if isinstance(other, (int, Scalar)) or hasattr(other, "denominator"):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if len(o.terms) > len(self.terms):
            big, small = o.terms, self.terms
        else:
            big, small = self.terms, o.terms
        terms = dict(big)
        for k, c in small.items():
            s = terms.get(k)
            if s is None:
                terms[k] = c
            else:
                s = s + c
                if s:
                    terms[k] = s
                else:
                    del terms[k]
        return LaurentPoly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        terms = dict(self.terms)
        for k, c in o.terms.items():
            s = terms.get(k)
            if s is None:
                terms[k] = -c
            else:
                s = s - c
                if s:
                    terms[k] = s
                else:
                    del terms[k]
        return LaurentPoly(self.ring, terms)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def scale(self, c) -> "LaurentPoly":
        c = self.ring.field.coerce(c)
        if not c:
            return self.ring.zero()
        if c.is_one():
            return self
        return LaurentPoly(self.ring, {k: v * c for k, v in self.terms.items()})

    def shift(self, key_offset: int) -> "LaurentPoly":
        """Multiply by the monomial whose packed key is ``one_key + key_offset``."""
        return LaurentPoly(self.ring, {k + key_offset: c for k, c in self.terms.items()})

    def mul_monomial(self, exps: Sequence[int]) -> "LaurentPoly":
        ring = self.ring
        return self.shift(ring.pack(exps) - ring._one_key)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)) or (hasattr(other, "denominator")
                                               and not isinstance(other, LaurentPoly)):
            return self.scale(other)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b = self.terms, o.terms
        if not a or not b:
            return self.ring.zero()
        if len(a) < len(b):
            a, b = b, a
        base = self.ring._one_key
        out: dict[int, Scalar] = {}
        get = out.get
        for kb, cb in b.items():
            off = kb - base
            for ka, ca in a.items():
                k = ka + off
                prod = ca * cb
                s = get(k)
                out[k] = prod if s is None else s + prod
        return LaurentPoly(self.ring, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative powers only for monomials")
            (k, c), = self.terms.items()
            exps = self.ring.unpack(k)
            return self.ring.monomial([e * n for e in exps], c ** n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def diff(self, var: int) -> "LaurentPoly":
        """Partial derivative with respect to coordinate ``var``."""
        ring = self.ring
        sh = ring._shifts[var]
        step = (1 << sh) + (1 << ring._tshift)
        out = {}
        for k, c in self.terms.items():
            e = ((k >> sh) & _MASK) - _BIAS
            if e:
                out[k - step] = c * e
        return LaurentPoly(ring, out)

    def evaluate(self, point: Sequence) -> Scalar:
        """Exact value at ``point`` (one scalar per coordinate)."""
        ring = self.ring
        fld = ring.field
        pt = [fld.coerce(x) for x in point]
        if len(pt) != ring.nvars:
            raise ValueError(f"point has {len(pt)} entries, ring has {ring.nvars} coordinates")
        cache: dict[tuple[int, int], Scalar] = {}
        total = fld.zero
        for k, c in self.terms.items():
            val = c
            for i, e in enumerate(ring.unpack(k)):
                if not e:
                    continue
                p = cache.get((i, e))
                if p is None:
                    if e < 0 and not pt[i]:
                        raise PoleError(f"pole: {ring.coords[i]} = 0 with exponent {e}")
                    p = cache[(i, e)] = pt[i] ** e
                val = val * p
            total = total + val
        return total

    def evaluate_numeric(self, values: Sequence):
        """Floating evaluation; ``values`` may be numpy arrays (broadcast)."""
        ring = self.ring
        total = 0.0
        real = ring.field.imaginary is False
        for k, c in self.terms.items():
            cz = c.to_complex()
            term = cz.real if real else cz
            for i, e in enumerate(ring.unpack(k)):
                if e:
                    term = term * values[i] ** e
            total = total + term
        return total

    def substitute(self, var: int, value: "LaurentPoly") -> "LaurentPoly":
        """Replace coordinate ``var`` with ``value`` (nonnegative exponents of ``var``)."""
        ring = self.ring
        sh = ring._shifts[var]
        out = ring.zero()
        powers: dict[int, LaurentPoly] = {}
        for k, c in self.terms.items():
            e = ((k >> sh) & _MASK) - _BIAS
            rest = LaurentPoly(ring, {k - e * ((1 << sh) + (1 << ring._tshift)): c})
            if e not in powers:
                powers[e] = value ** e
            out = out + rest * powers[e]
        return out

    def coefficients_in(self, var: int) -> dict[int, "LaurentPoly"]:
        """Split as ``sum_d coeff_d * var**d`` with ``coeff_d`` free of ``var``."""
        ring = self.ring
        sh = ring._shifts[var]
        step = (1 << sh) + (1 << ring._tshift)
        parts: dict[int, dict[int, Scalar]] = {}
        for k, c in self.terms.items():
            e = ((k >> sh) & _MASK) - _BIAS
            parts.setdefault(e, {})[k - e * step] = c
        return {e: LaurentPoly(ring, t) for e, t in parts.items()}

    def map_coeffs(self, fn) -> "LaurentPoly":
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if v:
                out[k] = v
        return LaurentPoly(self.ring, out)

    # -- comparison & rendering ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Scalar)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def monomial_str(self, exps: Sequence[int]) -> str:
        parts = []
        for name, e in zip(self.ring.coords, exps):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def render(self) -> str:
        """Canonical text re-parsable by :func:`casimirkit.symb.parse.parse_expr`."""
        if not self.terms:
            return "0"
        chunks = []
        for exps, c in self.items():
            mono = self.monomial_str(exps)
            summands = c.term_strings()
            if len(summands) == 1:
                coef = summands[0]
                neg = coef.startswith("-")
                body = coef[1:] if neg else coef
                if mono:
                    body = mono if body == "1" else f"{body}*{mono}"
            else:
                neg = False
                body = f"({c})" + (f"*{mono}" if mono else "")
            chunks.append((neg, body))
        out = ("-" if chunks[0][0] else "") + chunks[0][1]
        for neg, body in chunks[1:]:
            out += (" - " if neg else " + ") + body
        return out

    __str__ = render

    def __repr__(self):
        return f"LaurentPoly({self.render()})"


def poly_sum(ring: Ring, polys: Iterable[LaurentPoly]) -> LaurentPoly:
    """Sum without intermediate copies."""
    terms: dict[int, Scalar] = {}
    get = terms.get
    for p in polys:
        for k, c in p.terms.items():
            s = get(k)
            terms[k] = c if s is None else s + c
    return LaurentPoly(ring, {k: c for k, c in terms.items() if c})

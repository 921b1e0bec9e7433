"""Null covectors of a Poisson matrix over the field of rational functions."""
from __future__ import annotations

import math
from typing import Sequence

from .bareiss import clear_denominators, eliminate, kernel_basis, strip_common_factor
from .poisson import PoissonMatrix
from .scalar import Scalar
from .symb import LaurentPoly, RationalFn, Ring

__all__ = ["OneForm", "null_covectors", "in_span", "normalize_scalars", "SpanResult"]


def normalize_scalars(vec: Sequence[LaurentPoly]) -> list[LaurentPoly]:
    """Rescale so coefficients are integral, jointly primitive, and the lead is positive.

    The lead is the grlex-leading coefficient of the first nonzero component.
    """
    first = next((p for p in vec if p.terms), None)
    if first is None:
        return list(vec)
    inv = first.lead_coeff().inverse()
    vec = [p.scale(inv) for p in vec]
    dens = [c.den for p in vec for c in p.terms.values()]
    lcm = math.lcm(*dens) if dens else 1
    ints = []
    for p in vec:
        for c in p.terms.values():
            f = lcm // c.den
            ints.extend((c.a * f, c.b * f, c.c * f, c.d * f))
    g = math.gcd(*ints) if ints else 1
    factor = first.ring.field.make(lcm) / g if g else first.ring.field.one
    return [p.scale(factor) for p in vec]


class OneForm:
    """Differential one-form ``sum_a components[a] dz^a``."""

    __slots__ = ("ring", "components")

    def __init__(self, ring: Ring, components: Sequence):
        if len(components) != ring.nvars:
            raise ValueError(f"one-form needs {ring.nvars} components, got {len(components)}")
        comps = []
        for c in components:
            if isinstance(c, RationalFn):
                comps.append(c)
            elif isinstance(c, LaurentPoly):
                comps.append(RationalFn(c))
            else:
                comps.append(RationalFn(ring.const(c)))
        self.ring = ring
        self.components = tuple(comps)

    @classmethod
    def differential(cls, f: RationalFn) -> "OneForm":
        return cls(f.ring, [f.diff(i) for i in range(f.ring.nvars)])

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def is_zero(self) -> bool:
        return not any(self.components)

    def is_polynomial(self) -> bool:
        return all(c.is_laurent() and c.num.is_polynomial() for c in self.components)

    def is_laurent(self) -> bool:
        return all(c.is_laurent() for c in self.components)

    def cleared(self) -> list[LaurentPoly]:
        """Polynomial vector proportional to this form (denominators cleared)."""
        return clear_denominators(self.components)

    def normalized(self) -> "OneForm":
        """Canonical Laurent representative of the line through this form.

        Denominators are cleared and the polynomial gcd removed; then the
        monomial content of ``(z_1 gamma_1, ..., z_n gamma_n)`` is divided
        out, so forms like ``sum a_i dz_i / z_i`` keep that shape while
        forms such as ``z1 dz1 + z2 dz2`` stay polynomial.  Scalars are made
        integral and primitive with a positive lead.
        """
        if self.is_zero():
            return self
        vec = normalize_scalars(strip_common_factor(self.cleared()))
        mins = None
        for i, p in enumerate(vec):
            if not p.terms:
                continue
            m = list(p.min_exponents())
            m[i] += 1
            mins = m if mins is None else [min(a, b) for a, b in zip(mins, m)]
        if any(mins):
            vec = [p.mul_monomial([-e for e in mins]) if p.terms else p for p in vec]
        return OneForm(self.ring, vec)

    def scale(self, factor) -> "OneForm":
        return OneForm(self.ring, [c * factor for c in self.components])

    def __add__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.ring, [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "OneForm") -> "OneForm":
        return OneForm(self.ring, [a - b for a, b in zip(self.components, other.components)])

    def contract(self, J: PoissonMatrix) -> list[RationalFn]:
        """Row vector ``gamma @ J``: ``sum_a gamma_a J^{ab}`` for every ``b``."""
        n = J.n
        zero = RationalFn(self.ring.zero())
        out = []
        for b in range(n):
            acc = zero
            for a in range(n):
                g, x = self.components[a], J.entries[a][b]
                if g and x:
                    acc = acc + g * x
            out.append(acc)
        return out

    def annihilates(self, J: PoissonMatrix) -> bool:
        return not any(self.contract(J))

    def evaluate(self, point) -> list[Scalar]:
        return [c.evaluate(point) if c else self.ring.field.zero for c in self.components]

    def render(self) -> str:
        parts = []
        for name, c in zip(self.ring.coords, self.components):
            if not c:
                continue
            body = c.render()
            if c.is_laurent() and len(c.num) == 1 and not body.startswith("("):
                parts.append(f"{body}*d{name}" if body not in ("1", "-1") else
                             f"{body[:-1]}d{name}")
            else:
                parts.append(f"({body})*d{name}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def component_strings(self) -> list[str]:
        return [c.render() for c in self.components]

    def __eq__(self, other):
        return isinstance(other, OneForm) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        return f"OneForm({self.render()})"


def null_covectors(J: PoissonMatrix) -> list[OneForm]:
    """Normalized basis of ``{gamma : gamma @ J = 0}`` over the rational functions.

    The left kernel of ``J`` is the right kernel of ``J`` transposed; each
    basis vector comes from fraction-free back substitution, then has its
    polynomial gcd and scalar content removed.  Results are checked before
    they are returned.
    """
    n = J.n
    transposed = [[J.entries[a][b] for a in range(n)] for b in range(n)]
    rows = [clear_denominators(row) for row in transposed]
    elim = eliminate(rows)
    basis = []
    for vec in kernel_basis(elim, n):
        form = OneForm(J.ring, vec).normalized()
        if not form.annihilates(J):
            raise ArithmeticError("internal error: computed covector does not annihilate J")
        basis.append(form)
    return basis


class SpanResult:
    """Outcome of :func:`in_span`; truthy when the candidate lies in the span."""

    def __init__(self, member: bool, coefficients: list[RationalFn] | None):
        self.member = member
        self.coefficients = coefficients

    def __bool__(self):
        return self.member

    def __repr__(self):
        coeffs = None if self.coefficients is None else [c.render() for c in self.coefficients]
        return f"SpanResult(member={self.member}, coefficients={coeffs})"


def _solve_rational(columns: list[list[RationalFn]], rhs: list[RationalFn]) -> list[RationalFn] | None:
    """Solve ``sum_i lam_i columns[i] = rhs`` (columns independent) by Gaussian elimination."""
    k = len(columns)
    n = len(rhs)
    rows = [[columns[i][r] for i in range(k)] + [rhs[r]] for r in range(n)]
    pivots = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if rows[i][c]), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[i][k] for i in range(r, n)):
        return None
    return [rows[i][k] for i in range(k)]


def in_span(candidate: OneForm, basis: Sequence[OneForm]) -> SpanResult:
    """Whether ``candidate = sum_i lam_i basis_i`` with rational-function ``lam``."""
    if not basis:
        return SpanResult(candidate.is_zero(), [] if candidate.is_zero() else None)
    base_rows = [b.cleared() for b in basis]
    r0 = eliminate(base_rows).rank
    r1 = eliminate(base_rows + [candidate.cleared()]).rank
    if r1 != r0:
        return SpanResult(False, None)
    if r0 != len(basis):
        # dependent basis: solve with an independent subset
        keep = []
        for b in basis:
            trial = keep + [b]
            if eliminate([x.cleared() for x in trial]).rank == len(trial):
                keep.append(b)
        idx = [basis.index(b) for b in keep]
    else:
        idx = list(range(len(basis)))
    cols = [list(basis[i].components) for i in idx]
    lam = _solve_rational(cols, list(candidate.components))
    if lam is None:
        return SpanResult(False, None)
    full = [RationalFn(candidate.ring.zero())] * len(basis)
    for i, v in zip(idx, lam):
        full[i] = v
    recon = [RationalFn(candidate.ring.zero())] * len(candidate)
    for coef, b in zip(full, basis):
        if coef:
            recon = [x + coef * y if y else x for x, y in zip(recon, b.components)]
    if tuple(recon) != candidate.components:
        raise ArithmeticError("internal error: span coefficients do not reproduce the candidate")
    return SpanResult(True, full)

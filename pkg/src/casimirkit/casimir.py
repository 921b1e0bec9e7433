"""Pfaffian machinery: from null covectors to Casimir functions.

Two complementary routes are combined by :func:`find_casimirs`:

* null covectors from :func:`~casimirkit.nullspace.null_covectors`, made
  closed by a Laurent-monomial integrating factor when one exists, then
  integrated (this yields logarithmic Casimirs such as ``sum a_i log z_i``);
* a linear ansatz for polynomial one-forms that are simultaneously null and
  closed, solved degree by degree up to a bound.

Candidates from both routes are verified against ``J`` and thinned to a
functionally independent set.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import exactla
from .bareiss import clear_denominators
from .nullspace import OneForm, normalize_scalars, null_covectors
from .poisson import PoissonMatrix, rank_at_point, rank_generic
from .scalar import Scalar
from .symb import LaurentPoly, PoleError, RationalFn, Ring

__all__ = [
    "CasimirFunction",
    "PfaffianSystem",
    "ClosedReport",
    "NotClosedError",
    "UnsupportedClassError",
    "is_closed",
    "integrate_closed",
    "exact_null_search",
    "integrating_monomial",
    "independent_casimirs",
    "verify_casimir",
    "sample_points",
    "find_casimirs",
    "CasimirSearch",
    "decompose",
    "DEFAULT_DEGREE_BOUND",
]

DEFAULT_DEGREE_BOUND = 3


class NotClosedError(ValueError):
    """Integration was requested for a one-form that is not closed."""


class UnsupportedClassError(ValueError):
    """The form has components outside the Laurent-polynomial class."""


class CasimirFunction:
    """``poly_part + sum_k coeff_k * log(z_{index_k})``."""

    __slots__ = ("ring", "poly_part", "log_part")

    def __init__(self, ring: Ring, poly_part: LaurentPoly | None = None,
                 log_part: Sequence[tuple[Scalar, int]] = ()):
        merged: dict[int, Scalar] = {}
        for coeff, idx in log_part:
            coeff = ring.field.coerce(coeff)
            merged[idx] = merged.get(idx, ring.field.zero) + coeff
        self.ring = ring
        self.poly_part = poly_part if poly_part is not None else ring.zero()
        self.log_part = tuple((c, i) for i, c in sorted(merged.items()) if c)

    @classmethod
    def from_poly(cls, p: LaurentPoly | RationalFn) -> "CasimirFunction":
        if isinstance(p, RationalFn):
            p = p.as_laurent()
        return cls(p.ring, p)

    def is_zero(self) -> bool:
        return not self.poly_part.terms and not self.log_part

    def is_polynomial(self) -> bool:
        return not self.log_part and self.poly_part.is_polynomial()

    def gradient(self) -> list[RationalFn]:
        ring = self.ring
        grad = [RationalFn(self.poly_part.diff(i)) for i in range(ring.nvars)]
        for c, i in self.log_part:
            exps = [0] * ring.nvars
            exps[i] = -1
            grad[i] = grad[i] + RationalFn(ring.monomial(exps, c))
        return grad

    def differential(self) -> OneForm:
        return OneForm(self.ring, self.gradient())

    def scale(self, factor) -> "CasimirFunction":
        factor = self.ring.field.coerce(factor)
        return CasimirFunction(self.ring, self.poly_part.scale(factor),
                               [(c * factor, i) for c, i in self.log_part])

    def __add__(self, other: "CasimirFunction") -> "CasimirFunction":
        return CasimirFunction(self.ring, self.poly_part + other.poly_part,
                               self.log_part + other.log_part)

    def normalized(self) -> "CasimirFunction":
        """Scale to integral, jointly primitive coefficients with a positive lead.

        The lead is the top polynomial term, or the first log coefficient for
        purely logarithmic functions.
        """
        if self.is_zero():
            return self
        ring = self.ring
        logs = [ring.const(c) for c, _ in self.log_part]
        parts = ([self.poly_part] if self.poly_part.terms else []) + logs
        normed = normalize_scalars(parts)
        first = next(p for p in parts if p.terms)
        factor = normed[0].lead_coeff() / first.lead_coeff()
        return self.scale(factor)

    def constant_free(self) -> "CasimirFunction":
        p = self.poly_part
        key = self.ring._one_key
        if key in p.terms:
            p = LaurentPoly(self.ring, {k: c for k, c in p.terms.items() if k != key})
        return CasimirFunction(self.ring, p, self.log_part)

    def degree(self) -> int:
        return self.poly_part.total_degree()

    def render(self) -> str:
        out = self.poly_part.render() if self.poly_part.terms else ""
        for c, i in self.log_part:
            name = self.ring.coords[i]
            summands = c.term_strings()
            if len(summands) == 1:
                s = summands[0]
                neg = s.startswith("-")
                body = s[1:] if neg else s
                term = f"log({name})" if body == "1" else f"{body}*log({name})"
            else:
                neg = False
                term = f"({c})*log({name})"
            if not out:
                out = ("-" if neg else "") + term
            else:
                out += (" - " if neg else " + ") + term
        return out or "0"

    def evaluate(self, point) -> Scalar:
        """Exact value; only defined without log terms."""
        if self.log_part:
            raise ValueError("exact evaluation of logarithms is not supported")
        return self.poly_part.evaluate(point)

    def evaluate_numeric(self, values):
        """Floating value on scalars or numpy arrays (one per coordinate)."""
        out = self.poly_part.evaluate_numeric(values) if self.poly_part.terms else 0.0
        for c, i in self.log_part:
            out = out + c.to_float() * np.log(values[i])
        return out

    def log_vector(self) -> list[Scalar]:
        vec = [self.ring.field.zero] * self.ring.nvars
        for c, i in self.log_part:
            vec[i] = c
        return vec

    def __eq__(self, other):
        return (isinstance(other, CasimirFunction) and self.poly_part == other.poly_part
                and self.log_part == other.log_part)

    def __hash__(self):
        return hash((self.poly_part, self.log_part))

    def __repr__(self):
        return f"CasimirFunction({self.render()})"


@dataclass
class PfaffianSystem:
    """The equations ``gamma^(i) = 0`` for a list of one-forms on shared coordinates."""

    forms: list[OneForm]

    def __post_init__(self):
        if not self.forms:
            raise ValueError("a Pfaffian system needs at least one form")
        ring = self.forms[0].ring
        if any(f.ring != ring for f in self.forms):
            raise ValueError("all forms must share one coordinate ring")

    @property
    def ring(self) -> Ring:
        return self.forms[0].ring


# -- closedness and integration ----------------------------------------------

@dataclass
class ClosedReport:
    closed: bool
    failing: list[tuple[int, int, RationalFn]] = dc_field(default_factory=list)

    def __bool__(self):
        return self.closed


def is_closed(gamma: OneForm) -> ClosedReport:
    """Check ``d_i gamma_j - d_j gamma_i = 0`` for all pairs (reported 1-based as (i, j))."""
    n = len(gamma)
    comps = gamma.components
    failing = []
    for i, j in combinations(range(n), 2):
        r = comps[j].diff(i) - comps[i].diff(j)
        if r:
            failing.append((i + 1, j + 1, r))
    return ClosedReport(not failing, failing)


def _homotopy(comps: Sequence[LaurentPoly], ring: Ring) -> LaurentPoly:
    out: dict[int, Scalar] = {}
    for i, comp in enumerate(comps):
        var_off = ring._var_keys[i] - ring._one_key
        for k, c in comp.terms.items():
            d = ring.key_degree(k)
            nk = k + var_off
            v = c / (d + 1)
            s = out.get(nk)
            out[nk] = v if s is None else s + v
    return LaurentPoly(ring, {k: c for k, c in out.items() if c})


def _integrate_in(p: LaurentPoly, var: int) -> tuple[LaurentPoly, Scalar | None]:
    """Antiderivative in ``var``; a bare ``c/z_var`` term becomes ``c*log(z_var)``."""
    ring = p.ring
    step = ring._var_keys[var] - ring._one_key
    out = {}
    log_coeff = None
    for k, c in p.terms.items():
        e = ring.exponent(k, var)
        if e == -1:
            exps = list(ring.unpack(k))
            exps[var] = 0
            if any(exps):
                raise UnsupportedClassError(
                    "antiderivative needs log(z) times a non-constant monomial")
            log_coeff = c
            continue
        out[k + step] = c / (e + 1)
    return LaurentPoly(ring, out), log_coeff


def integrate_closed(gamma: OneForm) -> CasimirFunction:
    """``F`` with ``dF = gamma`` and zero integration constant.

    Polynomial forms use the radial homotopy ``F(z) = sum_i z_i int_0^1 gamma_i(t z) dt``;
    Laurent forms are integrated one coordinate at a time, producing
    logarithms for ``dz_i / z_i`` terms.
    """
    ring = gamma.ring
    if not gamma.is_laurent():
        raise UnsupportedClassError("components must be Laurent polynomials")
    report = is_closed(gamma)
    if not report.closed:
        i, j, r = report.failing[0]
        raise NotClosedError(f"form is not closed: d{i} g{j} - d{j} g{i} = {r}")
    comps = [c.num for c in gamma.components]
    if all(c.is_polynomial() for c in comps):
        result = CasimirFunction(ring, _homotopy(comps, ring))
    else:
        F = ring.zero()
        logs = []
        for i in range(ring.nvars):
            rest = comps[i] - F.diff(i)
            part, log_c = _integrate_in(rest, i)
            F = F + part
            if log_c is not None:
                logs.append((log_c, i))
        result = CasimirFunction(ring, F, logs)
    if result.differential() != OneForm(ring, gamma.components):
        raise ArithmeticError("internal error: dF does not reproduce the form")
    return result


# -- ansatz search -------------------------------------------------------

def _column_polys(J: PoissonMatrix) -> list[list[LaurentPoly]]:
    """Columns of ``J`` with denominators cleared (column scaling keeps ``gamma @ J = 0``)."""
    n = J.n
    cols = [[J.entries[a][b] for a in range(n)] for b in range(n)]
    return [clear_denominators(col) for col in cols]


def _solve_block(J_cols, ring: Ring, monos: list[tuple[int, ...]]) -> list[OneForm]:
    n = ring.nvars
    fld = ring.field
    keys = [ring.pack(m) for m in monos]
    nm = len(keys)
    base = ring._one_key
    ncols = n * nm
    eqs: dict[tuple, dict[int, Scalar]] = {}
    # null condition: sum_a gamma_a J'^{ab} = 0 for each column b
    for b, col in enumerate(J_cols):
        for a in range(n):
            entry = col[a]
            if not entry.terms:
                continue
            for mi, mk in enumerate(keys):
                u = a * nm + mi
                off = mk - base
                for ek, ec in entry.terms.items():
                    row = eqs.setdefault(("null", b, ek + off), {})
                    s = row.get(u)
                    row[u] = ec if s is None else s + ec
    # closedness: d_i gamma_j - d_j gamma_i = 0
    for i, j in combinations(range(n), 2):
        for mi, mk in enumerate(keys):
            m = monos[mi]
            if m[i]:
                row = eqs.setdefault(("closed", i, j, mk - ring._unit[i] - (1 << ring._tshift)), {})
                u = j * nm + mi
                row[u] = row.get(u, fld.zero) + m[i]
            if m[j]:
                row = eqs.setdefault(("closed", i, j, mk - ring._unit[j] - (1 << ring._tshift)), {})
                u = i * nm + mi
                row[u] = row.get(u, fld.zero) - m[j]
    system = exactla.SparseSystem(ncols, fld)
    for key in sorted(eqs, key=repr):
        system.add_row(eqs[key])
    forms = []
    for vec in system.nullspace():
        comps: list[dict[int, Scalar]] = [{} for _ in range(n)]
        for u, v in vec.items():
            comps[u // nm][keys[u % nm]] = v
        forms.append(OneForm(ring, [LaurentPoly(ring, c) for c in comps]))
    return forms


def exact_null_search(J: PoissonMatrix, degree_bound: int = DEFAULT_DEGREE_BOUND) -> list[OneForm]:
    """Basis of polynomial one-forms of degree ``<= degree_bound`` that are null and closed.

    The unknown coefficients enter both ``gamma @ J = 0`` and ``d gamma = 0``
    linearly.  When every entry of ``J`` is homogeneous of one degree the
    system splits by the degree of ``gamma`` and each block is solved alone.
    """
    if degree_bound < 0:
        raise ValueError("degree bound must be non-negative")
    ring = J.ring
    cols = _column_polys(J)
    if J.is_homogeneous() is not None or J.is_zero():
        blocks = [ring.monomials(d) for d in range(degree_bound + 1)]
    else:
        blocks = [[m for d in range(degree_bound + 1) for m in ring.monomials(d)]]
    out = []
    for monos in blocks:
        for form in _solve_block(cols, ring, monos):
            form = OneForm(ring, normalize_scalars([c.num for c in form.components]))
            if not form.annihilates(J) or not is_closed(form):
                raise ArithmeticError("internal error: ansatz solution fails its conditions")
            out.append(form)
    return out


def _laurent_components(gamma: OneForm) -> list[LaurentPoly]:
    """The form's own Laurent components, or a cleared multiple for general rational ones."""
    if gamma.is_laurent():
        return [c.num for c in gamma.components]
    return gamma.cleared()


def integrating_monomial(gamma: OneForm) -> tuple[int, ...] | None:
    """Exponents ``e`` such that ``z**(-e) * gamma`` is closed, if any integral ``e`` exists.

    For ``mu = z**(-e)`` closedness of ``mu*gamma`` reads
    ``z_i z_j (d_i g_j - d_j g_i) - e_i z_j g_j + e_j z_i g_i = 0``, linear in ``e``.
    """
    ring = gamma.ring
    n = ring.nvars
    fld = ring.field
    comps = _laurent_components(gamma)
    z = ring.gens()
    eqs: dict[tuple, list[Scalar]] = {}

    def add(tag, poly: LaurentPoly, col: int):
        for k, c in poly.terms.items():
            row = eqs.setdefault((tag, k), [fld.zero] * (n + 1))
            row[col] = row[col] + c

    for i, j in combinations(range(n), 2):
        tag = (i, j)
        curl = comps[j].diff(i) - comps[i].diff(j)
        add(tag, z[i] * z[j] * curl, n)
        add(tag, -(z[j] * comps[j]), i)
        add(tag, z[i] * comps[i], j)
    if not eqs:
        return (0,) * n
    keys = sorted(eqs, key=repr)
    rows = [eqs[k][:n] for k in keys]
    rhs = [-eqs[k][n] for k in keys]
    sol = exactla.solve(rows, rhs, fld)
    if sol is None:
        return None
    out = []
    for s in sol:
        if not s.is_rational():
            return None
        q = s.rational()
        if q.denominator != 1:
            return None
        out.append(int(q))
    return tuple(out)


# -- verification and independence --------------------------------------------

def verify_casimir(J: PoissonMatrix, C: CasimirFunction) -> tuple[bool, list[RationalFn]]:
    """``(J dC == 0, residual vector J dC)`` computed exactly."""
    grad = C.gradient()
    residual = J.apply(grad)
    return not any(residual), residual


def sample_points(J: PoissonMatrix, count: int, seed: int, forms: Sequence[OneForm] = (),
                  casimirs: Sequence[CasimirFunction] = ()) -> list[list[Scalar]]:
    """Seeded exact rational points in ``[-10, 10]^n`` away from poles and rank drops.

    A point is redrawn when any entry of ``J``, any supplied form or Casimir
    gradient has a pole there, any coordinate is zero, or ``J`` loses rank.
    """
    ring = J.ring
    fld = ring.field
    rng = random.Random(seed)
    target = rank_generic(J)
    grads = [C.gradient() for C in casimirs]
    pts = []
    attempts = 0
    while len(pts) < count:
        attempts += 1
        if attempts > 1000 * count:
            raise RuntimeError("could not find generic sample points")
        den = rng.randint(1, 4)
        point = []
        for _ in range(ring.nvars):
            num = rng.randint(-10 * den, 10 * den)
            point.append(fld.coerce(Fraction(num, den)))
        if any(not x for x in point):
            continue
        try:
            if rank_at_point(J, point) != target:
                continue
            for f in forms:
                f.evaluate(point)
            for g in grads:
                for c in g:
                    if c:
                        c.evaluate(point)
        except PoleError:
            continue
        pts.append(point)
    return pts


def _gradient_at(grad: Sequence[RationalFn], point) -> list[Scalar]:
    fld = point[0].field
    return [g.evaluate(point) if g else fld.zero for g in grad]


def independent_casimirs(candidates: Sequence[CasimirFunction], J: PoissonMatrix,
                         seed: int = 0, points: int = 3) -> list[CasimirFunction]:
    """Greedy maximal functionally independent subset of ``candidates``.

    A candidate is kept when adding its gradient raises the Jacobian rank at
    one of ``points`` seeded generic points.
    """
    if not candidates:
        return []
    pts = sample_points(J, points, seed, casimirs=candidates)
    grads = [C.gradient() for C in candidates]
    kept: list[int] = []
    for idx, g in enumerate(grads):
        trial = kept + [idx]
        for p in pts:
            rows = [_gradient_at(grads[t], p) for t in trial]
            if exactla.rank(rows) == len(trial):
                kept.append(idx)
                break
    return [candidates[i] for i in kept]


def jacobian_rank(casimirs: Sequence[CasimirFunction], point) -> int:
    rows = [_gradient_at(C.gradient(), point) for C in casimirs]
    return exactla.rank(rows) if rows else 0


__all__.append("jacobian_rank")


# -- pipeline ------------------------------------------------------------

@dataclass
class CasimirSearch:
    """Everything the pipeline learned about one Poisson matrix."""

    rank: int
    corank: int
    covectors: list[OneForm]
    casimirs: list[CasimirFunction]
    sources: list[str]
    degree_bound: int
    inconclusive: bool
    exact_forms: list[OneForm] = dc_field(default_factory=list)


def _from_covector(gamma: OneForm) -> CasimirFunction | None:
    e = integrating_monomial(gamma)
    if e is None:
        return None
    ring = gamma.ring
    comps = _laurent_components(gamma)
    form = OneForm(ring, [c.mul_monomial([-x for x in e]) if c.terms else c for c in comps])
    if not is_closed(form):
        return None
    return integrate_closed(form)


def find_casimirs(J: PoissonMatrix, degree_bound: int = DEFAULT_DEGREE_BOUND,
                  seed: int = 0) -> CasimirSearch:
    """Independent Casimir generators of ``J``.

    Null covectors that admit a monomial integrating factor are integrated
    first; if that leaves fewer than ``n - rank`` generators the polynomial
    ansatz runs up to ``degree_bound``.  ``inconclusive`` flags a shortfall at
    this bound (more generators may exist at higher degree or outside the
    Laurent-plus-log class).
    """
    r = rank_generic(J)
    corank = J.n - r
    covectors = null_covectors(J)
    candidates: list[CasimirFunction] = []
    sources: list[str] = []
    for gamma in covectors:
        C = _from_covector(gamma)
        if C is not None and not C.is_zero():
            candidates.append(C.normalized())
            sources.append("covector")
    chosen = independent_casimirs(candidates, J, seed) if candidates else []
    chosen_sources = [sources[candidates.index(c)] for c in chosen]
    exact_forms: list[OneForm] = []
    if len(chosen) < corank:
        exact_forms = exact_null_search(J, degree_bound)
        extra = []
        for form in exact_forms:
            C = integrate_closed(form).constant_free()
            if not C.is_zero():
                extra.append(C.normalized())
        pool = chosen + extra
        chosen = independent_casimirs(pool, J, seed)
        chosen_sources = ["covector" if c in candidates else "exact_search" for c in chosen]
    for C in chosen:
        ok, _ = verify_casimir(J, C)
        if not ok:
            raise ArithmeticError(f"internal error: {C} failed verification")
    return CasimirSearch(
        rank=r,
        corank=corank,
        covectors=covectors,
        casimirs=chosen,
        sources=chosen_sources,
        degree_bound=degree_bound,
        inconclusive=len(chosen) < corank,
        exact_forms=exact_forms,
    )


def decompose(target: LaurentPoly, basis: Sequence[LaurentPoly]) -> list[Scalar] | None:
    """Scalars ``x`` with ``target = sum_i x_i basis_i`` exactly, or ``None``."""
    ring = target.ring
    keys = sorted({k for p in list(basis) + [target] for k in p.terms}, reverse=True)
    zero = ring.field.zero
    rows = [[p.terms.get(k, zero) for p in basis] for k in keys]
    rhs = [target.terms.get(k, zero) for k in keys]
    if not basis:
        return [] if not target.terms else None
    return exactla.solve(rows, rhs, ring.field)


@dataclass
class ReferenceMatch:
    """``target = sum coefficient * term`` with every term labelled (``R2``, ``C1*z3``...)."""

    coefficients: dict[str, Scalar]

    def render(self) -> dict[str, str]:
        return {k: str(v) for k, v in self.coefficients.items()}


def match_references(target: LaurentPoly, references: Sequence[LaurentPoly],
                     lower: Sequence[LaurentPoly] = ()) -> ReferenceMatch | None:
    """Express ``target`` through references of its degree and multiples of lower Casimirs.

    The basis is every reference ``R_i`` whose total degree equals that of
    ``target``, plus ``C_j * m`` for each lower-degree Casimir ``C_j`` and each
    monomial ``m`` with ``deg C_j + deg m <= deg target``.  Returns ``None``
    when no exact combination exists.
    """
    ring = target.ring
    d = target.total_degree()
    labels: list[str] = []
    basis: list[LaurentPoly] = []
    for i, R in enumerate(references, 1):
        if R.terms and R.total_degree() == d:
            labels.append(f"R{i}")
            basis.append(R)
    for j, P in enumerate(lower, 1):
        dp = P.total_degree()
        for e in range(0, d - dp + 1):
            for mono in ring.monomials(e):
                if e == 0 and dp == d:
                    continue
                labels.append(f"C{j}" + (f"*{P.monomial_str(mono)}" if e else ""))
                basis.append(P.mul_monomial(mono))
    if not basis:
        return None
    sol = decompose(target, basis)
    if sol is None:
        return None
    recon = ring.zero()
    for x, b in zip(sol, basis):
        if x:
            recon = recon + b.scale(x)
    if recon != target:
        raise ArithmeticError("internal error: reference combination does not reproduce target")
    return ReferenceMatch({lab: x for lab, x in zip(labels, sol) if x})


__all__ += ["ReferenceMatch", "match_references"]

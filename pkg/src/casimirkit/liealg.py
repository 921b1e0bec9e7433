"""Matrix representations of Lie algebras, their structure constants, and trace Casimirs."""
from __future__ import annotations

from dataclasses import dataclass

from . import exactla
from .casimir import CasimirFunction
from .poisson import StructureConstants
from .scalar import Field, Scalar, field
from .symb import Ring

__all__ = [
    "MatrixRep",
    "NotSubalgebraError",
    "TracePhaseError",
    "TraceCasimir",
    "builtin_rep",
    "structure_constants_from_rep",
    "trace_casimir",
    "BUILTIN_REPS",
]

Matrix = list[list[Scalar]]


class NotSubalgebraError(ValueError):
    """A commutator of generators falls outside their span."""


class TracePhaseError(ValueError):
    """Trace coefficients mix real and imaginary parts, so no overall phase makes them real."""


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    m = len(b[0])
    zero = a[0][0].field.zero
    out = []
    for i in range(n):
        row = []
        ai = a[i]
        for j in range(m):
            acc = zero
            for k in range(len(b)):
                if ai[k] and b[k][j]:
                    acc = acc + ai[k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _trace(a: Matrix) -> Scalar:
    acc = a[0][0].field.zero
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


@dataclass
class MatrixRep:
    """Generators ``X^(1) .. X^(n)`` as square matrices over one scalar field."""

    matrices: list[Matrix]
    field: Field
    name: str = "custom"

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("a representation needs at least one generator")
        size = len(self.matrices[0])
        for idx, m in enumerate(self.matrices):
            if len(m) != size or any(len(r) != size for r in m):
                raise ValueError(f"generator {idx + 1} is not {size}x{size}")
        self.matrices = [[[self.field.coerce(x) for x in row] for row in m] for m in self.matrices]

    @property
    def n(self) -> int:
        return len(self.matrices)

    @property
    def size(self) -> int:
        return len(self.matrices[0])

    def commutator(self, j: int, k: int) -> Matrix:
        a, b = self.matrices[j], self.matrices[k]
        return _sub(_matmul(a, b), _matmul(b, a))


def _so3(fld: Field) -> list[Matrix]:
    # (L_i)_{jk} = -eps_{ijk}, so [L1, L2] = L3 cyclically
    eps = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
    mats = []
    for i in range(3):
        mats.append([[fld(-eps.get((i, j, k), 0)) for k in range(3)] for j in range(3)])
    return mats


def _so21(fld: Field) -> list[Matrix]:
    # two boosts and one rotation preserving diag(1, 1, -1)
    z = fld.zero
    one = fld.one
    x1 = [[z, z, z], [z, z, one], [z, one, z]]
    x2 = [[z, z, one], [z, z, z], [one, z, z]]
    x3 = [[z, -one, z], [one, z, z], [z, z, z]]
    return [x1, x2, x3]


def _gell_mann(fld: Field) -> list[Matrix]:
    """``-i * lambda_a``; this sign reproduces the standard su(3) Poisson matrix entrywise."""
    i = fld.imag_unit()
    z, one = fld.zero, fld.one
    s3 = fld.sqrt()

    def mat(entries):
        m = [[z] * 3 for _ in range(3)]
        for (r, c), v in entries.items():
            m[r][c] = v
        return m

    lam = [
        mat({(0, 1): one, (1, 0): one}),
        mat({(0, 1): -i, (1, 0): i}),
        mat({(0, 0): one, (1, 1): -one}),
        mat({(0, 2): one, (2, 0): one}),
        mat({(0, 2): -i, (2, 0): i}),
        mat({(1, 2): one, (2, 1): one}),
        mat({(1, 2): -i, (2, 1): i}),
        mat({(0, 0): one / s3, (1, 1): one / s3, (2, 2): fld(-2) / s3}),
    ]
    return [[[-i * x for x in row] for row in m] for m in lam]


BUILTIN_REPS = {
    "so3": (0, False, _so3),
    "su3_gellmann": (3, True, _gell_mann),
    "so21": (0, False, _so21),
}


def builtin_rep(name: str) -> MatrixRep:
    """One of ``so3``, ``su3_gellmann`` or ``so21``.

    Examples
    --------
    >>> rep = builtin_rep("so3")
    >>> rep.n, rep.size
    (3, 3)
    """
    try:
        radicand, imaginary, make = BUILTIN_REPS[name]
    except KeyError:
        raise ValueError(f"unknown builtin representation {name!r}; "
                         f"choose from {sorted(BUILTIN_REPS)}") from None
    fld = field(radicand, imaginary)
    return MatrixRep(make(fld), fld, name)


def structure_constants_from_rep(rep: MatrixRep, target: Field | None = None) -> StructureConstants:
    """Solve ``[X_j, X_k] = sum_i c_i^{jk} X_i`` exactly.

    Parameters
    ----------
    rep
        Generators.  They must be linearly independent unless every
        commutator vanishes (an abelian set, e.g. a single zero matrix),
        in which case all constants are zero.
    target
        Field for the returned constants.  Defaults to the real subfield of
        the representation's field when every constant is real.
    """
    n = rep.n
    fld = rep.field
    flat = [[x for row in m for x in row] for m in rep.matrices]
    cols = [[flat[i][e] for i in range(n)] for e in range(rep.size ** 2)]
    zero = fld.zero
    independent = exactla.rank(flat) == n
    c = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for j in range(n):
        for k in range(j + 1, n):
            comm = rep.commutator(j, k)
            rhs = [x for row in comm for x in row]
            if not any(rhs):
                continue
            if not independent:
                raise ValueError("generators are linearly dependent")
            sol = exactla.solve(cols, rhs, fld)
            if sol is None:
                raise NotSubalgebraError(
                    f"[X{j + 1}, X{k + 1}] is not in the span of the generators")
            for i in range(n):
                c[i][j][k] = sol[i]
                c[i][k][j] = -sol[i]
    if target is None:
        real = all(x.is_real() for a in c for b in a for x in b)
        target = field(fld.radicand, False) if real else fld
    if target is not fld:
        c = [[[_convert(x, target) for x in b] for b in a] for a in c]
    return StructureConstants(n, c, target)


def _convert(x: Scalar, target: Field) -> Scalar:
    if not target.imaginary and not x.is_real():
        raise ValueError(f"constant {x} is not real")
    a, b, c, d = x.parts()
    return target.make(a, b, c if target.imaginary else 0, d if target.imaginary else 0)


@dataclass
class TraceCasimir:
    """``phase * casimir`` is the raw trace polynomial; ``casimir`` has real coefficients."""

    casimir: CasimirFunction
    phase: Scalar
    order: int


def trace_casimir(rep: MatrixRep, order: int, ring: Ring | None = None) -> TraceCasimir:
    """Degree-``order`` polynomial ``sum Tr(X^(i1) ... X^(ik)) z^i1 ... z^ik``.

    For anti-Hermitian generators the raw traces carry a phase ``i^k``.  A
    single power of ``i`` is factored out so the returned polynomial is
    real; the removed factor is reported as ``phase``.  Mixed real and
    imaginary coefficients raise :class:`TracePhaseError`.

    Examples
    --------
    >>> tc = trace_casimir(builtin_rep("so3"), 2)
    >>> tc.casimir.render(), str(tc.phase)
    ('-2*z1^2 - 2*z2^2 - 2*z3^2', '1')
    """
    if order < 1:
        raise ValueError("trace order must be at least 1")
    n = rep.n
    fld = rep.field
    out_field = field(fld.radicand, False)
    if ring is None:
        ring = Ring([f"z{i}" for i in range(1, n + 1)], out_field)
    elif ring.nvars != n:
        raise ValueError(f"ring has {ring.nvars} coordinates, representation has {n} generators")
    # traces are not symmetric in the indices, so every ordered tuple is visited
    coeffs: dict[tuple[int, ...], Scalar] = {}
    prefix: dict[tuple[int, ...], Matrix] = {(i,): rep.matrices[i] for i in range(n)}
    for _ in range(order - 1):
        nxt = {}
        for idx, m in prefix.items():
            for i in range(n):
                nxt[idx + (i,)] = _matmul(m, rep.matrices[i])
        prefix = nxt
    for idx, m in prefix.items():
        t = _trace(m)
        if not t:
            continue
        exps = [0] * n
        for i in idx:
            exps[i] += 1
        key = tuple(exps)
        coeffs[key] = coeffs.get(key, fld.zero) + t
    coeffs = {k: v for k, v in coeffs.items() if v}
    phase = fld.one
    if coeffs:
        real = all(v.is_real() for v in coeffs.values())
        imag = all(v.is_imaginary() for v in coeffs.values())
        if real:
            phase = fld.one
        elif imag:
            phase = fld.imag_unit()
        else:
            raise TracePhaseError(f"order-{order} trace coefficients are neither all real "
                                  "nor all imaginary")
    inv = phase.inverse()
    terms = {}
    for k, v in coeffs.items():
        w = v * inv
        terms[k] = _convert(w, out_field) if out_field is not fld else w
    poly = ring.from_dict(terms) if terms else ring.zero()
    return TraceCasimir(CasimirFunction(ring, poly), phase, order)

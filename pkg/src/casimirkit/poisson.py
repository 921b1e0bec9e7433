"""Poisson matrices: construction, bracket evaluation, Jacobi check, rank.

Index conventions follow the Lie-Poisson form ``J^{jk} = c_i^{jk} z^i``:
``StructureConstants.c[i][j][k]`` has the coordinate index first and the two
bracket slots after it.  Reports use 1-based indices, matching the usual
``z1 .. zn`` naming; the Python API is 0-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import exactla
from .bareiss import clear_denominators, eliminate
from .scalar import Field, Scalar
from .symb import PoleError, RationalFn, Ring, parse_expr

__all__ = [
    "NotAntisymmetricError",
    "PoissonMatrix",
    "StructureConstants",
    "PlankSpec",
    "JacobiReport",
    "build_explicit",
    "build_lie_poisson",
    "build_plank",
    "check_jacobi",
    "bracket_eval",
    "rank_generic",
    "rank_at_point",
    "check_divergence_free",
    "divergence",
]


class NotAntisymmetricError(ValueError):
    """An input matrix or constant table violates antisymmetry."""

    def __init__(self, message: str, index: tuple[int, ...]):
        self.index = index
        super().__init__(message)


class PoissonMatrix:
    """Antisymmetric ``n x n`` matrix of rational functions over ``ring``."""

    def __init__(self, ring: Ring, entries: Sequence[Sequence[RationalFn]]):
        n = ring.nvars
        if len(entries) != n or any(len(row) != n for row in entries):
            raise ValueError(f"expected a {n}x{n} matrix for coordinates {ring.coords}")
        for i in range(n):
            if entries[i][i]:
                raise NotAntisymmetricError(
                    f"diagonal entry ({i + 1},{i + 1}) = {entries[i][i]} is not zero", (i + 1, i + 1))
            for j in range(i + 1, n):
                if entries[i][j] != -entries[j][i]:
                    raise NotAntisymmetricError(
                        f"entry ({i + 1},{j + 1}) = {entries[i][j]} but ({j + 1},{i + 1}) = "
                        f"{entries[j][i]}", (i + 1, j + 1))
        self.ring = ring
        self.entries = [list(row) for row in entries]

    @property
    def n(self) -> int:
        return self.ring.nvars

    @property
    def coords(self) -> tuple[str, ...]:
        return self.ring.coords

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def apply(self, vec: Sequence[RationalFn]) -> list[RationalFn]:
        """``J @ vec``."""
        out = []
        for row in self.entries:
            acc = RationalFn(self.ring.zero())
            for a, v in zip(row, vec):
                if a and v:
                    acc = acc + a * v
            out.append(acc)
        return out

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def is_homogeneous(self) -> int | None:
        """Common degree if every nonzero entry is a homogeneous polynomial of it."""
        deg = None
        for row in self.entries:
            for x in row:
                if not x:
                    continue
                if not x.is_laurent() or not x.num.is_polynomial() or not x.num.is_homogeneous():
                    return None
                d = x.num.total_degree()
                if deg is None:
                    deg = d
                elif d != deg:
                    return None
        return deg

    def render_rows(self) -> list[list[str]]:
        return [[x.render() for x in row] for row in self.entries]

    def __eq__(self, other):
        return (isinstance(other, PoissonMatrix) and self.ring == other.ring
                and self.entries == other.entries)

    def __repr__(self):
        return f"PoissonMatrix(n={self.n}, coords={self.coords})"


@dataclass
class StructureConstants:
    """``c[i][j][k]`` = ``c_i^{jk}`` with ``[X_j, X_k] = sum_i c_i^{jk} X_i``."""

    n: int
    c: list[list[list[Scalar]]]
    field: Field

    def __post_init__(self):
        n = self.n
        for i in range(n):
            for j in range(n):
                for k in range(j, n):
                    if self.c[i][j][k] != -self.c[i][k][j]:
                        raise NotAntisymmetricError(
                            f"c_{i + 1}^({j + 1},{k + 1}) is not antisymmetric in the upper indices",
                            (i + 1, j + 1, k + 1))

    @classmethod
    def zeros(cls, n: int, fld: Field) -> "StructureConstants":
        z = fld.zero
        return cls(n, [[[z] * n for _ in range(n)] for _ in range(n)], fld)

    @classmethod
    def from_triples(cls, n: int, fld: Field, triples) -> "StructureConstants":
        """Build from ``(i, j, k, value)`` with 1-based indices, filling ``c_i^{kj} = -value``."""
        c = [[[fld.zero] * n for _ in range(n)] for _ in range(n)]
        for i, j, k, value in triples:
            v = fld.coerce(value)
            c[i - 1][j - 1][k - 1] = v
            c[i - 1][k - 1][j - 1] = -v
        return cls(n, c, fld)

    def trace_vector(self) -> list[Scalar]:
        """``sum_i c_i^{ik}`` for each ``k`` (zero for divergence-free brackets)."""
        n = self.n
        out = []
        for k in range(n):
            acc = self.field.zero
            for i in range(n):
                acc = acc + self.c[i][i][k]
            out.append(acc)
        return out

    def nonzero_triples(self) -> list[tuple[int, int, int, Scalar]]:
        n = self.n
        return [(i + 1, j + 1, k + 1, self.c[i][j][k])
                for i in range(n) for j in range(n) for k in range(j + 1, n) if self.c[i][j][k]]


@dataclass
class PlankSpec:
    """Skew constant matrix of a Plank bracket ``J^{ij} = c_ij z^i z^j``."""

    d: int
    c: list[list[Scalar]]

    def __post_init__(self):
        if len(self.c) != self.d or any(len(r) != self.d for r in self.c):
            raise ValueError(f"expected a {self.d}x{self.d} constant matrix")
        for i in range(self.d):
            for j in range(i, self.d):
                if self.c[i][j] != -self.c[j][i]:
                    raise NotAntisymmetricError(
                        f"c[{i + 1}][{j + 1}] = {self.c[i][j]} but c[{j + 1}][{i + 1}] = "
                        f"{self.c[j][i]}", (i + 1, j + 1))


def build_explicit(ring: Ring, entry_expressions: Sequence[Sequence]) -> PoissonMatrix:
    """Matrix from expression strings (or ready :class:`RationalFn` entries)."""
    rows = []
    for row in entry_expressions:
        out = []
        for e in row:
            if isinstance(e, RationalFn):
                out.append(e)
            elif isinstance(e, int):
                out.append(RationalFn(ring.const(e)))
            else:
                out.append(parse_expr(e, ring))
        rows.append(out)
    return PoissonMatrix(ring, rows)


def build_lie_poisson(sc: StructureConstants, ring: Ring) -> PoissonMatrix:
    """``J^{jk} = sum_i c_i^{jk} z^i``."""
    n = sc.n
    if ring.nvars != n:
        raise ValueError(f"{n} structure constants but {ring.nvars} coordinates")
    z = ring.gens()
    rows = []
    for j in range(n):
        row = []
        for k in range(n):
            acc = ring.zero()
            for i in range(n):
                c = sc.c[i][j][k]
                if c:
                    acc = acc + z[i].scale(c)
            row.append(RationalFn(acc))
        rows.append(row)
    return PoissonMatrix(ring, rows)


def build_plank(spec: PlankSpec, ring: Ring) -> PoissonMatrix:
    """``J^{ij} = c_ij z^i z^j`` (no summation)."""
    d = spec.d
    if ring.nvars != d:
        raise ValueError(f"Plank dimension {d} but {ring.nvars} coordinates")
    z = ring.gens()
    rows = [[RationalFn((z[i] * z[j]).scale(spec.c[i][j])) if i != j else RationalFn(ring.zero())
             for j in range(d)] for i in range(d)]
    return PoissonMatrix(ring, rows)


@dataclass
class JacobiReport:
    holds: bool
    witnesses: list[tuple[int, int, int, RationalFn]]

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "witnesses": [{"triple": [i, j, k], "residual": r.render()}
                          for i, j, k, r in self.witnesses],
        }


def _derivatives(J: PoissonMatrix) -> list[list[list[RationalFn]]]:
    n = J.n
    return [[[J.entries[a][b].diff(l) if J.entries[a][b] else J.entries[a][b]
              for b in range(n)] for a in range(n)] for l in range(n)]


def check_jacobi(J: PoissonMatrix) -> JacobiReport:
    """Cyclic sum ``S^{ijk} = sum_l J^{il} d_l J^{jk} + J^{jl} d_l J^{ki} + J^{kl} d_l J^{ij}``.

    Every triple ``i < j < k`` with a nonzero residual is reported (1-based).
    """
    n = J.n
    E = J.entries
    dJ = _derivatives(J)
    zero = RationalFn(J.ring.zero())
    witnesses = []
    for i, j, k in combinations(range(n), 3):
        acc = zero
        for l in range(n):
            for a, (b, c) in ((i, (j, k)), (j, (k, i)), (k, (i, j))):
                if E[a][l] and dJ[l][b][c]:
                    acc = acc + E[a][l] * dJ[l][b][c]
        if acc:
            witnesses.append((i + 1, j + 1, k + 1, acc))
    return JacobiReport(not witnesses, witnesses)


def gradient(f: RationalFn) -> list[RationalFn]:
    return [f.diff(i) for i in range(f.ring.nvars)]


def bracket_eval(J: PoissonMatrix, f: RationalFn, g: RationalFn) -> RationalFn:
    """``{f, g} = sum_{a,b} d_a f J^{ab} d_b g``."""
    df = gradient(f)
    dg = gradient(g)
    acc = RationalFn(J.ring.zero())
    for a in range(J.n):
        if not df[a]:
            continue
        row = J.entries[a]
        inner = RationalFn(J.ring.zero())
        for b in range(J.n):
            if row[b] and dg[b]:
                inner = inner + row[b] * dg[b]
        if inner:
            acc = acc + df[a] * inner
    return acc


def rank_generic(J: PoissonMatrix) -> int:
    """Rank over the field of rational functions (fraction-free elimination)."""
    rows = [clear_denominators(row) for row in J.entries]
    return eliminate(rows).rank


def rank_at_point(J: PoissonMatrix, point: Sequence) -> int:
    """Rank of the scalar matrix ``J(point)``; raises :class:`PoleError` at poles."""
    vals = []
    for i, row in enumerate(J.entries):
        out = []
        for j, x in enumerate(row):
            try:
                out.append(x.evaluate(point) if x else J.ring.field.zero)
            except PoleError as exc:
                raise PoleError(f"entry ({i + 1},{j + 1}): {exc}") from None
        vals.append(out)
    return exactla.rank(vals)


def divergence(J: PoissonMatrix) -> list[RationalFn]:
    """``sum_j d_j J^{ij}`` for each row ``i``."""
    zero = RationalFn(J.ring.zero())
    out = []
    for i, row in enumerate(J.entries):
        acc = zero
        for j, x in enumerate(row):
            if x:
                acc = acc + x.diff(j)
        out.append(acc)
    return out


def check_divergence_free(J: PoissonMatrix) -> bool:
    return not any(divergence(J))

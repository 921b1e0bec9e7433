"""Exact linear algebra over a scalar field: dense rank/nullspace and sparse solves."""
from __future__ import annotations

from typing import Iterable, Sequence

from .scalar import Field, Scalar

__all__ = ["rank", "nullspace", "solve", "SparseSystem"]


def _echelon(rows: list[list[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form (in place on a copy) and pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Scalar]]) -> int:
    return len(_echelon([list(r) for r in rows])[1])


def nullspace(rows: Sequence[Sequence[Scalar]], ncols: int, fld: Field) -> list[list[Scalar]]:
    """Basis of ``{x : rows @ x = 0}``, one vector per free column."""
    ech, pivots = _echelon([list(r) for r in rows])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [fld.zero] * ncols
        x[f] = fld.one
        for row, p in zip(ech, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(rows: Sequence[Sequence[Scalar]], rhs: Sequence[Scalar], fld: Field) -> list[Scalar] | None:
    """One solution of ``rows @ x = rhs`` (free unknowns set to 0), or ``None``."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ech, pivots = _echelon(aug)
    if ncols in pivots:
        return None
    x = [fld.zero] * ncols
    for row, p in zip(ech, pivots):
        x[p] = row[ncols]
    return x


class SparseSystem:
    """Incrementally eliminated homogeneous sparse system ``sum_c row[c]*x_c = 0``.

    Rows are dicts ``{column: Scalar}``.  Each added row is reduced against the
    current pivots; if anything survives, its smallest column becomes a new
    pivot.  :meth:`nullspace` back-substitutes in reverse pivot order.
    """

    def __init__(self, ncols: int, fld: Field):
        self.ncols = ncols
        self.field = fld
        self._pivot_rows: dict[int, dict[int, Scalar]] = {}
        self._order: list[int] = []
        self._created: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self._order)

    def add_row(self, row: dict[int, Scalar]) -> bool:
        row = {c: v for c, v in row.items() if v}
        pivots = self._pivot_rows
        while row:
            hits = [c for c in row if c in pivots]
            if not hits:
                break
            hits.sort(key=self._created.__getitem__)
            for c in hits:
                v = row.get(c)
                if v is None:
                    continue
                for cc, pv in pivots[c].items():
                    s = row.get(cc)
                    s = -(v * pv) if s is None else s - v * pv
                    if s:
                        row[cc] = s
                    else:
                        row.pop(cc, None)
        if not row:
            return False
        p = min(row)
        inv = row[p].inverse()
        self._pivot_rows[p] = {c: v * inv for c, v in row.items()}
        self._created[p] = len(self._order)
        self._order.append(p)
        return True

    def add_rows(self, rows: Iterable[dict[int, Scalar]]) -> None:
        for r in rows:
            self.add_row(r)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self._pivot_rows]

    def nullspace(self) -> list[dict[int, Scalar]]:
        """Sparse basis vectors ``{column: value}``, one per free column."""
        basis = []
        for f in self.free_columns():
            x: dict[int, Scalar] = {f: self.field.one}
            for p in reversed(self._order):
                row = self._pivot_rows[p]
                acc = None
                for c, v in row.items():
                    if c == p:
                        continue
                    xc = x.get(c)
                    if xc is not None:
                        t = v * xc
                        acc = t if acc is None else acc + t
                if acc:
                    x[p] = -acc
            basis.append(x)
        return basis

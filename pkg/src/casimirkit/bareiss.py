"""Fraction-free (Bareiss) elimination on matrices of polynomials.

Every intermediate entry is a minor of the input, so all divisions are exact
polynomial divisions and no rational-function gcds are needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .symb import LaurentPoly, RationalFn, Ring
from .symb.gcd import divide_exact, gcd_many, poly_gcd

__all__ = ["Elimination", "eliminate", "kernel_basis", "clear_denominators", "strip_common_factor"]


def _lcm(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.is_constant():
        return b
    if b.is_constant():
        return a
    return divide_exact(a * b, poly_gcd(a, b))


def clear_denominators(row: Sequence[RationalFn]) -> list[LaurentPoly]:
    """Multiply a row of rational functions by a common factor making it polynomial.

    The factor is the lcm of the denominators times the monomial needed to
    lift negative exponents; the row's kernel relations are unchanged.
    """
    ring = row[0].ring if row else None
    den = ring.one()
    for x in row:
        if not x.den.is_constant():
            den = _lcm(den, x.den)
    scaled = [x.num * divide_exact(den, x.den) if not x.den.is_constant() else x.num * den
              for x in row]
    nonzero = [p for p in scaled if p.terms]
    if not nonzero:
        return scaled
    mins = None
    for p in nonzero:
        m = p.min_exponents()
        mins = m if mins is None else tuple(map(min, mins, m))
    if any(mins):
        lift = [-e for e in mins]
        scaled = [p.mul_monomial(lift) if p.terms else p for p in scaled]
    return scaled


def _pivot_key(p: LaurentPoly, col: int, row: int) -> tuple:
    return (p.total_degree(), len(p), col, row)


@dataclass
class Elimination:
    """Result of :func:`eliminate`.

    ``upper`` is the eliminated matrix with rows and columns permuted:
    ``upper[k][k]`` for ``k < rank`` is the leading ``(k+1)``-minor of the
    permuted input.  ``row_perm[k]`` / ``col_perm[k]`` give the original
    indices of permuted row/column ``k``.
    """

    ring: Ring
    rank: int
    upper: list[list[LaurentPoly]]
    row_perm: list[int]
    col_perm: list[int]


def eliminate(matrix: Sequence[Sequence[LaurentPoly]]) -> Elimination:
    """Bareiss elimination with full pivoting on the smallest nonzero entry.

    Pivot choice minimises ``(total degree, term count, column, row)`` over
    the active submatrix, which keeps the run deterministic.
    """
    a = [list(r) for r in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    ring = a[0][0].ring if m and n else None
    rows = list(range(m))
    cols = list(range(n))
    prev = ring.one() if ring else None
    rank = 0
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            ai = a[i]
            for j in range(k, n):
                p = ai[j]
                if p.terms:
                    key = _pivot_key(p, cols[j], rows[i])
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        _, pi, pj = best
        a[k], a[pi] = a[pi], a[k]
        rows[k], rows[pi] = rows[pi], rows[k]
        if pj != k:
            for r in a:
                r[k], r[pj] = r[pj], r[k]
            cols[k], cols[pj] = cols[pj], cols[k]
        piv = a[k][k]
        ak = a[k]
        for i in range(k + 1, m):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                t = piv * ai[j]
                if aik.terms and ak[j].terms:
                    t = t - aik * ak[j]
                if t.terms and not prev.is_constant():
                    t = divide_exact(t, prev)
                elif t.terms and not prev.constant_value().is_one():
                    t = t.scale(prev.constant_value().inverse())
                ai[j] = t
            ai[k] = ring.zero()
        prev = piv
        rank = k + 1
    return Elimination(ring, rank, a, rows, cols)


def kernel_basis(elim: Elimination, ncols: int) -> list[list[LaurentPoly]]:
    """Polynomial right-kernel vectors, one per free (non-pivot) column.

    Uses fraction-free back substitution: the free coordinate is set to the
    pivot-block determinant so every other coordinate is a polynomial minor.
    """
    r = elim.rank
    u = elim.upper
    ring = elim.ring
    out = []
    if r == 0:
        det = ring.one()
    else:
        det = u[r - 1][r - 1]
    for f in range(r, ncols):
        x = [ring.zero()] * ncols
        x[f] = det
        for k in range(r - 1, -1, -1):
            acc = u[k][f] * det
            for j in range(k + 1, r):
                if u[k][j].terms and x[j].terms:
                    acc = acc + u[k][j] * x[j]
            x[k] = -divide_exact(acc, u[k][k]) if acc.terms else ring.zero()
        vec = [ring.zero()] * ncols
        for pos, orig in enumerate(elim.col_perm):
            vec[orig] = x[pos]
        out.append(vec)
    return out


def strip_common_factor(vec: Sequence[LaurentPoly]) -> list[LaurentPoly]:
    """Divide a polynomial vector by the gcd of its components."""
    nonzero = [p for p in vec if p.terms]
    if not nonzero:
        return list(vec)
    g = gcd_many(nonzero)
    if g.is_constant():
        return list(vec)
    return [divide_exact(p, g) if p.terms else p for p in vec]


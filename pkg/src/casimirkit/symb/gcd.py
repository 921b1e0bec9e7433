"""Exact division and greatest common divisors of multivariate polynomials.

The gcd works over the coefficient field, returning monic results.  Before any
polynomial remainder sequence is run, random univariate images bound the
degree of the gcd in every variable; variables whose image gcd is constant are
eliminated through contents, which settles the (common) coprime case cheaply.
"""
from __future__ import annotations

import heapq
import random
from typing import Sequence

from ..scalar import Scalar
from .poly import LaurentPoly, Ring

__all__ = [
    "NotDivisible",
    "divide_exact",
    "try_divide",
    "poly_gcd",
    "gcd_many",
    "monomial_gcd_key",
    "split_monomial",
    "make_monic",
]

_IMAGE_SEED = 0x5EED


class NotDivisible(ArithmeticError):
    """The divisor does not divide the dividend exactly."""


def try_divide(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly | None:
    """Return ``p / d`` when the division is exact, else ``None``.

    Both arguments must be polynomials (no negative exponents).
    """
    if not d.terms:
        raise ZeroDivisionError("polynomial division by zero")
    ring = p.ring
    if not p.terms:
        return p
    dterms = d.terms
    lk = max(dterms)
    inv = dterms[lk].inverse()
    if len(dterms) == 1:
        base = ring._one_key
        off = base - lk
        out = {k + off: c * inv for k, c in p.terms.items()}
        for k in out:
            if any(e < 0 for e in ring.unpack(k)):
                return None
        return LaurentPoly(ring, out)
    rest = [(k - ring._one_key, c) for k, c in dterms.items() if k != lk]
    ldeg = ring.key_degree(lk)
    lexps = ring.unpack(lk)
    rem = dict(p.terms)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    q: dict[int, Scalar] = {}
    base = ring._one_key
    while heap:
        k = -heapq.heappop(heap)
        c = rem.pop(k, None)
        if c is None:
            continue
        if ring.key_degree(k) < ldeg:
            return None
        exps = ring.unpack(k)
        if any(e < f for e, f in zip(exps, lexps)):
            return None
        qc = c * inv
        qk = k - lk + base
        q[qk] = qc
        for off, dc in rest:
            nk = qk + off
            s = rem.get(nk)
            if s is None:
                rem[nk] = -(qc * dc)
                heapq.heappush(heap, -nk)
            else:
                s = s - qc * dc
                if s:
                    rem[nk] = s
                else:
                    del rem[nk]
    return LaurentPoly(ring, q)


def divide_exact(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    q = try_divide(p, d)
    if q is None:
        raise NotDivisible(f"{d} does not divide {p}")
    return q


def monomial_gcd_key(polys: Sequence[LaurentPoly]) -> tuple[int, ...]:
    """Componentwise minimum exponent over all terms of all polynomials."""
    mins = None
    for p in polys:
        if not p.terms:
            continue
        m = p.min_exponents()
        mins = m if mins is None else tuple(map(min, mins, m))
    return mins


def split_monomial(p: LaurentPoly) -> tuple[tuple[int, ...], LaurentPoly]:
    """Write ``p = z**e * q`` with ``q`` a polynomial free of monomial factors."""
    if not p.terms:
        return (0,) * p.ring.nvars, p
    e = p.min_exponents()
    if not any(e):
        return e, p
    return e, p.mul_monomial([-x for x in e])


def make_monic(p: LaurentPoly) -> LaurentPoly:
    if not p.terms:
        return p
    lc = p.lead_coeff()
    if lc.is_one():
        return p
    return p.scale(lc.inverse())


# -- univariate helpers (dense lists, index = degree) -------------------------

def _uni_trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _uni_rem(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    inv = b[-1].inverse()
    while len(a) - 1 >= db and a:
        c = a[-1] * inv
        shift = len(a) - 1 - db
        for j in range(db + 1):
            a[shift + j] = a[shift + j] - c * b[j]
        a.pop()
        _uni_trim(a)
    return a


def _uni_gcd_degree(a: list, b: list) -> int:
    a, b = _uni_trim(list(a)), _uni_trim(list(b))
    while b:
        a, b = b, _uni_rem(a, b)
    return len(a) - 1


def _univariate_image(p: LaurentPoly, var: int, point: Sequence[Scalar]) -> list:
    ring = p.ring
    fld = ring.field
    degree = p.degree_in(var)
    out = [fld.zero] * (degree + 1)
    cache: dict[tuple[int, int], Scalar] = {}
    for k, c in p.terms.items():
        exps = ring.unpack(k)
        val = c
        for i, e in enumerate(exps):
            if i == var or not e:
                continue
            pw = cache.get((i, e))
            if pw is None:
                pw = cache[(i, e)] = point[i] ** e
            val = val * pw
        out[exps[var]] = out[exps[var]] + val
    return out


def _image_degree_bounds(p: LaurentPoly, q: LaurentPoly, variables: Sequence[int],
                         rng: random.Random) -> dict[int, int]:
    ring = p.ring
    fld = ring.field
    bounds = {}
    for v in variables:
        dp, dq = p.degree_in(v), q.degree_in(v)
        best = min(dp, dq)
        for _ in range(4):
            point = [fld.coerce(rng.randint(-97, 97)) for _ in range(ring.nvars)]
            ip = _univariate_image(p, v, point)
            iq = _univariate_image(q, v, point)
            if not ip[-1] or not iq[-1]:
                continue
            best = _uni_gcd_degree(ip, iq)
            break
        bounds[v] = best
    return bounds


# -- multivariate gcd --------------------------------------------------------

def _pseudo_rem(a: LaurentPoly, b: LaurentPoly, var: int) -> LaurentPoly:
    ring = a.ring
    db = b.degree_in(var)
    bc = b.coefficients_in(var)
    lcb = bc[db]
    r = a
    while r.terms:
        dr = r.degree_in(var)
        if dr < db:
            break
        lcr = r.coefficients_in(var)[dr]
        exps = [0] * ring.nvars
        exps[var] = dr - db
        r = r * lcb - (b * lcr).mul_monomial(exps)
    return r


def _content_in(p: LaurentPoly, var: int, rng: random.Random) -> LaurentPoly:
    coeffs = sorted(p.coefficients_in(var).values(), key=len)
    return _gcd_list(coeffs, rng)


def _gcd_list(polys: list[LaurentPoly], rng: random.Random) -> LaurentPoly:
    polys = [p for p in polys if p.terms]
    if not polys:
        raise ValueError("gcd of no nonzero polynomials")
    polys.sort(key=lambda t: (t.total_degree(), len(t)))
    g = make_monic(polys[0])
    for p in polys[1:]:
        if g.is_constant():
            break
        q = try_divide(p, g)
        if q is not None:
            continue
        g = _gcd(g, p, rng)
    return g


def _gcd(p: LaurentPoly, q: LaurentPoly, rng: random.Random) -> LaurentPoly:
    ring = p.ring
    if not p.terms:
        return make_monic(q)
    if not q.terms:
        return make_monic(p)
    if p.is_constant() or q.is_constant():
        return ring.one()
    # monomial part
    ep, p = split_monomial(p)
    eq, q = split_monomial(q)
    mono = [min(a, b) for a, b in zip(ep, eq)]
    g = _gcd_primitive_mono(p, q, rng)
    return g.mul_monomial(mono) if any(mono) else g


def _gcd_primitive_mono(p: LaurentPoly, q: LaurentPoly, rng: random.Random) -> LaurentPoly:
    ring = p.ring
    if p.is_constant() or q.is_constant():
        return ring.one()
    if len(q) > len(p):
        p, q = q, p
    if try_divide(p, q) is not None:
        return make_monic(q)
    vp, vq = p.variables(), q.variables()
    common = sorted(vp & vq)
    if not common:
        return ring.one()
    # variables occurring in only one argument cannot occur in the gcd
    for v in sorted((vp | vq) - set(common)):
        if v in vp:
            return _gcd_list([q] + list(p.coefficients_in(v).values()), rng)
        return _gcd_list([p] + list(q.coefficients_in(v).values()), rng)
    bounds = _image_degree_bounds(p, q, common, rng)
    for v in common:
        if bounds[v] == 0:
            return _gcd_list(list(p.coefficients_in(v).values())
                             + list(q.coefficients_in(v).values()), rng)
    var = min(common, key=lambda v: (max(p.degree_in(v), q.degree_in(v)), v))
    cp = _content_in(p, var, rng)
    cq = _content_in(q, var, rng)
    c = _gcd(cp, cq, rng)
    a = divide_exact(p, cp)
    b = divide_exact(q, cq)
    if a.degree_in(var) < b.degree_in(var):
        a, b = b, a
    while True:
        r = _pseudo_rem(a, b, var)
        if not r.terms:
            g = b
            break
        if r.degree_in(var) == 0:
            g = ring.one()
            break
        a, b = b, divide_exact(r, _content_in(r, var, rng))
    g = make_monic(g * c)
    return g


def poly_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Monic gcd of two polynomials (nonnegative exponents)."""
    return _gcd(p, q, random.Random(_IMAGE_SEED))


def gcd_many(polys: Sequence[LaurentPoly]) -> LaurentPoly:
    """Monic gcd of a sequence of polynomials, zero entries ignored."""
    rng = random.Random(_IMAGE_SEED)
    nonzero = [p for p in polys if p.terms]
    if not nonzero:
        raise ValueError("gcd of no nonzero polynomials")
    e = monomial_gcd_key(nonzero)
    stripped = [p.mul_monomial([-x for x in e]) if any(e) else p for p in nonzero]
    g = _gcd_list(stripped, rng)
    return g.mul_monomial(e) if any(e) else g

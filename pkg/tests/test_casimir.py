from fractions import Fraction

import pytest

from casimirkit import fixtures as fx
from casimirkit.casimir import (
    CasimirFunction,
    NotClosedError,
    UnsupportedClassError,
    decompose,
    exact_null_search,
    find_casimirs,
    independent_casimirs,
    integrate_closed,
    is_closed,
    jacobian_rank,
    match_references,
    sample_points,
    verify_casimir,
)
from casimirkit.nullspace import OneForm, in_span, null_covectors
from casimirkit.poisson import bracket_eval, build_explicit
from casimirkit.scalar import field
from casimirkit.symb import RationalFn, parse_expr

Q = field(0, False)


def _form(ring, comps):
    return OneForm(ring, [parse_expr(c, ring) for c in comps])


def _cas(ring, text):
    return CasimirFunction.from_poly(parse_expr(text, ring))


def test_is_closed_examples(ring3, ring8):
    assert is_closed(_form(ring3, ["z1", "z2", "z3"]))
    assert is_closed(_form(ring8, fx.coords(8)))
    assert is_closed(_form(ring8, fx.SU3_GAMMA_COMBINED))
    rep = is_closed(_form(ring3, ["z2", "0", "0"]))
    assert not rep
    assert [(i, j) for i, j, _ in rep.failing] == [(1, 2)]
    assert rep.failing[0][2].render() == "-1"  # d1 gamma_2 - d2 gamma_1


def test_integrate_examples(ring3):
    F = integrate_closed(_form(ring3, ["z1", "z2", "z3"]))
    assert F.poly_part == parse_expr("(z1^2 + z2^2 + z3^2)/2", ring3).as_laurent()
    L = integrate_closed(_form(ring3, ["2/z1", "3/z2", "-1/z3"]))
    assert L.poly_part.is_zero()
    assert L.log_vector() == [Q(2), Q(3), Q(-1)]
    assert integrate_closed(_form(ring3, ["0", "0", "0"])).is_zero()


def test_integrate_mixed_laurent(ring3):
    g = _form(ring3, ["z2 + 1/z1", "z1 - z3^-2", "2*z2*z3^-3"])
    F = integrate_closed(g)
    assert F.differential() == g


def test_integrate_errors(ring3):
    with pytest.raises(NotClosedError):
        integrate_closed(_form(ring3, ["z2", "0", "0"]))
    with pytest.raises(UnsupportedClassError):
        integrate_closed(_form(ring3, ["1/(z1 + z2)", "1/(z1 + z2)", "0"]))


def test_exact_null_search_so3(so3, ring3):
    forms = exact_null_search(so3, 1)
    assert in_span(_form(ring3, ["z1", "z2", "z3"]), forms)


def test_exact_null_search_su3(su3, ring8):
    forms = exact_null_search(su3, 2)
    integrals = [integrate_closed(f).poly_part for f in forms]
    for ref in (fx.SU3_C1, fx.SU3_C2):
        # dC lies in the scalar span of the forms iff C lies in the span of their integrals
        assert decompose(parse_expr(ref, ring8).as_laurent(), integrals) is not None
    basis = null_covectors(su3)
    for f in forms:
        assert is_closed(f) and f.annihilates(su3)
        assert in_span(f, basis)


def test_exact_null_search_zero_matrix(ring3):
    J = build_explicit(ring3, [["0"] * 3] * 3)
    forms = exact_null_search(J, 0)
    assert len(forms) == 3
    assert all(f.is_polynomial() for f in forms)


def test_monotone_in_degree(so3):
    low = exact_null_search(so3, 1)
    high = exact_null_search(so3, 3)
    assert len(low) <= len(high)
    for f in low:
        assert in_span(f, high)


def test_round_trip(su3):
    for f in exact_null_search(su3, 2):
        F = integrate_closed(f)
        assert F.differential() == f
        assert verify_casimir(su3, F)[0]


def test_verify_examples(su3, so3, ring3, ring8):
    assert verify_casimir(su3, _cas(ring8, fx.SU3_C1))[0]
    assert verify_casimir(su3, _cas(ring8, fx.SU3_C2))[0]
    ok, res = verify_casimir(so3, _cas(ring3, "z1"))
    assert not ok
    assert [r.render() for r in res] == ["0", "-z3", "z2"]


def test_independence(su3, ring8):
    C1 = _cas(ring8, fx.SU3_C1)
    C2 = _cas(ring8, fx.SU3_C2)
    assert independent_casimirs([C1, C1.scale(2)], su3) == [C1]
    assert independent_casimirs([C1, C2], su3) == [C1, C2]
    assert independent_casimirs([], su3) == []
    for p in sample_points(su3, 3, seed=0):
        assert jacobian_rank([C1, C2], p) == 2


def test_sample_points_deterministic(su3):
    assert sample_points(su3, 3, seed=5) == sample_points(su3, 3, seed=5)


def test_pipeline_so3(so3, ring3):
    res = find_casimirs(so3)
    assert res.corank == 1 and not res.inconclusive
    assert [c.render() for c in res.casimirs] == ["z1^2 + z2^2 + z3^2"]


def test_pipeline_plank(ring3):
    J = build_explicit(ring3, [["0", "z1*z2", "-z1*z3"], ["-z1*z2", "0", "z2*z3"],
                               ["z1*z3", "-z2*z3", "0"]])
    res = find_casimirs(J)
    assert [c.render() for c in res.casimirs] == ["log(z1) + log(z2) + log(z3)"]
    for C in res.casimirs:
        for z in range(3):
            assert not bracket_eval_casimir(J, C, z)


def bracket_eval_casimir(J, C, alpha):
    """``{C, z_alpha}`` including the logarithmic part."""
    grad = C.gradient()
    acc = RationalFn(J.ring.zero())
    for a in range(J.n):
        if grad[a] and J.entries[a][alpha]:
            acc = acc + grad[a] * J.entries[a][alpha]
    return acc


def test_pipeline_su3(su3, ring8):
    res = find_casimirs(su3)
    assert res.rank == 6 and len(res.casimirs) == 2 and not res.inconclusive
    C1, C2 = (c.poly_part for c in res.casimirs)
    ref1 = parse_expr(fx.SU3_C1, ring8).as_laurent()
    ref2 = parse_expr(fx.SU3_C2, ring8).as_laurent()
    m1 = match_references(C1, [ref1, ref2])
    assert set(m1.coefficients) == {"R1"}
    m2 = match_references(C2, [ref1, ref2], [C1])
    assert m2 is not None and "R2" in m2.coefficients
    for C in res.casimirs:
        for z in ring8.gens():
            assert bracket_eval(su3, RationalFn(C.poly_part), RationalFn(z)).is_zero()


def test_render_and_normalize(ring3):
    C = CasimirFunction(ring3, parse_expr("z1^2/2", ring3).as_laurent(),
                        [(Fraction(1, 2), 1)])
    assert C.normalized().render() == "z1^2 + log(z2)"

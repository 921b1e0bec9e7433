import pytest

from casimirkit import fixtures as fx
from casimirkit.casimir import decompose, match_references, verify_casimir
from casimirkit.liealg import (
    MatrixRep,
    NotSubalgebraError,
    builtin_rep,
    structure_constants_from_rep,
    trace_casimir,
)
from casimirkit.poisson import build_lie_poisson, check_jacobi
from casimirkit.scalar import field
from casimirkit.symb import Ring, parse_expr


def _lie_matrix(name):
    rep = builtin_rep(name)
    sc = structure_constants_from_rep(rep)
    return build_lie_poisson(sc, Ring(fx.coords(rep.n), sc.field))


def _mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def test_so3_relations():
    rep = builtin_rep("so3")
    assert rep.n == 3 and rep.size == 3
    X = rep.matrices
    for j, k, i in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        assert _mat_eq(rep.commutator(j, k), X[i])
    for m in X:
        assert all(m[r][c] == -m[c][r] for r in range(3) for c in range(3))


def test_gellmann_anti_hermitian_traceless():
    rep = builtin_rep("su3_gellmann")
    assert rep.n == 8
    for m in rep.matrices:
        assert sum((m[i][i] for i in range(3)), rep.field.zero) == rep.field.zero
        for r in range(3):
            for c in range(3):
                a, b, cc, d = m[r][c].parts()
                assert rep.field.make(a, b, cc, d) == -rep.field.make(*_conj(m[c][r]))


def _conj(x):
    a, b, c, d = x.parts()
    return a, b, -c, -d


def test_unknown_builtin():
    with pytest.raises(ValueError):
        builtin_rep("g2")


def test_so3_constants_regenerate_rigid_body(ring3, so3):
    assert _lie_matrix("so3") == so3


def test_su3_constants_regenerate_matrix(su3):
    assert _lie_matrix("su3_gellmann") == su3


def test_zero_rep():
    Q = field(0, False)
    sc = structure_constants_from_rep(MatrixRep([[[0, 0], [0, 0]]], Q))
    assert not sc.nonzero_triples()


def test_not_subalgebra():
    Q = field(0, False)
    rep = MatrixRep([[[0, 1], [0, 0]], [[0, 0], [1, 0]]], Q)
    with pytest.raises(NotSubalgebraError):
        structure_constants_from_rep(rep)


def test_jacobi_for_builtin_constants():
    for name in ("so3", "su3_gellmann", "so21"):
        assert check_jacobi(_lie_matrix(name)).holds


def test_trace_so3():
    tc = trace_casimir(builtin_rep("so3"), 2)
    ring = tc.casimir.ring
    ref = parse_expr("z1^2 + z2^2 + z3^2", ring).as_laurent()
    assert decompose(tc.casimir.poly_part, [ref]) is not None


def test_trace_so21():
    tc = trace_casimir(builtin_rep("so21"), 2)
    ref = parse_expr("z1^2 + z2^2 - z3^2", tc.casimir.ring).as_laurent()
    assert decompose(tc.casimir.poly_part, [ref]) is not None


def test_trace_su3_order_1_vanishes():
    assert trace_casimir(builtin_rep("su3_gellmann"), 1).casimir.is_zero()


@pytest.mark.parametrize("name", ["so3", "su3_gellmann", "so21"])
@pytest.mark.parametrize("order", [2, 3])
def test_trace_casimirs_verify(name, order):
    J = _lie_matrix(name)
    tc = trace_casimir(builtin_rep(name), order, J.ring)
    assert verify_casimir(J, tc.casimir)[0]


def test_trace_su3_proportional_to_references(ring8):
    refs = [parse_expr(fx.SU3_C1, ring8).as_laurent(), parse_expr(fx.SU3_C2, ring8).as_laurent()]
    t2 = trace_casimir(builtin_rep("su3_gellmann"), 2, ring8)
    t3 = trace_casimir(builtin_rep("su3_gellmann"), 3, ring8)
    m2 = match_references(t2.casimir.poly_part, refs)
    assert m2.render() == {"R1": "-2"}
    m3 = match_references(t3.casimir.poly_part, refs, [refs[0]])
    assert m3.render() == {"R2": "-1/3"}
    assert str(t3.phase) == "i"

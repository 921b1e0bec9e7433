import random

from casimirkit import fixtures as fx
from casimirkit.nullspace import OneForm, in_span, null_covectors
from casimirkit.poisson import PlankSpec, build_explicit, build_plank, rank_generic
from casimirkit.scalar import field
from casimirkit.symb import Ring, parse_expr

Q = field(0, False)


def _form(ring, comps):
    return OneForm(ring, [parse_expr(c, ring) for c in comps])


def test_so3_covector(so3, ring3):
    basis = null_covectors(so3)
    assert basis == [_form(ring3, ["z1", "z2", "z3"])]


def test_plank_cyclic_covector(ring3):
    c = [[0, 1, -1], [-1, 0, 1], [1, -1, 0]]
    J = build_plank(PlankSpec(3, [[Q(x) for x in r] for r in c]), ring3)
    assert null_covectors(J) == [_form(ring3, ["1/z1", "1/z2", "1/z3"])]


def test_su3_covectors_contain_reference(su3, ring8):
    basis = null_covectors(su3)
    assert len(basis) == 2
    for ref in (fx.SU3_GAMMA1, fx.SU3_GAMMA2):
        assert in_span(_form(ring8, ref), basis)


def test_in_span_examples(so3, ring3):
    basis = null_covectors(so3)
    res = in_span(_form(ring3, ["2*z1", "2*z2", "2*z3"]), basis)
    assert res and res.coefficients[0].render() == "2"
    assert not in_span(_form(ring3, ["1", "0", "0"]), basis)


def test_full_rank_gives_empty():
    ring = Ring(["q", "p"], Q)
    J = build_explicit(ring, [["0", "1"], ["-1", "0"]])
    assert null_covectors(J) == []


def test_zero_matrix_all_forms(ring3):
    J = build_explicit(ring3, [["0"] * 3] * 3)
    assert len(null_covectors(J)) == 3


def test_deterministic(su3):
    assert null_covectors(su3) == null_covectors(su3)


def test_plank_shape_and_size():
    rng = random.Random(11)
    for _ in range(10):
        d = rng.choice([3, 4, 5])
        ring = Ring(fx.coords(d), Q)
        c = [[Q(0)] * d for _ in range(d)]
        for i in range(d):
            for j in range(i + 1, d):
                v = rng.randint(-3, 3)
                c[i][j], c[j][i] = Q(v), Q(-v)
        J = build_plank(PlankSpec(d, c), ring)
        basis = null_covectors(J)
        assert len(basis) == d - rank_generic(J)
        for g in basis:
            assert g.annihilates(J)
            for i, comp in enumerate(g):
                if comp:
                    assert comp.is_laurent()
                    (exps, _), = comp.as_laurent().items()
                    assert exps == tuple(-1 if k == i else 0 for k in range(d))

import math

import numpy as np
import pytest

from casimirkit.casimir import CasimirFunction
from casimirkit.kinetic import (
    ArityError,
    DivergenceConditionError,
    FieldGenerator,
    GridMismatchError,
    InnerBracket,
    KineticSpec,
    compose_casimir,
    discrete_bracket,
    inner_casimirs,
    linear_functional,
    sample_field,
    verify_convergence,
)
from casimirkit.liealg import builtin_rep, structure_constants_from_rep
from casimirkit.poisson import StructureConstants
from casimirkit.scalar import field

TWO_PI = 2 * math.pi


@pytest.fixture(scope="module")
def canonical():
    return KineticSpec(InnerBracket("canonical", pairs=1), [(0, TWO_PI)] * 2, 64, "periodic")


@pytest.fixture(scope="module")
def spin():
    sc = structure_constants_from_rep(builtin_rep("so3"))
    return KineticSpec(InnerBracket("lie_poisson", constants=sc), [(-1, 1)] * 3, 16,
                       "compact_support")


def test_compose_canonical(canonical):
    C = compose_casimir(canonical, "f^2")
    assert str(C.derivative) == "2*f"
    assert C.casimirs == []


def test_compose_spin_gas(spin):
    C = compose_casimir(spin, "C1*f")
    assert [c.render() for c in C.casimirs] == ["z1^2 + z2^2 + z3^2"]
    assert str(C.derivative) == "C1"


def test_compose_su3_gas():
    sc = structure_constants_from_rep(builtin_rep("su3_gellmann"))
    spec = KineticSpec(InnerBracket("lie_poisson", constants=sc), [(-1, 1)] * 8, 8,
                       "compact_support")
    C = compose_casimir(spec, "C1 + C2 + f^3")
    assert len(C.casimirs) == 2
    assert str(C.derivative) == "3*f**2"


def test_arity_error(spin):
    with pytest.raises(ArityError):
        compose_casimir(spin, "C2*f")


def test_divergence_condition_rejected():
    Q = field(0, False)
    # [X1, X2] = X2: c_2^{12} = 1, so sum_i c_i^{i2} = 1 != 0
    sc = StructureConstants.from_triples(2, Q, [(2, 1, 2, 1)])
    with pytest.raises(DivergenceConditionError, match=r"c_i\^\{ik\} = 0"):
        KineticSpec(InnerBracket("lie_poisson", constants=sc), [(-1, 1)] * 2, 16,
                    "compact_support")


def test_spec_validation(canonical):
    with pytest.raises(ValueError):
        KineticSpec(InnerBracket("canonical", pairs=1), [(0, 1)] * 2, 4, "periodic")
    with pytest.raises(ValueError):
        KineticSpec(InnerBracket("canonical", pairs=1), [(0, 1)] * 2, 16, "reflecting")


def test_bracket_self_zero_and_antisymmetry(canonical, spin):
    for spec, gen_kind, phis in ((canonical, "fourier", ("sin(q)*cos(p)", "q*p^2")),
                                 (spin, "bump", ("z1*z2 + z3", "z3^2 - z1"))):
        gen = FieldGenerator(gen_kind, 1, spec.extent)
        f = sample_field(spec, gen, spec.resolution)
        F, G = (linear_functional(spec, p) for p in phis)
        assert discrete_bracket(spec, F, F, f) == 0.0
        assert discrete_bracket(spec, F, G, f) == -discrete_bracket(spec, G, F, f)


def test_constant_K_is_exact_zero(canonical):
    gen = FieldGenerator("fourier", 0, canonical.extent)
    C = compose_casimir(canonical, "3")
    F = linear_functional(canonical, "sin(q)*cos(p)")
    rep = verify_convergence(canonical, C, F, gen, 3)
    assert rep.residuals == [0.0, 0.0, 0.0]
    assert rep.at_floor and rep.passed


def test_grid_mismatch(canonical):
    F = linear_functional(canonical, "q")
    gen = FieldGenerator("fourier", 0, canonical.extent)
    f = sample_field(canonical, gen, 32)
    f.resolution = 64
    with pytest.raises(GridMismatchError):
        discrete_bracket(canonical, F, F, f)


def test_canonical_second_order(canonical):
    gen = FieldGenerator("fourier", 0, canonical.extent)
    rep = verify_convergence(canonical, compose_casimir(canonical, "f^2"),
                             linear_functional(canonical, "sin(q)*cos(p)"), gen, 3)
    assert rep.passed and rep.resolutions == [64, 128, 256]
    assert all(3.5 <= r <= 4.5 for r in rep.ratios)


def test_spin_gas_quadratic_K_order(spin):
    gen = FieldGenerator("bump", 0, spin.extent)
    rep = verify_convergence(spin, compose_casimir(spin, "C1*f^2"),
                             linear_functional(spin, "z1*z2 + z3"), gen, 3)
    assert rep.passed and not rep.at_floor
    assert rep.observed_order >= 1.7


def test_non_casimir_does_not_converge(spin):
    # f^2 weighted by a non-invariant function is not a Casimir: the residual stays finite
    gen = FieldGenerator("bump", 0, spin.extent)
    ring = inner_casimirs(spin)[0].ring
    fake = CasimirFunction.from_poly(ring.var(0))
    C = compose_casimir(spin, "C1*f^2", [fake])
    rep = verify_convergence(spin, C, linear_functional(spin, "z1*z2 + z3"), gen, 3)
    assert not rep.passed


def test_field_generators_deterministic(spin):
    a = FieldGenerator("bump", 7, spin.extent)(spin.grid(8))
    b = FieldGenerator("bump", 7, spin.extent)(spin.grid(8))
    assert np.array_equal(a, b)
    # compact support: zero on the boundary layer
    assert np.all(a[0] == 0) and np.all(a[-1] == 0)

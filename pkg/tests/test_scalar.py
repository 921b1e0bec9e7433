from fractions import Fraction
import math

import pytest
from hypothesis import given, settings, strategies as st

from casimirkit.scalar import FieldMismatchError, field

Q3 = field(3, False)
Q3I = field(3, True)
QI = field(0, True)


def test_conjugate_pair_product():
    s = Q3.sqrt()
    assert (1 + s) * (1 - s) == Q3(-2)


def test_sqrt_squared():
    assert Q3.sqrt() * Q3.sqrt() == Q3(3)


def test_i_squared():
    i = QI.imag_unit()
    assert i * i == QI(-1)


def test_to_float_examples():
    assert Q3(Fraction(1, 2)).to_float() == 0.5
    assert abs(Q3.sqrt().to_float() - math.sqrt(3)) < 1e-15
    assert Q3(0).to_float() == 0.0


def test_to_complex_mixed():
    x = Q3I.make(1, 2, 3, 4)
    z = x.to_complex()
    assert abs(z - complex(1 + 2 * math.sqrt(3), 3 + 4 * math.sqrt(3))) < 1e-12


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Q3(1) / Q3(0)


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        Q3(1) + field(2, False)(1)


def test_imaginary_rejected_without_flag():
    with pytest.raises(ValueError):
        Q3.make(0, 0, 1)
    with pytest.raises(ValueError):
        Q3.imag_unit()


def test_degenerate_radicands_collapse():
    f1 = field(1, False)
    assert f1.make(2, 3) == f1(5)
    assert field(0, False).make(2) == field(0, False)(2)


def test_non_square_free_rejected():
    with pytest.raises(ValueError):
        field(12, False)


def test_fields_are_interned():
    assert field(3, True) is Q3I


def test_render():
    assert str(Q3I.make(1, 2, 3, 4)) == "1 + 2*sqrt(3) + 3*i + 4*sqrt(3)*i"
    assert str(Q3.make(Fraction(-1, 3), 0)) == "-1/3"


def test_lowest_terms():
    x = Q3.make(Fraction(2, 4), Fraction(6, 8))
    assert x.parts()[:2] == (Fraction(1, 2), Fraction(3, 4))
    assert x.den > 0


fracs = st.fractions(min_value=-50, max_value=50, max_denominator=20)
scalars = st.builds(lambda a, b, c, d: Q3I.make(a, b, c, d), fracs, fracs, fracs, fracs)


@settings(max_examples=150, deadline=None)
@given(scalars, scalars, scalars)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    if x:
        assert x * x.inverse() == Q3I.one
        assert (y / x) * x == y


@settings(max_examples=100, deadline=None)
@given(scalars, scalars)
def test_canonical_form_unique(x, y):
    assert (x - y == Q3I.zero) == (x.parts() == y.parts())
    if x == y:
        assert hash(x) == hash(y)

import pytest

from casimirkit import fixtures as fx
from casimirkit.poisson import build_explicit
from casimirkit.scalar import field
from casimirkit.symb import Ring, parse_expr


@pytest.fixture(scope="session")
def ring3():
    return Ring(fx.coords(3), field(0, False))


@pytest.fixture(scope="session")
def ring8():
    return Ring(fx.coords(8), field(3, False))


@pytest.fixture(scope="session")
def so3(ring3):
    return build_explicit(ring3, fx.SO3_MATRIX)


@pytest.fixture(scope="session")
def su3(ring8):
    return build_explicit(ring8, fx.SU3_MATRIX)


@pytest.fixture(scope="session")
def parse3(ring3):
    return lambda s: parse_expr(s, ring3)


@pytest.fixture(scope="session")
def parse8(ring8):
    return lambda s: parse_expr(s, ring8)

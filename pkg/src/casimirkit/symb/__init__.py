"""Exact Laurent polynomials, rational functions and the expression parser."""
from .gcd import NotDivisible, divide_exact, gcd_many, poly_gcd, try_divide
from .parse import ParseError, parse_expr, parse_scalar
from .poly import LaurentPoly, PoleError, Ring
from .rational import RationalFn

__all__ = [
    "LaurentPoly",
    "NotDivisible",
    "ParseError",
    "PoleError",
    "RationalFn",
    "Ring",
    "divide_exact",
    "gcd_many",
    "parse_expr",
    "parse_scalar",
    "poly_gcd",
    "try_divide",
]

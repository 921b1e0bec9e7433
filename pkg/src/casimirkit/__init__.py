"""Exact computation and verification of Casimir invariants of Poisson brackets.

Casimirs are found from the null covectors of the Poisson matrix ``J``:
covectors admitting a monomial integrating factor are integrated directly
(including logarithmic Casimirs), and polynomial Casimirs come from a linear
search for one-forms that are both null and closed.  All symbolic work is
exact over a quadratic extension of the rationals, optionally with ``i``.
"""
from .casimir import (CasimirFunction, PfaffianSystem, exact_null_search, find_casimirs,
                      independent_casimirs, integrate_closed, is_closed, verify_casimir)
from .liealg import MatrixRep, builtin_rep, structure_constants_from_rep, trace_casimir
from .nullspace import OneForm, in_span, null_covectors
from .poisson import (PlankSpec, PoissonMatrix, StructureConstants, bracket_eval,
                      build_explicit, build_lie_poisson, build_plank, check_divergence_free,
                      check_jacobi, rank_at_point, rank_generic)
from .scalar import QQ, Field, Scalar, field
from .symb import LaurentPoly, ParseError, PoleError, RationalFn, Ring, parse_expr

__version__ = "0.1.0"

__all__ = [
    "CasimirFunction", "PfaffianSystem", "exact_null_search", "find_casimirs",
    "independent_casimirs", "integrate_closed", "is_closed", "verify_casimir",
    "MatrixRep", "builtin_rep", "structure_constants_from_rep", "trace_casimir",
    "OneForm", "in_span", "null_covectors",
    "PlankSpec", "PoissonMatrix", "StructureConstants", "bracket_eval", "build_explicit",
    "build_lie_poisson", "build_plank", "check_divergence_free", "check_jacobi",
    "rank_at_point", "rank_generic",
    "QQ", "Field", "Scalar", "field",
    "LaurentPoly", "ParseError", "PoleError", "RationalFn", "Ring", "parse_expr",
    "__version__",
]

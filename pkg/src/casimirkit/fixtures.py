"""Builtin example problems and reference data.

The su(3) matrix, its two null covectors (with the common ``1/Delta`` prefactor
cleared), ``Delta`` itself and the two Casimirs are transcribed term by term
from the reference su(3) data.  Problems are plain dicts in the CLI input
schema so the command line and the tests load them through one path.
"""
from __future__ import annotations

import copy

__all__ = [
    "SO3_MATRIX",
    "SU3_MATRIX",
    "SU3_GAMMA1",
    "SU3_GAMMA2",
    "SU3_DELTA",
    "SU3_C1",
    "SU3_C2",
    "SU3_GAMMA_COMBINED",
    "FIXTURES",
    "fixture",
    "coords",
]


def coords(n: int) -> list[str]:
    return [f"z{i}" for i in range(1, n + 1)]


SO3_MATRIX = [
    ["0", "z3", "-z2"],
    ["-z3", "0", "z1"],
    ["z2", "-z1", "0"],
]

SU3_MATRIX = [
    ["0", "2*z3", "-2*z2", "z7", "-z6", "z5", "-z4", "0"],
    ["-2*z3", "0", "2*z1", "z6", "z7", "-z4", "-z5", "0"],
    ["2*z2", "-2*z1", "0", "z5", "-z4", "-z7", "z6", "0"],
    ["-z7", "-z6", "-z5", "0", "z3 + sqrt(3)*z8", "z2", "z1", "-sqrt(3)*z5"],
    ["z6", "-z7", "z4", "-z3 - sqrt(3)*z8", "0", "-z1", "z2", "sqrt(3)*z4"],
    ["-z5", "z4", "z7", "-z2", "z1", "0", "-z3 + sqrt(3)*z8", "-sqrt(3)*z7"],
    ["z4", "z5", "-z6", "-z1", "-z2", "z3 - sqrt(3)*z8", "0", "sqrt(3)*z6"],
    ["0", "0", "0", "sqrt(3)*z5", "-sqrt(3)*z4", "sqrt(3)*z7", "-sqrt(3)*z6", "0"],
]

# Delta * gamma^(1): components along dz1 .. dz8
SU3_GAMMA1 = [
    "2*sqrt(3)*(z1*z2*z4 - z1^2*z5 + z1*z3*z7 + z4*z6*z7 + z5*z7^2 + sqrt(3)*z1*z7*z8)",
    "2*sqrt(3)*(z2^2*z4 - z1*z2*z5 + z2*z3*z7 + z5*z6*z7 - z4*z7^2 + sqrt(3)*z2*z7*z8)",
    "sqrt(3)*(2*z2*z3*z4 - 2*z1*z3*z5 + 2*z3^2*z7 + z4^2*z7 + z5^2*z7 - z6^2*z7"
    " - z7^3 + 2*sqrt(3)*z3*z7*z8)",
    "2*sqrt(3)*(z2*z4^2 - z1*z4*z5 + 2*z3*z4*z7 + z1*z6*z7 - z2*z7^2)",
    "2*sqrt(3)*(z2*z4*z5 - z1*z5^2 + 2*z3*z5*z7 + z2*z6*z7 + z1*z7^2)",
    "2*sqrt(3)*(z2*z4*z6 - z1*z5*z6 + z1*z4*z7 + z2*z5*z7)",
    "0",
    "2*z1^2*z7 + 2*z2^2*z7 + 2*z3^2*z7 - z4^2*z7 - z5^2*z7 - z6^2*z7 - z7^3"
    " + 2*sqrt(3)*(z2*z4 - z1*z5 + z3*z7)*z8",
]

# Delta * gamma^(2)
SU3_GAMMA2 = [
    "2*z1^3 + 2*z1*z2^2 + 2*z1*z3^2 - z1*z4^2 - z1*z5^2 - z1*z6^2 - z1*z7^2"
    " - 2*sqrt(3)*z4*z6*z8 - 2*sqrt(3)*z5*z7*z8 - 6*z1*z8^2",
    "2*z1^2*z2 + 2*z2^3 + 2*z2*z3^2 - z2*z4^2 - z2*z5^2 - z2*z6^2 - z2*z7^2"
    " - 2*sqrt(3)*z5*z6*z8 + 2*sqrt(3)*z4*z7*z8 - 6*z2*z8^2",
    "2*z1^2*z3 + 2*z2^2*z3 + 2*z3^3 - z3*z4^2 - z3*z5^2 - z3*z6^2 - z3*z7^2"
    " - sqrt(3)*z4^2*z8 - sqrt(3)*z5^2*z8 + sqrt(3)*z6^2*z8 + sqrt(3)*z7^2*z8 - 6*z3*z8^2",
    "2*z1^2*z4 + 2*z2^2*z4 + 2*z3^2*z4 - z4^3 - z4*z5^2 - z4*z6^2 - z4*z7^2"
    " - 2*sqrt(3)*z3*z4*z8 - 2*sqrt(3)*z1*z6*z8 + 2*sqrt(3)*z2*z7*z8",
    "2*z1^2*z5 + 2*z2^2*z5 + 2*z3^2*z5 - z4^2*z5 - z5^3 - z5*z6^2 - z5*z7^2"
    " - 2*sqrt(3)*z3*z5*z8 - 2*sqrt(3)*z2*z6*z8 - 2*sqrt(3)*z1*z7*z8",
    "2*z1^2*z6 + 2*z2^2*z6 + 2*z3^2*z6 - z4^2*z6 - z5^2*z6 - z6^3 - z6*z7^2"
    " - 2*sqrt(3)*z1*z4*z8 - 2*sqrt(3)*z2*z5*z8 + 2*sqrt(3)*z3*z6*z8",
    "2*z1^2*z7 + 2*z2^2*z7 + 2*z3^2*z7 - z4^2*z7 - z5^2*z7 - z6^2*z7 - z7^3"
    " + 2*sqrt(3)*z8*(z2*z4 - z1*z5 + z3*z7)",
    "0",
]

SU3_DELTA = (
    "2*z1^2*z7 + 2*z2^2*z7 + 2*z3^2*z7 - z4^2*z7 - z5^2*z7 - z6^2*z7 - z7^3"
    " + 2*sqrt(3)*(z2*z4*z8 - z1*z5*z8 + z3*z7*z8)"
)

SU3_C1 = "z1^2 + z2^2 + z3^2 + z4^2 + z5^2 + z6^2 + z7^2 + z8^2"

SU3_C2 = (
    "-18*z1*z4*z6 - 18*z1*z5*z7 - 6*sqrt(3)*z1^2*z8 + 18*z2*z4*z7 - 18*z2*z5*z6"
    " - 6*sqrt(3)*z2^2*z8 - 9*z3*z4^2 - 9*z3*z5^2 + 9*z3*z6^2 + 9*z3*z7^2"
    " - 6*sqrt(3)*z3^2*z8 + 3*sqrt(3)*z4^2*z8 + 3*sqrt(3)*z5^2*z8 + 3*sqrt(3)*z6^2*z8"
    " + 3*sqrt(3)*z7^2*z8 + 2*sqrt(3)*z8^3"
)

# a*gamma^(1) + b*gamma^(2), the exact combination whose integral is C2
SU3_GAMMA_COMBINED = [
    "-18*z4*z6 - 18*z5*z7 - 12*sqrt(3)*z1*z8",
    "-18*z5*z6 + 18*z4*z7 - 12*sqrt(3)*z2*z8",
    "-9*z4^2 - 9*z5^2 + 9*z6^2 + 9*z7^2 - 12*sqrt(3)*z3*z8",
    "-18*z3*z4 - 18*z1*z6 + 18*z2*z7 + 6*sqrt(3)*z4*z8",
    "-18*z3*z5 - 18*z2*z6 - 18*z1*z7 + 6*sqrt(3)*z5*z8",
    "-18*z1*z4 - 18*z2*z5 + 18*z3*z6 + 6*sqrt(3)*z6*z8",
    "18*z2*z4 - 18*z1*z5 + 18*z3*z7 + 6*sqrt(3)*z7*z8",
    "-6*sqrt(3)*z1^2 - 6*sqrt(3)*z2^2 - 6*sqrt(3)*z3^2 + 3*sqrt(3)*z4^2"
    " + 3*sqrt(3)*z5^2 + 3*sqrt(3)*z6^2 + 3*sqrt(3)*z7^2 + 6*sqrt(3)*z8^2",
]

FIXTURES: dict[str, dict] = {
    "so3": {
        "variables": coords(3),
        "scalar_field": {"radicand": 0, "imaginary": False},
        "matrix": SO3_MATRIX,
        "representation": "so3",
        "references": {"casimirs": ["z1^2 + z2^2 + z3^2"], "covectors": [["z1", "z2", "z3"]]},
    },
    "su3": {
        "variables": coords(8),
        "scalar_field": {"radicand": 3, "imaginary": False},
        "matrix": SU3_MATRIX,
        "representation": "su3_gellmann",
        "options": {"degree_bound": 3},
        "references": {"casimirs": [SU3_C1, SU3_C2], "covectors": [SU3_GAMMA1, SU3_GAMMA2]},
    },
    "plank3": {
        "variables": coords(3),
        "scalar_field": {"radicand": 0, "imaginary": False},
        "plank": [[0, 1, -1], [-1, 0, 1], [1, -1, 0]],
    },
    "so21": {
        "variables": coords(3),
        "scalar_field": {"radicand": 0, "imaginary": False},
        "lie_poisson": {"builtin": "so21"},
    },
    "spin_gas": {
        "variables": coords(3),
        "scalar_field": {"radicand": 0, "imaginary": False},
        "kinetic": {
            "inner": {"lie_poisson": {"builtin": "so3"}},
            "domain": {"extent": [[-1, 1], [-1, 1], [-1, 1]], "resolution": 16},
            "boundary": "compact_support",
            "K": "C1*f",
            "phi": "z1*z2 + z3",
            "field": {"kind": "bump", "seed": 0},
        },
        "options": {"levels": 3},
    },
    "su3_gas": {
        "variables": coords(8),
        "scalar_field": {"radicand": 3, "imaginary": False},
        "kinetic": {
            "inner": {"lie_poisson": {"builtin": "su3_gellmann"}},
            "domain": {"extent": [[-1, 1]] * 8, "resolution": 32},
            "boundary": "compact_support",
            "K": "C1 + C2 + f^3",
            "phi": "z1*z8 + z4",
            "field": {"kind": "bump", "seed": 0},
        },
        "options": {"levels": 3},
    },
    "canonical_gas": {
        "variables": ["q", "p"],
        "scalar_field": {"radicand": 0, "imaginary": False},
        "kinetic": {
            "inner": {"canonical": {"pairs": 1}},
            "domain": {"extent": [[0, "2*pi"], [0, "2*pi"]], "resolution": 64},
            "boundary": "periodic",
            "K": "f^2",
            "phi": "sin(q)*cos(p)",
            "field": {"kind": "fourier", "seed": 0},
        },
        "options": {"levels": 3},
    },
}


def fixture(name: str) -> dict:
    """Deep copy of a builtin problem."""
    try:
        return copy.deepcopy(FIXTURES[name])
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None

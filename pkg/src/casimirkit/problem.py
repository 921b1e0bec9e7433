"""Problem files: the JSON input schema shared by the command line and the tests.

A problem names its coordinates, its scalar field and exactly one structure
block::

    {
      "variables": ["z1", "z2", "z3"],
      "scalar_field": {"radicand": 0, "imaginary": false},
      "matrix": [["0", "z3", "-z2"], ["-z3", "0", "z1"], ["z2", "-z1", "0"]],
      "options": {"degree_bound": 3, "seed": 0, "levels": 3},
      "references": {"casimirs": ["z1^2 + z2^2 + z3^2"]}
    }

Structure blocks: ``matrix`` (expression strings), ``lie_poisson``
(``{"builtin": name}`` or ``{"triples": [[i, j, k, value], ...]}`` meaning
``c_i^{jk} = value`` with 1-based indices), ``plank`` (skew constant matrix),
or ``kinetic`` (see :func:`load_kinetic`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any

from .kinetic import FieldGenerator, InnerBracket, KineticSpec, parse_real
from .liealg import MatrixRep, builtin_rep, structure_constants_from_rep, BUILTIN_REPS
from .poisson import (PlankSpec, PoissonMatrix, StructureConstants, build_explicit,
                      build_lie_poisson, build_plank)
from .scalar import Field, field
from .symb import ParseError, RationalFn, Ring, parse_expr, parse_scalar

__all__ = ["InputError", "Problem", "load_problem", "problem_from_dict", "STRUCTURE_BLOCKS"]

STRUCTURE_BLOCKS = ("matrix", "lie_poisson", "plank", "kinetic")
_KNOWN_KEYS = set(STRUCTURE_BLOCKS) | {"variables", "scalar_field", "options", "references",
                                       "representation", "name"}


class InputError(ValueError):
    """Malformed problem file; the message locates the problem."""


@dataclass
class Problem:
    """A validated problem file."""

    data: dict
    variables: list[str]
    field: Field
    block: str
    options: dict = dc_field(default_factory=dict)

    @property
    def ring(self) -> Ring:
        return Ring(self.variables, self.field)

    def option(self, name: str, default):
        return self.options.get(name, default)

    # -- finite-dimensional structures --------------------------------------

    def structure_constants(self) -> StructureConstants:
        spec = self.data["lie_poisson"]
        return _constants(spec, len(self.variables), self.field, "lie_poisson")

    def matrix(self) -> PoissonMatrix:
        """Build the Poisson matrix (may raise ``NotAntisymmetricError``)."""
        ring = self.ring
        if self.block == "matrix":
            rows = self.data["matrix"]
            n = len(self.variables)
            if not isinstance(rows, list) or len(rows) != n or any(
                    not isinstance(r, list) or len(r) != n for r in rows):
                raise InputError(f"matrix must be {n}x{n} to match the variables")
            parsed = []
            for i, row in enumerate(rows):
                out = []
                for j, e in enumerate(row):
                    out.append(self._expr(e, f"matrix[{i + 1}][{j + 1}]"))
                parsed.append(out)
            return build_explicit(ring, parsed)
        if self.block == "lie_poisson":
            return build_lie_poisson(self.structure_constants(), ring)
        if self.block == "plank":
            rows = self.data["plank"]
            d = len(self.variables)
            if not isinstance(rows, list) or len(rows) != d or any(
                    not isinstance(r, list) or len(r) != d for r in rows):
                raise InputError(f"plank matrix must be {d}x{d} to match the variables")
            c = [[self._scalar(x, f"plank[{i + 1}][{j + 1}]") for j, x in enumerate(r)]
                 for i, r in enumerate(rows)]
            return build_plank(PlankSpec(d, c), ring)
        raise InputError(f"the {self.block!r} block has no finite-dimensional matrix")

    def representation(self) -> MatrixRep | None:
        name = self.data.get("representation")
        if name is None and self.block == "lie_poisson":
            name = self.data["lie_poisson"].get("builtin")
        if name is None:
            return None
        return _builtin(name)

    def references(self) -> dict[str, list]:
        refs = self.data.get("references") or {}
        out: dict[str, list] = {"casimirs": [], "covectors": []}
        ring = self.ring
        for idx, text in enumerate(refs.get("casimirs", [])):
            val = self._expr(text, f"references.casimirs[{idx + 1}]", ring)
            if not val.is_laurent():
                raise InputError(f"references.casimirs[{idx + 1}] must be a Laurent polynomial")
            out["casimirs"].append(val.as_laurent())
        for idx, comps in enumerate(refs.get("covectors", [])):
            if not isinstance(comps, list) or len(comps) != len(self.variables):
                raise InputError(f"references.covectors[{idx + 1}] needs one component per variable")
            out["covectors"].append([self._expr(c, f"references.covectors[{idx + 1}]", ring)
                                     for c in comps])
        return out

    # -- kinetic -------------------------------------------------------------

    def kinetic(self) -> tuple[KineticSpec, dict]:
        """Spec plus the raw ``K``, ``phi`` and field settings (validated)."""
        block = self.data["kinetic"]
        if not isinstance(block, dict):
            raise InputError("kinetic block must be an object")
        inner_raw = block.get("inner")
        if not isinstance(inner_raw, dict) or len(inner_raw) != 1:
            raise InputError("kinetic.inner must hold exactly one of 'canonical' or 'lie_poisson'")
        (kind, body), = inner_raw.items()
        if kind == "canonical":
            pairs = body.get("pairs") if isinstance(body, dict) else None
            if not isinstance(pairs, int) or pairs < 1:
                raise InputError("kinetic.inner.canonical.pairs must be a positive integer")
            inner = InnerBracket("canonical", pairs=pairs)
        elif kind == "lie_poisson":
            sc = _constants(body, len(self.variables), self.field, "kinetic.inner.lie_poisson")
            inner = InnerBracket("lie_poisson", constants=sc)
        else:
            raise InputError(f"unknown inner bracket {kind!r}")
        domain = block.get("domain") or {}
        try:
            extent = [(parse_real(lo), parse_real(hi)) for lo, hi in domain["extent"]]
            resolution = int(domain["resolution"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"kinetic.domain needs 'extent' pairs and 'resolution': {exc}") from None
        boundary = block.get("boundary", "periodic")
        spec = KineticSpec(inner, extent, resolution, boundary, list(self.variables))
        for key in ("K", "phi"):
            if not isinstance(block.get(key), str):
                raise InputError(f"kinetic.{key} must be an expression string")
        fld = block.get("field") or {}
        default_kind = "fourier" if boundary == "periodic" else "bump"
        gen = FieldGenerator(fld.get("kind", default_kind), int(fld.get("seed", 0)), spec.extent)
        return spec, {"K": block["K"], "phi": block["phi"], "generator": gen}

    # -- helpers ----------------------------------------------------------

    def _expr(self, text, where: str, ring: Ring | None = None) -> RationalFn:
        ring = ring or self.ring
        if isinstance(text, int) and not isinstance(text, bool):
            return RationalFn(ring.const(text))
        if not isinstance(text, str):
            raise InputError(f"{where}: expected an expression string, got {text!r}")
        try:
            return parse_expr(text, ring)
        except ParseError as exc:
            raise InputError(f"{where}: {exc}") from None
        except ZeroDivisionError as exc:
            raise InputError(f"{where}: {exc}") from None

    def _scalar(self, value, where: str):
        return _scalar(value, self.field, where)


def _scalar(value, fld: Field, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise InputError(f"{where}: expected an integer or constant expression, got {value!r}")
    try:
        return parse_scalar(value, fld)
    except (ParseError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _builtin(name) -> MatrixRep:
    if name not in BUILTIN_REPS:
        raise InputError(f"unknown builtin representation {name!r}; choose from {sorted(BUILTIN_REPS)}")
    return builtin_rep(name)


def _constants(spec, n: int, fld: Field, where: str) -> StructureConstants:
    if not isinstance(spec, dict):
        raise InputError(f"{where} must be an object")
    if "builtin" in spec:
        rep = _builtin(spec["builtin"])
        if rep.n != n:
            raise InputError(f"{where}: builtin {spec['builtin']!r} has dimension {rep.n}, "
                             f"but {n} variables are declared")
        sc = structure_constants_from_rep(rep)
        if sc.field is not fld:
            if sc.field.radicand not in (0, fld.radicand) and any(
                    x.parts()[1] for a in sc.c for b in a for x in b):
                raise InputError(f"{where}: builtin {spec['builtin']!r} needs "
                                 f"sqrt({sc.field.radicand}) in the scalar field")
            c = [[[fld.make(*x.parts()[:2]) for x in b] for b in a] for a in sc.c]
            sc = StructureConstants(n, c, fld)
        return sc
    if "triples" in spec:
        triples = []
        for idx, t in enumerate(spec["triples"]):
            if not isinstance(t, list) or len(t) != 4:
                raise InputError(f"{where}.triples[{idx + 1}] must be [i, j, k, value]")
            i, j, k, v = t
            if not all(isinstance(x, int) and 1 <= x <= n for x in (i, j, k)):
                raise InputError(f"{where}.triples[{idx + 1}]: indices must lie in 1..{n}")
            if j == k:
                raise InputError(f"{where}.triples[{idx + 1}]: c_i^{{jj}} must vanish")
            triples.append((i, j, k, _scalar(v, fld, f"{where}.triples[{idx + 1}]")))
        return StructureConstants.from_triples(n, fld, triples)
    raise InputError(f"{where} needs 'builtin' or 'triples'")


def problem_from_dict(data: Any) -> Problem:
    """Validate a decoded problem document."""
    if not isinstance(data, dict):
        raise InputError("problem file must hold a JSON object")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise InputError(f"unknown top-level keys: {sorted(unknown)}")
    blocks = [b for b in STRUCTURE_BLOCKS if b in data]
    if len(blocks) != 1:
        raise InputError(f"exactly one of {list(STRUCTURE_BLOCKS)} is required, found {blocks}")
    block = blocks[0]
    sf = data.get("scalar_field") or {}
    if not isinstance(sf, dict):
        raise InputError("scalar_field must be an object")
    try:
        fld = field(int(sf.get("radicand", 0)), bool(sf.get("imaginary", False)))
    except (TypeError, ValueError) as exc:
        raise InputError(f"scalar_field: {exc}") from None
    variables = data.get("variables")
    if variables is None:
        variables = _default_variables(data, block)
    if (not isinstance(variables, list) or not variables
            or not all(isinstance(v, str) and v for v in variables)):
        raise InputError("variables must be a nonempty list of names")
    if len(set(variables)) != len(variables):
        raise InputError("variables must be distinct")
    try:
        Ring(variables, fld)
    except ValueError as exc:
        raise InputError(f"variables: {exc}") from None
    options = data.get("options") or {}
    if not isinstance(options, dict):
        raise InputError("options must be an object")
    for key in ("degree_bound", "seed", "levels"):
        if key in options and (not isinstance(options[key], int) or isinstance(options[key], bool)):
            raise InputError(f"options.{key} must be an integer")
    return Problem(data, list(variables), fld, block, dict(options))


def _default_variables(data: dict, block: str):
    if block == "lie_poisson" and isinstance(data["lie_poisson"], dict):
        name = data["lie_poisson"].get("builtin")
        if name in BUILTIN_REPS:
            return [f"z{i}" for i in range(1, builtin_rep(name).n + 1)]
    if block == "plank" and isinstance(data["plank"], list):
        return [f"z{i}" for i in range(1, len(data["plank"]) + 1)]
    if block == "matrix" and isinstance(data["matrix"], list):
        return [f"z{i}" for i in range(1, len(data["matrix"]) + 1)]
    return None


def load_problem(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: "
                         f"{exc.msg}") from None
    return problem_from_dict(data)

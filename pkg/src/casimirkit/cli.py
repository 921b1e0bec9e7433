"""Command-line interface: ``casimirkit verify | casimirs | trace-casimirs | kinetic-check``.

Every command reads one problem (a JSON file or ``--fixture NAME``) and
prints a report, either as aligned text (``--format human``) or as one JSON
document with a ``schema_version`` field (``--format machine``).

Exit codes: 0 success, 1 verification or convergence failure, 2 input
error, 3 inconclusive Casimir search.
"""
from __future__ import annotations

import json
import sys
from typing import Callable

import click

from . import __version__
from .casimir import (DEFAULT_DEGREE_BOUND, find_casimirs, jacobian_rank, match_references,
                      sample_points, verify_casimir)
from .fixtures import FIXTURES, fixture
from .kinetic import (ArityError, DivergenceConditionError, ExpressionError, compose_casimir,
                      linear_functional, verify_convergence)
from .liealg import TracePhaseError, structure_constants_from_rep, trace_casimir
from .nullspace import OneForm, in_span
from .poisson import (NotAntisymmetricError, bracket_eval, build_lie_poisson, check_divergence_free,
                      check_jacobi)
from .problem import InputError, Problem, _builtin, load_problem, problem_from_dict
from .symb import ParseError, RationalFn, Ring, parse_expr

__all__ = ["main", "SCHEMA_VERSION", "EXIT_OK", "EXIT_FAIL", "EXIT_INPUT", "EXIT_INCONCLUSIVE",
           "run_verify", "run_casimirs", "run_trace_casimirs", "run_kinetic_check",
           "render_human"]

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _header(command: str, problem: Problem) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command,
            "variables": problem.variables,
            "scalar_field": {"radicand": problem.field.radicand,
                             "imaginary": problem.field.imaginary}}


# -- report builders (return (report, exit code)) ------------------------------

def run_verify(problem: Problem) -> tuple[dict, int]:
    report = _header("verify", problem)
    try:
        J = problem.matrix()
    except NotAntisymmetricError as exc:
        report.update({"antisymmetric": {"holds": False, "offending": list(exc.index),
                                         "message": str(exc)},
                       "jacobi": None, "divergence_free": None, "poisson": False})
        return report, EXIT_FAIL
    jac = check_jacobi(J)
    report.update({
        "antisymmetric": {"holds": True, "offending": None},
        "jacobi": jac.to_dict(),
        "divergence_free": check_divergence_free(J),
        "poisson": jac.holds,
    })
    return report, EXIT_OK if jac.holds else EXIT_FAIL


def _point_strings(point) -> list[str]:
    return [str(x) for x in point]


def run_casimirs(problem: Problem, degree_bound: int | None = None,
                 seed: int | None = None) -> tuple[dict, int]:
    degree_bound = problem.option("degree_bound", DEFAULT_DEGREE_BOUND) if degree_bound is None \
        else degree_bound
    seed = problem.option("seed", 0) if seed is None else seed
    if degree_bound < 0:
        raise InputError("degree bound must be non-negative")
    verify, code = run_verify(problem)
    report = _header("casimirs", problem)
    report["poisson"] = verify["poisson"]
    if code != EXIT_OK:
        report["verification"] = {k: verify[k] for k in ("antisymmetric", "jacobi")}
        return report, EXIT_FAIL
    J = problem.matrix()
    res = find_casimirs(J, degree_bound, seed)
    entries = []
    ring = J.ring
    coords = [RationalFn(g) for g in ring.gens()]
    for C, src in zip(res.casimirs, res.sources):
        # re-verify immediately before emission
        ok, residual = verify_casimir(J, C)
        brackets_zero = not C.log_part and all(
            not bracket_eval(J, RationalFn(C.poly_part), z) for z in coords)
        entries.append({
            "expression": C.render(),
            "degree": C.degree() if not C.log_part else None,
            "source": src,
            "verified": ok,
            "residual": [r.render() for r in residual],
            "brackets_with_coordinates_zero": brackets_zero if not C.log_part else ok,
        })
    independence = None
    if res.casimirs:
        pts = sample_points(J, 3, seed, casimirs=res.casimirs)
        independence = {"points": [_point_strings(p) for p in pts],
                        "jacobian_rank": [jacobian_rank(res.casimirs, p) for p in pts]}
    report.update({
        "dimension": J.n,
        "rank": res.rank,
        "corank": res.corank,
        "covectors": [f.component_strings() for f in res.covectors],
        "casimirs": entries,
        "casimir_count": len(entries),
        "degree_bound": degree_bound,
        "seed": seed,
        "independence": independence,
        "inconclusive": res.inconclusive,
    })
    refs = problem.references()
    if refs["covectors"] or refs["casimirs"]:
        span = []
        for idx, comps in enumerate(refs["covectors"], 1):
            r = in_span(OneForm(ring, comps), res.covectors)
            span.append({"reference": idx, "in_span": r.member,
                         "coefficients": None if r.coefficients is None
                         else [c.render() for c in r.coefficients]})
        matches = []
        lower = []
        ref_polys = refs["casimirs"]
        for idx, C in enumerate(res.casimirs, 1):
            m = match_references(C.poly_part, ref_polys, lower) if not C.log_part else None
            matches.append({"casimir": idx,
                            "combination": None if m is None else m.render()})
            if not C.log_part:
                lower.append(C.poly_part)
        report["references"] = {"covectors": span, "casimirs": matches}
    if not all(e["verified"] for e in entries):
        return report, EXIT_FAIL
    return report, EXIT_INCONCLUSIVE if res.inconclusive else EXIT_OK


def run_trace_casimirs(problem: Problem, orders=(2, 3), representation: str | None = None,
                       seed: int | None = None) -> tuple[dict, int]:
    rep = _builtin(representation) if representation else problem.representation()
    if rep is None:
        raise InputError("trace-casimirs needs a representation: a 'representation' key, "
                         "a lie_poisson builtin, or --rep")
    if rep.n != len(problem.variables):
        raise InputError(f"representation {rep.name!r} has {rep.n} generators but "
                         f"{len(problem.variables)} variables are declared")
    sc = structure_constants_from_rep(rep)
    ring = Ring(problem.variables, sc.field)
    J = build_lie_poisson(sc, ring)
    report = _header("trace-casimirs", problem)
    report["representation"] = rep.name
    if problem.block in ("matrix", "lie_poisson"):
        try:
            given = problem.matrix()
            report["matches_problem_matrix"] = (given.render_rows() == J.render_rows())
        except NotAntisymmetricError:
            report["matches_problem_matrix"] = False
    refs = problem.references()["casimirs"] if problem.block != "kinetic" else []
    if refs:
        refs = [r if r.ring == ring else _rering(r, ring) for r in refs]
        report["reference_source"] = "problem"
    else:
        search = find_casimirs(J, seed=problem.option("seed", 0) if seed is None else seed)
        refs = [C.poly_part for C in search.casimirs if not C.log_part]
        report["reference_source"] = "pipeline"
        report["pipeline_casimirs"] = [r.render() for r in refs]
    out = []
    ok = True
    for k in orders:
        try:
            tc = trace_casimir(rep, k, ring)
        except TracePhaseError as exc:
            out.append({"order": k, "error": str(exc)})
            ok = False
            continue
        verified, _ = verify_casimir(J, tc.casimir)
        ok = ok and verified
        poly = tc.casimir.poly_part
        match = match_references(poly, refs) if poly.terms else None
        out.append({
            "order": k,
            "polynomial": tc.casimir.render(),
            "phase": str(tc.phase),
            "verified": verified,
            "reference_combination": None if match is None else match.render(),
        })
    report["orders"] = out
    return report, EXIT_OK if ok else EXIT_FAIL


def _rering(p, ring):
    return parse_expr(p.render(), ring).as_laurent()


def run_kinetic_check(problem: Problem, levels: int | None = None,
                      seed: int | None = None) -> tuple[dict, int]:
    if problem.block != "kinetic":
        raise InputError("kinetic-check needs a 'kinetic' block")
    levels = problem.option("levels", 3) if levels is None else levels
    seed = problem.option("seed", 0) if seed is None else seed
    if levels < 3:
        raise InputError("at least 3 grid levels are required")
    report = _header("kinetic-check", problem)
    try:
        spec, extra = problem.kinetic()
    except DivergenceConditionError as exc:
        report.update({"accepted": False, "message": str(exc), "passed": False})
        return report, EXIT_FAIL
    except (ExpressionError, ValueError) as exc:
        raise InputError(f"kinetic: {exc}") from None
    try:
        C = compose_casimir(spec, extra["K"], seed=seed)
        F = linear_functional(spec, extra["phi"])
    except (ArityError, ExpressionError) as exc:
        raise InputError(f"kinetic: {exc}") from None
    conv = verify_convergence(spec, C, F, extra["generator"], levels)
    report.update({
        "accepted": True,
        "inner": spec.inner.kind,
        "dimension": spec.dim,
        "boundary": spec.boundary,
        "casimir_functional": C.describe(),
        "test_functional": F.describe(),
        "field": {"kind": extra["generator"].kind, "seed": extra["generator"].seed},
        "convergence": conv.to_dict(),
        "passed": conv.passed,
    })
    return report, EXIT_OK if conv.passed else EXIT_FAIL


# -- output ------------------------------------------------------------------

def _human_lines(value, indent: int = 0) -> list[str]:
    pad = " " * indent
    lines = []
    if isinstance(value, dict):
        if not value:
            return [pad + "(none)"]
        width = max(len(str(k)) for k in value)
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{str(k):<{width}} :")
                lines.extend(_human_lines(v, indent + 2))
            else:
                lines.append(f"{pad}{str(k):<{width}} : {_scalar_text(v)}")
    elif isinstance(value, list):
        for i, v in enumerate(value, 1):
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}[{i}]")
                lines.extend(_human_lines(v, indent + 2))
            else:
                lines.append(f"{pad}[{i}] {_scalar_text(v)}")
    else:
        lines.append(pad + _scalar_text(value))
    return lines


def _scalar_text(v) -> str:
    if v is True:
        return "yes"
    if v is False:
        return "no"
    if v is None:
        return "-"
    if isinstance(v, (list, dict)):
        return "(none)"
    return str(v)


def render_human(report: dict) -> str:
    body = {k: v for k, v in report.items() if k != "schema_version"}
    return "\n".join(_human_lines(body))


def _emit(report: dict, fmt: str) -> None:
    if fmt == "machine":
        click.echo(json.dumps(report, indent=2, sort_keys=True))
    else:
        click.echo(render_human(report))


def _load(path, fixture_name) -> Problem:
    if (path is None) == (fixture_name is None):
        raise InputError("give exactly one of a problem FILE or --fixture NAME")
    if fixture_name is not None:
        return problem_from_dict(fixture(fixture_name))
    return load_problem(path)


def _run(fmt: str, command: str, action: Callable[[], tuple[dict, int]]) -> None:
    try:
        report, code = action()
    except (InputError, ParseError) as exc:
        if fmt == "machine":
            click.echo(json.dumps({"schema_version": SCHEMA_VERSION, "command": command,
                                   "error": str(exc)}, indent=2, sort_keys=True))
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    _emit(report, fmt)
    sys.exit(code)


_file_arg = click.argument("path", required=False, type=click.Path(dir_okay=False))
_fixture_opt = click.option("--fixture", "fixture_name", type=click.Choice(sorted(FIXTURES)),
                            help="Use a builtin example problem instead of a file.")
_format_opt = click.option("--format", "fmt", type=click.Choice(["human", "machine"]),
                           default="human", show_default=True)
_seed_opt = click.option("--seed", type=int, default=None, help="Seed for sample points.")


@click.group()
@click.version_option(__version__, prog_name="casimirkit")
def main():
    """Compute and verify Casimir invariants of Poisson brackets."""


@main.command("verify")
@_file_arg
@_fixture_opt
@_format_opt
def verify_cmd(path, fixture_name, fmt):
    """Check antisymmetry, the Jacobi identity and divergence-freeness."""
    _run(fmt, "verify", lambda: run_verify(_load(path, fixture_name)))


@main.command("casimirs")
@_file_arg
@_fixture_opt
@_format_opt
@_seed_opt
@click.option("--degree-bound", type=int, default=None,
              help=f"Degree bound of the exact-form search (default {DEFAULT_DEGREE_BOUND}).")
def casimirs_cmd(path, fixture_name, fmt, seed, degree_bound):
    """Rank, null covectors and independent Casimir generators."""
    _run(fmt, "casimirs",
         lambda: run_casimirs(_load(path, fixture_name), degree_bound, seed))


@main.command("trace-casimirs")
@_file_arg
@_fixture_opt
@_format_opt
@_seed_opt
@click.option("--order", "orders", type=int, multiple=True,
              help="Trace order (repeatable; default 2 and 3).")
@click.option("--rep", "representation", type=str, default=None,
              help="Builtin representation: so3, su3_gellmann or so21.")
def trace_cmd(path, fixture_name, fmt, seed, orders, representation):
    """Casimirs from traces of generator products, checked against the bracket."""
    orders = orders or (2, 3)
    if any(k < 1 for k in orders):
        click.echo("input error: trace orders must be positive", err=True)
        sys.exit(EXIT_INPUT)
    _run(fmt, "trace-casimirs",
         lambda: run_trace_casimirs(_load(path, fixture_name), orders, representation, seed))


@main.command("kinetic-check")
@_file_arg
@_fixture_opt
@_format_opt
@_seed_opt
@click.option("--levels", type=int, default=None, help="Number of grid levels (at least 3).")
def kinetic_cmd(path, fixture_name, fmt, seed, levels):
    """Grid-refinement check that a composed functional is a kinetic Casimir."""
    _run(fmt, "kinetic-check",
         lambda: run_kinetic_check(_load(path, fixture_name), levels, seed))


if __name__ == "__main__":  # pragma: no cover
    main()

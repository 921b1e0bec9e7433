"""Casimir functionals of kinetic brackets ``{F, G}[f] = int f [dF/df, dG/df] d^n z``.

The inner bracket is either canonical or Lie-Poisson.  Casimirs of the
kinetic bracket are ``C[f] = int K(C^(1), ..., C^(m), f)`` where the
``C^(i)`` are Casimirs of the inner bracket.  This module builds such
functionals and checks them numerically: the discrete bracket of ``C``
with a test functional must vanish under grid refinement at the rate of
the second-order stencil.

Floating point is used only here.
"""
from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np
import sympy

from .casimir import CasimirFunction, find_casimirs
from .poisson import (PoissonMatrix, StructureConstants, build_lie_poisson,
                      check_divergence_free)
from .symb import Ring

__all__ = [
    "InnerBracket",
    "KineticSpec",
    "FieldSample",
    "FieldGenerator",
    "FunctionalSpec",
    "DivergenceConditionError",
    "ArityError",
    "ExpressionError",
    "GridMismatchError",
    "ConvergenceReport",
    "compose_casimir",
    "linear_functional",
    "discrete_bracket",
    "verify_convergence",
    "verify_null_pointwise",
    "sample_field",
    "parse_real",
    "ORDER_THRESHOLD",
]

ORDER_THRESHOLD = 1.7
UNIT_ROUNDOFF = np.finfo(float).eps / 2
# finest-level grids larger than this are checked pointwise instead
GRID_POINT_BUDGET = 1 << 22


class DivergenceConditionError(ValueError):
    """The inner Lie-Poisson constants violate ``c_i^{ik} = 0``."""


class ArityError(ValueError):
    """``K`` references an inner Casimir that does not exist."""


class ExpressionError(ValueError):
    """A numeric expression uses unsupported syntax or names."""


class GridMismatchError(ValueError):
    """A field sample does not match the grid it is used on."""


# -- numeric expressions -----------------------------------------------------

_FUNCTIONS = {"sin": sympy.sin, "cos": sympy.cos, "tan": sympy.tan, "exp": sympy.exp,
              "log": sympy.log, "sqrt": sympy.sqrt, "tanh": sympy.tanh,
              "sinh": sympy.sinh, "cosh": sympy.cosh}
_CONSTANTS = {"pi": sympy.pi, "E": sympy.E}
_ALLOWED_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load,
                  ast.Constant, ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub,
                  ast.UAdd)


def _to_sympy(text: str, names: Sequence[str]) -> sympy.Expr:
    """Parse ``text`` with ``^`` as power, whitelisted functions, and the given symbol names."""
    if not isinstance(text, str):
        return sympy.sympify(text)
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg} at column {exc.offset}") from None
    known = set(names) | set(_FUNCTIONS) | set(_CONSTANTS)
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ExpressionError(f"unsupported syntax {type(node).__name__} in {text!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal {node.value!r} in {text!r}")
        if isinstance(node, ast.Call) and not (isinstance(node.func, ast.Name)
                                               and node.func.id in _FUNCTIONS):
            raise ExpressionError(f"unsupported function call in {text!r}")
        if isinstance(node, ast.Name) and node.id not in known:
            raise ExpressionError(f"unknown name {node.id!r} in {text!r}")
    local = {n: sympy.Symbol(n) for n in names}
    local.update(_FUNCTIONS)
    local.update(_CONSTANTS)
    return sympy.sympify(eval(compile(tree, "<expr>", "eval"), {"__builtins__": {}}, local))


def parse_real(text) -> float:
    """Numeric constant such as ``"2*pi"`` or ``3``."""
    return float(_to_sympy(str(text), ()))


# -- specs ---------------------------------------------------------------------

@dataclass
class InnerBracket:
    """``kind`` is ``"canonical"`` (``pairs`` set) or ``"lie_poisson"`` (``constants`` set)."""

    kind: str
    pairs: int = 0
    constants: StructureConstants | None = None

    def __post_init__(self):
        if self.kind == "canonical":
            if self.pairs < 1:
                raise ValueError("canonical inner bracket needs at least one pair")
        elif self.kind == "lie_poisson":
            if self.constants is None:
                raise ValueError("lie_poisson inner bracket needs structure constants")
        else:
            raise ValueError(f"unknown inner bracket kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return 2 * self.pairs if self.kind == "canonical" else self.constants.n

    def default_coords(self) -> list[str]:
        if self.kind == "canonical":
            if self.pairs == 1:
                return ["q", "p"]
            return ([f"q{i}" for i in range(1, self.pairs + 1)]
                    + [f"p{i}" for i in range(1, self.pairs + 1)])
        return [f"z{i}" for i in range(1, self.dim + 1)]

    def matrix_numeric(self, coords: Sequence[np.ndarray]) -> dict[tuple[int, int], np.ndarray | float]:
        """Nonzero entries ``J^{jk}`` for ``j < k`` evaluated on coordinate arrays."""
        out: dict[tuple[int, int], np.ndarray | float] = {}
        if self.kind == "canonical":
            for a in range(self.pairs):
                out[(a, a + self.pairs)] = 1.0
            return out
        sc = self.constants
        n = sc.n
        for j in range(n):
            for k in range(j + 1, n):
                acc = None
                for i in range(n):
                    c = sc.c[i][j][k]
                    if c:
                        term = c.to_float() * coords[i]
                        acc = term if acc is None else acc + term
                if acc is not None:
                    out[(j, k)] = acc
        return out


@dataclass
class KineticSpec:
    """Inner bracket, box domain, base grid resolution and boundary treatment."""

    inner: InnerBracket
    extent: list[tuple[float, float]]
    resolution: int
    boundary: str
    coords: list[str] = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.coords:
            self.coords = self.inner.default_coords()
        d = self.inner.dim
        if len(self.coords) != d:
            raise ValueError(f"inner bracket has dimension {d} but {len(self.coords)} coordinates")
        if len(self.extent) != d:
            raise ValueError(f"domain needs {d} intervals, got {len(self.extent)}")
        self.extent = [(float(lo), float(hi)) for lo, hi in self.extent]
        if any(hi <= lo for lo, hi in self.extent):
            raise ValueError("every domain interval needs lo < hi")
        if self.resolution < 8:
            raise ValueError("grid resolution must be at least 8 per axis")
        if self.boundary not in ("periodic", "compact_support"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.inner.kind == "lie_poisson":
            ring = Ring(self.coords, self.inner.constants.field)
            if not check_divergence_free(build_lie_poisson(self.inner.constants, ring)):
                bad = [k + 1 for k, v in enumerate(self.inner.constants.trace_vector()) if v]
                raise DivergenceConditionError(
                    "inner structure constants must obey c_i^{ik} = 0 for all k; "
                    f"violated for k = {bad}")

    @property
    def dim(self) -> int:
        return self.inner.dim

    def inner_matrix(self) -> PoissonMatrix | None:
        if self.inner.kind != "lie_poisson":
            return None
        ring = Ring(self.coords, self.inner.constants.field)
        return build_lie_poisson(self.inner.constants, ring)

    def spacing(self, resolution: int) -> list[float]:
        return [(hi - lo) / resolution for lo, hi in self.extent]

    def axes(self, resolution: int) -> list[np.ndarray]:
        out = []
        for lo, hi in self.extent:
            if self.boundary == "periodic":
                out.append(lo + (hi - lo) * np.arange(resolution) / resolution)
            else:
                out.append(np.linspace(lo, hi, resolution + 1))
        return out

    def grid(self, resolution: int) -> list[np.ndarray]:
        return np.meshgrid(*self.axes(resolution), indexing="ij")

    def npoints(self, resolution: int) -> int:
        per = resolution if self.boundary == "periodic" else resolution + 1
        return per ** self.dim


@dataclass
class FieldSample:
    """Grid values of ``f`` at one resolution."""

    values: np.ndarray
    resolution: int

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field sample has non-finite values")


@dataclass
class FieldGenerator:
    """Seeded smooth field, callable on coordinate arrays.

    ``fourier`` is a low-mode trigonometric series (for periodic boxes);
    ``bump`` is ``(1 - s^2)^4`` per axis times a smooth modulation, which
    vanishes with three derivatives on the box boundary.
    """

    kind: str
    seed: int
    extent: list[tuple[float, float]]

    def __post_init__(self):
        if self.kind not in ("fourier", "bump"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        rng = np.random.default_rng(self.seed)
        d = len(self.extent)
        if self.kind == "fourier":
            modes = [m for m in np.ndindex(*(5,) * d) if any(x != 2 for x in m)]
            modes = [tuple(int(x) - 2 for x in m) for m in modes]
            modes = [m for m in modes if sum(abs(x) for x in m) <= 2]
            self._modes = np.array(modes, dtype=float)
            self._a = rng.normal(size=len(modes)) / (1.0 + np.abs(self._modes).sum(axis=1))
            self._b = rng.normal(size=len(modes)) / (1.0 + np.abs(self._modes).sum(axis=1))
            self._offset = 1.5
        else:
            self._amp = 1.0 + rng.random()
            self._w = rng.uniform(0.5, 1.5, size=d)
            self._phase = rng.uniform(0, 2 * np.pi, size=d)

    def __call__(self, coords: Sequence[np.ndarray]) -> np.ndarray:
        if self.kind == "fourier":
            out = np.full(np.shape(coords[0]), self._offset)
            for m, a, b in zip(self._modes, self._a, self._b):
                arg = 0.0
                for (lo, hi), k, x in zip(self.extent, m, coords):
                    if k:
                        arg = arg + k * 2 * np.pi * (x - lo) / (hi - lo)
                out = out + a * np.cos(arg) + b * np.sin(arg)
            return out
        out = np.full(np.shape(coords[0]), self._amp)
        mod = 1.0
        for (lo, hi), x, w, ph in zip(self.extent, coords, self._w, self._phase):
            s = 2 * (x - lo) / (hi - lo) - 1
            out = out * np.clip(1 - s * s, 0, None) ** 4
            mod = mod + 0.3 * np.sin(np.pi * w * s + ph) / len(self.extent)
        return out * mod


def sample_field(spec: KineticSpec, gen: Callable, resolution: int) -> FieldSample:
    return FieldSample(np.asarray(gen(spec.grid(resolution)), dtype=float), resolution)


@dataclass
class FunctionalSpec:
    """A functional through its derivative ``dF/df`` as a pointwise function.

    ``kind`` is ``"linear"`` (``F = int phi f``) or ``"composed"``
    (``C = int K(C^(1), .., C^(m), f)``).
    """

    kind: str
    expression: str
    coords: list[str]
    casimirs: list[CasimirFunction] = dc_field(default_factory=list)
    derivative: sympy.Expr | None = None
    _fn: Callable | None = None

    def functional_derivative(self, coords: Sequence[np.ndarray], f: np.ndarray) -> np.ndarray:
        """``dF/df`` on arrays of coordinates and field values."""
        if self.kind == "linear":
            val = self._fn(*coords)
        else:
            cvals = [C.evaluate_numeric(coords) for C in self.casimirs]
            val = self._fn(*cvals, f)
        return np.broadcast_to(np.asarray(val, dtype=float), np.shape(f))

    def describe(self) -> dict:
        out = {"kind": self.kind, "expression": self.expression,
               "derivative": str(self.derivative)}
        if self.kind == "composed":
            out["inner_casimirs"] = [C.render() for C in self.casimirs]
        return out


def linear_functional(spec: KineticSpec, phi: str) -> FunctionalSpec:
    """``F[f] = int phi(z) f(z) d^n z``, so ``dF/df = phi``."""
    expr = _to_sympy(phi, spec.coords)
    syms = [sympy.Symbol(c) for c in spec.coords]
    fn = sympy.lambdify(syms, expr, modules="numpy")
    return FunctionalSpec("linear", phi, list(spec.coords), derivative=expr, _fn=fn)


def inner_casimirs(spec: KineticSpec, seed: int = 0) -> list[CasimirFunction]:
    """Independent Casimirs of the inner bracket (none for a canonical one)."""
    J = spec.inner_matrix()
    if J is None:
        return []
    res = find_casimirs(J, seed=seed)
    if res.inconclusive:
        raise ArithmeticError("inner Casimir search was inconclusive; supply them explicitly")
    return res.casimirs


def compose_casimir(spec: KineticSpec, K: str,
                    casimirs: Sequence[CasimirFunction] | None = None,
                    seed: int = 0) -> FunctionalSpec:
    """``C[f] = int K(C1, .., Cm, f) d^n z`` with ``dC/df = dK/df``.

    ``K`` may use the names ``C1 .. Cm`` for the inner Casimirs and ``f``
    for the field.  Lie-Poisson inner brackets must satisfy ``c_i^{ik} = 0``
    (checked when the :class:`KineticSpec` is built).
    """
    if casimirs is None:
        casimirs = inner_casimirs(spec, seed)
    casimirs = list(casimirs)
    m = len(casimirs)
    names = [f"C{i}" for i in range(1, m + 1)] + ["f"]
    try:
        expr = _to_sympy(K, names)
    except ExpressionError as exc:
        text = str(exc)
        if "unknown name 'C" in text:
            raise ArityError(f"{text}; the inner bracket has {m} Casimir(s)") from None
        raise
    syms = [sympy.Symbol(n) for n in names]
    deriv = sympy.diff(expr, syms[-1])
    fn = sympy.lambdify(syms, deriv, modules="numpy")
    return FunctionalSpec("composed", K, list(spec.coords), casimirs, deriv, fn)


# -- discretization --------------------------------------------------------

def _derivative(spec: KineticSpec, a: np.ndarray, axis: int, h: float) -> np.ndarray:
    if spec.boundary == "periodic":
        return (np.roll(a, -1, axis=axis) - np.roll(a, 1, axis=axis)) / (2 * h)
    return np.gradient(a, h, axis=axis, edge_order=2)


def _weights(spec: KineticSpec, resolution: int) -> np.ndarray:
    hs = spec.spacing(resolution)
    w = np.ones((), dtype=float)
    for h in hs:
        if spec.boundary == "periodic":
            wi = np.full(resolution, h)
        else:
            wi = np.full(resolution + 1, h)
            wi[0] = wi[-1] = h / 2
        w = np.multiply.outer(w, wi)
    return w


def _inner_terms(spec: KineticSpec, coords, a, b, hs):
    """Per-pair terms ``J^{jk} (D_j a D_k b - D_k a D_j b)`` for ``j < k``."""
    J = spec.inner.matrix_numeric(coords)
    da = {}
    db = {}
    for j, k in J:
        for ax in (j, k):
            if ax not in da:
                da[ax] = _derivative(spec, a, ax, hs[ax])
                db[ax] = _derivative(spec, b, ax, hs[ax])
    return [(J[jk], da[jk[0]] * db[jk[1]] - da[jk[1]] * db[jk[0]]) for jk in sorted(J)]


def _bracket_parts(spec, F, G, f: FieldSample):
    res = f.resolution
    coords = spec.grid(res)
    if f.values.shape != np.shape(coords[0]):
        raise GridMismatchError(f"field has shape {f.values.shape}, grid has "
                                f"{np.shape(coords[0])}")
    a = F.functional_derivative(coords, f.values)
    b = G.functional_derivative(coords, f.values)
    hs = spec.spacing(res)
    inner = np.zeros_like(f.values)
    scale = 0.0
    for Jjk, diff in _inner_terms(spec, coords, a, b, hs):
        term = Jjk * diff
        inner = inner + term
        scale = max(scale, float(np.max(np.abs(term))) if np.size(term) else 0.0)
    w = _weights(spec, res)
    value = float(np.sum(w * f.values * inner))
    return value, scale


def discrete_bracket(spec: KineticSpec, F: FunctionalSpec, G: FunctionalSpec,
                     f: FieldSample) -> float:
    """Quadrature of ``f [dF/df, dG/df]`` with second-order centered differences.

    The inner bracket is assembled as ``sum_{j<k} J^{jk} (D_j a D_k b - D_k a D_j b)``
    so ``F = G`` gives exactly zero and swapping ``F`` and ``G`` flips the sign.
    """
    return _bracket_parts(spec, F, G, f)[0]


# -- convergence ---------------------------------------------------------------

@dataclass
class ConvergenceReport:
    mode: str
    resolutions: list[int]
    residuals: list[float]
    floors: list[float]
    ratios: list[float | None]
    observed_order: float | None
    at_floor: bool
    passed: bool
    message: str = ""

    def to_dict(self) -> dict:
        def num(x):
            if x is None:
                return None
            if math.isinf(x):
                return "inf"
            return float(f"{x:.6e}")

        return {
            "mode": self.mode,
            "resolutions": self.resolutions,
            "residuals": [num(r) for r in self.residuals],
            "floors": [num(r) for r in self.floors],
            "ratios": [num(r) for r in self.ratios],
            "observed_order": num(self.observed_order),
            "at_floor": self.at_floor,
            "passed": self.passed,
            "message": self.message,
        }


def _judge(mode, resolutions, residuals, floors) -> ConvergenceReport:
    below = [r <= fl for r, fl in zip(residuals, floors)]
    ratios: list[float | None] = []
    orders = []
    ok = True
    message = ""
    for l in range(len(residuals) - 1):
        r0, r1 = residuals[l], residuals[l + 1]
        if below[l + 1]:
            ratios.append(None if r1 == 0 else r0 / r1)
            continue
        if r1 >= r0:
            ok = False
            message = f"residual does not decrease from level {l + 1} to {l + 2}"
            ratios.append(r0 / r1)
            orders.append(math.log2(r0 / r1) if r0 > 0 else -math.inf)
            continue
        ratios.append(r0 / r1)
        orders.append(math.log2(r0 / r1))
    at_floor = all(below)
    order = min(orders) if orders else math.inf
    passed = ok and (at_floor or order >= ORDER_THRESHOLD)
    if not passed and not message:
        message = f"observed order {order:.3f} below {ORDER_THRESHOLD}"
    if at_floor:
        message = "residuals at machine-zero floor on every level"
    return ConvergenceReport(mode, resolutions, residuals, floors, ratios,
                             order, at_floor, passed, message)


def verify_convergence(spec: KineticSpec, C: FunctionalSpec, F: FunctionalSpec,
                       gen: Callable, levels: int = 3) -> ConvergenceReport:
    """Residuals ``|{C, F}_h|`` on grids refined ``levels`` times by halving ``h``.

    The observed order is the smallest ``log2(r_l / r_{l+1})``; the check passes
    when it is at least 1.7 or every residual sits at the machine-zero floor
    ``1e3 * u * N * max|f| * max|stencil term|``.  When the finest grid would
    exceed the point budget the pointwise null-condition check is used instead.
    """
    if levels < 3:
        raise ValueError("at least 3 levels are required")
    finest = spec.resolution * 2 ** (levels - 1)
    if spec.npoints(finest) > GRID_POINT_BUDGET:
        if C.kind != "composed":
            raise ValueError("pointwise mode needs a composed functional")
        return verify_null_pointwise(spec, C, gen, levels)
    resolutions, residuals, floors = [], [], []
    for l in range(levels):
        res = spec.resolution * 2 ** l
        f = sample_field(spec, gen, res)
        value, scale = _bracket_parts(spec, C, F, f)
        npts = f.values.size
        floor = 1e3 * UNIT_ROUNDOFF * npts * float(np.max(np.abs(f.values))) * scale
        resolutions.append(res)
        residuals.append(abs(value))
        floors.append(floor)
    return _judge("grid", resolutions, residuals, floors)


def verify_null_pointwise(spec: KineticSpec, C: FunctionalSpec, gen: Callable,
                          levels: int = 3, points: int = 64, seed: int = 0) -> ConvergenceReport:
    """Stencil residual of the null condition ``[f, dC/df] = 0`` at seeded interior points.

    Used for high-dimensional inner brackets where a full grid is out of
    reach.  Derivatives are centered differences with step ``h`` halved per
    level; the residual is the largest absolute value over the points.
    """
    rng = np.random.default_rng(seed)
    d = spec.dim
    lo = np.array([a for a, _ in spec.extent])
    hi = np.array([b for _, b in spec.extent])
    mid, half = (lo + hi) / 2, (hi - lo) / 2
    pts = mid + 0.8 * half * rng.uniform(-1, 1, size=(points, d))
    base = [pts[:, i] for i in range(d)]
    J = spec.inner.matrix_numeric(base)
    resolutions, residuals, floors = [], [], []
    for l in range(levels):
        res = spec.resolution * 2 ** l
        hs = spec.spacing(res)
        dfs, dgs = {}, {}
        for ax in range(d):
            plus = list(base)
            minus = list(base)
            plus[ax] = base[ax] + hs[ax]
            minus[ax] = base[ax] - hs[ax]
            fp, fm = gen(plus), gen(minus)
            gp = C.functional_derivative(plus, fp)
            gm = C.functional_derivative(minus, fm)
            dfs[ax] = (fp - fm) / (2 * hs[ax])
            dgs[ax] = (gp - gm) / (2 * hs[ax])
        total = np.zeros(points)
        scale = 0.0
        for (j, k), Jjk in sorted(J.items()):
            term = Jjk * (dfs[j] * dgs[k] - dfs[k] * dgs[j])
            total = total + term
            scale = max(scale, float(np.max(np.abs(term))))
        fmax = float(np.max(np.abs(gen(base))))
        resolutions.append(res)
        residuals.append(float(np.max(np.abs(total))))
        floors.append(1e3 * UNIT_ROUNDOFF * points * fmax * scale)
    return _judge("pointwise", resolutions, residuals, floors)

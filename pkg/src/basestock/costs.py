"""Cost expression trees for holding, stockout, and salvage functions.

Every functional form used by the built-in instances is expressible here:
linear rates, integer powers, affine pieces, sums, maxima, and threshold
piecewise combinations such as ``(x<3, 12x, 4x^2)``.

Evaluation is total: any expression evaluates to 0 for x < 0 (the gate is
applied once, at the top level, so inner affine pieces with negative
intercepts behave as written for x >= 0).  Expressions evaluate on plain
floats, numpy arrays, or :class:`basestock.dual.Dual` values alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from . import scalars


class CostExprError(ValueError):
    """Raised when a cost-expression specification cannot be parsed."""

    def __init__(self, message: str, path: str = "") -> None:
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass(frozen=True)
class CostExpr:
    """Base class for cost expression nodes."""

    def __call__(self, x):
        return eval_cost(self, x)


@dataclass(frozen=True)
class Const(CostExpr):
    value: float


@dataclass(frozen=True)
class Linear(CostExpr):
    coef: float


@dataclass(frozen=True)
class Power(CostExpr):
    coef: float
    exponent: int


@dataclass(frozen=True)
class Affine(CostExpr):
    intercept: float
    slope: float


@dataclass(frozen=True)
class Sum(CostExpr):
    terms: tuple[CostExpr, ...]


@dataclass(frozen=True)
class Max(CostExpr):
    terms: tuple[CostExpr, ...]


@dataclass(frozen=True)
class Piecewise(CostExpr):
    """Evaluates ``below`` for x < threshold and ``above`` for x >= threshold."""

    threshold: float
    below: CostExpr
    above: CostExpr


ZERO = Const(0.0)


def _eval(expr: CostExpr, x):
    if isinstance(expr, Const):
        return scalars.constant_like(x, expr.value)
    if isinstance(expr, Linear):
        return x * expr.coef
    if isinstance(expr, Power):
        return scalars.intpow(x, expr.exponent) * expr.coef
    if isinstance(expr, Affine):
        return x * expr.slope + expr.intercept
    if isinstance(expr, Sum):
        total = _eval(expr.terms[0], x)
        for term in expr.terms[1:]:
            total = total + _eval(term, x)
        return total
    if isinstance(expr, Max):
        best = _eval(expr.terms[0], x)
        for term in expr.terms[1:]:
            best = scalars.maximum(best, _eval(term, x))
        return best
    if isinstance(expr, Piecewise):
        below = _eval(expr.below, x)
        above = _eval(expr.above, x)
        return scalars.where(scalars.value_of(x) < expr.threshold, below, above)
    raise TypeError(f"unknown cost expression node: {expr!r}")


def eval_cost(expr: CostExpr, x):
    """Evaluate ``expr`` at ``x``, returning 0 wherever x < 0.

    The comparison driving the x < 0 gate (and any Piecewise threshold or
    Max tie) reads only the primal value, so dual-number inputs take the
    derivative of the selected branch.
    """
    inner = _eval(expr, x)
    zero = scalars.constant_like(inner, 0.0)
    return scalars.where(scalars.value_of(x) < 0.0, zero, inner)


def is_zero(expr: CostExpr) -> bool:
    """True when the expression is identically zero for x >= 0."""
    if isinstance(expr, Const):
        return expr.value == 0.0
    if isinstance(expr, Linear):
        return expr.coef == 0.0
    if isinstance(expr, Power):
        return expr.coef == 0.0
    if isinstance(expr, Affine):
        return expr.intercept == 0.0 and expr.slope == 0.0
    if isinstance(expr, Sum):
        return all(is_zero(t) for t in expr.terms)
    return False


def _require(spec: dict, key: str, path: str) -> Any:
    if key not in spec:
        raise CostExprError(f"missing field {key!r}", path)
    return spec[key]


def _finite(value: Any, key: str, path: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise CostExprError(f"field {key!r} is not a number: {value!r}", path) from None
    if out != out or out in (float("inf"), float("-inf")):
        raise CostExprError(f"field {key!r} is not finite: {value!r}", path)
    return out


def parse_cost_expr(spec: Any, path: str = "expr") -> CostExpr:
    """Parse a structured-text cost expression node.

    Accepts the schema used by instance files, e.g. ``{"kind": "linear",
    "coef": 2}`` or ``{"kind": "piecewise", "threshold": 3, "below": ...,
    "above": ...}``.  A bare number is shorthand for a linear rate.
    """
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return Linear(_finite(spec, "coef", path))
    if not isinstance(spec, dict):
        raise CostExprError(f"expected a mapping or number, got {type(spec).__name__}", path)
    kind = _require(spec, "kind", path)
    if kind == "const":
        return Const(_finite(_require(spec, "value", path), "value", path))
    if kind == "linear":
        return Linear(_finite(_require(spec, "coef", path), "coef", path))
    if kind == "power":
        coef = _finite(_require(spec, "coef", path), "coef", path)
        exponent = _require(spec, "exponent", path)
        if not isinstance(exponent, int) or exponent < 1:
            raise CostExprError(f"exponent must be an integer >= 1, got {exponent!r}", path)
        return Power(coef, exponent)
    if kind == "affine":
        return Affine(
            _finite(_require(spec, "intercept", path), "intercept", path),
            _finite(_require(spec, "slope", path), "slope", path),
        )
    if kind in ("sum", "max"):
        raw_terms = _require(spec, "terms", path)
        if not isinstance(raw_terms, Sequence) or not raw_terms:
            raise CostExprError("field 'terms' must be a non-empty list", path)
        terms = tuple(
            parse_cost_expr(t, f"{path}.terms[{i}]") for i, t in enumerate(raw_terms)
        )
        return Sum(terms) if kind == "sum" else Max(terms)
    if kind == "piecewise":
        return Piecewise(
            _finite(_require(spec, "threshold", path), "threshold", path),
            parse_cost_expr(_require(spec, "below", path), f"{path}.below"),
            parse_cost_expr(_require(spec, "above", path), f"{path}.above"),
        )
    raise CostExprError(f"unknown kind {kind!r}", path)


def cost_expr_spec(expr: CostExpr) -> dict:
    """Serialize an expression back to its instance-file form."""
    if isinstance(expr, Const):
        return {"kind": "const", "value": expr.value}
    if isinstance(expr, Linear):
        return {"kind": "linear", "coef": expr.coef}
    if isinstance(expr, Power):
        return {"kind": "power", "coef": expr.coef, "exponent": expr.exponent}
    if isinstance(expr, Affine):
        return {"kind": "affine", "intercept": expr.intercept, "slope": expr.slope}
    if isinstance(expr, Sum):
        return {"kind": "sum", "terms": [cost_expr_spec(t) for t in expr.terms]}
    if isinstance(expr, Max):
        return {"kind": "max", "terms": [cost_expr_spec(t) for t in expr.terms]}
    if isinstance(expr, Piecewise):
        return {
            "kind": "piecewise",
            "threshold": expr.threshold,
            "below": cost_expr_spec(expr.below),
            "above": cost_expr_spec(expr.above),
        }
    raise TypeError(f"unknown cost expression node: {expr!r}")

import numpy as np
import pytest
from hypothesis import given, strategies as st

from basestock.costs import (
    Affine,
    Const,
    CostExprError,
    Linear,
    Max,
    Piecewise,
    Power,
    Sum,
    cost_expr_spec,
    eval_cost,
    parse_cost_expr,
)
from basestock.dual import Dual


PIECEWISE_SHORTAGE = Piecewise(3.0, Linear(12.0), Power(4.0, 2))
NONLINEAR_SALVAGE = Piecewise(
    2.0, Affine(15.0, -0.5), Max((Sum((Power(-3.5, 2), Power(14.0, 1))), Const(3.0)))
)


def test_piecewise_shortage_form():
    assert eval_cost(PIECEWISE_SHORTAGE, 2.0) == 24.0
    assert eval_cost(PIECEWISE_SHORTAGE, 3.0) == 36.0
    assert eval_cost(PIECEWISE_SHORTAGE, -1.0) == 0.0


def test_linear():
    assert eval_cost(Linear(2.0), 7.0) == 14.0


def test_nonlinear_salvage_form():
    # Below the threshold the affine piece applies; above it the capped
    # concave piece: at x=4 the quadratic part is -3.5*16 + 14*4 = 0.
    assert eval_cost(NONLINEAR_SALVAGE, 1.0) == 14.5
    assert eval_cost(NONLINEAR_SALVAGE, 4.0) == 3.0
    assert eval_cost(NONLINEAR_SALVAGE, -0.5) == 0.0


def test_negative_gate_is_top_level_only():
    # Inner affine pieces keep their negative intercept for x >= 0.
    expr = Affine(-5.0, 1.0)
    assert eval_cost(expr, 2.0) == -3.0
    assert eval_cost(expr, -2.0) == 0.0


def test_threshold_is_strict():
    expr = Piecewise(3.0, Linear(1.0), Linear(100.0))
    assert eval_cost(expr, 2.9999) == pytest.approx(2.9999)
    assert eval_cost(expr, 3.0) == 300.0


def test_parse_round_trip():
    for expr in (PIECEWISE_SHORTAGE, NONLINEAR_SALVAGE, Linear(2.0), Const(1.5)):
        assert parse_cost_expr(cost_expr_spec(expr)) == expr


def test_parse_examples():
    assert parse_cost_expr({"kind": "linear", "coef": 2}) == Linear(2.0)
    spec = {
        "kind": "piecewise",
        "threshold": 3,
        "below": {"kind": "linear", "coef": 12},
        "above": {"kind": "power", "coef": 4, "exponent": 2},
    }
    assert parse_cost_expr(spec) == PIECEWISE_SHORTAGE


def test_parse_errors_name_the_path():
    with pytest.raises(CostExprError, match="unknown kind"):
        parse_cost_expr({"kind": "bogus"})
    with pytest.raises(CostExprError, match="expr.terms\\[1\\]"):
        parse_cost_expr({"kind": "sum", "terms": [{"kind": "linear", "coef": 1}, {"kind": "nope"}]})
    with pytest.raises(CostExprError, match="missing field"):
        parse_cost_expr({"kind": "linear"})
    with pytest.raises(CostExprError, match="not finite"):
        parse_cost_expr({"kind": "linear", "coef": float("nan")})
    with pytest.raises(CostExprError, match="exponent"):
        parse_cost_expr({"kind": "power", "coef": 1, "exponent": 0})


_exprs = st.deferred(
    lambda: st.one_of(
        st.builds(Const, st.floats(-20, 20)),
        st.builds(Linear, st.floats(-20, 20)),
        st.builds(Power, st.floats(-5, 5), st.integers(1, 3)),
        st.builds(Affine, st.floats(-20, 20), st.floats(-20, 20)),
        st.builds(lambda a, b: Sum((a, b)), _exprs, _exprs),
        st.builds(lambda a, b: Max((a, b)), _exprs, _exprs),
        st.builds(lambda t, a, b: Piecewise(t, a, b), st.floats(-5, 5), _exprs, _exprs),
    )
)


@given(_exprs, st.floats(-50, -1e-9))
def test_negative_arguments_cost_nothing(expr, x):
    assert eval_cost(expr, x) == 0.0


@given(_exprs, st.floats(0, 50))
def test_eval_is_deterministic(expr, x):
    assert eval_cost(expr, x) == eval_cost(expr, x)


@given(_exprs, st.floats(0.01, 30))
def test_dual_tangent_matches_finite_difference(expr, x):
    """Away from thresholds, kinks, and zero, the dual tangent equals the
    central finite difference of the plain evaluation."""
    h = 1e-5
    lo, hi = eval_cost(expr, x - h), eval_cost(expr, x + h)
    fd = (hi - lo) / (2 * h)
    dual = eval_cost(expr, Dual(np.array([x]), np.array([[1.0]])))
    tangent = dual.tangent[0, 0]
    # Skip points straddling a nonsmoothness: detect via one-sided slopes.
    mid = eval_cost(expr, x)
    left_slope = (mid - lo) / h
    right_slope = (hi - mid) / h
    if abs(left_slope - right_slope) > 1e-3 * (1 + abs(fd)):
        return
    assert tangent == pytest.approx(fd, rel=1e-4, abs=1e-6)


def test_dual_values_match_plain():
    xs = np.array([-1.0, 0.5, 2.0, 3.0, 10.0])
    plain = eval_cost(PIECEWISE_SHORTAGE, xs)
    dual = eval_cost(PIECEWISE_SHORTAGE, Dual(xs, np.zeros((5, 2))))
    np.testing.assert_array_equal(plain, dual.value)

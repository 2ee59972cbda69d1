import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from altapprox.expr import (
    Bin,
    Call,
    Const,
    ExprSyntaxError,
    Neg,
    Num,
    UnknownIdentifier,
    Var,
    differentiate,
    evaluate,
    parse_expr,
    to_funcspec,
    unparse,
)

EXAMPLES = [
    "1 - sin(pi*x)",
    "ln(1+x)",
    "sqrt(x)",
    "sin(pi*x/2)",
    "sin(pi*x)",
    "x^3 - 2*x + 1",
    "exp(-x^2)",
    "cos(3*x) / (1 + x^2)",
    "abs(x - 0.5)^3",
    "x^x",
    "e^(2*x) - pi",
    "sqrt(1 + x) * ln(2 + x)",
]


def ev(s, x=0.3):
    return evaluate(parse_expr(s), x)


def test_precedence():
    assert ev("2^3^2") == 512
    assert ev("-2^2") == -4
    assert ev("(-2)^2") == 4
    assert ev("1 - 2 - 3") == -4
    assert ev("8 / 4 / 2") == 1
    assert ev("2 * -3") == -6
    assert ev("2^-1") == 0.5
    assert ev("1 + 2 * 3^2") == 19
    assert ev("--3") == 3


def test_tree_shapes():
    assert parse_expr("x") == Var()
    assert parse_expr("pi") == Const("pi")
    assert parse_expr("-x^2") == Neg(Bin("^", Var(), Num(2.0)))
    assert parse_expr("2^3^2") == Bin("^", Num(2.0), Bin("^", Num(3.0), Num(2.0)))
    assert parse_expr("sin(x)") == Call("sin", Var())


def test_examples_from_cli():
    assert ev("1 - sin(pi*x)", 0.0) == 1.0
    assert ev("ln(1+x)", 1.0) == pytest.approx(math.log(2))
    assert ev("1.5e-3*x", 2.0) == pytest.approx(3e-3)
    assert ev(".5 + x", 0.0) == 0.5
    np.testing.assert_allclose(evaluate(parse_expr("x^2"), np.array([1.0, 2.0])), [1.0, 4.0])


def test_errors():
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("1 + * 2")
    assert err.value.pos == 4
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("sin(x")
    assert err.value.pos == 5
    with pytest.raises(ExprSyntaxError) as err:
        parse_expr("x $ 2")
    assert err.value.pos == 2
    with pytest.raises(ExprSyntaxError):
        parse_expr("   ")
    with pytest.raises(ExprSyntaxError):
        parse_expr("x x")
    with pytest.raises(UnknownIdentifier) as err:
        parse_expr("1 + tan(x)")
    assert err.value.name == "tan" and err.value.pos == 4


def test_sqrt_is_endpoint_singular():
    f = to_funcspec("sqrt(x)")
    assert f.endpoint_singular
    assert f.deriv(0.25) == pytest.approx(1.0)
    assert not to_funcspec("ln(1+x)").endpoint_singular
    with pytest.raises(ValueError):
        to_funcspec("ln(x)")


@pytest.mark.parametrize("text", EXAMPLES)
def test_derivative_matches_central_difference(text):
    tree, dtree = parse_expr(text), differentiate(parse_expr(text))
    xs = np.linspace(0, 1, 35)[1:-1]
    h = 1e-6
    fd = (evaluate(tree, xs + h) - evaluate(tree, xs - h)) / (2 * h)
    exact = evaluate(dtree, xs)
    assert np.all(np.abs(fd - exact) <= 1e-6 * np.maximum(1.0, np.abs(exact)))


def test_funcspec_from_expression():
    f = to_funcspec("1 - sin(pi*x)")
    assert f.f_at_0 == 1.0
    assert f.f_at_1 == pytest.approx(1.0)
    assert f.deriv(0.0) == pytest.approx(-math.pi)
    assert f.name == "1 - sin(pi*x)"


numbers = st.floats(0, 100, allow_nan=False).map(lambda v: Num(float(v)))
leaves = st.one_of(numbers, st.just(Var()), st.sampled_from([Const("pi"), Const("e")]))


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.builds(Bin, st.sampled_from("+-*/^"), children, children),
        st.builds(Call, st.sampled_from(["sin", "cos", "ln", "exp", "sqrt", "abs"]), children),
    )


trees = st.recursive(leaves, _extend, max_leaves=12)


@settings(max_examples=300)
@given(trees)
def test_unparse_round_trip(tree):
    assert parse_expr(unparse(tree)) == tree


@settings(max_examples=100)
@given(trees, st.floats(0, 1))
def test_evaluation_is_deterministic(tree, x):
    a, b = evaluate(tree, x), evaluate(tree, x)
    assert a == b or (math.isnan(a) and math.isnan(b))

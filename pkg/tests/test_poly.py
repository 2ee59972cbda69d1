from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from altapprox.errors import ConsistencyError
from altapprox.poly import RationalPoly

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)
polys = st.lists(fractions, min_size=1, max_size=7).map(RationalPoly)


def test_trailing_zeros_trimmed():
    p = RationalPoly((1, 2, 0, 0))
    assert p.degree == 1
    assert p.coeffs == (Fraction(1), Fraction(2))
    assert RationalPoly((0, 0)).is_zero()
    assert RationalPoly.zero().degree == 0


def test_exact_and_float_evaluation():
    p = RationalPoly((1, -6, 6))
    assert p(Fraction(1, 2)) == Fraction(-1, 2)
    assert p(0.5) == pytest.approx(-0.5, abs=1e-15)
    np.testing.assert_allclose(p(np.array([0.0, 1.0])), [1.0, 1.0])


def test_shift_down_requires_divisibility():
    assert RationalPoly((0, 3, -4)).shift_down() == RationalPoly((3, -4))
    with pytest.raises(ConsistencyError):
        RationalPoly((1, 3)).shift_down()


def test_exact_div_remainder_raises():
    with pytest.raises(ConsistencyError):
        RationalPoly((1, 0, 1)).exact_div(RationalPoly((0, 1)))


@given(polys, polys)
def test_ring_laws(p, q):
    assert p + q == q + p
    assert p * q == q * p
    assert (p - q) + q == p
    assert (p * q).deriv() == p.deriv() * q + p * q.deriv()


@given(polys, polys.filter(lambda q: not q.is_zero()))
def test_divmod_reconstructs(p, q):
    quot, rem = p.divmod(q)
    assert quot * q + rem == p
    assert rem.is_zero() or rem.degree < q.degree


@given(polys, st.fractions(min_value=-3, max_value=3, max_denominator=9))
def test_centered_evaluation_matches(p, x):
    scale = sum(abs(float(c)) * 4.0 ** i for i, c in enumerate(p.coeffs))
    assert p.eval_centered(float(x)) == pytest.approx(float(p(x)), abs=1e-13 * scale + 1e-300)


@given(polys)
def test_integral_matches_antiderivative(p):
    assert p.integral01() == p.antideriv()(1)

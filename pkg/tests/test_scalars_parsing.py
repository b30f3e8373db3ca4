from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from udfverify import GaussQ, ScalarModeMismatch, parse_scalar
from udfverify.parsing import ExpressionError
from udfverify.repspaces import Poly, format_poly, parse_poly, poly_from_json, poly_to_json
from udfverify.scalars import format_scalar, simplify

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gauss = st.builds(GaussQ, fractions, fractions)


def test_parse_scalar_forms():
    assert parse_scalar("3/7+1/5i") == GaussQ(Fraction(3, 7), Fraction(1, 5))
    assert parse_scalar("3/7 + i/5") == GaussQ(Fraction(3, 7), Fraction(1, 5))
    assert parse_scalar("0.25") == Fraction(1, 4)
    assert parse_scalar("-2") == -2


def test_decimal_is_exact():
    assert parse_scalar("0.1") + parse_scalar("0.2") == Fraction(3, 10)


def test_format_scalar():
    assert format_scalar(GaussQ(0, -1)) == "-i"
    assert format_scalar(GaussQ(Fraction(1, 2), 3)) == "1/2+3i"
    assert format_scalar(Fraction(-3, 4)) == "-3/4"


def test_mode_mixing_rejected():
    with pytest.raises(ScalarModeMismatch):
        GaussQ(1, 1) + 0.5


def test_simplify_drops_zero_imaginary():
    assert simplify(GaussQ(4, 0)) == 4
    assert isinstance(simplify(GaussQ(Fraction(1, 2), 0)), Fraction)


@given(gauss, gauss, gauss)
def test_gaussian_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    if a != 0:
        assert (b / a) * a == b


@given(gauss)
def test_complex_conversion(a):
    assert abs(complex(a) - complex(float(a.re), float(a.im))) < 1e-12


def test_parse_poly_variables():
    f = parse_poly("z^2 - 3/2*z + i")
    assert f.nvars == 1
    assert f.coefficient((2,)) == 1
    assert f.coefficient((1,)) == Fraction(-3, 2)
    g = parse_poly("x*y + 2*y^2")
    assert g.nvars == 2 and g == Poly.var(0, 2) * Poly.var(1, 2) + Poly.var(1, 2) ** 2 * 2
    assert parse_poly("z1*z3").nvars == 3


def test_parse_poly_errors():
    with pytest.raises(ExpressionError):
        parse_poly("z^-1")
    with pytest.raises(ExpressionError):
        parse_poly("foo")
    with pytest.raises(ExpressionError):
        parse_poly("z^")


def test_round_trips():
    f = parse_poly("z1^2*z2 - 3/2*z2 + 1/5i", 2)
    assert poly_from_json(poly_to_json(f)) == f
    assert parse_poly(format_poly(f), 2) == f


def test_evaluation_and_taylor_shift():
    f = parse_poly("z^2 + 1")
    assert f(2) == 5
    assert f.taylor_at([1]) == parse_poly("z^2 + 2*z + 2")

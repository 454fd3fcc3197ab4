from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hyperell.quadext import QuadExt, sqrt_power

D = 5
fracs = st.fractions(min_value=-50, max_value=50, max_denominator=30)
elems = st.builds(lambda a, b: QuadExt(a, b, D), fracs, fracs)


@given(elems, elems, elems)
def test_ring_laws(x, y, z):
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == QuadExt.zero(D)


@given(elems.filter(bool))
def test_division_inverts(x):
    assert x / x == 1
    assert (x * x) / x == x


@given(elems)
def test_norm_is_product_with_conjugate(x):
    assert x * x.conjugate() == x.field_norm()


@given(elems, elems)
def test_order_agrees_with_floats(x, y):
    fx, fy = float(x), float(y)
    if abs(fx - fy) > 1e-9:
        assert (x < y) == (fx < fy)
    assert (x <= y) == (not y < x)


@given(elems, st.integers(0, 6))
def test_powers(x, e):
    expected = QuadExt.one(D)
    for _ in range(e):
        expected = expected * x
    assert x**e == expected


def test_rational_equality_and_hash():
    assert QuadExt(3, 0, D) == 3
    assert QuadExt(Fraction(1, 2), 0, D) == Fraction(1, 2)
    assert hash(QuadExt(3, 0, D)) == hash(3)
    assert QuadExt(3, 1, D) != 3


def test_sqrt_squares_to_radicand():
    r = QuadExt.sqrt(D)
    assert r * r == D
    assert sqrt_power(D, 2) == D
    assert sqrt_power(D, -1) * sqrt_power(D, 1) == 1
    assert sqrt_power(D, 3) == 5 * r


def test_sign_of_close_values():
    # 161/72 is a convergent of sqrt(5); the difference is tiny but exact
    x = QuadExt(Fraction(-161, 72), 1, D)
    assert x.sign() == (1 if 5 * 72**2 > 161**2 else -1)


def test_square_radicand_rejected():
    with pytest.raises(ValueError):
        QuadExt(1, 1, 9)


def test_mixed_fields_rejected():
    with pytest.raises(ValueError):
        QuadExt(1, 1, 5) + QuadExt(1, 1, 13)


def test_decimal():
    assert str(QuadExt.sqrt(D).to_decimal(20)) == "2.2360679774997896964"

"""Ring arithmetic, truncation semantics, and the canonical text form."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbailey.laurent import (
    InversionError,
    LaurentSeries,
    TruncationError,
    from_text,
    monomial,
    one,
    zero,
)


def S(terms, trunc):
    return LaurentSeries(terms, trunc)


def test_add_cancellation():
    # (1 - q) + q = 1, truncation preserved
    x = S({0: 1, 1: -1}, 10)
    y = S({1: 1}, 10)
    assert x + y == S({0: 1}, 10)


def test_add_identity():
    x = S({-1: 2, 3: 7}, 12)
    assert x + zero(12) == x


def test_add_hand_expansion():
    # (1 + 2q^2) + (3q^2 - q^5) = 1 + 5q^2 - q^5
    x = S({0: 1, 2: 2}, 9)
    y = S({2: 3, 5: -1}, 9)
    assert x + y == S({0: 1, 2: 5, 5: -1}, 9)


def test_mul_geometric():
    # (1 - q) * sum q^m = 1
    N = 20
    geo = S({m: 1 for m in range(N + 1)}, N)
    out = S({0: 1, 1: -1}, N) * geo
    assert out.eq_to_order(one(N), N)


def test_mul_identity():
    x = S({-2: 3, 0: 1, 4: -1}, 8)
    assert (x * one(8)).eq_to_order(x, x.trunc - 2)  # trunc erodes by val -2
    y = x * one(20)
    assert y.coefficient(-2) == 3 and y.coefficient(4) == -1


def test_mul_hand_expansion():
    # (1-q)(1-q^2)(1-q^3) = 1 - q - q^2 + q^4 + q^5 - q^6
    out = one(10)
    for e in (1, 2, 3):
        out = out * S({0: 1, e: -1}, 10)
    assert out == S({0: 1, 1: -1, 2: -1, 4: 1, 5: 1, 6: -1}, 10)


def test_mul_truncation_is_conservative():
    # q^-1 * (series exact to 10) is only exact to 9
    x = monomial(1, -1, 20)
    y = S({0: 1, 10: 1}, 10)
    assert (x * y).trunc == 9


def test_shift_examples():
    assert monomial(1, 0, 5).shift(3) == monomial(1, 3, 8)
    assert monomial(1, -1, 5).shift(1) == monomial(1, 0, 6)
    assert S({0: 1, 1: 1}, 4).shift(-2) == S({-2: 1, -1: 1}, 2)


def test_invert_geometric():
    inv = S({0: 1, 1: -1}, 4).invert()
    assert inv == S({e: 1 for e in range(5)}, 4)


def test_invert_one():
    assert one(7).invert() == one(7)


def test_invert_rejects_non_unit():
    with pytest.raises(InversionError):
        S({0: 2}, 5).invert()
    with pytest.raises(InversionError):
        zero(5).invert()


def test_invert_negative_leading():
    x = S({0: -1, 1: 1}, 6)
    assert (x * x.invert()).eq_to_order(one(6), 6)


def test_coefficient():
    x = S({0: 1, 2: 5}, 4)
    assert x.coefficient(2) == 5
    assert x.coefficient(1) == 0
    with pytest.raises(TruncationError):
        x.coefficient(5)


def test_eq_to_order():
    x = S({0: 1, 1: -1}, 5)
    assert x.eq_to_order(x, 5)
    assert x.eq_to_order(one(5), 0)
    assert not x.eq_to_order(one(5), 1)
    # terms beyond the comparison order are invisible
    y = S({0: 1, 6: 9}, 6)
    assert one(5).eq_to_order(y, 5)
    with pytest.raises(TruncationError):
        x.eq_to_order(one(5), 6)


def test_construction_rejects_exponent_above_trunc():
    with pytest.raises(TruncationError):
        S({5: 1}, 4)


def test_text_round_trip_spec_example():
    x = S({-1: 1, 0: 2, 3: -5}, 10)
    assert x.to_text() == "trunc=10; -1:1 0:2 3:-5"
    assert from_text(x.to_text()) == x
    assert from_text(zero(3).to_text()) == zero(3)


# -- property tests ----------------------------------------------------------

terms_st = st.dictionaries(st.integers(-6, 14), st.integers(-9, 9), max_size=6)


@st.composite
def series_st(draw):
    terms = draw(terms_st)
    hi = max(terms) if terms else 0
    trunc = hi + draw(st.integers(0, 6))
    return LaurentSeries(terms, trunc)


@st.composite
def unit_series_st(draw):
    """Series whose lowest coefficient is +-1 (invertible)."""
    x = draw(series_st())
    base = x.val()
    if base is None:
        base = x.trunc
    v = min(base, x.trunc) - 1
    lead = monomial(draw(st.sampled_from([1, -1])), v, x.trunc)
    return x + lead


@given(series_st(), series_st())
@settings(max_examples=120)
def test_add_commutes(x, y):
    assert x + y == y + x


@given(series_st(), series_st())
@settings(max_examples=120)
def test_mul_commutes(x, y):
    assert x * y == y * x


@given(series_st(), series_st(), series_st())
@settings(max_examples=80)
def test_mul_associates(x, y, z):
    a = (x * y) * z
    b = x * (y * z)
    n = min(a.trunc, b.trunc)
    assert a.eq_to_order(b, n)


@given(series_st(), series_st(), series_st())
@settings(max_examples=80)
def test_mul_distributes(x, y, z):
    a = x * (y + z)
    b = x * y + x * z
    n = min(a.trunc, b.trunc)
    assert a.eq_to_order(b, n)


@given(unit_series_st())
@settings(max_examples=80)
def test_invert_is_two_sided(x):
    inv = x.invert()
    left = x * inv
    right = inv * x
    n = min(left.trunc, right.trunc)
    assert left.eq_to_order(one(n), n)
    assert right.eq_to_order(one(n), n)


@given(series_st(), st.integers(-20, 20))
@settings(max_examples=120)
def test_shift_round_trip(x, m):
    assert x.shift(m).shift(-m) == x


@given(series_st())
@settings(max_examples=120)
def test_text_round_trip(x):
    assert from_text(x.to_text()) == x

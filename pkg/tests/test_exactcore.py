from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mahlerexp.exactcore import (
    GF,
    QQ,
    ZZ,
    InsufficientOrder,
    Polynomial,
    RingError,
    TruncatedSeries,
    Zmod,
    compose_power,
    rational_to_series,
    series_arith,
    series_invert,
)
from mahlerexp.sequences import gen_named

ints = st.integers(min_value=-50, max_value=50)


def test_add_cancels_linear_terms():
    s = series_arith(TruncatedSeries([1, 1]), TruncatedSeries([1, -1]), "add")
    assert s.coeffs == (2, 0) and s.order == 2


def test_geometric_times_one_minus_z():
    s = series_arith(TruncatedSeries([1, 1, 1, 1]), TruncatedSeries([1, -1, 0, 0]), "mul")
    assert s.coeffs == (1, 0, 0, 0) and s.order == 4


def test_schoolbook_product():
    s = series_arith(TruncatedSeries([1, 1, 1]), TruncatedSeries([1, 0, 1]), "mul")
    assert s.coeffs == (1, 1, 2) and s.order == 3


def test_result_order_is_minimum():
    s = series_arith(TruncatedSeries([1, 2, 3]), TruncatedSeries([1, 2]), "mul")
    assert s.order == 2


@pytest.mark.parametrize(
    "coeffs, ring, expected",
    [
        ([1, -1, 0, 0, 0], ZZ, (1, 1, 1, 1, 1)),
        ([1, 1, 0], GF(2), (1, 1, 1)),
        ([1, -1, -1, 0, 0, 0], ZZ, (1, 1, 2, 3, 5, 8)),
    ],
)
def test_invert_examples(coeffs, ring, expected):
    assert series_invert(TruncatedSeries(coeffs, ring)).coeffs == expected


def test_invert_requires_unit_constant():
    with pytest.raises(RingError):
        series_invert(TruncatedSeries([2, 1]))
    with pytest.raises(RingError):
        series_invert(TruncatedSeries([0, 1], QQ))


def test_compose_power_examples():
    s = compose_power(TruncatedSeries([1, 1]), 2)
    assert s.coeffs == (1, 0, 1, 0) and s.order == 4
    s = compose_power(TruncatedSeries([1, 1, 1]), 3)
    assert s.coeffs == (1, 0, 0, 1, 0, 0, 1, 0, 0) and s.order == 9


def test_stern_product_with_its_factor():
    S = gen_named("stern_S", 40)
    rebuilt = compose_power(S, 2).truncate(40).mul_poly(Polynomial([1, 1, 1]))
    assert rebuilt == S


@pytest.mark.parametrize(
    "P, Q, N, expected",
    [
        ([1], [1, -1], 4, (1, 1, 1, 1)),
        ([0, 1], [1, -2, 1], 5, (0, 1, 2, 3, 4)),
        ([1], [1, -1, -1], 6, (1, 1, 2, 3, 5, 8)),
    ],
)
def test_rational_to_series_examples(P, Q, N, expected):
    assert rational_to_series(Polynomial(P), Polynomial(Q), N).coeffs == expected


def test_unknown_coefficients_raise():
    s = TruncatedSeries([1, 2, 3])
    with pytest.raises(InsufficientOrder):
        s[3]


def test_zmod_reduces_and_rejects_nonunit_denominators():
    R = Zmod(6)
    assert R.normalize(-1) == 5
    assert R.normalize(Fraction(1, 5)) == 5
    with pytest.raises(RingError):
        R.normalize(Fraction(1, 3))
    with pytest.raises(ValueError):
        GF(9)


def test_polynomial_divmod_and_degree():
    a = Polynomial([1, 0, -1])  # 1 - z^2
    b = Polynomial([1, 1])
    assert a.exquo(b) == Polynomial([1, -1])
    assert Polynomial([]).degree == -1
    assert Polynomial([0, 0, 3]).valuation() == 2


@given(st.sampled_from([1, -1]), st.lists(ints, max_size=20))
def test_double_inverse_is_identity(c0, rest):
    a = TruncatedSeries([c0] + rest)
    assert series_invert(series_invert(a)) == a


@given(st.integers(1, 6), st.lists(st.integers(0, 6), max_size=20))
def test_inverse_over_gf7(c0, rest):
    a = TruncatedSeries([c0] + rest, GF(7))
    prod = a * series_invert(a)
    assert prod == TruncatedSeries.one(a.order, GF(7))


@settings(max_examples=50)
@given(st.lists(ints, min_size=1, max_size=12), st.lists(ints, min_size=1, max_size=12),
       st.integers(2, 4))
def test_compose_power_is_multiplicative(a, b, d):
    n = min(len(a), len(b))
    A, B = TruncatedSeries(a[:n]), TruncatedSeries(b[:n])
    left = compose_power(A * B, d)
    right = compose_power(A, d) * compose_power(B, d)
    assert left == right


@given(st.lists(ints, max_size=15), st.lists(ints, max_size=15))
def test_reduction_mod_p_commutes_with_product(a, b):
    n = min(len(a), len(b))
    A, B = TruncatedSeries(a[:n]), TruncatedSeries(b[:n])
    F = GF(5)
    assert (A * B).change_ring(F) == A.change_ring(F) * B.change_ring(F)


def test_series_json_round_trip():
    s = TruncatedSeries([Fraction(1, 2), 3, -1], QQ)
    assert TruncatedSeries.from_json(s.to_json()) == s

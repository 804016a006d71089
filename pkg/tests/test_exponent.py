import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mahlerexp.exponent import (
    CoefficientBound,
    EvaluatedNumber,
    ExponentError,
    certified_cf,
    certified_prefix,
    cf_expand,
    convergents,
    evaluate_at,
    evaluate_series_at,
    mu_bound_from_rho,
    mu_from_quotients,
)
from mahlerexp.sequences import SequenceSpec, gen_named


def brute_tail(bound, b, M, terms=3000):
    return sum(bound.at(j) * Fraction(1, b**j) for j in range(M, M + terms))


def test_all_ones_at_half():
    x = evaluate_series_at([1] * 10, 2, 10, CoefficientBound("const"))
    assert x.approximation == 2 - Fraction(1, 2**9)
    assert x.error_bound == Fraction(1, 2**9)


def test_linear_tail_closed_form():
    bound = CoefficientBound("linear")
    tail = bound.tail(2, 64)
    assert tail == Fraction(66, 2**63)
    assert 0 < tail - brute_tail(bound, 2, 64) < Fraction(1, 2**2000)


def test_constant_tail_at_base_three():
    x = evaluate_series_at(gen_named("thue_morse_01", 50), 3, 50, CoefficientBound("const"))
    assert x.error_bound == Fraction(1, 2) * Fraction(1, 3**49)


@pytest.mark.parametrize("bound", [CoefficientBound("const", Fraction(3)), CoefficientBound("geometric", Fraction(3, 2))])
def test_tails_match_brute_force(bound):
    closed = bound.tail(5, 20)
    assert 0 <= closed - brute_tail(bound, 5, 20) < Fraction(1, 10**500)


def test_stern_linear_bound_is_respected():
    x = evaluate_series_at(gen_named("stern_S", 64), 2, 64, CoefficientBound("linear"))
    assert x.error_bound == Fraction(66, 2**63)


def test_bound_violation_is_rejected():
    with pytest.raises(ExponentError):
        evaluate_series_at([0, 3, 0], 2, 3, CoefficientBound("const"))


def test_parse_bound():
    assert CoefficientBound.parse("const:4") == CoefficientBound("const", Fraction(4))
    assert CoefficientBound.parse("linear").kind == "linear"
    with pytest.raises(ExponentError):
        CoefficientBound.parse("cubic")
    with pytest.raises(ExponentError):
        CoefficientBound.parse("geometric:3").tail(2, 10)


def golden_interval(n=200):
    a, b = 1, 1
    for _ in range(n):
        a, b = b, a + b
    # |phi - b/a| < 1/a^2
    return EvaluatedNumber(Fraction(b, a), Fraction(1, a * a), 2, 0)


def test_golden_ratio_control():
    est = certified_cf(golden_interval())
    assert est.certified > 150
    assert set(est.partial_quotients) == {1}
    assert est.mu_hat == 2 and est.mu_hat_full == 2
    for w in (1, 5, 50):
        assert certified_cf(golden_interval(), window=w).mu_hat == 2


def test_liouville_control():
    c = [0] * 721
    for j in range(1, 7):
        c[math.factorial(j)] = 1
    x = evaluate_series_at(c, 2, 721, CoefficientBound("const"))
    est = certified_cf(x)
    assert est.mu_hat > 3
    assert max(est.partial_quotients).bit_length() > 60


def test_cf_expand_and_convergents():
    assert cf_expand(Fraction(415, 93)) == [4, 2, 6, 7]
    assert convergents([4, 2, 6, 7])[-1] == (415, 93)


@given(st.fractions(min_value=-50, max_value=50))
def test_convergent_determinant_identity(x):
    pq = cf_expand(Fraction(x))
    conv = convergents(pq)
    assert conv[-1] == (x.numerator, x.denominator)
    for k in range(1, len(conv)):
        (p0, q0), (p1, q1) = conv[k - 1], conv[k]
        assert p1 * q0 - p0 * q1 == (-1) ** (k + 1)
        assert q1 >= q0


@given(st.fractions(min_value=0, max_value=10), st.fractions(min_value=Fraction(1, 10**12), max_value=Fraction(1, 1000)))
def test_certified_prefix_is_shared_by_interval(x, eps):
    x = Fraction(x)
    pre = certified_prefix(x - eps, x + eps)
    for y in (x - eps, x, x + eps, x + eps / 3):
        full = cf_expand(y)
        assert full[: len(pre)] == pre


@pytest.mark.parametrize("name", ["thue_morse_pm1", "stern_S", "paperfolding", "cantor"])
def test_doubling_m_keeps_certified_quotients(name):
    bound = CoefficientBound("linear") if name == "stern_S" else CoefficientBound("const")
    spec = SequenceSpec.named(name)
    small = certified_cf(evaluate_at(spec, 2, 256, bound))
    large = certified_cf(evaluate_at(spec, 2, 512, bound))
    assert large.partial_quotients[: small.certified] == small.partial_quotients
    assert large.certified > small.certified


def test_mu_from_quotients_window():
    # one large quotient early, only ones afterwards
    pq = [0, 1, 2, 1000] + [1] * 40
    mu, full, start = mu_from_quotients(pq, window=10)
    assert mu == 2 and full > 2 and start == len(pq) - 1 - 10


def test_error_bound_too_large():
    with pytest.raises(ExponentError):
        certified_cf(EvaluatedNumber(Fraction(1), Fraction(1, 2), 2, 0))


@pytest.mark.parametrize(
    "rho, d, expected",
    [(1, 2, 2), (1, 5, 2), (2, 2, 6), (Fraction(3, 2), 4, Fraction(45, 8))],
)
def test_mu_bound_from_rho(rho, d, expected):
    assert mu_bound_from_rho(rho, d) == expected


def test_mu_bound_rejects_bad_input():
    with pytest.raises(ExponentError):
        mu_bound_from_rho(Fraction(1, 2), 2)
    with pytest.raises(ExponentError):
        mu_bound_from_rho(1, 1)

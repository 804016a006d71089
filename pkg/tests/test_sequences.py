import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mahlerexp.exactcore import GF, Polynomial, TruncatedSeries, compose_power
from mahlerexp.sequences import (
    EQUATIONS,
    QUADRATIC_FIXTURES,
    REGISTRY,
    MahlerEquation,
    SequenceError,
    SequenceSpec,
    derived_g,
    double_sum_equation,
    double_sum_generate,
    feq_generate,
    gen_named,
    product2_auxiliary_equation,
    product2_generate,
    product3_generate,
    quadratic_fixture,
    quadratic_residual,
)


def stern_oracle(N):
    a = [0, 1]
    for n in range(2, N + 2):
        a.append(a[n // 2] if n % 2 == 0 else a[n // 2] + a[n // 2 + 1])
    return a[1:N + 1]


def twisted_oracle(N):
    t = [1]
    for n in range(1, N):
        t.append(-(t[n // 2] + t[n // 2 - 1]) if n % 2 == 0 else -t[n // 2])
    return t


def expand_product(factors, N):
    """Multiply truncated polynomials given as coefficient lists."""
    acc = [1] + [0] * (N - 1)
    for f in factors:
        out = [0] * N
        for i, a in enumerate(acc):
            if a:
                for j, b in enumerate(f):
                    if i + j < N:
                        out[i + j] += a * b
        acc = out
    return acc


def double_sum_oracle(alpha, beta, sign, N):
    # z^{-2^a} sum_n z^{2^{n+a}} sum_m (-sign z^{2^{n+b}})^m
    out = [0] * N
    n = 0
    while 2 ** (n + alpha) - 2**alpha < N:
        for m in range(N):
            e = 2 ** (n + alpha) - 2**alpha + m * 2 ** (n + beta)
            if e >= N:
                break
            out[e] += (-sign) ** m
        n += 1
    return out


def test_named_prefixes():
    assert gen_named("thue_morse_01", 8).coeffs == (0, 1, 1, 0, 1, 0, 0, 1)
    assert gen_named("stern_S", 8).coeffs == (1, 1, 2, 1, 3, 2, 3, 1)
    assert gen_named("gros", 8).coeffs == (0, 1, 2, 1, 3, 1, 2, 1)


def test_gros_is_two_adic_valuation_plus_one():
    N = 200
    expected = [0] + [((m & -m).bit_length()) for m in range(1, N)]
    assert list(gen_named("gros", N).coeffs) == expected


def test_functional_equation_examples():
    stern = MahlerEquation.from_lists([], [1], [1, 1, 1], [1], 2)
    assert feq_generate(stern, 8, 1).coeffs == (1, 1, 2, 1, 3, 2, 3, 1)
    twisted = MahlerEquation.from_lists([2], [1], [-1, -1, -1], [1], 2)
    assert list(feq_generate(twisted, 64).coeffs) == twisted_oracle(64)
    cantor = MahlerEquation.from_lists([], [1], [1, 0, 1], [1], 3)
    assert feq_generate(cantor, 9, 1).coeffs == (1, 0, 1, 0, 0, 0, 1, 0, 1)


def test_stern_recurrence_matches_equation():
    assert list(gen_named("stern_S", 300).coeffs) == stern_oracle(300)
    assert list(gen_named("stern_T", 300).coeffs) == twisted_oracle(300)


def test_cantor_is_ternary_digit_indicator():
    def no_one_digit(n):
        while n:
            if n % 3 == 1:
                return 0
            n //= 3
        return 1

    assert list(gen_named("cantor", 243).coeffs) == [no_one_digit(n) for n in range(243)]


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_direct_generator_agrees_with_equation(name):
    eq, c0 = EQUATIONS[name]
    f = gen_named(name, 128)
    assert f == feq_generate(eq, 128, c0)
    assert eq.residual(f).is_zero()


def test_product2_examples():
    f = product2_generate(-1, Polynomial([0]), Polynomial([1]), 8)
    assert f.coeffs == (1, -1, -1, 1, -1, 1, 1, -1)
    assert f == gen_named("thue_morse_pm1", 8)
    # (1 + z + 2z^2)(1 + z^2 + 2z^4)(1 + z^4 + ...)...
    N = 64
    factors = [[1 if e in (0, 2**n) else (2 if e == 2 ** (n + 1) else 0) for e in range(2 ** (n + 1) + 1)]
               for n in range(7)]
    oracle = expand_product(factors, N)
    assert list(product2_generate(1, Polynomial([1]), Polynomial([1]), N).coeffs) == oracle
    assert oracle[:6] == [1, 1, 3, 1, 5, 3]


def test_product3_example():
    N = 81
    factors = [[1] + [0] * (3**k - 1) + [-1] for k in range(5)]
    f = product3_generate(Polynomial([1, -1]), Polynomial([1]), N)
    assert list(f.coeffs) == expand_product(factors, N)
    assert f.coeffs[:9] == (1, -1, 0, -1, 1, 0, 0, 0, 0)


@pytest.mark.parametrize("alpha", range(4))
@pytest.mark.parametrize("beta", range(4))
@pytest.mark.parametrize("sign", [1, -1])
def test_double_sum_against_brute_force(alpha, beta, sign):
    N = 96
    f = double_sum_generate(alpha, beta, sign, N)
    assert list(f.coeffs) == double_sum_oracle(alpha, beta, sign, N)
    assert double_sum_equation(alpha, beta, sign).residual(f).is_zero()


def test_double_sum_small_examples():
    assert double_sum_generate(0, 0, 1, 6).coeffs == tuple(double_sum_oracle(0, 0, 1, 6))
    f = double_sum_generate(0, 2, 1, 128).change_ring(GF(2))
    assert f == gen_named("paperfolding", 128, GF(2))


@pytest.mark.parametrize("alpha", range(4))
def test_g_alpha_alpha_plus_one_closed_form(alpha):
    # the sum yields 1/(1 - z^{2^alpha}), not 1/(z^{2^alpha}(1 - z^{2^alpha}))
    N = 128
    f = double_sum_generate(alpha, alpha + 1, -1, N)
    assert list(f.coeffs) == [1 if m % 2**alpha == 0 else 0 for m in range(N)]


def test_calf_and_calg_are_shifted_double_sums():
    N = 100
    assert gen_named("calF", N + 1).drop(1) == double_sum_generate(0, 0, 1, N)
    assert gen_named("calG", N + 1).drop(1) == double_sum_generate(0, 0, -1, N)


PRODUCT2_CASES = [(-1, [0], [1]), (1, [1], [1]), (3, [2, 0, 1], [1, 1]), (0, [1, 1], [1, -1])]


@pytest.mark.parametrize("u, C, D", PRODUCT2_CASES)
def test_product2_is_quadratic_mod_2(u, C, D):
    # f = (1 + u z + 2 z^2 C/D) f(z^2) reduces to f = (1 + u z) f(z^2)
    f = product2_generate(u, Polynomial(C), Polynomial(D), 100).change_ring(GF(2))
    rhs = compose_power(f, 2).truncate(100).mul_poly(Polynomial([1, u], GF(2)))
    assert f == rhs


@pytest.mark.parametrize("u, C, D", PRODUCT2_CASES)
def test_derived_g_satisfies_auxiliary_equation(u, C, D):
    f = product2_generate(u, Polynomial(C), Polynomial(D), 90)
    g = derived_g(f, u)
    A, B, Cs = product2_auxiliary_equation(u, Polynomial(C), Polynomial(D))
    n = g.order // 2
    res = A.to_series(n) + g.truncate(n).mul_poly(B) + compose_power(g, 2).truncate(n).mul_poly(Cs)
    assert res.is_zero()


def test_l_and_m_definitions():
    for name in ("L", "M"):
        eq, c0 = EQUATIONS[name]
        f = gen_named(name, 200)
        assert eq.residual(f).is_zero()


@pytest.mark.parametrize("name", sorted(QUADRATIC_FIXTURES))
def test_quadratic_fixtures_solve_their_equation(name):
    p, case, A, B, C, c0 = QUADRATIC_FIXTURES[name]
    f = quadratic_fixture(name, 150)
    R = GF(p)
    res = quadratic_residual(Polynomial(A, R), Polynomial(B, R), Polynomial(C, R), f)
    assert res.is_zero()


def test_sequence_spec_generate_and_equation():
    spec = SequenceSpec.named("stern_S")
    eq, c0 = spec.equation()
    assert spec.generate(40) == feq_generate(eq, 40, c0)
    spec = SequenceSpec("double_sum", {"alpha": 1, "beta": 3, "sign": 1})
    eq, c0 = spec.equation()
    assert eq.residual(spec.generate(64)).is_zero()


def test_unknown_name_raises():
    with pytest.raises(SequenceError):
        gen_named("nope", 10)


small = st.lists(st.integers(-3, 3), min_size=1, max_size=4)


@settings(max_examples=40, deadline=None)
@given(small, small.filter(lambda c: c[0] != 0), st.integers(2, 3))
def test_feq_solution_has_zero_residual(C, A, d):
    eq = MahlerEquation.from_lists(A, [1], C, [1], d)
    try:
        f = feq_generate(eq, 40, 1)
    except SequenceError:
        return
    assert eq.residual(f).is_zero()


def test_reduction_to_gf2_matches_ring_generation():
    assert gen_named("stern_S", 64, GF(2)) == gen_named("stern_S", 64).change_ring(GF(2))
    assert isinstance(gen_named("cantor", 10), TruncatedSeries)

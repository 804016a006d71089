import math
import random
from fractions import Fraction

import pytest

from builders import planted_series, random_unit_series
from mahlerexp.determinants import det_cofactor
from mahlerexp.exactcore import GF, QQ, Polynomial, TruncatedSeries
from mahlerexp.hankel import bordered_det, hankel_det
from mahlerexp.pade import PadeError, contact_order, pade_construct, pade_series, residual
from mahlerexp.sequences import gen_named


def test_geometric_series_is_reproduced():
    f = TruncatedSeries([1] * 12)
    a = pade_construct(f, 1)
    assert a.Q == Polynomial([1, -1], QQ)
    assert a.P == Polynomial([1], QQ)
    assert residual(f, a).is_zero()
    assert a.exact_match and a.k_prime is None
    assert contact_order(f, a) == math.inf


def test_planted_gap_contact():
    # H_1 != 0, H_2 = 0, H_3 != 0
    f = TruncatedSeries([1, 0, 0, 1, 0, 1, 1, 0, 2, 1, 0, 0])
    assert hankel_det(f, 1) != 0 and hankel_det(f, 2) == 0 and hankel_det(f, 3) != 0
    a = pade_construct(f, 1)
    assert a.k_prime == 2
    assert a.h_k != 0
    assert contact_order(f, a) == 3
    # brute force: f - P/Q leading term
    diff = f.change_ring(QQ) - pade_series(a, f.order)
    assert diff.valuation() == 3


def test_thue_morse_k2():
    f = gen_named("thue_morse_pm1", 30)
    a = pade_construct(f, 2)
    assert a.k_prime == 2
    assert a.H_k == -2 and a.H_k_kprime == 4
    assert a.h_k == -2
    assert contact_order(f, a) == 4


def test_q_at_zero_is_hankel():
    rng = random.Random(3)
    for _ in range(20):
        f = random_unit_series(rng, 20)
        for k in range(1, 6):
            if hankel_det(f, k) == 0:
                continue
            a = pade_construct(f, k)
            assert a.Q[0] == hankel_det(f, k)
            assert a.P.degree <= k - 1 and a.Q.degree <= k


def test_generic_case_leading_coefficient():
    rng = random.Random(8)
    checked = 0
    for _ in range(30):
        f = random_unit_series(rng, 24)
        for k in range(1, 6):
            Hk, Hk1 = hankel_det(f, k), hankel_det(f, k + 1)
            if Hk == 0 or Hk1 == 0:
                continue
            a = pade_construct(f, k)
            assert a.k_prime == k
            assert contact_order(f, a) == 2 * k
            assert a.h_k == Fraction(Hk1) / Hk
            # normalised residual f - P/Q starts with (H_{k+1}/H_k) z^{2k}
            diff = f - pade_series(a, f.order)
            assert diff.valuation() == 2 * k and diff[2 * k] == a.h_k
            checked += 1
    assert checked > 50


@pytest.mark.parametrize("seed", range(20))
def test_planted_series_contact(seed):
    rng = random.Random(500 + seed)
    ks = [rng.choice([0, 1, 2, 3]) for _ in range(4)]
    h, f = planted_series(rng, ks, tail_order=10)
    s = h.s_values()
    for j in range(1, len(ks)):
        k = s[j]
        a = pade_construct(f, k)
        assert a.k_prime == s[j + 1] - 1
        val = contact_order(f, a)
        assert val == k + a.k_prime
        assert residual(f, a)[val] == bordered_det(f, k, a.k_prime) != 0


def test_bordered_cofactor_oracle_for_random_integers():
    rng = random.Random(4)
    for _ in range(10):
        c = [rng.randint(-4, 4) for _ in range(8)]
        rows = [[c[i + j] for j in range(3)] for i in range(2)] + [[c[3 + j] for j in range(3)]]
        assert bordered_det(TruncatedSeries(c), 2, 3) == det_cofactor(rows)


def test_zero_hankel_rejected():
    f = TruncatedSeries([1, 0, 0, 1, 0, 1, 1, 0, 2, 1])
    with pytest.raises(PadeError):
        pade_construct(f, 2)


def test_finite_field_construction():
    f = gen_named("stern_S", 30, GF(5))
    a = pade_construct(f, 3)
    assert contact_order(f, a) == 3 + a.k_prime

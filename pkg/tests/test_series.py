import random
from fractions import Fraction

import pytest

from mpqg.series import (
    TruncLaurent, ts_exp, ts_div_h, qint, qbinom,
    NonPositiveValuation, ValuationUnderflow, PrecisionError,
)


def h(order=6):
    return TruncLaurent.hbar(order)


def rand_series(rng, order=6, vmax=0):
    coeffs = {}
    for e in range(vmax and -vmax or 0, order + 1):
        if rng.random() < 0.6:
            coeffs[e] = Fraction(rng.randint(-6, 6), rng.randint(1, 5))
    return TruncLaurent(coeffs, order)


def test_exp_of_zero_is_one():
    z = TruncLaurent.zero(4)
    assert ts_exp(z).eq_at(TruncLaurent.one(), 4)


def test_exp_taylor_coefficients():
    e = ts_exp(h(3))
    expect = TruncLaurent({0: 1, 1: 1, 2: Fraction(1, 2), 3: Fraction(1, 6)}, 3)
    assert e.eq_at(expect, 3)


def test_exp_product_inverse():
    # multiply exp(h) by exp(-h) by hand: all cross terms cancel
    a = ts_exp(h(4))
    b = ts_exp(h(4).scaled(-1))
    assert (a * b).eq_at(TruncLaurent.one(), 4)


def test_exp_additivity_random():
    rng = random.Random(1)
    for _ in range(25):
        f = rand_series(rng).shifted(1).truncated(6)
        g = rand_series(rng).shifted(1).truncated(6)
        lhs = ts_exp(f) * ts_exp(g)
        rhs = ts_exp(f + g)
        assert lhs.eq_at(rhs, min(lhs.order, rhs.order))


def test_exp_rejects_constant_term():
    with pytest.raises(NonPositiveValuation):
        ts_exp(TruncLaurent({0: 1, 1: 1}, 4))


def test_div_h_shifts():
    f = TruncLaurent({2: 1}, 5)
    assert ts_div_h(f, 1).eq_at(TruncLaurent({1: 1}, 4), 4)
    g = TruncLaurent({1: 2, 3: 1}, 5)
    assert ts_div_h(g, 1).eq_at(TruncLaurent({0: 2, 2: 1}, 4), 4)


def test_div_h_into_laurent_range():
    one = TruncLaurent.one(4)
    res = ts_div_h(one, 1)
    assert res.coeffs == {-1: Fraction(1)}
    with pytest.raises(ValuationUnderflow):
        ts_div_h(one, 3)  # exponent -3 < -vmax = -2


def test_div_h_loses_top_order():
    f = TruncLaurent({1: 1, 4: 1}, 4)
    g = ts_div_h(f, 1)
    assert g.order == 3
    with pytest.raises(PrecisionError):
        g.is_zero_at(4)


def test_ring_axioms_random():
    rng = random.Random(7)
    for _ in range(100):
        f = rand_series(rng)
        g = rand_series(rng)
        k = rand_series(rng)
        lhs = (f + g) * k
        rhs = f * k + g * k
        assert lhs.eq_at(rhs, min(lhs.order, rhs.order))
        assert (f * g).eq_at(g * f, (f * g).order)
        assert ((f * g) * k).eq_at(f * (g * k), ((f * g) * k).order)


def test_inverse_of_unit():
    rng = random.Random(3)
    for _ in range(30):
        f = rand_series(rng) + TruncLaurent.const(rng.randint(1, 4))
        assert f.is_unit()
        assert (f * f.inverse()).eq_at(TruncLaurent.one(), f.order)


def test_inverse_of_valuation_one():
    # (q - 1/q)-shaped denominators: valuation 1, inverse reaches h^-1
    f = h(5) * TruncLaurent({0: 2, 2: Fraction(1, 3)}, 5)
    inv = f.inverse()
    assert inv.valuation() == -1
    prod = f * inv
    assert prod.eq_at(TruncLaurent.one(), prod.order)


def test_qint_one_and_zero():
    for d in (1, 2, 3):
        assert qint(1, d, 4).eq_at(TruncLaurent.one(), 4)
        assert qint(0, d, 4).eq_at(TruncLaurent.one(), 4)


def test_qint_two_expansion():
    # oracle: exp(h) + exp(-h) = 2 + h^2 + O(h^4), so at order 2: 2 + h^2
    got = qint(2, 1, 2)
    assert got.eq_at(TruncLaurent({0: 2, 2: 1}, 2), 2)


def test_qint_classical_limit():
    for n in range(9):
        for d in (1, 2):
            val = qint(n, d, 4)
            assert val.constant() == (n if n else 1)


def test_qbinom_base_cases():
    for n in range(6):
        assert qbinom(n, 0, 1, 4).eq_at(TruncLaurent.one(), 4)
        assert qbinom(n, n, 1, 4).eq_at(TruncLaurent.one(), 4)


def test_qbinom_two_one_is_qint_two():
    got = qbinom(2, 1, 1, 5)
    assert got.eq_at(qint(2, 1, 5), 5)


def test_qbinom_classical_limit():
    from math import comb
    for n in range(9):
        for k in range(n + 1):
            assert qbinom(n, k, 1, 3).constant() == comb(n, k)


def test_qbinom_against_factorial_oracle():
    # oracle: [n]! / ([k]! [n-k]!) computed with an exact series division
    for n in range(1, 6):
        for k in range(n + 1):
            order = 6
            num = TruncLaurent.one(order)
            for s in range(1, n + 1):
                num = num * qint(s, 1, order)
            den = TruncLaurent.one(order)
            for s in range(1, k + 1):
                den = den * qint(s, 1, order)
            for s in range(1, n - k + 1):
                den = den * qint(s, 1, order)
            expect = num * den.inverse()
            got = qbinom(n, k, 1, order)
            assert got.eq_at(expect, expect.order)


def test_gauss_binomial_shift_identity():
    # (n)_{q^2} = q^(n-1) [n]_q, the bridge between the two conventions
    order = 5
    hh = h(order)
    for n in range(1, 6):
        lhs = TruncLaurent.zero(order)
        for s in range(n):
            lhs = lhs + ts_exp(hh.scaled(2 * s))
        rhs = ts_exp(hh.scaled(n - 1)) * qint(n, 1, order)
        assert lhs.eq_at(rhs, order)


def test_json_round_trip():
    f = TruncLaurent({-1: Fraction(1, 2), 0: 3, 4: Fraction(-2, 7)}, 5)
    g = TruncLaurent.from_json(f.to_json())
    assert g.eq_at(f, 5) and g.order == 5 and g.vmax == f.vmax

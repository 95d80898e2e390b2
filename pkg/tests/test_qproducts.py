"""Pochhammer products, partition numbers, and the quintuple product identity."""

import pytest

from qbailey.laurent import LaurentSeries, one
from qbailey.qproducts import (
    DivergentProductError,
    PochFactor,
    Q_FACTOR,
    euler_inf,
    inv_euler,
    inv_poch_inf,
    partition_numbers,
    poch_finite,
    poch_inf,
    qtpi_product,
    qtpi_sum,
)


def partitions_by_dp(n_max):
    """Independent oracle: count partitions by bounded-part dynamic programming."""
    ways = [1] + [0] * n_max
    for part in range(1, n_max + 1):
        for total in range(part, n_max + 1):
            ways[total] += ways[total - part]
    return ways


def test_poch_finite_empty():
    assert poch_finite(Q_FACTOR, 0, 10) == one(10)


def test_poch_finite_hand_expansion():
    out = poch_finite(Q_FACTOR, 3, 10)
    assert out == LaurentSeries({0: 1, 1: -1, 2: -1, 4: 1, 5: 1, 6: -1}, 10)


def test_poch_finite_minus_one_base():
    # (-1; q)_2 = (1+1)(1+q) = 2 + 2q
    out = poch_finite(PochFactor(-1, 0, 1), 2, 10)
    assert out == LaurentSeries({0: 2, 1: 2}, 10)


def test_poch_inf_pentagonal():
    # Euler: (q;q)_inf = sum (-1)^k q^{k(3k+-1)/2}
    out = euler_inf(30)
    expected = {0: 1}
    k = 1
    while k * (3 * k - 1) // 2 <= 30:
        sign = -1 if k % 2 else 1
        expected[k * (3 * k - 1) // 2] = sign
        if k * (3 * k + 1) // 2 <= 30:
            expected[k * (3 * k + 1) // 2] = sign
        k += 1
    assert out == LaurentSeries(expected, 30)


def test_poch_inf_high_base_is_one():
    assert poch_inf(PochFactor(1, 11, 1), 10) == one(10)


def test_poch_inf_rejects_divergent():
    with pytest.raises(DivergentProductError):
        poch_inf(PochFactor(1, 0, 1), 10)


def test_partition_numbers_against_dp_oracle():
    n = 60
    assert list(partition_numbers(n)) == partitions_by_dp(n)


def test_inv_euler_first_values():
    got = inv_euler(9)
    assert got.coefficients(0, 9) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]


def test_inv_euler_matches_generic_inversion():
    N = 60
    assert inv_euler(N).eq_to_order(euler_inf(N).invert(), N)


def test_pochhammer_one_step_extension():
    f = PochFactor(1, 2, 3)
    for n in range(5):
        step = LaurentSeries({0: 1, f.factor_exponent(n): -1}, 40)
        lhs = poch_finite(f, n + 1, 40)
        rhs = poch_finite(f, n, 40) * step
        assert lhs.eq_to_order(rhs, 40)


def rr_sum_side(shifted, order):
    """sum q^{n^2} / (q)_n (or q^{n^2+n} with shifted=True), brute force."""
    from qbailey.qproducts import inv_poch_finite

    total = LaurentSeries({}, order)
    n = 0
    while n * n + (n if shifted else 0) <= order:
        e = n * n + (n if shifted else 0)
        total = total + (inv_poch_finite(Q_FACTOR, n, order).shift(e)).truncated(order)
        n += 1
    return total


@pytest.mark.parametrize("shifted,res", [(False, (1, 4)), (True, (2, 3))])
def test_rogers_ramanujan(shifted, res):
    N = 100
    lhs = rr_sum_side(shifted, N)
    rhs = (inv_poch_inf(PochFactor(1, res[0], 5), N)
           * inv_poch_inf(PochFactor(1, res[1], 5), N)).truncated(N)
    assert lhs.eq_to_order(rhs, N), f"Rogers-Ramanujan ({res}) failed"


def test_first_rr_product_coefficients():
    # 1/((q,q^4;q^5)_inf) starts 1,1,1,1,2,2,3,...
    N = 12
    prod = poch_inf(PochFactor(1, 1, 5), N) * poch_inf(PochFactor(1, 4, 5), N)
    got = prod.truncated(N).invert().truncated(N)
    assert got.coefficients(0, 6) == [1, 1, 1, 1, 2, 2, 3]


def test_qtpi_product_zero_factor():
    # v = 0 makes the factor (1 - t^{-1}) vanish identically
    assert qtpi_product(3, 0, 25).is_zero()
    assert qtpi_sum(3, 0, "II", 25).is_zero()


def test_qtpi_form_iii_leading_terms():
    # n = 0 summands of form III: 1 - q^{-v} + q^{2u+3v} - q^{u+2v}
    got = qtpi_sum(7, -1, "III", 4)
    assert got.coefficient(0) == 1
    assert got.coefficient(1) == -1  # -q^{-v} with v = -1


def test_qtpi_forms_agree_spot():
    for (u, v) in [(4, -1), (5, -1), (1, 1), (2, 5), (7, -3), (12, 6), (3, -6)]:
        prod = qtpi_product(u, v, 120)
        for form in ("I", "II", "III"):
            s = qtpi_sum(u, v, form, 120)
            assert prod.eq_to_order(s, 120), f"QTPI form {form} != product at {(u, v)}"


def test_qtpi_product_brute_force_low_terms():
    # multiply the Laurent factors of Q(q^4, q^-1) directly
    u, v, N = 4, -1, 20
    fams = [
        lambda n: u * n,
        lambda n: u * n + v,
        lambda n: u * (n - 1) - v,
        lambda n: (2 * n - 1) * u + 2 * v,
        lambda n: (2 * n - 1) * u - 2 * v,
    ]
    acc = one(N + 2)
    for fam in fams:
        n = 1
        while fam(n) <= N + 1:
            acc = acc * LaurentSeries({0: 1, fam(n): -1}, N + 2)
            n += 1
    assert qtpi_product(u, v, N).eq_to_order(acc, N)

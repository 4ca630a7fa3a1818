from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from levelone.classical import delta, eisenstein, j_invariant
from levelone.errors import BeyondPrecision, DenominatorDivisibleByP, NegativePowerOfZero
from levelone.qseries import (
    ModPSeries,
    QSeries,
    _kronecker,
    _schoolbook,
    add,
    coefficient,
    convolve,
    frobenius_power,
    multiply,
    power,
    reduce_mod_p,
)

from oracles import delta_coefficients, modp_power, poly_mul, series_inverse, sigma

PREC = 12

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=7)
small_ints = st.integers(-30, 30)


@st.composite
def series(draw, coeffs=rationals, min_len=1, max_len=PREC):
    cs = draw(st.lists(coeffs, min_size=min_len, max_size=max_len))
    val = draw(st.integers(-3, 3))
    return QSeries(cs, val, val + PREC)


@st.composite
def invertible(draw):
    cs = draw(st.lists(rationals, min_size=1, max_size=PREC))
    lead = draw(rationals.filter(lambda x: x != 0))
    val = draw(st.integers(-3, 3))
    return QSeries([lead] + cs, val, val + PREC)


def test_normal_form_strips_leading_zeros():
    s = QSeries([0, 0, 3, 4], -1, 5)
    assert s.valuation == 1
    assert s.coeffs == (3, 4, 0, 0)
    assert s.prec == 5


def test_zero_series_keeps_precision():
    z = QSeries([0, 0], 0, 7)
    assert z.is_zero
    assert z.prec == 7
    assert str(z) == "O(q^7)"


def test_fractions_with_unit_denominator_become_ints():
    s = QSeries([Fraction(4, 2), Fraction(1, 3)])
    assert type(s[0]) is int
    assert s[1] == Fraction(1, 3)


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        QSeries([0.5])


def test_immutable():
    s = QSeries([1, 2])
    with pytest.raises(AttributeError):
        s.prec = 4


def test_add_cancels_constant():
    a = QSeries([1, 744], -1, 1)
    b = QSeries([-744], 0, 1)
    s = add(a, b)
    assert s.valuation == -1
    assert s.prec == 1
    assert s.coeffs == (1, 0)


def test_delta_minus_delta_is_zero_with_precision():
    d = delta(10)
    z = d + (-d)
    assert z.is_zero and z.prec == 10


def test_e4_plus_e6_first_coefficient():
    s = eisenstein(4, 5) + eisenstein(6, 5)
    assert s[1] == 240 * sigma(1, 3) - 504 * sigma(1, 5) == -264


def test_geometric_series_product():
    n = 15
    geo = QSeries([1] * n, 0, n)
    one = multiply(QSeries([1, -1]), geo)
    assert one == QSeries([1], 0, 2)  # exact (1 - q) is only known to O(q^2) as given
    one = multiply(QSeries([1, -1], 0, n + 5), geo)
    assert one == QSeries([1], 0, n)


def test_j_constant_term_from_product():
    assert (eisenstein(4, 6) ** 3 * delta(6) ** -1)[0] == 744


def test_delta_q3_by_brute_force():
    assert delta(4)[3] == delta_coefficients(4)[3] == 252


def test_power_zero_exponent():
    assert power(eisenstein(4, 9), 0) == QSeries([1], 0, 9)


def test_delta_inverse():
    inv = power(delta(12), -1)
    oracle = series_inverse(delta_coefficients(12)[1:], 10)
    assert inv.valuation == -1
    assert inv.prec == 10
    assert [inv[n] for n in range(-1, 9)] == oracle
    assert inv[-1] == 1 and inv[0] == 24


def test_square_of_one_plus_q():
    assert power(QSeries([1, 1], 0, 10), 2) == QSeries([1, 2, 1], 0, 10)


def test_negative_power_of_zero():
    with pytest.raises(NegativePowerOfZero):
        power(QSeries([], 0, 5), -1)


def test_reduce_delta_mod_2():
    assert reduce_mod_p(delta(10), 2)[2] == 0


def test_reduce_e4_mod_5_is_one():
    r = reduce_mod_p(eisenstein(4, 60), 5)
    assert r == ModPSeries([1], 0, 60, modulus=5)


def test_reduce_rejects_denominator_p():
    with pytest.raises(DenominatorDivisibleByP) as exc:
        reduce_mod_p(QSeries([1, 0, Fraction(1, 5)]), 5)
    assert exc.value.exponent == 2


def test_reduce_raises_valuation():
    r = reduce_mod_p(QSeries([5, 10, 3], 0, 4), 5)
    assert r.valuation == 2


def test_frobenius_identity():
    a = ModPSeries([1, 1], 0, 2, modulus=5)
    f = frobenius_power(a, 5)
    assert f.coeffs[:6] == (1, 0, 0, 0, 0, 1)
    assert f.prec == 10


def test_frobenius_of_g6_valuation():
    from levelone.nonordinary import g_form

    g = reduce_mod_p(g_form(6, 4), 5)
    f = frobenius_power(g, 25)
    assert f.valuation == -25 and f[-25] == 1


def test_coefficient_accessors():
    j = j_invariant(3)
    assert coefficient(j, -1) == 1
    assert coefficient(delta(5), 0) == 0
    assert coefficient(j, -7) == 0
    with pytest.raises(BeyondPrecision):
        coefficient(j, 3)


def test_kronecker_matches_schoolbook_on_huge_signed_entries():
    a = [(-1) ** i * 10**40 * i + 7 for i in range(60)]
    b = [(-3) ** i for i in range(45)]
    assert _kronecker(a, b, 90) == _schoolbook(a, b, 90) == poly_mul(a, b, 90)


def test_convolve_truncates():
    assert convolve([1, 1], [1, 1], 2) == [1, 2]
    assert convolve([], [1], 3) == [0, 0, 0]


def test_weights_propagate():
    e4, e6 = eisenstein(4, 5), eisenstein(6, 5)
    assert (e4 * e6).weight == 10
    assert (e4**-2).weight == -8
    assert (e4 + e6).weight is None
    assert (e4 + e4).weight == 4


# ring laws

@given(series(), series())
def test_add_commutes(a, b):
    assert a + b == b + a


@given(series(), series())
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(series(), series(), series())
def test_mul_associates(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(series(), series(), series())
def test_add_associates(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(series(), series(), series())
def test_distributes(a, b, c):
    left = a * (b + c)
    right = a * b + a * c
    # windows can differ; compare on the common one
    top = min(left.prec, right.prec)
    lo = min(left.valuation, right.valuation, top)
    assert left.window(lo, top) == right.window(lo, top)


@given(invertible())
def test_inverse_times_self_is_one(a):
    prod = a * power(a, -1)
    assert prod.prec == a.relative_prec
    assert prod == QSeries([1], 0, prod.prec)


@given(series(coeffs=small_ints), st.integers(0, 6))
def test_power_matches_repeated_multiplication(a, e):
    lit = QSeries([1], 0, 10**6) if e == 0 else a
    for _ in range(e - 1):
        lit = lit * a
    got = power(a, e)
    if e == 0:
        assert got[0] == 1
    else:
        assert got == lit


@given(st.lists(st.integers(0, 10), min_size=2, max_size=8), st.sampled_from([5, 7, 11]),
       st.integers(0, 125), st.integers(-2, 2))
def test_frobenius_agrees_with_literal_power(cs, p, e, val):
    n = 8
    a = ModPSeries(cs, val, val + n, modulus=p)
    if a.is_zero:
        return
    fast = frobenius_power(a, e)
    shifted = list(a.coeffs)
    oracle = modp_power(shifted, e, p, a.relative_prec)
    lo = a.valuation * e
    literal_prec = a.prec + (e - 1) * a.valuation if e else a.relative_prec
    assert fast.prec >= literal_prec
    assert fast.window(lo, lo + len(oracle)) == oracle


@st.composite
def refinable(draw):
    cs = draw(st.lists(small_ints, min_size=20, max_size=20))
    lead = draw(st.sampled_from([1, -1, 2, 3]))
    val = draw(st.integers(-2, 2))
    lo_prec = draw(st.integers(3, 10))
    hi_prec = draw(st.integers(lo_prec + 1, 20))
    full = [lead] + cs
    return (QSeries(full, val, val + lo_prec), QSeries(full, val, val + hi_prec))


def _agree_on_low_window(low, high):
    assert high.prec >= low.prec
    lo = min(low.valuation, high.valuation)
    assert low.window(lo, low.prec) == high.window(lo, low.prec)


@given(refinable(), refinable())
def test_precision_soundness(x, y):
    (a, a_hi), (b, b_hi) = x, y
    _agree_on_low_window(a * b, a_hi * b_hi)
    _agree_on_low_window(a + b, a_hi + b_hi)
    _agree_on_low_window(a.inverse(), a_hi.inverse())
    _agree_on_low_window(a**3, a_hi**3)
    _agree_on_low_window(a**-2, a_hi**-2)

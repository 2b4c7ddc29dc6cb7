from fractions import Fraction

import pytest

from kostkasys.scalars import (Cyclo, QSeries, RatFun, cyclo_conj, cyclo_reduce, fit_ratfun,
                               poly_str, ratfun_normalize, series_div)


def Q(coeffs, T):
    return QSeries([Fraction(c) for c in coeffs], T)


def test_cyclo_reduce_rational():
    assert cyclo_reduce([5], 1) == 5


def test_cyclo_reduce_zeta_power_wraps():
    assert cyclo_reduce([0, 0, 0, 1], 3) == 1


def test_cyclo_reduce_sum_of_primitive_cube_roots():
    assert cyclo_reduce([0, 1, 1], 3) == -1


def test_cyclo_reduce_bad_conductor():
    with pytest.raises(ValueError):
        cyclo_reduce([1], 0)


def test_cyclo_conj_rational_fixed():
    assert cyclo_conj(Cyclo.rational(Fraction(7, 2), 3)) == Fraction(7, 2)


def test_cyclo_conj_zeta3():
    z = Cyclo.zeta(3)
    assert cyclo_conj(z) == z * z
    assert cyclo_conj(z) == -1 - z


def test_cyclo_conj_one_plus_zeta5():
    z = Cyclo.zeta(5)
    assert cyclo_conj(1 + z) == 1 + Cyclo.zeta(5, 4)
    # reduced basis: zeta^4 = -1 - zeta - zeta^2 - zeta^3
    assert cyclo_conj(1 + z).coeffs == (0, -1, -1, -1)


def test_cyclo_zeta_order():
    for N in (1, 2, 3, 4, 5, 6, 12):
        assert Cyclo.zeta(N) ** N == 1


def test_cyclo_mixed_conductors():
    assert Cyclo.zeta(4) ** 2 == Cyclo.zeta(2)
    assert (Cyclo.zeta(3) * Cyclo.zeta(4)) ** 12 == 1


def test_series_div_geometric():
    assert series_div(Q([1], 3), Q([1, -1], 3)).coeffs == [1, 1, 1, 1]


def test_series_div_exact():
    assert series_div(Q([1, 0, -1], 3), Q([1, -1], 3)).coeffs == [1, 1, 0, 0]


def test_series_div_long_division():
    assert series_div(Q([0, 1], 5), Q([1, 0, -1], 5)).coeffs == [0, 1, 0, 1, 0, 1]


def test_series_div_not_a_unit():
    with pytest.raises(ZeroDivisionError):
        series_div(Q([1], 3), Q([0, 1], 3))


def test_ratfun_cancels_common_factor():
    # (q^2 - 1)/(q - 1) = q + 1; the denominator is normalized to constant term 1
    r = ratfun_normalize([-1, 0, 1], [-1, 1])
    assert r == RatFun([1, 1])
    assert str(r) == "1+q"


def test_ratfun_already_reduced():
    r = ratfun_normalize([0, 1], [1, 0, -1])
    assert str(r) == "q/(1-q^2)"


def test_ratfun_gcd_reduction():
    # (1 - q^4)/((1 - q)(1 - q^2)) = (1 + q^2)/(1 - q)
    r = ratfun_normalize([1, 0, 0, 0, -1], [1, -1, -1, 1])
    assert r == RatFun([1, 0, 1], [1, -1])
    assert str(r) == "(1+q^2)/(1-q)"


def test_ratfun_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        RatFun([1], [0])


def test_ratfun_product_denominator_printing():
    r = RatFun([1], [1, -1]) * RatFun([1], [1, 0, -1])
    assert str(r) == "1/((1-q)*(1-q^2))"


def test_ratfun_expand_and_fit_round_trip():
    r = RatFun([0, 1], [1, 0, -1])
    s = r.expand(12)
    assert s.coeffs[:6] == [0, 1, 0, 1, 0, 1]
    assert fit_ratfun(s, 4) == r


def test_poly_str():
    assert poly_str((0, Fraction(-1, 2), 0, 0, 3)) == "-1/2*q+3*q^4"
    assert poly_str(()) == "0"

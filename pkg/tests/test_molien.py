from fractions import Fraction

import pytest

from kostkasys.molien import (default_trunc, fake_degree, invariant_degrees, molien_pairing,
                              omega_matrix)
from kostkasys.scalars import RatFun, poly_mul
from kostkasys.wgroup import BUILTIN_NAMES, builtin_group, conjugation_map

ONE_OVER_1MQ2 = RatFun([1], [1, 0, -1])


def test_s2_pairings():
    G, T = builtin_group("S2")
    triv, sgn = T.index("triv"), T.index("sgn")
    assert molien_pairing(G, T, triv, triv) == ONE_OVER_1MQ2
    assert molien_pairing(G, T, triv, sgn) == RatFun([0, 1], [1, 0, -1])


def test_s2_omega_matrix():
    G, T = builtin_group("S2")
    O = omega_matrix(G, T)
    sgn, triv = T.index("sgn"), T.index("triv")
    assert [[str(O[a][b]) for b in (sgn, triv)] for a in (sgn, triv)] == [
        ["1/(1-q^2)", "q/(1-q^2)"], ["q/(1-q^2)", "1/(1-q^2)"]]


def test_trivial_group_omega():
    G, T = builtin_group("trivial")
    assert omega_matrix(G, T) == [[RatFun([1], [1, -1])]]


def test_c3_omega_diagonal():
    G, T = builtin_group("C3")
    O = omega_matrix(G, T)
    assert all(O[i][i] == RatFun([1], [1, 0, 0, -1]) for i in range(3))


@pytest.mark.parametrize("name,degrees", [("trivial", [1]), ("S2", [2]), ("S3", [2, 3]),
                                          ("S4", [2, 3, 4]), ("B2", [2, 4]), ("G2", [2, 6]),
                                          ("C3", [3])])
def test_invariant_degrees(name, degrees):
    G, T = builtin_group(name)
    assert invariant_degrees(G, T) == degrees
    prod = 1
    for d in degrees:
        prod *= d
    assert prod == G.order


def test_fake_degrees_s2():
    G, T = builtin_group("S2")
    assert fake_degree(G, T, T.index("triv")) == (1,)
    assert fake_degree(G, T, T.index("sgn")) == (0, 1)


def test_fake_degree_s3_standard():
    G, T = builtin_group("S3")
    assert fake_degree(G, T, T.index("(2,1)")) == (0, 1, 1)


def test_default_trunc():
    G, T = builtin_group("S3")
    assert default_trunc(G, T) == 10


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_omega_nonnegative_integer_series(name):
    G, T = builtin_group(name)
    for row in omega_matrix(G, T):
        for r in row:
            s = r.expand(12)
            assert all(Fraction(c).denominator == 1 and c >= 0 for c in s.coeffs)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_omega_duality(name):
    G, T = builtin_group(name)
    O = omega_matrix(G, T)
    c = conjugation_map(T)
    n = len(T.rows)
    assert all(O[a][b] == O[c[b]][c[a]] for a in range(n) for b in range(n))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_coinvariant_poincare_series(name):
    G, T = builtin_group(name)
    total = ()
    for chi in range(len(T.rows)):
        total = poly_add_scaled(total, fake_degree(G, T, chi), T.dims[chi])
    want = (1,)
    for d in invariant_degrees(G, T):
        want = poly_mul(want, tuple([1] * d))
    assert list(total) == [Fraction(x) for x in want]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_fake_degree_at_one_is_dimension(name):
    G, T = builtin_group(name)
    for chi in range(len(T.rows)):
        assert sum(fake_degree(G, T, chi)) == T.dims[chi]


def poly_add_scaled(a, b, c):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return tuple(Fraction(x) + c * y for x, y in zip(a, b))

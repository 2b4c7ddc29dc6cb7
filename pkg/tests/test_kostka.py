import json
from fractions import Fraction

import pytest

from kostkasys.errors import InputError
from kostkasys.kostka import (block_diagonal, block_ldl, charge, conjugate_partition,
                              dagger, determine_normalization, expand_class_in_barnabla,
                              filtration_matrices, full_report, kostka_foulkes_charge,
                              lambda_check, ldl_consistency, ldl_product, ldl_report,
                              oracle_matches, oracle_table, ordered_setup, projective_pairing,
                              semistandard_tableaux, smat_identity, smat_inverse, smat_mul)
from kostkasys.amod import trace_quotient
from kostkasys.molien import projective_class
from kostkasys.scalars import QSeries, RatFun
from kostkasys.wgroup import builtin_group, builtin_preorder, load_preorder

A = RatFun([1], [1, 0, -1])          # 1/(1-q^2)
QA = RatFun([0, 1], [1, 0, -1])      # q/(1-q^2)
ONE, ZERO, QQ = RatFun.const(1), RatFun.const(0), RatFun([0, 1])


def s(coeffs, T=12):
    return QSeries([Fraction(c) for c in coeffs], T)


def geometric_even(T=12):
    return s([1 if k % 2 == 0 else 0 for k in range(T + 1)], T)


@pytest.fixture(scope="module")
def s2_report():
    G, T = builtin_group("S2")
    return full_report(G, T, builtin_preorder("S2", T, "dominance"))


# -- expansion in the bnabla basis ------------------------------------------

@pytest.fixture(scope="module")
def s2_basis():
    G, T = builtin_group("S2")
    P = builtin_preorder("S2", T, "dominance")
    basis = [trace_quotient(G, T, P, chi, "weak", 12)[1] for chi in range(2)]
    return G, T, P, basis


def test_expand_projective_sign(s2_basis):
    G, T, P, basis = s2_basis
    sgn, triv = T.index("sgn"), T.index("triv")
    c = expand_class_in_barnabla(G, T, projective_class(G, T, sgn, 12), basis, P, 12)
    assert c[sgn] == A.expand(12)
    assert c[triv].is_zero()


def test_expand_projective_trivial(s2_basis):
    G, T, P, basis = s2_basis
    sgn, triv = T.index("sgn"), T.index("triv")
    c = expand_class_in_barnabla(G, T, projective_class(G, T, triv, 12), basis, P, 12)
    assert c[sgn] == QA.expand(12)
    assert c[triv] == s([1])


def test_expand_basis_vector(s2_basis):
    G, T, P, basis = s2_basis
    for chi in range(2):
        c = expand_class_in_barnabla(G, T, basis[chi], basis, P, 12)
        assert [x == s([1 if i == chi else 0]) for i, x in enumerate(c)] == [True, True]


# -- filtration matrices ------------------------------------------------------

def test_s2_m_and_n(s2_report):
    r = s2_report
    assert [r.names[i] for i in r.ordering] == ["(1,1)", "(2)"]
    assert r.m == [[s([1]), s([])], [s([0, 1]), s([1])]]
    assert r.n == [[geometric_even(), s([])], [s([]), s([1])]]


def test_s2_K_is_m_times_n(s2_report):
    r = s2_report
    assert smat_mul(r.m, r.n) == r.K
    assert r.K[0][0] == A.expand(12) and r.K[1][0] == QA.expand(12)


def test_trivial_group_report():
    G, T = builtin_group("trivial")
    r = full_report(G, T, builtin_preorder("trivial", T))
    free = RatFun([1], [1, -1]).expand(12)
    assert r.m == [[s([1])]]
    assert r.n == [[free]] and r.K == [[free]]
    assert r.Lambda == [[s([1, -1])]]
    assert r.ok()


# -- block factorization ------------------------------------------------------

def test_block_ldl_s2():
    L, D = block_ldl([[A, QA], [QA, A]], [[0], [1]], [0, 1])
    assert L == [[ONE, ZERO], [QQ, ONE]]
    assert D == [[A, ZERO], [ZERO, ONE]]


def test_block_ldl_identity():
    I = [[ONE, ZERO], [ZERO, ONE]]
    assert block_ldl(I, [[0], [1]], [0, 1]) == (I, I)


def test_block_ldl_one_phylum():
    Om = [[A, QA], [QA, A]]
    L, D = block_ldl(Om, [[0, 1]], [0, 1])
    assert L == [[ONE, ZERO], [ZERO, ONE]] and D == Om


def test_block_ldl_singular_block():
    with pytest.raises(Exception, match="factorization-failed"):
        block_ldl([[ZERO, ONE], [ONE, ONE]], [[0], [1]], [0, 1])


@pytest.mark.parametrize("name", ["S3", "B2", "G2", "C3"])
def test_ldl_product_exact(name):
    G, T = builtin_group(name)
    P = builtin_preorder(name, T)
    order, conj, blocks = ordered_setup(G, T, P)
    Om = projective_pairing(G, T, order)
    L, D = block_ldl(Om, blocks, conj)
    assert ldl_product(L, D, conj) == Om
    assert block_diagonal([[x.expand(4) for x in row] for row in D], blocks, 4)


def test_ldl_report_flags():
    G, T = builtin_group("C3")
    assert ldl_report(G, T, builtin_preorder("C3", T)).ok()


# -- Lambda and consistency -----------------------------------------------------

def test_lambda_s2(s2_report):
    r = s2_report
    Lam, ok = lambda_check(r.K, r.Omega, [0, 1], [[0], [1]], 12)
    assert ok
    assert Lam == [[s([1, 0, -1]), s([])], [s([]), s([1])]]


def test_lambda_corrupted_K(s2_report):
    r = s2_report
    K = [row[:] for row in r.K]
    K[1][0] = K[1][0] + s([0, 0, 1])
    assert not lambda_check(K, r.Omega, [0, 1], [[0], [1]], 12)[1]


def test_lambda_nabla_s2(s2_report):
    assert s2_report.Lambda_nabla == [[A.expand(12), s([])], [s([]), s([1])]]


def test_ldl_consistency_s2(s2_report):
    r = s2_report
    assert ldl_consistency(r.L, r.K, [[0], [1]], 12)
    bad = [row[:] for row in r.L]
    bad[1][0] = RatFun([0, 2])
    assert not ldl_consistency(bad, r.K, [[0], [1]], 12)


def test_ldl_consistency_trivial_group():
    assert ldl_consistency([[ONE]], [[s([1])]], [[0]], 12)


def test_series_inverse():
    M = [[s([1, 1]), s([0, 1])], [s([]), s([1])]]
    assert smat_mul(M, smat_inverse(M)) == smat_identity(2, 12)


def test_dagger_uses_conjugation():
    X = [[1, 2, 3], [4, 5, 6], [7, 8, 9]]
    assert dagger(X, [0, 2, 1]) == [[1, 7, 4], [3, 9, 6], [2, 8, 5]]


# -- the charge oracle ------------------------------------------------------------

def test_charge_diagonal():
    for lam in [(3,), (2, 1), (1, 1, 1), (3, 2, 1)]:
        assert kostka_foulkes_charge(lam, lam) == (1,)


def test_charge_two_boxes():
    assert kostka_foulkes_charge((2,), (1, 1)) == (0, 1)


def test_charge_row_of_three():
    assert kostka_foulkes_charge((3,), (1, 1, 1)) == (0, 0, 0, 1)


def test_charge_size_mismatch():
    with pytest.raises(InputError):
        kostka_foulkes_charge((2,), (1, 1, 1))


def test_charge_of_words():
    assert charge([1, 2, 3]) == 3
    assert charge([3, 2, 1]) == 0
    assert charge([2, 1, 1, 2]) == 1


def test_known_kostka_foulkes_n4():
    # K_{(2,2),(1^4)} = q^2 + q^4 and K_{(3,1),(2,1,1)} = q + q^2
    assert kostka_foulkes_charge((2, 2), (1, 1, 1, 1)) == (0, 0, 1, 0, 1)
    assert kostka_foulkes_charge((3, 1), (2, 1, 1)) == (0, 1, 1)


def test_kostka_numbers_at_one():
    # K(1) counts semistandard tableaux
    for lam, mu, count in [((3, 2), (2, 2, 1), 2), ((2, 2, 1), (1,) * 5, 5), ((4, 2), (2, 2, 2), 3)]:
        assert sum(kostka_foulkes_charge(lam, mu)) == count
        assert len(semistandard_tableaux(lam, mu)) == count


def test_conjugate_partition():
    assert conjugate_partition((3, 1)) == (2, 1, 1)


def test_oracle_normalization_from_s2(s2_report):
    assert determine_normalization(s2_report) == "direct"
    assert s2_report.normalization == "direct"


def test_oracle_table_s3_direct():
    t = oracle_table(3, "direct")
    assert t[((2, 1), (1, 1, 1))] == (0, 1, 1)
    assert t[((3,), (2, 1))] == (0, 1)


def test_oracle_s3_matches():
    G, T = builtin_group("S3")
    r = full_report(G, T, builtin_preorder("S3", T, "dominance"))
    assert oracle_matches(r, 3, "direct")
    assert not oracle_matches(r, 3, "cocharge")


# -- reports --------------------------------------------------------------------------

def test_s2_report_flags(s2_report):
    assert s2_report.ok()
    assert s2_report.L == [[ONE, ZERO], [QQ, ONE]]
    assert s2_report.D == [[A, ZERO], [ZERO, ONE]]


def test_report_json_deterministic(s2_report):
    a = s2_report.to_json()
    G, T = builtin_group("S2")
    b = full_report(G, T, builtin_preorder("S2", T, "dominance")).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["m"] == [["1", "0"], ["q", "1"]]
    assert doc["Omega"][0] == ["1/(1-q^2)", "q/(1-q^2)"]


def test_report_text_and_csv(s2_report):
    assert "m_support: ok" in s2_report.to_text()
    assert s2_report.to_csv().startswith("Omega,")


def test_one_phylum_report():
    G, T = builtin_group("S2")
    r = full_report(G, T, builtin_preorder("S2", T, "one-phylum"))
    assert r.L == [[ONE, ZERO], [ZERO, ONE]]
    assert r.D == r.Omega
    assert r.ok()


def test_reversed_preorder_on_s2():
    # tensoring with the sign swaps the two characters, so the reversed order
    # gives the same matrices with the roles exchanged
    G, T = builtin_group("S2")
    r = filtration_matrices(G, T, load_preorder(T, [["triv"], ["sgn"]]))
    assert [r.names[i] for i in r.ordering] == ["(2)", "(1,1)"]
    assert r.m == [[s([1]), s([])], [s([0, 1]), s([1])]]
    assert all(r.flags.values())

"""Randomized invariants (hypothesis)."""
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from kostkasys.kostka import block_ldl, kostka_foulkes_charge, ldl_product, semistandard_tableaux
from kostkasys.scalars import Cyclo, QSeries, RatFun, cyclo_conj, fit_ratfun, series_div
from kostkasys.wgroup import builtin_group, dominates, load_preorder, partitions, validate_malle

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)
conductors = st.sampled_from([1, 3, 4, 5, 8, 12])


@st.composite
def cyclos(draw, N=None):
    N = draw(conductors) if N is None else N
    return Cyclo(N, draw(st.lists(small, min_size=N, max_size=N)))


@st.composite
def cyclo_triples(draw):
    N = draw(conductors)
    return draw(cyclos(N)), draw(cyclos(N)), draw(cyclos(N))


@given(cyclo_triples())
def test_cyclo_ring_axioms(t):
    a, b, c = t
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0


@given(cyclo_triples())
def test_cyclo_conj_involution_and_multiplicative(t):
    a, b, _ = t
    assert cyclo_conj(cyclo_conj(a)) == a
    assert cyclo_conj(a * b) == cyclo_conj(a) * cyclo_conj(b)


@given(cyclos())
def test_cyclo_inverse(a):
    if a != 0:
        assert a * a.inverse() == 1


@given(conductors, st.integers(min_value=-20, max_value=20))
def test_zeta_order(N, k):
    z = Cyclo.zeta(N)
    acc = Cyclo.rational(1, N)
    for _ in range(N):
        acc = acc * z
    assert acc == 1
    assert Cyclo.zeta(N, k) == Cyclo.zeta(N, k + N)


series = st.lists(small, min_size=1, max_size=8).map(lambda c: QSeries(c, 7))


@given(series, series, series)
def test_qseries_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(series, series)
def test_series_division_inverts_multiplication(a, b):
    if b.coeffs[0] != 0:
        assert series_div(a * b, b) == a


polys = st.lists(st.integers(min_value=-4, max_value=4), min_size=1, max_size=5)
den_parts = st.lists(st.integers(min_value=1, max_value=4), min_size=0, max_size=3)


def product_den(parts):
    den = RatFun.const(1)
    for k in parts:
        den = den * RatFun([1] + [0] * (k - 1) + [-1])
    return den


@settings(deadline=None)
@given(polys, den_parts)
def test_ratfun_expand_fit_round_trip(num, parts):
    r = RatFun(num) / product_den(parts)
    T = 2 * (len(num) + sum(parts)) + 4
    assert fit_ratfun(r.expand(T), sum(parts)) == r


@given(polys, den_parts, polys, den_parts)
def test_ratfun_ops_commute_with_expansion(n1, p1, n2, p2):
    a = RatFun(n1) / product_den(p1)
    b = RatFun(n2) / product_den(p2)
    assert (a + b).expand(10) == a.expand(10) + b.expand(10)
    assert (a * b).expand(10) == a.expand(10) * b.expand(10)


@given(polys, den_parts)
def test_ratfun_canonical_form(num, parts):
    r = RatFun(num) / product_den(parts)
    assert RatFun(r.num, r.den) == r
    assert hash(RatFun(r.num, r.den)) == hash(r)


@st.composite
def symmetric_ratfun_matrices(draw):
    n = draw(st.integers(min_value=1, max_value=4))
    M = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            c = draw(st.lists(st.integers(min_value=-2, max_value=2), min_size=1, max_size=3))
            if i == j:
                c[0] = draw(st.integers(min_value=3, max_value=6))
            else:
                c[0] = 0
            M[i][j] = M[j][i] = RatFun(c) / RatFun([1, 0, -1])
    cuts = sorted(draw(st.sets(st.integers(min_value=1, max_value=n - 1), max_size=n - 1))) \
        if n > 1 else []
    edges = [0] + cuts + [n]
    blocks = [list(range(a, b)) for a, b in zip(edges, edges[1:])]
    return M, blocks


@settings(max_examples=40, deadline=None)
@given(symmetric_ratfun_matrices())
def test_block_ldl_reconstructs(data):
    M, blocks = data
    conj = list(range(len(M)))
    L, D = block_ldl(M, blocks, conj)
    assert ldl_product(L, D, conj) == M
    where = {i: b for b, blk in enumerate(blocks) for i in blk}
    for i in range(len(M)):
        for j in range(len(M)):
            if where[i] != where[j]:
                assert D[i][j].is_zero()
            if where[i] < where[j] or (where[i] == where[j] and i != j):
                assert L[i][j].is_zero()
            if i == j:
                assert L[i][j] == 1


pairs = st.integers(min_value=1, max_value=5).flatmap(
    lambda n: st.tuples(st.sampled_from(partitions(n)), st.sampled_from(partitions(n))))


@settings(deadline=None)
@given(pairs)
def test_kostka_foulkes_properties(pair):
    lam, mu = pair
    K = kostka_foulkes_charge(lam, mu)
    assert sum(K) == len(semistandard_tableaux(lam, mu))
    assert all(c >= 0 for c in K)
    if lam == mu:
        assert K == (1,)
    if not dominates(lam, mu):
        assert sum(K) == 0


@given(st.sampled_from(["S3", "S4"]), st.randoms(use_true_random=False))
def test_real_tables_satisfy_malle(name, rnd):
    _, T = builtin_group(name)
    names = list(T.names)
    rnd.shuffle(names)
    cut = sorted(rnd.sample(range(1, len(names)), rnd.randint(0, len(names) - 1)))
    edges = [0] + cut + [len(names)]
    P = load_preorder(T, [names[a:b] for a, b in zip(edges, edges[1:])])
    assert validate_malle(P, T)


def test_fraction_coefficients_are_exact():
    r = RatFun([Fraction(1, 3)], [1, -1])
    assert r.expand(3).coeffs == [Fraction(1, 3)] * 4

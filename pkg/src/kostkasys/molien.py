"""Molien-type sums: the pairing matrix Omega, invariant degrees, fake degrees,
and class functions valued in q-series.

Omega[chi][psi] is the graded multiplicity of L_chi in L_psi (x) S(h):

    (1/|W|) sum_w conj(chi(w)) psi(w) / det(1 - q w|h).

It is assembled exactly, class by class, over a common denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError
from .scalars import (Cyclo, QSeries, RatFun, cyclo_conj, poly_add, poly_mul, poly_trim)
from .wgroup import char_poly_h


def _cache(G):
    if not hasattr(G, "_molien_cache"):
        G._molien_cache = {}
    return G._molien_cache


def class_denominators(G):
    """det(1 - q w) for each class representative."""
    c = _cache(G)
    if "dets" not in c:
        c["dets"] = [char_poly_h(G, r) for r in G.class_reps]
    return c["dets"]


def class_function_ratfun(G, values):
    """(1/|W|) sum_classes |C| values[C] / det(1 - q w_C) as a RatFun.

    ``values`` are Cyclo class-function values; the sum must be rational.
    """
    dets = class_denominators(G)
    distinct = []
    weight = []
    for c, d in enumerate(dets):
        a = values[c] * G.class_sizes[c]
        if d in distinct:
            weight[distinct.index(d)] = weight[distinct.index(d)] + a
        else:
            distinct.append(d)
            weight.append(a)
    den = (Cyclo.rational(1, G.conductor),)
    for d in distinct:
        den = poly_mul(den, d)
    num = ()
    for i, d in enumerate(distinct):
        if weight[i] == 0:
            continue
        term = (weight[i],)
        for j, e in enumerate(distinct):
            if j != i:
                term = poly_mul(term, e)
        num = poly_add(num, term)
    try:
        num_q = [x.to_fraction() / G.order for x in poly_trim(num)]
        den_q = [x.to_fraction() for x in den]
    except ValueError:
        raise InputError("Molien sum is not rational; check the character table") from None
    return RatFun(num_q, den_q)


def molien_pairing(G, T, chi, psi):
    vals = [cyclo_conj(T.rows[chi][c]) * T.rows[psi][c] for c in range(len(G.classes))]
    return class_function_ratfun(G, vals)


def omega_matrix(G, T):
    c = _cache(G)
    key = ("omega", id(T))
    if key not in c:
        n = len(T.rows)
        c[key] = [[molien_pairing(G, T, i, j) for j in range(n)] for i in range(n)]
    return c[key]


def invariant_degrees(G, T):
    """Degrees d_i with Omega[triv][triv] = prod 1/(1 - q^{d_i})."""
    triv = T.trivial()
    r = omega_matrix(G, T)[triv][triv]
    T0 = G.order + 1
    s = r.expand(T0)
    degrees = []
    while len(degrees) <= G.dim_h:
        k = next((i for i in range(1, T0 + 1) if s[i] != 0), None)
        if k is None:
            break
        degrees.append(k)
        s = s * QSeries([1] + [0] * (k - 1) + [-1], T0)
    den = (Fraction(1),)
    for d in degrees:
        den = poly_mul(den, tuple([Fraction(1)] + [Fraction(0)] * (d - 1) + [Fraction(-1)]))
    prod = 1
    for d in degrees:
        prod *= d
    if (len(degrees) != G.dim_h or prod != G.order or r != RatFun((1,), den)):
        raise InputError("not-a-reflection-group: invariant series is not of the form "
                         "prod 1/(1 - q^d)")
    return degrees


def fake_degree(G, T, chi):
    """Graded multiplicity of chi in the coinvariant algebra, as int coefficients."""
    den = (Fraction(1),)
    for d in invariant_degrees(G, T):
        den = poly_mul(den, tuple([Fraction(1)] + [Fraction(0)] * (d - 1) + [Fraction(-1)]))
    f = omega_matrix(G, T)[chi][T.trivial()] * RatFun(den)
    if not f.is_polynomial():
        raise InputError("fake degree is not a polynomial")
    return tuple(int(c) for c in f.num)


def default_trunc(G, T):
    """2 * sum (d_i - 1) + 4."""
    return 2 * sum(d - 1 for d in invariant_degrees(G, T)) + 4


# ---------------------------------------------------------------------------
# class functions valued in q-series

@dataclass
class GradedClass:
    """values[c] is a QSeries (Cyclo coefficients) for class c."""
    values: list
    trunc: int

    @classmethod
    def zero(cls, G, trunc):
        z = Cyclo.rational(0, G.conductor)
        return cls([QSeries([z] * (trunc + 1), trunc) for _ in G.classes], trunc)

    def grade(self, k):
        return [v[k] for v in self.values]

    def __sub__(self, other):
        T = min(self.trunc, other.trunc)
        return GradedClass([a.truncate(T) - b.truncate(T)
                            for a, b in zip(self.values, other.values)], T)

    def __add__(self, other):
        T = min(self.trunc, other.trunc)
        return GradedClass([a.truncate(T) + b.truncate(T)
                            for a, b in zip(self.values, other.values)], T)

    def scale(self, c):
        return GradedClass([v * c for v in self.values], self.trunc)

    def shift(self, n):
        return GradedClass([v.shift(n).truncate(self.trunc) for v in self.values], self.trunc)

    def is_zero_grade(self, k):
        return all(v[k] == 0 for v in self.values)


def multiplicities(G, T, C):
    """[chi -> QSeries of multiplicities] for a graded class function.

    Raises if a multiplicity is not a non-negative integer.
    """
    out = []
    for chi in range(len(T.rows)):
        coeffs = []
        for k in range(C.trunc + 1):
            acc = Cyclo.rational(0, G.conductor)
            for c, size in enumerate(G.class_sizes):
                v = C.values[c][k]
                if v != 0:
                    acc = acc + cyclo_conj(T.rows[chi][c]) * v * size
            m = acc / G.order
            if not m.is_rational():
                raise InputError("graded class is not a virtual character")
            coeffs.append(m.to_fraction())
        out.append(QSeries(coeffs, C.trunc))
    return out


def class_from_multiplicities(G, T, mults, trunc):
    """Inverse of ``multiplicities``."""
    values = []
    for c in range(len(G.classes)):
        coeffs = []
        for k in range(trunc + 1):
            acc = Cyclo.rational(0, G.conductor)
            for chi, m in enumerate(mults):
                if m[k] != 0:
                    acc = acc + T.rows[chi][c] * m[k]
            coeffs.append(acc)
        values.append(QSeries(coeffs, trunc))
    return GradedClass(values, trunc)


def projective_class(G, T, chi, trunc):
    """Graded character of P_chi = L_chi (x) S(h)."""
    dets = class_denominators(G)
    values = []
    for c in range(len(G.classes)):
        s = QSeries([T.rows[chi][c]], trunc) / QSeries(list(dets[c]), trunc)
        values.append(s)
    return GradedClass(values, trunc)

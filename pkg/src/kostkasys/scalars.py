"""Exact scalars: cyclotomic numbers, q-polynomials, truncated q-series and
rational functions in q.

Everything is exact (``fractions.Fraction`` underneath).  Polynomials are
plain tuples of coefficients, lowest degree first, with trailing zeros
stripped; the zero polynomial is the empty tuple.

>>> cyclo_reduce([0, 1, 1], 3)
Cyclo(3, [-1, 0])
>>> str(ratfun_normalize((1, 0, 0, 0, -1), poly_mul((1, -1), (1, 0, -1))))
'(1+q^2)/(1-q)'
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd


# ---------------------------------------------------------------------------
# generic polynomial helpers (coefficients in any commutative ring/field)

def poly_trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(x + y)
    return poly_trim(out)


def poly_neg(a):
    return tuple(-x for x in a)


def poly_sub(a, b):
    return poly_add(a, poly_neg(b))


def poly_scale(a, c):
    return poly_trim([c * x for x in a])


def poly_mul(a, b):
    if not a or not b:
        return ()
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return poly_trim(out)


def poly_divmod(a, b):
    """Quotient and remainder; ``b`` must have an invertible leading coefficient."""
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(poly_trim(a))
    lead = b[-1]
    inv = 1 / lead if not isinstance(lead, int) else Fraction(1, lead)
    if len(a) < len(b):
        return (), tuple(a)
    quot = [0] * (len(a) - len(b) + 1)
    for i in range(len(a) - len(b), -1, -1):
        c = a[i + len(b) - 1] * inv
        if c == 0:
            continue
        quot[i] = c
        for j, y in enumerate(b):
            a[i + j] = a[i + j] - c * y
    return poly_trim(quot), poly_trim(a[:len(b) - 1])


def poly_exact_div(a, b):
    q, r = poly_divmod(a, b)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return q


def poly_monic(a):
    a = poly_trim(a)
    if not a:
        return a
    lead = a[-1]
    return tuple(Fraction(x) / lead for x in a)


def poly_gcd(a, b):
    """Monic gcd over Q."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a)


def poly_xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = poly_trim(a), poly_trim(b)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
    lead = Fraction(r0[-1])
    return (poly_scale(r0, 1 / lead), poly_scale(s0, 1 / lead),
            poly_scale(t0, 1 / lead))


def poly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _fmt_coeff(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def poly_str(a, var="q"):
    """Deterministic text form, e.g. ``1+q^2`` or ``-1/2*q+3*q^4``."""
    a = poly_trim(a)
    if not a:
        return "0"
    parts = []
    for k, c in enumerate(a):
        if c == 0:
            continue
        c = Fraction(c)
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            body = _fmt_coeff(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(abs(c))}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += sign + body
    return out


# ---------------------------------------------------------------------------
# cyclotomic fields

@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n < 1:
        raise ValueError("invalid-conductor: N must be >= 1")
    p = [-1] + [0] * (n - 1) + [1]
    p = tuple(Fraction(x) for x in p)
    for d in range(1, n):
        if n % d == 0:
            p = poly_exact_div(p, cyclotomic_polynomial(d))
    return tuple(int(x) for x in p)


def totient(n):
    return len(cyclotomic_polynomial(n)) - 1


def _reduce_mod_phi(coeffs, N):
    phi_poly = cyclotomic_polynomial(N)
    deg = len(phi_poly) - 1
    c = [Fraction(x) for x in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        top = c[i]
        if top == 0:
            continue
        for j in range(deg + 1):
            c[i - deg + j] -= top * phi_poly[j]
    c = c[:deg] + [Fraction(0)] * (deg - len(c))
    return tuple(c)


class Cyclo:
    """An element of Q(zeta_N), stored as the reduced residue modulo Phi_N.

    Elements with different conductors may be mixed; the result lives in the
    field of the least common multiple.
    """

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor, coeffs):
        if conductor < 1:
            raise ValueError("invalid-conductor: N must be >= 1")
        coeffs = tuple(Fraction(x) for x in coeffs)
        if len(coeffs) != totient(conductor):
            coeffs = _reduce_mod_phi(coeffs, conductor)
        self.conductor = conductor
        self.coeffs = coeffs

    @classmethod
    def rational(cls, x, conductor=1):
        return cls(conductor, [Fraction(x)] + [0] * (totient(conductor) - 1))

    @classmethod
    def zeta(cls, N, k=1):
        k %= N
        return cyclo_reduce([0] * k + [1], N)

    # -- coercion --------------------------------------------------------
    def lift(self, M):
        """Re-express in Q(zeta_M); requires conductor | M."""
        if M == self.conductor:
            return self
        if M % self.conductor:
            raise ValueError("conductor does not divide target")
        step = M // self.conductor
        big = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            big[i * step] = c
        return cyclo_reduce(big, M)

    def _coerce(self, other):
        if isinstance(other, Cyclo):
            if other.conductor == self.conductor:
                return self, other
            M = self.conductor * other.conductor // gcd(self.conductor, other.conductor)
            return self.lift(M), other.lift(M)
        if isinstance(other, (int, Fraction)):
            return self, Cyclo.rational(other, self.conductor)
        return None, None

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Cyclo(a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.conductor, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Cyclo(a.conductor, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.conductor, [x * other for x in self.coeffs])
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if len(a.coeffs) == 1:
            return Cyclo(a.conductor, [a.coeffs[0] * b.coeffs[0]])
        prod = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        return Cyclo(a.conductor, _reduce_mod_phi(prod, a.conductor))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if len(self.coeffs) == 1:
            return Cyclo(self.conductor, [1 / self.coeffs[0]])
        g, s, _ = poly_xgcd(poly_trim(self.coeffs),
                            tuple(Fraction(x) for x in cyclotomic_polynomial(self.conductor)))
        assert g == (1,)
        return Cyclo(self.conductor, _reduce_mod_phi(s, self.conductor))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclo(self.conductor, [x / other for x in self.coeffs])
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclo.rational(1, self.conductor)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates ------------------------------------------------------
    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def to_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def conj(self):
        return cyclo_conj(self)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        # hash by the value in the smallest field that contains it
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.conductor, self.coeffs))

    def __repr__(self):
        return f"Cyclo({self.conductor}, {[_plain(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_rational():
            return _fmt_coeff(self.coeffs[0])
        return poly_str(self.coeffs, var=f"z{self.conductor}")

    # -- serialization ---------------------------------------------------
    def to_json(self):
        return {"conductor": self.conductor,
                "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, doc):
        N = int(doc["conductor"])
        coeffs = [Fraction(int(p), int(q)) for p, q in doc["coeffs"]]
        return cyclo_reduce(coeffs, N)


def _plain(c):
    return int(c) if c.denominator == 1 else c


def cyclo_reduce(coeffs, N):
    """The residue of sum c_i zeta_N^i modulo the N-th cyclotomic polynomial."""
    if N < 1:
        raise ValueError("invalid-conductor: N must be >= 1")
    return Cyclo(N, _reduce_mod_phi(coeffs, N))


def cyclo_conj(x):
    """Complex conjugation zeta_N -> zeta_N^{-1}."""
    if isinstance(x, (int, Fraction)):
        return x
    N = x.conductor
    if N <= 2:
        return x
    big = [Fraction(0)] * N
    for i, c in enumerate(x.coeffs):
        big[(-i) % N] += c
    return cyclo_reduce(big, N)


def as_cyclo(x, conductor=1):
    if isinstance(x, Cyclo):
        return x
    return Cyclo.rational(x, conductor)


# ---------------------------------------------------------------------------
# truncated power series

class QSeries:
    """A power series in q known up to and including q^trunc."""

    __slots__ = ("coeffs", "trunc")

    def __init__(self, coeffs, trunc):
        coeffs = list(coeffs)[:trunc + 1]
        coeffs += [0] * (trunc + 1 - len(coeffs))
        self.coeffs = coeffs
        self.trunc = trunc

    @classmethod
    def from_poly(cls, p, trunc):
        return cls(list(p), trunc)

    @classmethod
    def zero(cls, trunc):
        return cls([], trunc)

    @classmethod
    def one(cls, trunc):
        return cls([1], trunc)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries([other], self.trunc)
        T = min(self.trunc, other.trunc)
        return QSeries([self.coeffs[i] + other.coeffs[i] for i in range(T + 1)], T)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-c for c in self.coeffs], self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries([c * other for c in self.coeffs], self.trunc)
        T = min(self.trunc, other.trunc)
        out = [0] * (T + 1)
        for i in range(T + 1):
            a = self.coeffs[i]
            if a == 0:
                continue
            for j in range(T + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] = out[i + j] + a * b
        return QSeries(out, T)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return series_div(self, other)
        return QSeries([c / other for c in self.coeffs], self.trunc)

    def shift(self, n):
        """Multiply by q^n (n >= 0); the known range grows with the shift."""
        return QSeries([0] * n + self.coeffs, self.trunc + n)

    def truncate(self, T):
        if T > self.trunc:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs[:T + 1], T)

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def agrees(self, other, T=None):
        T = min(self.trunc, other.trunc) if T is None else T
        if T > min(self.trunc, other.trunc):
            raise ValueError("comparison beyond known range")
        return all(self.coeffs[i] == other.coeffs[i] for i in range(T + 1))

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.agrees(other)

    def __hash__(self):
        return hash((self.trunc, tuple(self.coeffs)))

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def __repr__(self):
        return f"QSeries({[_plain_any(c) for c in self.coeffs]}, trunc={self.trunc})"

    def __str__(self):
        if any(isinstance(c, Cyclo) and not c.is_rational() for c in self.coeffs):
            body = " + ".join(f"({c})*q^{k}" for k, c in enumerate(self.coeffs) if c != 0)
            return (body or "0") + f" + O(q^{self.trunc + 1})"
        plain = [c.to_fraction() if isinstance(c, Cyclo) else c for c in self.coeffs]
        return poly_str(plain) + f" + O(q^{self.trunc + 1})"


def _plain_any(c):
    if isinstance(c, Fraction):
        return _plain(c)
    return c


def series_div(a, b):
    """c with c*b = a up to the shared truncation."""
    T = min(a.trunc, b.trunc)
    b0 = b.coeffs[0]
    if b0 == 0:
        raise ZeroDivisionError("not-a-unit: divisor has zero constant term")
    inv0 = b0.inverse() if isinstance(b0, Cyclo) else Fraction(1) / b0
    c = []
    for k in range(T + 1):
        acc = a.coeffs[k]
        for j in range(1, k + 1):
            if b.coeffs[j] != 0 and c[k - j] != 0:
                acc = acc - b.coeffs[j] * c[k - j]
        c.append(acc * inv0)
    return QSeries(c, T)


# ---------------------------------------------------------------------------
# rational functions

def _is_cyclotomic_product(den):
    """Write den (den(0) = 1) as a product of factors (1 - q^k), if possible.

    Returns the sorted list of k, or None.  The decomposition is found by
    stripping cyclotomic factors and then greedily assembling (1 - q^d) from
    the largest d down; it succeeds only if nothing is missing.
    """
    deg = len(den) - 1
    if deg == 0:
        return []
    counts = {}
    rest = den
    d = 1
    while len(rest) > 1 and d <= 2 * deg * deg + 2:
        phi_d = tuple(Fraction(x) for x in cyclotomic_polynomial(d))
        if len(phi_d) - 1 <= len(rest) - 1:
            while True:
                q, r = poly_divmod(rest, phi_d)
                if r:
                    break
                counts[d] = counts.get(d, 0) + 1
                rest = q
        d += 1
    if len(rest) > 1:
        return None
    ks = []
    while any(counts.values()):
        top = max(k for k, v in counts.items() if v)
        for e in range(1, top + 1):
            if top % e == 0:
                if not counts.get(e):
                    return None
                counts[e] -= 1
        ks.append(top)
    return sorted(ks)


def _one_minus_q_pow(k):
    return tuple([Fraction(1)] + [Fraction(0)] * (k - 1) + [Fraction(-1)])


class RatFun:
    """A rational function in q with rational coefficients, in reduced form.

    The denominator is scaled so that its constant term is 1 (or made monic
    when it vanishes at 0).  When the denominator is a product of factors
    (1 - q^k) that factorisation is remembered and used for printing.
    """

    __slots__ = ("num", "den", "den_factors")

    def __init__(self, num, den=(Fraction(1),)):
        num = poly_trim([Fraction(x) for x in num])
        den = poly_trim([Fraction(x) for x in den])
        if not den:
            raise ZeroDivisionError("division-by-zero: zero denominator")
        if not num:
            self.num, self.den, self.den_factors = (), (Fraction(1),), []
            return
        g = poly_gcd(num, den)
        if len(g) > 1:
            num = poly_exact_div(num, g)
            den = poly_exact_div(den, g)
        scale = den[0] if den[0] != 0 else den[-1]
        num = tuple(x / scale for x in num)
        den = tuple(x / scale for x in den)
        self.num, self.den = num, den
        self.den_factors = _is_cyclotomic_product(den) if den[0] == 1 else None

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    @classmethod
    def const(cls, c):
        return cls((Fraction(c),))

    def __add__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFun(poly_add(self.num, other.num), self.den)
        return RatFun(poly_add(poly_mul(self.num, other.den), poly_mul(other.num, self.den)),
                      poly_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RatFun(poly_neg(self.num), self.den)

    def __sub__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return RatFun(poly_mul(self.num, other.num), poly_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division-by-zero")
        return RatFun(poly_mul(self.num, other.den), poly_mul(self.den, other.num))

    def __rtruediv__(self, other):
        return _as_ratfun(other) / self

    def is_zero(self):
        return not self.num

    def is_polynomial(self):
        return self.den == (1,)

    def __eq__(self, other):
        other = _as_ratfun(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def expand(self, T):
        """The Taylor expansion to order T as a QSeries."""
        return series_div(QSeries(list(self.num), T), QSeries(list(self.den), T))

    def __repr__(self):
        return f"RatFun({str(self)!r})"

    def __str__(self):
        top = poly_str(self.num)
        if self.den == (1,):
            return top
        n_terms = sum(1 for c in self.num if c != 0)
        if n_terms > 1:
            top = f"({top})"
        if self.den_factors is not None:
            facs = [f"(1-q^{k})" if k > 1 else "(1-q)" for k in self.den_factors]
            bottom = facs[0] if len(facs) == 1 else "(" + "*".join(facs) + ")"
        else:
            bottom = f"({poly_str(self.den)})"
        return f"{top}/{bottom}"


def _as_ratfun(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFun.const(x)
    return None


def ratfun_normalize(num, den):
    """Canonical reduced form of num/den (polynomials given low degree first)."""
    return RatFun(num, den)


def fit_ratfun(series, max_den_degree):
    """Recover a rational function from a truncated series.

    Tries denominators that are products of factors (1 - q^k) of total degree
    at most ``max_den_degree``, smallest first, and accepts the first whose
    numerator satisfies 2 * (deg num + deg den) < trunc.  Two such functions
    agreeing to order trunc are equal, so the answer is unique.  Used only as
    a round-trip check.
    """
    T = series.trunc
    for total in range(max_den_degree + 1):
        for parts in _partitions(total):
            den = (Fraction(1),)
            for k in parts:
                den = poly_mul(den, _one_minus_q_pow(k))
            prod = series * QSeries(list(den), T)
            coeffs = poly_trim(prod.coeffs)
            if 2 * (max(len(coeffs) - 1, 0) + total) < T:
                return RatFun(coeffs, den)
    return None


def _partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest

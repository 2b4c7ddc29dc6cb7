"""Exact linear algebra used by the module constructions.

Vectors over Q(zeta_N) are handled by realification: an element of K with
phi = phi(N) coordinates becomes phi rational coordinates, and a K-linear map
becomes a rational matrix whose entries sit in phi x phi blocks of regular
representation matrices.  K-dimensions are then Q-dimensions divided by phi.

Dense exact work is delegated to FLINT (``python-flint``): ``fmpq_mat`` for
rational row reduction and products, ``nmod_mat`` for fast pivot selection
modulo a large prime.  A pivot choice made modulo p is only ever used as a
proposal; spans and ranks are certified over Q before being returned.

A small pure-Python Gauss-Jordan routine over any exact field (Fraction or
Cyclo entries) is kept for the tiny group-algebra computations and as an
independent cross-check in the tests.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import flint
import numpy as np

from .scalars import Cyclo, totient

PRIME = 2**61 - 1
INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# pure-Python Gauss-Jordan (small matrices, any exact field)

def gauss_rref(rows):
    """Reduced row echelon form of a list of rows; returns (rref_rows, pivots)."""
    A = [list(r) for r in rows]
    if not A:
        return [], []
    ncols = len(A[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(A)):
            if A[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c] if not isinstance(A[r][c], int) else Fraction(1, A[r][c])
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def gauss_rank(rows):
    return len(gauss_rref(rows)[1])


def gauss_solve_left(rows, target):
    """Coordinates of ``target`` in the span of ``rows`` (None if outside)."""
    R, piv = gauss_rref(rows)
    coords = [target[p] for p in piv]
    residual = list(target)
    for c, row in zip(coords, R):
        if c != 0:
            residual = [x - c * y for x, y in zip(residual, row)]
    if any(x != 0 for x in residual):
        return None
    return R, coords


def matmul(A, B):
    """Plain product of list-of-lists matrices with exact entries."""
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(p):
            acc = Ai[0] * 0 if m else 0
            for k in range(m):
                a = Ai[k]
                if a != 0:
                    b = B[k][j]
                    if b != 0:
                        acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def identity(n, one=1):
    return [[one if i == j else 0 * one for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# the cyclotomic field as a Q-algebra

@lru_cache(maxsize=None)
def field_tensors(N):
    """Structure constants of Q(zeta_N) in the power basis 1, zeta, ...

    Returns (phi, mul, reg) with integer arrays: mul[u, v, :] holds the
    coordinates of zeta^u * zeta^v, and reg[c] is the matrix of
    multiplication by zeta^c acting on coordinate columns.
    """
    phi = totient(N)
    mul = np.zeros((phi, phi, phi), dtype=np.int64)
    for u in range(phi):
        for v in range(phi):
            z = Cyclo.zeta(N, u + v)
            mul[u, v, :] = [int(c) for c in z.coeffs]
    reg = np.zeros((phi, phi, phi), dtype=np.int64)
    for c in range(phi):
        for j in range(phi):
            reg[c, :, j] = mul[c, j, :]
    return phi, mul, reg


@lru_cache(maxsize=None)
def trace_form(N):
    """Gram matrix Tr_{K/Q}(zeta^(i+j)) and its inverse, as fmpq matrices."""
    phi, mul, reg = field_tensors(N)
    G = [[0] * phi for _ in range(phi)]
    for i in range(phi):
        for j in range(phi):
            # Tr(zeta^(i+j)) = trace of multiplication by zeta^(i+j)
            coords = mul[i, j, :]
            t = 0
            for c in range(phi):
                if coords[c]:
                    t += int(coords[c]) * int(np.trace(reg[c]))
            G[i][j] = t
    Gq = flint.fmpq_mat(G)
    return Gq, Gq.inv()


def cyclo_array(matrix, N):
    """Cyclo matrix -> (integer array of shape (n, m, phi), common denominator)."""
    phi = totient(N)
    n = len(matrix)
    m = len(matrix[0]) if n else 0
    den = 1
    for row in matrix:
        for x in row:
            x = x.lift(N) if isinstance(x, Cyclo) else Cyclo.rational(x, N)
            for c in x.coeffs:
                den = den * c.denominator // _gcd(den, c.denominator)
    out = np.zeros((n, m, phi), dtype=object)
    for i, row in enumerate(matrix):
        for j, x in enumerate(row):
            x = x.lift(N) if isinstance(x, Cyclo) else Cyclo.rational(x, N)
            for c, v in enumerate(x.coeffs):
                out[i, j, c] = int(v * den)
    return shrink(out), den


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def shrink(a):
    """Use int64 storage when the entries allow it (object otherwise)."""
    if a.dtype == np.int64:
        return a
    if a.size == 0:
        return a.astype(np.int64)
    try:
        b = a.astype(np.int64)
    except OverflowError:
        return a
    return b if int(np.abs(b).max()) < INT64_SAFE else a


def bound(a):
    if a.size == 0:
        return 0
    if a.dtype == np.int64:
        return int(np.abs(a).max())
    return max(abs(int(x)) for x in a.flat)


def safe_pair(a, b, terms):
    """Promote both arrays to object dtype if a product-sum could overflow."""
    if bound(a) * bound(b) * max(terms, 1) >= INT64_SAFE:
        return a.astype(object), b.astype(object)
    return a, b


def k_einsum(spec_ab, A, B, N):
    """Product of K-arrays: ``spec_ab`` is an einsum spec on the non-field
    axes, e.g. 'ij,jk->ik'; the field axis is handled by structure constants."""
    phi, mul, _ = field_tensors(N)
    lhs, out = spec_ab.split("->")
    sa, sb = lhs.split(",")
    if phi == 1:
        terms = 1
        for ch in set(sa) & set(sb):
            terms *= A.shape[sa.index(ch)]
        A2, B2 = safe_pair(A[..., 0], B[..., 0], terms)
        return shrink(np.asarray(np.einsum(spec_ab, A2, B2)))[..., None]
    terms = phi * phi
    for ch in set(sa) & set(sb):
        terms *= A.shape[sa.index(ch)]
    A2, B2 = safe_pair(A, B, terms)
    M = mul.astype(object) if A2.dtype == object else mul
    return shrink(np.asarray(np.einsum(f"{sa}u,{sb}v,uvw->{out}w", A2, B2, M)))


def realify(A, N):
    """K-array of shape (n, m, phi) -> rational (integer) matrix (n phi, m phi)."""
    phi, _, reg = field_tensors(N)
    n, m = A.shape[0], A.shape[1]
    if phi == 1:
        return A[..., 0]
    R = reg.astype(object) if A.dtype == object else reg
    out = np.einsum("abc,cij->aibj", A, R)
    return out.reshape(n * phi, m * phi)


def to_fmpz(a):
    a = np.asarray(a)
    if a.size == 0:
        return flint.fmpz_mat(a.shape[0], a.shape[1] if a.ndim > 1 else 0)
    return flint.fmpz_mat([[int(x) for x in row] for row in a.tolist()])


def to_fmpq(a, den=1):
    M = flint.fmpq_mat(to_fmpz(a))
    if den != 1:
        M = M / den
    return M


def fmpq_to_int_rows(M):
    """(integer ndarray, common denominator) with M = array / den."""
    Z, den = M.numer_denom()
    shape = (M.nrows(), M.ncols())
    flat = [int(x) for x in Z.entries()]
    if not flat:
        return np.zeros(shape, dtype=np.int64), int(den)
    try:
        arr = np.array(flat, dtype=np.int64).reshape(shape)
        if int(np.abs(arr).max()) >= INT64_SAFE:
            arr = np.array(flat, dtype=object).reshape(shape)
    except OverflowError:
        arr = np.array(flat, dtype=object).reshape(shape)
    return arr, int(den)


def fmpq_entries(M):
    return [Fraction(int(x.p), int(x.q)) for x in M.entries()]


# ---------------------------------------------------------------------------
# certified row spaces

class Subspace:
    """A subspace of Q^n given by its reduced row echelon basis.

    ``R`` is an fmpq_mat (dim x n) in reduced row echelon form and
    ``pivots`` its pivot columns.  ``full`` and ``zero`` short-cut the two
    extreme cases without storing a matrix.
    """

    __slots__ = ("n", "R", "pivots", "_ints")

    def __init__(self, n, R=None, pivots=None):
        self.n = n
        self.R = R
        self.pivots = list(pivots) if pivots is not None else []
        self._ints = None

    @classmethod
    def zero(cls, n):
        return cls(n, flint.fmpq_mat(0, n), [])

    @classmethod
    def full(cls, n):
        return cls(n, None, list(range(n)))

    @property
    def dim(self):
        return len(self.pivots)

    @property
    def is_full(self):
        return self.dim == self.n

    def basis(self):
        if self.R is None:
            return flint.fmpq_mat([[1 if i == j else 0 for j in range(self.n)]
                                   for i in range(self.n)]) if self.n else flint.fmpq_mat(0, 0)
        return self.R

    def int_basis(self):
        """(integer array, denominator) for the basis rows, cached."""
        if self._ints is None:
            self._ints = fmpq_to_int_rows(self.basis())
        return self._ints

    def nonpivots(self):
        pv = set(self.pivots)
        return [j for j in range(self.n) if j not in pv]

    def contains_rows(self, V):
        """Exact membership test for the rows of an fmpq_mat."""
        if self.is_full or V.nrows() == 0:
            return True
        if self.dim == 0:
            return V.is_zero() if hasattr(V, "is_zero") else all(x == 0 for x in V.entries())
        Vp = select_columns(V, self.pivots)
        return Vp * self.R == V


def select_columns(M, cols):
    """Columns ``cols`` of an fmpq/fmpz matrix, as a new matrix of the same kind."""
    n = M.nrows()
    m = M.ncols()
    ent = M.entries()
    rows = [[ent[i * m + j] for j in cols] for i in range(n)]
    kind = type(M)
    if not rows:
        return kind(0, len(cols))
    if not cols:
        return kind(n, 0)
    return kind(rows)


def select_rows(M, rows_idx):
    m = M.ncols()
    ent = M.entries()
    kind = type(M)
    if not rows_idx:
        return kind(0, m)
    return kind([[ent[i * m + j] for j in range(m)] for i in rows_idx])


def _modp_pivot_rows(Z):
    """Indices of rows of the integer matrix Z that are independent modulo p."""
    nrows, ncols = Z.shape
    if nrows == 0 or ncols == 0:
        return []
    T = flint.nmod_mat((np.asarray(Z).T % PRIME).tolist(), PRIME)
    R, rank = T.rref()
    piv = []
    j = 0
    for i in range(rank):
        while int(R[i, j]) == 0:
            j += 1
        piv.append(j)
        j += 1
    return piv


def row_space(Z, n=None):
    """Certified row space of an integer (or rational) matrix.

    Z may be a numpy integer array or an fmpq_mat.  Rows independent modulo
    a large prime are independent over Q; the remaining rows are then checked
    to lie in their span exactly.  Should the check ever fail (unlucky
    prime), a full rational row reduction is used instead.
    """
    if isinstance(Z, flint.fmpq_mat):
        n = Z.ncols()
        if Z.nrows() == 0:
            return Subspace.zero(n)
        Zi, _ = fmpq_to_int_rows(Z)
    else:
        Zi = np.asarray(Z)
        if n is None:
            n = Zi.shape[1]
        if Zi.shape[0] == 0:
            return Subspace.zero(n)
    if n == 0:
        return Subspace.zero(0)
    idx = _modp_pivot_rows(Zi)
    if len(idx) == n:
        return Subspace.full(n)
    if not idx:
        if not any(int(x) for x in Zi.flat):
            return Subspace.zero(n)
        return _direct_row_space(Zi, n)
    sel = to_fmpq(Zi[idx])
    R, rank = sel.rref()
    pivots = _rref_pivots(R, rank)
    S = Subspace(n, R, pivots)
    rest = [i for i in range(Zi.shape[0]) if i not in set(idx)]
    if rest and not S.contains_rows(to_fmpq(Zi[rest])):
        return _direct_row_space(Zi, n)
    return S


def _direct_row_space(Zi, n):
    R, rank = to_fmpq(Zi).rref()
    if rank == n:
        return Subspace.full(n)
    pivots = _rref_pivots(R, rank)
    return Subspace(n, select_rows(R, list(range(rank))), pivots)


def _rref_pivots(R, rank):
    piv = []
    j = 0
    for i in range(rank):
        while R[i, j] == 0:
            j += 1
        piv.append(j)
        j += 1
    return piv


def image_columns(P, expected_rank):
    """Basis (as rows) of the column space of an integer matrix of known rank.

    Columns independent modulo p are independent over Q; if there are
    ``expected_rank`` of them they span.  Otherwise fall back to exact
    reduction.  Returns an integer array whose rows span the image.
    """
    P = np.asarray(P)
    if expected_rank == 0:
        return np.zeros((0, P.shape[0]), dtype=np.int64)
    idx = _modp_pivot_rows(P.T)
    if len(idx) == expected_rank:
        return P.T[idx]
    S = row_space(P.T)
    if S.dim != expected_rank:
        raise ArithmeticError("projector rank does not match its trace")
    Zi, _ = fmpq_to_int_rows(S.basis())
    return Zi


def sum_spaces(parts, n):
    """Row space of the union of several integer row blocks."""
    parts = [np.asarray(p) for p in parts if np.asarray(p).shape[0]]
    if not parts:
        return Subspace.zero(n)
    dtype = object if any(p.dtype == object for p in parts) else np.int64
    return row_space(np.vstack([p.astype(dtype) for p in parts]), n)


def nullspace_right(M):
    """Basis rows x of {x : M x = 0} for an fmpq_mat M (columns = unknowns)."""
    ncols = M.ncols()
    if M.nrows() == 0:
        return flint.fmpq_mat([[1 if i == j else 0 for j in range(ncols)]
                               for i in range(ncols)]) if ncols else flint.fmpq_mat(0, 0)
    S = row_space(M)
    if S.is_full:
        return flint.fmpq_mat(0, ncols)
    free = S.nonpivots()
    rows = []
    if S.dim:
        ent = S.R.entries()
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for i, p in enumerate(S.pivots):
            x[p] = -ent[i * ncols + f]
        rows.append(x)
    return flint.fmpq_mat(rows) if rows else flint.fmpq_mat(0, ncols)


def hstack_q(blocks, nrows):
    """Horizontal concatenation of fmpq_mats with equal row counts."""
    blocks = [b for b in blocks if b.ncols()]
    if not blocks:
        return flint.fmpq_mat(nrows, 0)
    rows = []
    ents = [(b.entries(), b.ncols()) for b in blocks]
    for i in range(nrows):
        row = []
        for e, m in ents:
            row.extend(e[i * m:(i + 1) * m])
        rows.append(row)
    if not rows:
        return flint.fmpq_mat(0, sum(b.ncols() for b in blocks))
    return flint.fmpq_mat(rows)


def vstack_q(blocks, ncols):
    blocks = [b for b in blocks if b.nrows()]
    if not blocks:
        return flint.fmpq_mat(0, ncols)
    rows = []
    for b in blocks:
        e = b.entries()
        m = b.ncols()
        rows.extend(e[i * m:(i + 1) * m] for i in range(b.nrows()))
    return flint.fmpq_mat(rows)


def q_trace(M):
    n = M.nrows()
    ent = M.entries()
    acc = flint.fmpq(0)
    for i in range(n):
        acc += ent[i * n + i]
    return acc


def k_trace_from_q_traces(qtraces, N):
    """Recover t in K from the rational numbers Tr_{K/Q}(zeta^j t), j < phi."""
    phi = totient(N)
    if phi == 1:
        return Cyclo.rational(Fraction(int(qtraces[0].p), int(qtraces[0].q)), N)
    G, Ginv = trace_form(N)
    b = flint.fmpq_mat([[x] for x in qtraces])
    t = Ginv * b
    return Cyclo(N, [Fraction(int(x.p), int(x.q)) for x in t.entries()])



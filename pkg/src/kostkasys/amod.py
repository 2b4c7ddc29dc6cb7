"""Grade-truncated modules over A_W = C[W] # S(h).

Modules are stored realified (see ``linalg``): every graded piece over
K = Q(zeta_N) of K-dimension d is a rational space of dimension d * phi, and
all matrices are rational.  ``zeta(k)`` gives multiplication by zeta_N on
grade k when phi > 1, which is how K-traces and K-linearity are recovered.

The ambient module for an irreducible chi is V (x) S(h) where V is a left
ideal of K[W] isomorphic to L_chi^m:

* ``minimal=False``: V = K[W] e_chi, so m = dim chi (the isotypic slice E_chi);
* ``minimal=True`` (default for the trace quotients): V = K[W] e_chi e_(H, lam)
  for a subgroup H and a linear character lam of H chosen to make
  m = <chi|_H, lam> as small as possible, usually 1.

Either way the module is P_chi^m and multiplicities are divided by m.
"""
from __future__ import annotations

import itertools
import json
from fractions import Fraction

import flint
import numpy as np

from .errors import InternalError, TruncationError
from .linalg import (Subspace, cyclo_array, field_tensors, fmpq_to_int_rows, gauss_rref,
                     hstack_q, image_columns, k_einsum, k_trace_from_q_traces, nullspace_right,
                     q_trace, realify, row_space, safe_pair, select_columns, select_rows,
                     shrink, to_fmpq)
from .molien import GradedClass, class_denominators, multiplicities
from .scalars import Cyclo, QSeries, cyclo_conj, totient


# ---------------------------------------------------------------------------
# group algebra K[W] (vectors indexed by group elements)

def _ga_mul(G, a, b):
    """Convolution product in K[W]."""
    zero = Cyclo.rational(0, G.conductor)
    out = [zero] * G.order
    for i, x in enumerate(a):
        if x == 0:
            continue
        row = G.mult_table[i]
        for j, y in enumerate(b):
            if y != 0:
                out[row[j]] = out[row[j]] + x * y
    return out


def _left_translate(G, g, v):
    """g . v for v in K[W]."""
    zero = Cyclo.rational(0, G.conductor)
    out = [zero] * G.order
    row = G.mult_table[g]
    for j, y in enumerate(v):
        if y != 0:
            out[row[j]] = y
    return out


def central_idempotent(G, T, chi):
    d = T.dims[chi]
    return [cyclo_conj(T.value(G, chi, w)) * Fraction(d, G.order) for w in range(G.order)]


def _subgroup(G, gens):
    elems = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mult_table[g][x]
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(elems)


def _root_of_unity_in_field(order, N):
    """A primitive order-th root of unity in Q(zeta_N), or None."""
    M = N if N % 2 == 0 else 2 * N
    if M % order:
        return None
    # for odd N, -zeta_N^((N+1)/2) is a primitive 2N-th root of unity
    w = Cyclo.zeta(N, 1) if M == N else -Cyclo.zeta(N, (N + 1) // 2)
    return w ** (M // order)


def _candidate_pairs(G, T):
    """(H, lam) candidates: subgroups generated by one or two elements, with
    linear characters restricted from W or (for cyclic H) all K-valued ones."""
    linear = [i for i, d in enumerate(T.dims) if d == 1]
    seen = set()
    subgroups = []
    for a in range(G.order):
        for b in range(a, G.order):
            H = tuple(_subgroup(G, [a, b]))
            if H not in seen:
                seen.add(H)
                subgroups.append((H, (a,) if a == b else (a, b)))
    subgroups.sort(key=lambda x: (len(x[0]), x[0]))
    for H, gens in subgroups:
        lams = []
        for i in linear:
            lams.append({h: T.value(G, i, h) for h in H})
        if len(gens) == 1 or _subgroup(G, [gens[0]]) == list(H):
            g = gens[0]
            order = len(H)
            powers = [0]
            while len(powers) < order:
                powers.append(G.mult_table[g][powers[-1]])
            z = _root_of_unity_in_field(order, G.conductor)
            if z is not None:
                for j in range(order):
                    lams.append({powers[t]: z ** (j * t) for t in range(order)})
        for lam in lams:
            yield H, lam


def choose_ideal(G, T, chi, minimal=True):
    """(basis of V as K[W]-vectors, m) with V = K[W] e_chi e_(H,lam) ~ L_chi^m."""
    e_chi = central_idempotent(G, T, chi)
    d = T.dims[chi]
    best = None
    if minimal and d > 1:
        for H, lam in _candidate_pairs(G, T):
            m = Cyclo.rational(0, G.conductor)
            for h in H:
                m = m + T.value(G, chi, h) * cyclo_conj(lam[h])
            m = m / len(H)
            if m == 0:
                continue
            m = int(m.to_fraction())
            if best is None or m < best[0]:
                best = (m, H, lam)
                if m == 1:
                    break
    if best is None:
        x = e_chi
        m = d
    else:
        m, H, lam = best
        e_H = [Cyclo.rational(0, G.conductor)] * G.order
        for h in H:
            e_H[h] = cyclo_conj(lam[h]) * Fraction(1, len(H))
        x = _ga_mul(G, e_chi, e_H)
    span = [_left_translate(G, g, x) for g in range(G.order)]
    basis, pivots = gauss_rref(span)
    if len(basis) != m * d:
        raise InternalError("left ideal has the wrong dimension")
    return basis, pivots, m


def ideal_action(G, basis, pivots):
    """Matrices of left multiplication by every group element on V."""
    mats = []
    for g in range(G.order):
        cols = []
        for b in basis:
            gb = _left_translate(G, g, b)
            cols.append([gb[p] for p in pivots])
        mats.append([[cols[j][i] for j in range(len(basis))] for i in range(len(basis))])
    return mats


# ---------------------------------------------------------------------------
# symmetric powers of h

def monomials(r, k):
    """Exponent vectors of degree k in r variables, in a fixed order."""
    return [a for a in itertools.product(range(k, -1, -1), repeat=r) if sum(a) == k]


class SymmetricPowers:
    """S^k(w) for all group elements and k <= N as integer K-arrays.

    ``mats[k]`` has shape (|W|, s_k, s_k, phi) and represents
    S^k(w) * den**k where ``den`` clears the denominators of the h-matrices.
    Columns are images of monomials; S^k(w) sends x_j to sum_i w_ij x_i.
    """

    def __init__(self, G, N):
        self.G = G
        self.N = N
        r = G.dim_h
        self.r = r
        self.phi = totient(G.conductor)
        H, den = cyclo_array([[x for row in M for x in row] for M in G.elements], G.conductor)
        self.den = den
        H = H.reshape(G.order, r, r, self.phi)
        self.h = H
        self.mon = [monomials(r, k) for k in range(N + 2)]
        self.idx = [{a: i for i, a in enumerate(m)} for m in self.mon]
        one = np.zeros((G.order, 1, 1, self.phi), dtype=np.int64)
        one[..., 0] = 1
        self.mats = [one]
        for k in range(1, N + 1):
            self.mats.append(self._next(k))

    def up_map(self, k, i):
        """Row positions of x_i * (monomials of degree k) among degree k+1."""
        return np.array([self.idx[k + 1][tuple(a[t] + (t == i) for t in range(self.r))]
                         for a in self.mon[k]], dtype=np.int64)

    def _next(self, k):
        _, mul, _ = field_tensors(self.G.conductor)
        prev = self.mats[k - 1]
        mon = self.mon[k]
        J = np.array([next(t for t in range(self.r) if a[t]) for a in mon])
        PC = np.array([self.idx[k - 1][tuple(a[t] - (t == J[c]) for t in range(self.r))]
                       for c, a in enumerate(mon)])
        s = len(mon)
        gathered = prev[:, :, PC, :]                     # (W, s_{k-1}, s_k, phi)
        dtype = object if prev.dtype == object or self.h.dtype == object else np.int64
        out = np.zeros((self.G.order, s, s, self.phi), dtype=dtype)
        for i in range(self.r):
            coef = self.h[:, i, :, :][:, J, :]           # (W, s_k, phi): w_{i, J[c]}
            a, b = safe_pair(coef, gathered, self.phi * self.phi)
            if self.phi == 1:
                prod = a[:, None, :, 0] * b[..., 0]
                prod = prod[..., None]
            else:
                m = mul.astype(object) if a.dtype == object else mul
                prod = np.einsum("wcu,wbcv,uvx->wbcx", a, b, m)
            if prod.dtype == object and out.dtype != object:
                out = out.astype(object)
            out[:, self.up_map(k - 1, i), :, :] += prod
        return shrink(out) if out.dtype == object else out


# ---------------------------------------------------------------------------
# modules

class GradedModule:
    """Interface: dims (K-dimensions), realified actions and multiplications."""

    group = None
    trunc = 0
    copies = 1
    meta = "module"
    generated_in_degree_zero = False

    @property
    def phi(self):
        return totient(self.group.conductor)

    def dim(self, k):
        return self.dims[k]

    def qdim(self, k):
        return self.dims[k] * self.phi

    def action(self, k, g):
        raise NotImplementedError

    def mult(self, k, i):
        raise NotImplementedError

    def zeta(self, k):
        raise NotImplementedError

    def element_action(self, k, w):
        """Realified action of an arbitrary element via its word."""
        n = self.qdim(k)
        M = _identity_q(n)
        for gi in self.group.words[w]:
            M = M * self.action(k, gi)
        return M

    def top(self):
        nz = [k for k in range(self.trunc + 1) if self.dims[k]]
        return max(nz) if nz else -1


def _identity_q(n):
    if n == 0:
        return flint.fmpq_mat(0, 0)
    return flint.fmpq_mat([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def _zeta_block(n, N):
    """Multiplication by zeta on K^n, realified."""
    phi, _, reg = field_tensors(N)
    Z = np.kron(np.eye(n, dtype=np.int64), reg[1] if phi > 1 else np.ones((1, 1), np.int64))
    return Z


class AmbientModule(GradedModule):
    """V (x) S^{<=N}(h) with V a left ideal of K[W] isomorphic to L_chi^m."""

    generated_in_degree_zero = True

    def __init__(self, G, T, chi, N, minimal=True, sym=None):
        if N < 0:
            raise ValueError("truncation must be >= 0")
        self.group, self.table, self.chi, self.trunc = G, T, chi, N
        basis, pivots, m = choose_ideal(G, T, chi, minimal=minimal)
        self.copies = m
        self.meta = "ambient"
        A = ideal_action(G, basis, pivots)
        arr, den = cyclo_array([[x for row in M for x in row] for M in A], G.conductor)
        self.dV = len(basis)
        self.A = arr.reshape(G.order, self.dV, self.dV, self.phi)
        self.denA = den
        self.sym = sym if sym is not None and sym.N >= N else SymmetricPowers(G, N)
        self.dims = [self.dV * len(self.sym.mon[k]) for k in range(N + 1)]

    # integer realified element action: (matrix, denominator)
    def element_action_int(self, k, w, zeta_power=0):
        S = self.sym.mats[k][w]
        A = self.A[w]
        if zeta_power:
            z = cyclo_array([[Cyclo.zeta(self.group.conductor, zeta_power)]],
                            self.group.conductor)[0][0, 0]
            A = _kscale(A, z, self.group.conductor)
        K = k_einsum("ab,st->asbt", A, S, self.group.conductor)
        n = self.dims[k]
        K = K.reshape(n, n, self.phi)
        return realify(K, self.group.conductor), self.denA * self.sym.den ** k

    def action(self, k, g):
        w = self.group.element_of_word([g])
        M, den = self.element_action_int(k, w)
        return to_fmpq(M, den)

    def element_action(self, k, w):
        M, den = self.element_action_int(k, w)
        return to_fmpq(M, den)

    def mult_positions(self, k, i):
        """Realified column map of multiplication by x_i from grade k to k+1."""
        up = self.sym.up_map(k, i)
        s0, s1 = len(self.sym.mon[k]), len(self.sym.mon[k + 1])
        phi = self.phi
        pos = []
        for a in range(self.dV):
            for s in range(s0):
                for c in range(phi):
                    pos.append((a * s1 + int(up[s])) * phi + c)
        return np.array(pos, dtype=np.int64)

    def mult(self, k, i):
        pos = self.mult_positions(k, i)
        M = np.zeros((self.qdim(k + 1), self.qdim(k)), dtype=np.int64)
        M[pos, np.arange(len(pos))] = 1
        return to_fmpq(M)

    def zeta(self, k):
        if self.phi == 1:
            return None
        return to_fmpq(_zeta_block(self.dims[k], self.group.conductor))

    def projector_int(self, k, values):
        """Integer multiple of sum_w f(w) rho_k(w) for Cyclo values f(w).

        Returns (matrix, scale) with the true operator equal to matrix/scale.
        """
        N = self.group.conductor
        F, denF = cyclo_array([[v] for v in values], N)
        F = F[:, 0, :]                                       # (W, phi)
        C = _kscale_stack(self.A, F, N)                      # (W, a, b, phi)
        S = self.sym.mats[k]
        if self.phi == 1:
            a, b = safe_pair(C[..., 0], S[..., 0], self.group.order)
            P = np.einsum("wab,wst->asbt", a, b)[..., None]
        else:
            _, mul, _ = field_tensors(N)
            a, b = safe_pair(C, S, self.group.order * self.phi ** 2)
            m = mul.astype(object) if a.dtype == object else mul
            P = np.einsum("wabu,wstv,uvx->asbtx", a, b, m)
        n = self.dims[k]
        P = P.reshape(n, n, self.phi)
        return realify(P, N), denF * self.denA * self.sym.den ** k


def _kscale(A, z, N):
    """Multiply every entry of the K-array A (n, m, phi) by the K-scalar z (phi,)."""
    phi, mul, _ = field_tensors(N)
    if phi == 1:
        return A * int(z[0])
    a, b = safe_pair(A, z, phi * phi)
    m = mul.astype(object) if a.dtype == object else mul
    return np.einsum("abu,v,uvx->abx", a, b, m)


def _kscale_stack(A, F, N):
    """A (W, a, b, phi) scaled entrywise by F (W, phi)."""
    phi, mul, _ = field_tensors(N)
    if phi == 1:
        a, b = safe_pair(A, F, 1)
        return a * b[:, None, None, :]
    a, b = safe_pair(A, F, phi * phi)
    m = mul.astype(object) if a.dtype == object else mul
    return np.einsum("wabu,wv,uvx->wabx", a, b, m)


def ambient_isotypic(G, T, chi, N, minimal=False):
    """The ambient module for chi: E_chi = K[W] e_chi (x) S^{<=N} h by default
    (P_chi^{dim chi}); ``minimal=True`` gives the reduced version."""
    M = AmbientModule(G, T, chi, N, minimal=minimal)
    check_equivariance(M, grades=range(min(N, 2) + 1))
    return M


class MatrixModule(GradedModule):
    """A module given by explicit realified matrices."""

    def __init__(self, group, dims, actions, mults, zetas=None, copies=1, meta="module",
                 generated_in_degree_zero=False):
        self.group = group
        self.dims = list(dims)
        self.trunc = len(dims) - 1
        self._actions = actions
        self._mults = mults
        self._zetas = zetas
        self.copies = copies
        self.meta = meta
        self.generated_in_degree_zero = generated_in_degree_zero

    def action(self, k, g):
        return self._actions[k][g]

    def mult(self, k, i):
        return self._mults[k][i]

    def zeta(self, k):
        return None if self._zetas is None else self._zetas[k]


def zero_module(G, N):
    phi = totient(G.conductor)
    empty = flint.fmpq_mat(0, 0)
    return MatrixModule(G, [0] * (N + 1),
                        [[empty] * len(G.generators) for _ in range(N + 1)],
                        [[empty] * G.dim_h for _ in range(N)],
                        [empty] * (N + 1) if phi > 1 else None, meta="zero")


# ---------------------------------------------------------------------------
# subspaces, generated submodules, quotients

class GradedSubspace:
    """spaces[k] is a linalg.Subspace of the realified grade-k piece."""

    def __init__(self, spaces, meta="sub"):
        self.spaces = spaces
        self.meta = meta

    def dims(self, phi):
        return [s.dim // phi for s in self.spaces]


def isotypic_component(G, T, M, k, psi):
    """Basis (Subspace) of the psi-isotypic part of gr_k M."""
    return _isotypic_set(G, T, M, k, [psi])


def _class_projector_values(G, T, chars):
    vals = []
    for w in range(G.order):
        acc = Cyclo.rational(0, G.conductor)
        for psi in chars:
            acc = acc + cyclo_conj(T.value(G, psi, w)) * T.dims[psi]
        vals.append(acc)
    return vals


def _isotypic_set(G, T, M, k, chars):
    n = M.qdim(k)
    if not chars or n == 0:
        return Subspace.zero(n)
    vals = _class_projector_values(G, T, chars)
    if isinstance(M, AmbientModule):
        P, scale = M.projector_int(k, vals)
        tr = sum(int(P[i, i]) for i in range(P.shape[0]))
        rank = Fraction(tr, scale * G.order)
        if rank.denominator != 1:
            raise InternalError("projector trace is not an integer")
        rows = image_columns(P, int(rank))
        return row_space(rows, n) if rows.shape[0] else Subspace.zero(n)
    # generic module: assemble the projector from element actions
    N = G.conductor
    P = flint.fmpq_mat(n, n)
    Z = M.zeta(k)
    for w in range(G.order):
        rho = M.element_action(k, w)
        f = vals[w]
        term = None
        for c, coeff in enumerate(f.lift(N).coeffs):
            if coeff == 0:
                continue
            Zc = _identity_q(n)
            for _ in range(c):
                Zc = Zc * Z
            piece = (Zc * rho) * flint.fmpq(coeff.numerator, coeff.denominator)
            term = piece if term is None else term + piece
        if term is not None:
            P = P + term
    return row_space(P.transpose())


def _mult_rows(M, k, i, S):
    """Rows of S (a subspace of grade k) pushed to grade k+1 by x_i, as ints."""
    if S.dim == 0:
        return np.zeros((0, M.qdim(k + 1)), dtype=np.int64)
    B = S.basis()
    if isinstance(M, AmbientModule):
        Zi, _ = S.int_basis()
        pos = M.mult_positions(k, i)
        out = np.zeros((Zi.shape[0], M.qdim(k + 1)), dtype=Zi.dtype)
        out[:, pos] = Zi
        return out
    img = B * M.mult(k, i).transpose()
    Zi, _ = fmpq_to_int_rows(img)
    return Zi


def generated_submodule(M, seeds):
    """Smallest graded subspace containing the seeds and stable under h.

    ``seeds`` is a list (one entry per grade, None for nothing) of Subspaces
    or integer row arrays, each already stable under the group.
    """
    spaces = []
    full_from = None
    for k in range(M.trunc + 1):
        n = M.qdim(k)
        if full_from is not None:
            spaces.append(Subspace.full(n))
            continue
        parts = []
        seed = seeds[k] if k < len(seeds) else None
        if seed is not None:
            if isinstance(seed, Subspace):
                if seed.is_full:
                    parts = None
                elif seed.dim:
                    parts.append(seed.int_basis()[0])
            else:
                parts.append(np.asarray(seed))
        if parts is None:
            S = Subspace.full(n)
        else:
            if k > 0 and spaces[k - 1].dim:
                for i in range(M.group.dim_h):
                    parts.append(_mult_rows(M, k - 1, i, spaces[k - 1]))
            S = _sum_rows(parts, n)
        spaces.append(S)
        if S.is_full and M.generated_in_degree_zero:
            full_from = k
    return GradedSubspace(spaces)


def _sum_rows(parts, n):
    parts = [p for p in parts if p.shape[0]]
    if not parts:
        return Subspace.zero(n)
    dtype = object if any(p.dtype == object for p in parts) else np.int64
    return row_space(np.vstack([p.astype(dtype) for p in parts]), n)


class QuotientModule(GradedModule):
    """M / S, with basis the non-pivot coordinates of each S_k."""

    def __init__(self, parent, sub, meta="quotient"):
        self.parent = parent
        self.sub = sub
        self.group = parent.group
        self.trunc = parent.trunc
        self.copies = parent.copies
        self.meta = meta
        self.generated_in_degree_zero = parent.generated_in_degree_zero
        phi = parent.phi
        self.keep = [s.nonpivots() for s in sub.spaces]
        self.dims = [len(kp) // phi for kp in self.keep]
        self._memo = {}

    def _induced(self, src_k, dst_k, parent_matrix):
        S = self.sub.spaces[dst_k]
        keep_src, keep_dst = self.keep[src_k], self.keep[dst_k]
        if not keep_src or not keep_dst:
            return flint.fmpq_mat(len(keep_dst), len(keep_src))
        if isinstance(parent_matrix, tuple):
            arr, den = parent_matrix
            top = to_fmpq(arr[np.ix_(keep_dst, keep_src)], den)
            if S.dim:
                low = to_fmpq(arr[np.ix_(S.pivots, keep_src)], den)
        else:
            top = select_columns(select_rows(parent_matrix, keep_dst), keep_src)
            if S.dim:
                low = select_columns(select_rows(parent_matrix, S.pivots), keep_src)
        if S.dim == 0:
            return top
        RN = select_columns(S.basis(), keep_dst)           # (dim S) x |keep_dst|
        return top - RN.transpose() * low

    def action(self, k, g):
        key = ("a", k, g)
        if key not in self._memo:
            if isinstance(self.parent, AmbientModule):
                w = self.group.element_of_word([g])
                pm = self.parent.element_action_int(k, w)
            else:
                pm = self.parent.action(k, g)
            self._memo[key] = self._induced(k, k, pm)
        return self._memo[key]

    def element_action(self, k, w):
        if isinstance(self.parent, AmbientModule):
            return self._induced(k, k, self.parent.element_action_int(k, w))
        return GradedModule.element_action(self, k, w)

    def mult(self, k, i):
        key = ("m", k, i)
        if key not in self._memo:
            if isinstance(self.parent, AmbientModule):
                pos = self.parent.mult_positions(k, i)
                arr = np.zeros((self.parent.qdim(k + 1), self.parent.qdim(k)), dtype=np.int64)
                arr[pos, np.arange(len(pos))] = 1
                pm = (arr, 1)
            else:
                pm = self.parent.mult(k, i)
            self._memo[key] = self._induced(k, k + 1, pm)
        return self._memo[key]

    def zeta(self, k):
        if self.phi == 1:
            return None
        key = ("z", k)
        if key not in self._memo:
            if isinstance(self.parent, AmbientModule):
                pm = (_zeta_block(self.parent.dims[k], self.group.conductor), 1)
            else:
                pm = self.parent.zeta(k)
            self._memo[key] = self._induced(k, k, pm)
        return self._memo[key]

    def truncated(self, N):
        """The same quotient viewed only up to grade N."""
        if N > self.trunc:
            raise TruncationError("cannot extend a truncated module")
        return _Truncation(self, N)


class _Truncation(GradedModule):
    def __init__(self, M, N):
        self.inner = M
        self.group = M.group
        self.trunc = N
        self.dims = M.dims[:N + 1]
        self.copies = M.copies
        self.meta = M.meta
        self.generated_in_degree_zero = M.generated_in_degree_zero

    def action(self, k, g):
        return self.inner.action(k, g)

    def element_action(self, k, w):
        return self.inner.element_action(k, w)

    def mult(self, k, i):
        return self.inner.mult(k, i)

    def zeta(self, k):
        return self.inner.zeta(k)


def quotient(M, S, meta="quotient"):
    Q = QuotientModule(M, S, meta=meta)
    return Q


# ---------------------------------------------------------------------------
# characters

def _ktrace(G, qtraces):
    return k_trace_from_q_traces(qtraces, G.conductor)


def ambient_character(M):
    """Graded character of V (x) S(h): m chi(w) h_k(w)."""
    G, T = M.group, M.table
    dets = class_denominators(G)
    values = []
    for c in range(len(G.classes)):
        s = QSeries([T.rows[M.chi][c] * M.copies], M.trunc) / QSeries(list(dets[c]), M.trunc)
        values.append(s)
    return GradedClass(values, M.trunc)


def subspace_character(M, S):
    """Graded character of a group-stable graded subspace of an ambient module."""
    G = M.group
    N = G.conductor
    phi = M.phi
    values = [[] for _ in G.classes]
    for k in range(M.trunc + 1):
        Sk = S.spaces[k]
        if Sk.dim and not Sk.is_full:
            Rint, rden = Sk.int_basis()
        for c, w in enumerate(G.class_reps):
            if Sk.dim == 0:
                values[c].append(Cyclo.rational(0, N))
                continue
            qtr = []
            for j in range(phi):
                arr, den = M.element_action_int(k, w, zeta_power=j)
                if Sk.is_full:
                    t = Fraction(sum(int(arr[i, i]) for i in range(arr.shape[0])), den)
                else:
                    sub = arr[Sk.pivots, :]
                    a, b = safe_pair(Rint, sub, arr.shape[1])
                    t = Fraction(int((a * b).sum()), den * rden)
                qtr.append(flint.fmpq(t.numerator, t.denominator))
            values[c].append(_ktrace(G, qtr))
    return GradedClass([QSeries(v, M.trunc) for v in values], M.trunc)


def graded_character(G, T, M):
    """Graded character of a module (not divided by ``copies``)."""
    if isinstance(M, AmbientModule):
        return ambient_character(M)
    if isinstance(M, QuotientModule) and isinstance(M.parent, AmbientModule):
        return ambient_character(M.parent) - subspace_character(M.parent, M.sub)
    phi = M.phi
    values = [[] for _ in G.classes]
    for k in range(M.trunc + 1):
        n = M.qdim(k)
        Z = M.zeta(k) if phi > 1 else None
        for c, w in enumerate(G.class_reps):
            if n == 0:
                values[c].append(Cyclo.rational(0, G.conductor))
                continue
            rho = M.element_action(k, w)
            qtr = []
            X = rho
            for j in range(phi):
                qtr.append(q_trace(X))
                if j + 1 < phi:
                    X = X * Z
            values[c].append(_ktrace(G, qtr))
    return GradedClass([QSeries(v, M.trunc) for v in values], M.trunc)


def certify_finite(C, buffer):
    """True iff the top ``buffer`` grades of C vanish."""
    if buffer < 1:
        raise ValueError("buffer must be >= 1")
    top = C.trunc
    return all(C.is_zero_grade(k) for k in range(max(0, top - buffer + 1), top + 1))


def _divide_class(G, T, C, m):
    if m == 1:
        return C
    for s in multiplicities(G, T, C):
        for x in s.coeffs:
            if x % m:
                raise InternalError(f"graded character is not divisible by {m}")
    return C.scale(Fraction(1, m))


# ---------------------------------------------------------------------------
# the trace quotients

_AMBIENT_CACHE = {}


def _ambient(G, T, chi, N):
    key = (id(G), id(T), chi)
    hit = _AMBIENT_CACHE.get(key)
    if hit is not None and hit.trunc == N:
        return hit
    sym = None
    for (gid, _, _), amb in _AMBIENT_CACHE.items():
        if gid == id(G) and amb.sym.N >= N:
            sym = amb.sym
            break
    M = AmbientModule(G, T, chi, N, minimal=True, sym=sym)
    if len(_AMBIENT_CACHE) > 8:
        _AMBIENT_CACHE.clear()
    _AMBIENT_CACHE[key] = M
    return M


def seed_characters(P, chi, mode):
    if mode == "strict":
        return [psi for psi in P.ordering() if P.lt(psi, chi)]
    if mode == "weak":
        return [psi for psi in P.ordering() if P.le(psi, chi)]
    raise ValueError("mode must be 'strict' or 'weak'")


def trace_quotient(G, T, P, chi, mode, N):
    """The quotient of P_chi defining nabla_chi (strict) or its trace (weak).

    Returns (module, graded character divided by the number of copies).
    """
    if N < 1:
        raise TruncationError("invalid-truncation: N must be >= 1")
    M = _ambient(G, T, chi, N)
    chars = seed_characters(P, chi, mode)
    seeds = [None] + [_isotypic_set(G, T, M, k, chars) for k in range(1, N + 1)]
    # once a grade is entirely seeded, every later grade is too
    S = generated_submodule(M, seeds)
    Q = QuotientModule(M, S, meta="nabla" if mode == "strict" else "bar-nabla")
    C = _divide_class(G, T, graded_character(G, T, Q), M.copies)
    return Q, C


def check_equivariance(M, grades=None):
    """Assert action(g) mult(v) = mult(g v) action(g) on the given grades."""
    G = M.group
    N = G.conductor
    phi = M.phi
    if grades is None:
        grades = range(M.trunc)
    for k in grades:
        if k >= M.trunc:
            continue
        if M.qdim(k) == 0 or M.qdim(k + 1) == 0:
            continue
        Zk1 = M.zeta(k + 1) if phi > 1 else None
        for gi, g in enumerate(G.generators):
            Ak, Ak1 = M.action(k, gi), M.action(k + 1, gi)
            for v in range(G.dim_h):
                lhs = Ak1 * M.mult(k, v)
                rhs = flint.fmpq_mat(M.qdim(k + 1), M.qdim(k))
                for i in range(G.dim_h):
                    coeff = g[i][v].lift(N)
                    if coeff == 0:
                        continue
                    Zc = _identity_q(M.qdim(k + 1))
                    mixed = flint.fmpq_mat(M.qdim(k + 1), M.qdim(k + 1))
                    for c, x in enumerate(coeff.coeffs):
                        if x != 0:
                            mixed = mixed + Zc * flint.fmpq(x.numerator, x.denominator)
                        if c + 1 < len(coeff.coeffs):
                            Zc = Zc * Zk1
                    rhs = rhs + mixed * M.mult(k, i)
                rhs = rhs * Ak
                if lhs != rhs:
                    raise InternalError(f"equivariance fails at grade {k}")
    return True


# ---------------------------------------------------------------------------
# graded Hom

def _equivariant_maps(M, Nm, k):
    """Basis of K-linear, group-equivariant maps gr_0 M -> gr_k Nm (realified)."""
    G = M.group
    a, b = M.qdim(0), Nm.qdim(k)
    if a == 0 or b == 0:
        return []
    # unknown X (b x a), vec by rows: X[r, c] -> r * a + c
    eqs = []
    pairs = [(M.action(0, g), Nm.action(k, g)) for g in range(len(G.generators))]
    if M.phi > 1:
        pairs.append((M.zeta(0), Nm.zeta(k)))
    for A, B in pairs:
        # X A - B X = 0
        Ae, Be = A.entries(), B.entries()
        for r in range(b):
            for c in range(a):
                row = [0] * (a * b)
                for t in range(a):
                    x = Ae[t * a + c]
                    if x != 0:
                        row[r * a + t] += x
                for t in range(b):
                    y = Be[r * b + t]
                    if y != 0:
                        row[t * a + c] -= y
                if any(v != 0 for v in row):
                    eqs.append(row)
    if eqs:
        sol = nullspace_right(flint.fmpq_mat(eqs))
    else:
        sol = _identity_q(a * b)
    out = []
    ent = sol.entries()
    for s in range(sol.nrows()):
        vec = ent[s * a * b:(s + 1) * a * b]
        out.append(flint.fmpq_mat([vec[r * a:(r + 1) * a] for r in range(b)]))
    return out


def hom_graded(G, T, M, Nm):
    """Coefficients of sum_k dim Hom(M, Nm<-k>) q^k (divided by copies).

    M must be generated in grade 0 and truncated at least one grade past the
    top nonzero grade of Nm.
    """
    top = Nm.top()
    if top < 0:
        return ()
    if M.trunc < top + 1:
        raise TruncationError("truncation-insufficient: source module is truncated "
                              "below the top grade of the target plus one")
    r = G.dim_h
    # right inverses of the multiplication maps h (x) gr_{j-1} M -> gr_j M
    Bs = {}
    for j in range(1, top + 1):
        if M.qdim(j) == 0:
            Bs[j] = None
            continue
        B = hstack_q([M.mult(j - 1, i) for i in range(r)], M.qdim(j))
        S = row_space(B.transpose())
        if S.dim != M.qdim(j):
            raise TruncationError("hom_graded: source is not generated in grade 0")
        # independent columns of B: pivots of rref(B)
        R, rank = B.rref()
        piv = []
        jj = 0
        for i in range(rank):
            while R[i, jj] == 0:
                jj += 1
            piv.append(jj)
            jj += 1
        Bsq = select_columns(B, piv)
        Bs[j] = (B, piv, Bsq.inv())
    result = []
    for k in range(top + 1):
        params = _equivariant_maps(M, Nm, k)
        if not params:
            result.append(0)
            continue
        defects = [[] for _ in params]
        for t, X0 in enumerate(params):
            X = X0
            for j in range(1, top - k + 1):
                if Bs.get(j) is None:
                    X = flint.fmpq_mat(Nm.qdim(j + k), 0)
                    continue
                B, piv, Binv = Bs[j]
                rhs = hstack_q([Nm.mult(j + k - 1, i) * X for i in range(r)], Nm.qdim(j + k))
                Xj = select_columns(rhs, piv) * Binv
                D = Xj * B - rhs
                defects[t].extend(D.entries())
                X = Xj
        nparam = len(params)
        if defects[0]:
            Dm = flint.fmpq_mat([list(col) for col in zip(*defects)])
            dim = nparam - Dm.rank()
        else:
            dim = nparam
        phi = M.phi
        if dim % phi:
            raise InternalError("Hom space is not a K-space")
        dim //= phi
        cm = M.copies * Nm.copies
        if dim % cm:
            raise InternalError("Hom dimension not divisible by the copy count")
        result.append(dim // cm)
    while result and result[-1] == 0:
        result.pop()
    return tuple(result)


# ---------------------------------------------------------------------------
# serialization (for inspection only)

def module_to_json(M, upto=None):
    upto = M.trunc if upto is None else upto

    def mat(X):
        return [[str(x) for x in X.entries()[i * X.ncols():(i + 1) * X.ncols()]]
                for i in range(X.nrows())]

    doc = {"format": 1, "meta": M.meta, "group": M.group.name, "realified_degree": M.phi,
           "copies": M.copies, "dims": M.dims[:upto + 1], "actions": [], "mults": []}
    for k in range(upto + 1):
        doc["actions"].append([mat(M.action(k, g)) for g in range(len(M.group.generators))])
        if k < upto:
            doc["mults"].append([mat(M.mult(k, i)) for i in range(M.group.dim_h)])
    return json.dumps(doc, sort_keys=True)

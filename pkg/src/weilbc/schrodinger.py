"""Weil representation operators on C[X*(F_{q^d})], exactly over Q(ζ_p).

Operators are dense matrices of cyclotomic integers divided by a common
denominator: a numpy int64 array of shape (dim, dim, p-1) plus a positive
int denominator.  All arithmetic is exact; equality is array equality of
the normalized form.

Generator formulas (X-coordinates first, matrices on column vectors):

* Heisenberg (x,0)(x*,0)(0,k):  f(y*) ↦ ψ'(k + ⟨y*, x⟩) f(x* + y*)
* unipotent [[1,b],[0,1]]:      f(y*) ↦ ψ'(⟨b y*, y*⟩/2) f(y*)
* Levi diag(a, (aᵀ)^{-1}):      f(y*) ↦ ε'(det a) f(aᵀ y*)
* Weyl [[0,B],[-(Bᵀ)^{-1},0]]:  f(y*) ↦ G^{-n} ε'(-2)^n ε'(det B) Σ ψ'(x*ᵀBᵀy*) f(x*)

The Weyl constant pairs the plain (counting-measure) Gauss sum G with the
ε'(-2)^n factor; the homomorphism test suite pins this normalization.
"""

from __future__ import annotations

from itertools import product as iproduct

import numpy as np

from .cyclotomic import CycNum, gauss_sum
from .errors import FactorizationFailed, NotSymplectic, Singular
from .fieldtower import Tower
from .grouplib import (
    SympGroup,
    SympSpace,
    mat_det,
    mat_identity,
    mat_inv,
    mat_mul,
    mat_neg,
    mat_transpose,
    mat_vec,
)

_RHO_CACHE_CAP = 6000


def _unit_vectors(p: int) -> np.ndarray:
    """Canonical coefficient vectors of ζ^e for e = 0..p-1."""
    out = np.zeros((p, p - 1), dtype=np.int64)
    for e in range(p - 1):
        out[e, e] = 1
    out[p - 1, :] = -1
    return out


def _conj_matrix(p: int) -> np.ndarray:
    mat = np.zeros((p - 1, p - 1), dtype=np.int64)
    mat[0, 0] = 1
    if p > 2:
        mat[:, 1] = -1
    for k in range(2, p - 1):
        mat[p - k, k] = 1
    return mat


class WeilOperator:
    __slots__ = ("ctx", "arr", "den")

    def __init__(self, ctx: "RepContext", arr: np.ndarray, den: int = 1):
        if den < 0:
            den, arr = -den, -arr
        g = int(np.gcd.reduce(np.abs(arr), axis=None)) if arr.size else 0
        g = np.gcd(g, den)
        if g > 1:
            arr = arr // g
            den //= g
        self.ctx = ctx
        self.arr = arr
        self.den = den

    @property
    def dim(self) -> int:
        return self.arr.shape[0]

    def __matmul__(self, other: "WeilOperator") -> "WeilOperator":
        ctx = self.ctx
        full = np.einsum("ikr,kjs->ijrs", self.arr, other.arr)
        return WeilOperator(ctx, ctx.fold(full), self.den * other.den)

    def scale(self, c: CycNum) -> "WeilOperator":
        ctx = self.ctx
        vec = np.array(c.num, dtype=np.int64)
        full = np.einsum("ijr,s->ijrs", self.arr, vec)
        return WeilOperator(ctx, ctx.fold(full), self.den * c.den)

    def conj_transpose(self) -> "WeilOperator":
        out = np.einsum("ijr,sr->jis", self.arr, self.ctx.conjmat)
        return WeilOperator(self.ctx, out, self.den)

    def trace(self) -> CycNum:
        vec = self.arr.trace(axis1=0, axis2=1)
        return CycNum(self.ctx.p, tuple(int(v) for v in vec), self.den)

    def entry(self, i: int, j: int) -> CycNum:
        return CycNum(self.ctx.p, tuple(int(v) for v in self.arr[i, j]), self.den)

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeilOperator):
            return NotImplemented
        return self.den == other.den and np.array_equal(self.arr, other.arr)

    def __hash__(self):  # pragma: no cover
        return hash((self.den, self.arr.tobytes()))

    def is_identity(self) -> bool:
        return self == self.ctx.identity_op()

    def is_unitary(self) -> bool:
        return (self @ self.conj_transpose()).is_identity()


class RepContext:
    """Schrödinger model of the level-d Weil representation for one ψ-scaling."""

    def __init__(self, tower: Tower, n: int, level: int, scale=None):
        self.tower = tower
        self.n = n
        self.level = level
        self.scale = tower.one if scale is None else scale
        self.p = tower.p
        self.space = SympSpace(n)
        elems = tower.level_elements(level)
        self.Q = len(elems)
        self.points = [pt for pt in iproduct(elems, repeat=n)]
        self.pos = {pt: k for k, pt in enumerate(self.points)}
        self.dim = len(self.points)
        self._units = _unit_vectors(self.p)
        self.conjmat = _conj_matrix(self.p)
        self._fold_pairs = [
            [(r, s) for r in range(self.p - 1) for s in range(self.p - 1) if (r + s) % self.p == t]
            for t in range(self.p)
        ]
        self.gauss = gauss_sum(tower, level, self.scale)
        self.gauss_inv = self.gauss.inverse()
        self._half = tower.from_int((tower.p + 1) // 2)
        self._cache_cap = _RHO_CACHE_CAP if self.dim <= 32 else 700
        self._rho_cache: dict = {}
        self._gal_perm: dict[int, np.ndarray] = {}
        self._psi_exp_cache: dict = {}

    # -- cyclotomic plumbing ----------------------------------------------------

    def fold(self, full: np.ndarray) -> np.ndarray:
        """Reduce (..., p-1, p-1) products to canonical (..., p-1) coefficients."""
        shape = full.shape[:-2] + (self.p,)
        out = np.zeros(shape, dtype=np.int64)
        for t in range(self.p):
            for r, s in self._fold_pairs[t]:
                out[..., t] += full[..., r, s]
        return out[..., : self.p - 1] - out[..., self.p - 1 :]

    def psi_exp(self, x) -> int:
        got = self._psi_exp_cache.get(x)
        if got is None:
            got = self.tower.psi_exponent(x, self.level, self.scale)
            self._psi_exp_cache[x] = got
        return got

    def eps(self, x) -> int:
        return self.tower.quad_char(x, self.level)

    def identity_op(self) -> WeilOperator:
        arr = np.zeros((self.dim, self.dim, self.p - 1), dtype=np.int64)
        arr[np.arange(self.dim), np.arange(self.dim), 0] = 1
        return WeilOperator(self, arr)

    def _monomial(self, cols: np.ndarray, exps: np.ndarray, signs=None) -> WeilOperator:
        arr = np.zeros((self.dim, self.dim, self.p - 1), dtype=np.int64)
        vecs = self._units[exps]
        if signs is not None:
            vecs = vecs * signs[:, None]
        arr[np.arange(self.dim), cols] = vecs
        return WeilOperator(self, arr)

    # -- generator operators -------------------------------------------------------

    def op_heis(self, h) -> WeilOperator:
        """Operator of a Heisenberg element (v, t)."""
        tower, n = self.tower, self.n
        v, t = h
        x, xs = v[:n], v[n:]
        dot = tower.zero
        for i in range(n):
            dot = tower.add(dot, tower.mul(x[i], xs[i]))
        k = tower.sub(t, tower.mul(self._half, dot))
        cols = np.empty(self.dim, dtype=np.intp)
        exps = np.empty(self.dim, dtype=np.intp)
        for idx, y in enumerate(self.points):
            shifted = tuple(tower.add(y[i], xs[i]) for i in range(n))
            cols[idx] = self.pos[shifted]
            pair = tower.zero  # ⟨y*, x⟩ = -Σ y_i x_i
            for i in range(n):
                pair = tower.sub(pair, tower.mul(y[i], x[i]))
            exps[idx] = self.psi_exp(tower.add(k, pair))
        return self._monomial(cols, exps)

    def op_unip(self, b: tuple) -> WeilOperator:
        """Diagonal operator of [[1,b],[0,1]]; b must be symmetric n×n."""
        tower, n = self.tower, self.n
        for i in range(n):
            for j in range(n):
                if b[i * n + j] != b[j * n + i]:
                    raise NotSymplectic("unipotent block is not self-adjoint")
        cols = np.arange(self.dim, dtype=np.intp)
        exps = np.empty(self.dim, dtype=np.intp)
        for idx, y in enumerate(self.points):
            acc = tower.zero  # ⟨b y*, y*⟩ = Σ b_ij y_j y_i
            for i in range(n):
                for j in range(n):
                    acc = tower.add(acc, tower.mul(b[i * n + j], tower.mul(y[j], y[i])))
            exps[idx] = self.psi_exp(tower.mul(self._half, acc))
        return self._monomial(cols, exps)

    def op_levi(self, a: tuple) -> WeilOperator:
        """Signed permutation of diag(a, (aᵀ)^{-1}): f ↦ ε'(det a) f(aᵀ y*)."""
        tower, n = self.tower, self.n
        det = mat_det(tower, a, n)
        if det == tower.zero:
            raise Singular("Levi block is singular")
        sign = self.eps(det)
        at = mat_transpose(a, n)
        cols = np.empty(self.dim, dtype=np.intp)
        for idx, y in enumerate(self.points):
            cols[idx] = self.pos[mat_vec(tower, at, y, n)]
        exps = np.zeros(self.dim, dtype=np.intp)
        signs = np.full(self.dim, sign, dtype=np.int64)
        return self._monomial(cols, exps, signs)

    def op_weyl(self, b: tuple | None = None) -> WeilOperator:
        """Fourier operator of [[0,B],[-(Bᵀ)^{-1},0]]; B: X* → X, default identity."""
        tower, n = self.tower, self.n
        B = mat_identity(tower, n) if b is None else b
        det = mat_det(tower, B, n)
        if det == tower.zero:
            raise NotSymplectic("Weyl block is singular")
        bt = mat_transpose(B, n)
        exps = np.empty((self.dim, self.dim), dtype=np.intp)
        bty = [mat_vec(tower, bt, y, n) for y in self.points]
        for col, x in enumerate(self.points):
            for row in range(self.dim):
                acc = tower.zero
                w = bty[row]
                for i in range(n):
                    acc = tower.add(acc, tower.mul(x[i], w[i]))
                exps[row, col] = self.psi_exp(acc)
        arr = self._units[exps]
        minus2 = tower.from_int(tower.p - 2)
        sign = self.eps(minus2) ** n * self.eps(det)
        const = self.gauss_inv
        for _ in range(n - 1):
            const = const * self.gauss_inv
        const = const * CycNum.rational(self.p, sign)
        return WeilOperator(self, arr).scale(const)

    def op_galois(self, j: int) -> WeilOperator:
        """I_σ^j: f ↦ f(σ^{-j}·), a permutation of the basis points."""
        perm = self.galois_perm(j)
        cols = perm
        exps = np.zeros(self.dim, dtype=np.intp)
        return self._monomial(cols, exps)

    def galois_perm(self, j: int) -> np.ndarray:
        """Column positions: point index y ↦ index of σ^{-j}(y)."""
        j = j % self.level
        got = self._gal_perm.get(j)
        if got is None:
            tower = self.tower
            got = np.array(
                [self.pos[tuple(tower.frobenius(c, -j) for c in y)] for y in self.points],
                dtype=np.intp,
            )
            self._gal_perm[j] = got
        return got

    # -- factorization and the representation ------------------------------------------

    def build_rho(self, g) -> WeilOperator:
        """ρ of a symplectic matrix, Heisenberg element, or (s, h) product."""
        kind = _element_kind(g, self.n)
        if kind == "heis":
            return self.op_heis(g)
        if kind == "sph":
            return self.build_rho(g[0]) @ self.op_heis(g[1])
        key = g
        cached = self._rho_cache.get(key)
        if cached is not None:
            return cached
        word = siegel_factor(self.tower, self.n, self.level, g)
        out = self.identity_op()
        for tag, param in word:
            if tag == "unip":
                out = out @ self.op_unip(param)
            elif tag == "levi":
                out = out @ self.op_levi(param)
            else:
                out = out @ self.op_weyl(param)
        if len(self._rho_cache) >= self._cache_cap:
            self._rho_cache.pop(next(iter(self._rho_cache)))
        self._rho_cache[key] = out
        return out

    def extended_trace(self, i: int, g) -> CycNum:
        """tr ρ̃'(σ^i, g) = tr(ρ(g)·I_σ^i), for g in Sp·H at this level."""
        kind = _element_kind(g, self.n)
        fwd = self.galois_perm(-i)  # row y ↦ index of σ^{+i}(y)
        if kind == "sp":
            mat = self.build_rho(g)
            vec = mat.arr[np.arange(self.dim), fwd].sum(axis=0)
            return CycNum(self.p, tuple(int(v) for v in vec), mat.den)
        if kind == "heis":
            s, h = None, g
        else:
            s, h = g
        return self._trace_sph(fwd, s, h)

    def _trace_sph(self, fwd: np.ndarray, s, h) -> CycNum:
        """Monomial fast path: tr(ρ(s)ρ(h)I^i) without forming the product.

        The only nonzero column of ρ(h) in row z is z + x*, so the trace
        collapses to one ρ(s)-entry per basis point.
        """
        tower, n = self.tower, self.n
        v, t = h
        x, xs = v[:n], v[n:]
        dot = tower.zero
        for k in range(n):
            dot = tower.add(dot, tower.mul(x[k], xs[k]))
        kk = tower.sub(t, tower.mul(self._half, dot))
        neg_xs = tuple(tower.neg(c) for c in xs)
        mat = self.build_rho(s) if s is not None else None
        if mat is None:
            total = np.zeros(self.p - 1, dtype=np.int64)
            for y_idx in range(self.dim):
                w = self.points[fwd[y_idx]]  # σ^i(y)
                z = tuple(tower.add(w[k], neg_xs[k]) for k in range(n))
                if self.pos[z] != y_idx:
                    continue
                pair = tower.zero
                for k in range(n):
                    pair = tower.sub(pair, tower.mul(z[k], x[k]))
                total += self._units[self.psi_exp(tower.add(kk, pair))]
            return CycNum(self.p, tuple(int(c) for c in total), 1)
        cols = np.empty(self.dim, dtype=np.intp)
        exps = np.empty(self.dim, dtype=np.intp)
        for y_idx in range(self.dim):
            w = self.points[fwd[y_idx]]  # σ^i(y)
            z = tuple(tower.add(w[k], neg_xs[k]) for k in range(n))
            cols[y_idx] = self.pos[z]
            pair = tower.zero
            for k in range(n):
                pair = tower.sub(pair, tower.mul(z[k], x[k]))
            exps[y_idx] = self.psi_exp(tower.add(kk, pair))
        entries = mat.arr[np.arange(self.dim), cols]  # (dim, p-1)
        phases = self._units[exps]
        total = self.fold(np.einsum("yr,ys->yrs", entries, phases)).sum(axis=0)
        return CycNum(self.p, tuple(int(c) for c in total), mat.den)


def _element_kind(g, n: int) -> str:
    """Distinguish matrix / Heisenberg (v,t) / product (s,(v,t)) tuples."""
    if not isinstance(g, tuple):
        raise TypeError(f"unrecognized element {g!r}")
    if len(g) == (2 * n) ** 2:
        return "sp"
    if len(g) == 2 and isinstance(g[0], tuple):
        if len(g[0]) == (2 * n) ** 2:
            return "sph"
        if len(g[0]) == 2 * n:
            return "heis"
    raise TypeError(f"unrecognized element {g!r}")


def siegel_factor(tower: Tower, n: int, level: int, g: tuple) -> list:
    """Factor a symplectic matrix into unipotent/Levi/Weyl generators.

    Returns tags ('unip', b), ('levi', a), ('weyl', B); the product of the
    tagged matrices equals g exactly (checked).
    """
    from .grouplib import membership

    kind, _ = membership(tower, g, n, level)
    if kind != "sp":
        raise NotSymplectic("input matrix is not symplectic at this level")
    word = _siegel_factor_inner(tower, n, level, g)
    spec = SympGroup(tower, n, level)
    prod = mat_identity(tower, 2 * n)
    for tag, param in word:
        if tag == "unip":
            fac = spec.unipotent(param)
        elif tag == "levi":
            fac = spec.levi(param)
        else:
            fac = spec.weyl(param)
        prod = mat_mul(tower, prod, fac, 2 * n)
    if prod != g:
        raise FactorizationFailed("factor word does not reproduce the element")
    return word


def _blocks(g: tuple, n: int):
    size = 2 * n
    a = tuple(g[i * size + j] for i in range(n) for j in range(n))
    b = tuple(g[i * size + n + j] for i in range(n) for j in range(n))
    c = tuple(g[(n + i) * size + j] for i in range(n) for j in range(n))
    d = tuple(g[(n + i) * size + n + j] for i in range(n) for j in range(n))
    return a, b, c, d


def _siegel_factor_inner(tower: Tower, n: int, level: int, g: tuple) -> list:
    a, b, c, d = _blocks(g, n)
    zero_blk = tuple(tower.zero for _ in range(n * n))
    ident_blk = mat_identity(tower, n)
    if c == zero_blk:
        # upper triangular: g = u(b aᵀ)·levi(a)
        bt = mat_mul(tower, b, mat_transpose(a, n), n)
        word = [("unip", bt), ("levi", a)]
        return [(tag, par) for tag, par in word
                if not (tag == "unip" and par == zero_blk) and not (tag == "levi" and par == ident_blk)] or [("levi", a)]
    detc = mat_det(tower, c, n)
    if detc != tower.zero:
        cinv = mat_inv(tower, c, n)
        b1 = mat_mul(tower, a, cinv, n)
        b2 = mat_mul(tower, cinv, d, n)
        Bw = mat_neg(tower, mat_inv(tower, mat_transpose(c, n), n))
        word = [("unip", b1), ("weyl", Bw), ("unip", b2)]
        return [(tag, par) for tag, par in word if not (tag == "unip" and par == zero_blk)]
    # c nonzero but singular: find symmetric b0 with c·b0 + d invertible
    spec = SympGroup(tower, n, level)
    field = tower.level_elements(level)
    sym_slots = [(i, j) for i in range(n) for j in range(i, n)]
    for combo in iproduct(field, repeat=len(sym_slots)):
        b0 = [tower.zero] * (n * n)
        for (i, j), val in zip(sym_slots, combo):
            b0[i * n + j] = val
            b0[j * n + i] = val
        b0 = tuple(b0)
        cb0d = tuple(
            tower.add(x, y) for x, y in zip(mat_mul(tower, c, b0, n), d)
        )
        if mat_det(tower, cb0d, n) != tower.zero:
            gp = mat_mul(tower, mat_mul(tower, g, spec.unipotent(b0), 2 * n), spec.weyl(), 2 * n)
            inner = _siegel_factor_inner(tower, n, level, gp)
            minus_id = mat_neg(tower, mat_identity(tower, n))
            neg_b0 = mat_neg(tower, b0)
            return inner + [("weyl", minus_id), ("unip", neg_b0)]
    raise FactorizationFailed("no symmetric correction block found")


# -- similitude character machinery -----------------------------------------------------


def gsp_character_values(ctx: RepContext, partition) -> dict:
    """Values of π_d = Ind_{Sp}^{GSp} ρ_d on the classes of GSp(F_{q^d})."""
    tower, n = ctx.tower, ctx.n
    gsp = SympGroup(tower, n, ctx.level, similitude=True)
    sp = SympGroup(tower, n, ctx.level)
    reps = [gsp.similitude_rep(lam) for lam in tower.level_elements(ctx.level) if lam != tower.zero]
    out = {}
    for cls_rep in partition.reps:
        total = CycNum.zero(ctx.p)
        for r in reps:
            y = mat_mul(tower, mat_mul(tower, mat_inv(tower, r, 2 * n), cls_rep, 2 * n), r, 2 * n)
            if sp.contains(y):
                total = total + ctx.build_rho(y).trace()
        out[cls_rep] = total
    return out


def extended_gsp_trace(ctx: RepContext, i: int, g: tuple) -> CycNum:
    """Character of Ind_{Γ⋉Sp(F')}^{Γ⋉GSp(F')} ρ̃' at (σ^i, g)."""
    tower, n = ctx.tower, ctx.n
    sp = SympGroup(tower, n, ctx.level)
    total = CycNum.zero(ctx.p)
    for lam in tower.level_elements(ctx.level):
        if lam == tower.zero:
            continue
        r = SympGroup(tower, n, ctx.level, similitude=True).similitude_rep(lam)
        y = mat_mul(tower, mat_mul(tower, mat_inv(tower, r, 2 * n), g, 2 * n), mat_frob_pow(tower, r, i), 2 * n)
        if sp.contains(y):
            total = total + ctx.extended_trace(i, y)
    return total


def mat_frob_pow(tower: Tower, g: tuple, i: int) -> tuple:
    return tuple(tower.frobenius(x, i) for x in g)

"""Twisted norm maps from the coset σ^i ⋉ G(F') to G(F_d).

For g in G(F') the norm is α·(g σ^i(g) ⋯ σ^{i(μ-1)}(g))·α^{-1}, where α solves
the Lang equation α^{-1} σ^d(α) = σ^{-it}(g σ^i(g) ⋯ σ^{i(t-1)}(g)).

Witness search: every solution of the Lang equation lies in G(F_{q^{d·k}})
exactly when the d-twisted product of k copies of the target is trivial, so
the minimal field of definition is computed first (a cheap loop at level m)
and the equation is then solved by exact linear algebra over F_p:

* the matrix equation σ^d(α) = α·h decouples into row equations, whose
  solution space carries an F_{q^d}-symplectic form v, w ↦ v·J·wᵀ whenever h
  is symplectic; a Darboux basis of that form stacks to a symplectic witness;
* for similitude groups any basis of the solution space stacks to an
  invertible witness;
* for Sp·H the Sp part is solved as above and the Heisenberg part reduces to
  one affine-semilinear vector equation plus one additive Hilbert-90 scalar
  equation.

Abelian groups take the classical norm directly (no witness needed).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from . import modp
from .errors import AmbientCapExceeded, ConfigInvalid
from .fieldtower import Embedding, Tower, build_tower, get_embedding
from .grouplib import (
    GroupSpec,
    MulGroup,
    Partition,
    SpHGroup,
    SpZGroup,
    SympGroup,
    SympSpace,
    conjugacy_classes,
    mat_inv,
    mat_mul,
    mat_vec,
    twisted_classes,
)

_K0_GUARD = 100_000
DEFAULT_AMBIENT_CAP = 64


@dataclass(frozen=True)
class NormConfig:
    """Arithmetic of one twist: i = d·j, m = d·μ, t·i ≡ d (mod m)."""

    m: int
    i: int
    d: int
    j: int
    mu: int
    t: int

    def validate(self):
        if not (0 <= self.i < self.m):
            raise ConfigInvalid("twist exponent out of range")
        d = gcd(self.i, self.m) if self.i else self.m
        if d != self.d or (self.t * self.i - self.d) % self.m != 0:
            raise ConfigInvalid("t·i ≢ d (mod m)")


def choose_t(i: int, m: int, t: int | None = None) -> NormConfig:
    """Smallest positive t with t·i ≡ gcd(i, m) (mod m); i = 0 uses t = 1."""
    if not (0 <= i < m):
        raise ConfigInvalid(f"need 0 <= i < m, got i={i}, m={m}")
    if i == 0:
        cfg = NormConfig(m=m, i=0, d=m, j=0, mu=1, t=1 if t is None else t)
        return cfg
    d = gcd(i, m)
    if t is None:
        t = next(k for k in range(1, m + 1) if (k * i - d) % m == 0)
    cfg = NormConfig(m=m, i=i, d=d, j=i // d, mu=m // d, t=t)
    cfg.validate()
    return cfg


def twisted_product(spec: GroupSpec, i: int, g, k: int):
    """g · σ^i(g) · σ^{2i}(g) ⋯ σ^{(k-1)i}(g)."""
    out = spec.identity()
    for r in range(k):
        out = spec.mul(out, spec.frob(g, i * r))
    return out


@dataclass
class LangWitness:
    alpha: object
    target: object
    ambient_degree: int  # in q-degrees
    tower: Tower
    embedding: Embedding


def _min_defining_level(spec: GroupSpec, h, d: int) -> int:
    """Minimal k with h·σ^d(h)···σ^{d(k-1)}(h) = 1; witnesses live at level d·k."""
    ident = spec.identity()
    q = h
    k = 1
    while q != ident:
        q = spec.mul(q, spec.frob(h, d * k))
        k += 1
        if k > _K0_GUARD:  # pragma: no cover
            raise RuntimeError("twisted order guard exceeded")
    return k


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _mul_matrix(tower: Tower, y) -> np.ndarray:
    """Matrix of multiplication by y on ambient F_p coefficients."""
    A = tower.ambient_degree
    gen_vec = np.zeros(A, dtype=np.int64)
    if A > 1:
        gen_vec[1] = 1
    else:
        gen_vec[0] = 1
    gen = tower._encode(gen_vec)
    cols = []
    cur = y
    for _ in range(A):
        cols.append(tower._decode(cur))
        cur = tower.mul(cur, gen)
    return np.array(cols, dtype=np.int64).T % tower.p


def _frob_matrix(tower: Tower, d: int) -> np.ndarray:
    """Matrix of x ↦ x^{q^d} on ambient F_p coefficients."""
    e = (tower.base_degree * d) % tower.ambient_degree
    return modp.mat_pow(tower._pmat, e, tower.p)


def _row_solution_space(big: Tower, d: int, h_mat: tuple, n2: int) -> list[tuple]:
    """F_p-basis of {row v : σ^d(v) = v·h} inside (ambient)^{n2}."""
    p, A = big.p, big.ambient_degree
    S = _frob_matrix(big, d)
    mulmats = [[_mul_matrix(big, h_mat[j * n2 + c]) for c in range(n2)] for j in range(n2)]
    M = np.zeros((n2 * A, n2 * A), dtype=np.int64)
    for j in range(n2):
        for c in range(n2):
            blk = -mulmats[j][c] % p
            if c == j:
                blk = (blk + S) % p
            M[c * A : (c + 1) * A, j * A : (j + 1) * A] = blk
    kern = modp.kernel_basis(M, p)
    rows = []
    for vec in kern:
        rows.append(tuple(big._encode(vec[j * A : (j + 1) * A]) for j in range(n2)))
    return rows


def _fqd_basis_rows(big: Tower, d: int, rows: list[tuple], n2: int, want: int) -> list[tuple]:
    """Select `want` rows that are independent over F_{q^d}."""
    p, A = big.p, big.ambient_degree
    scalars = [big._encode(vec) for vec in _subfield_basis_vectors(big, d)]
    chosen: list[tuple] = []
    echelon = np.zeros((0, n2 * A), dtype=np.int64)

    def coeffs(row):
        return np.concatenate([big._decode(x) for x in row]) % p

    def in_span(vec):
        if echelon.shape[0] == 0:
            return not vec.any()
        sol = modp.solve(echelon.T, vec, p)
        return sol is not None

    for row in rows:
        vec = coeffs(row)
        if in_span(vec):
            continue
        chosen.append(row)
        add = [coeffs(tuple(big.mul(s, x) for x in row)) for s in scalars]
        echelon = np.vstack([echelon] + add)
        if len(chosen) == want:
            return chosen
    raise RuntimeError("solution space thinner than expected")  # pragma: no cover


def _subfield_basis_vectors(big: Tower, d: int) -> list[np.ndarray]:
    S = _frob_matrix(big, d)
    p = big.p
    mat = (S - np.eye(big.ambient_degree, dtype=np.int64)) % p
    return [v for v in modp.kernel_basis(mat, p)]


def _darboux_alpha(big: Tower, d: int, rows: list[tuple], n: int) -> tuple:
    """Stack a Darboux basis of the row space into a symplectic witness."""
    space = SympSpace(n)

    def form(u, w):
        return space.form(big, u, w)

    left = list(rows)
    us, ws = [], []
    while left:
        u = left.pop(0)
        pick = next((k for k, w in enumerate(left) if form(u, w) != big.zero), None)
        assert pick is not None, "degenerate pairing on Lang solution space"
        w = left.pop(pick)
        c = form(u, w)
        assert big.frobenius(c, d) == c, "pairing escaped the fixed field"
        ci = big.inv(c)
        w = tuple(big.mul(ci, x) for x in w)
        new_left = []
        for z in left:
            a = form(z, w)
            b = form(z, u)
            zz = tuple(
                big.add(big.sub(zc, big.mul(a, uc)), big.mul(b, wc))
                for zc, uc, wc in zip(z, u, w)
            )
            new_left.append(zz)
        left = new_left
        us.append(u)
        ws.append(w)
    rows_out = us + ws
    return tuple(x for row in rows_out for x in row)


def _lang_matrix(spec, big: Tower, emb: Embedding, h, d: int, similitude: bool):
    n = spec.n
    n2 = 2 * n
    h_big = tuple(emb.embed(x) for x in h)
    rows = _row_solution_space(big, d, h_big, n2)
    basis = _fqd_basis_rows(big, d, rows, n2, n2)
    if similitude:
        alpha = tuple(x for row in basis for x in row)
        from .grouplib import mat_det

        assert mat_det(big, alpha, n2) != big.zero
    else:
        alpha = _darboux_alpha(big, d, basis, n)
    # verify σ^d(α) = α·h
    lhs = tuple(big.frobenius(x, d) for x in alpha)
    rhs = mat_mul(big, alpha, h_big, n2)
    assert lhs == rhs, "Lang witness verification failed"
    return alpha, h_big


def _solve_affine_semilinear_vec(big: Tower, d: int, mmat: tuple, rhs_vec: tuple, n2: int) -> tuple:
    """One u with σ^d(u) - m·u = rhs (column vectors of length n2)."""
    p, A = big.p, big.ambient_degree
    S = _frob_matrix(big, d)
    M = np.zeros((n2 * A, n2 * A), dtype=np.int64)
    for c in range(n2):
        for j in range(n2):
            blk = -_mul_matrix(big, mmat[c * n2 + j]) % p
            if c == j:
                blk = (blk + S) % p
            M[c * A : (c + 1) * A, j * A : (j + 1) * A] = blk
    b = np.concatenate([big._decode(x) for x in rhs_vec]) % p
    sol = modp.solve(M, b, p)
    assert sol is not None, "affine semilinear equation unsolvable at this level"
    return tuple(big._encode(sol[j * A : (j + 1) * A]) for j in range(n2))


def _solve_additive(big: Tower, d: int, c) -> object:
    p, A = big.p, big.ambient_degree
    S = _frob_matrix(big, d)
    M = (S - np.eye(A, dtype=np.int64)) % p
    sol = modp.solve(M, big._decode(c), p)
    assert sol is not None, "additive Hilbert-90 equation unsolvable at this level"
    return big._encode(sol)


def _strategy(spec: GroupSpec) -> str:
    if spec.abelian:
        return "abelian"
    if isinstance(spec, SpZGroup):
        return "spz"
    if isinstance(spec, SpHGroup):
        return "sph"
    if isinstance(spec, SympGroup):
        return "gl" if spec.similitude else "sp"
    raise TypeError(f"no norm strategy for {type(spec).__name__}")


def lang_solve(spec: GroupSpec, h, d: int, ambient_cap: int = DEFAULT_AMBIENT_CAP) -> LangWitness:
    """Solve α^{-1}σ^d(α) = h with α in the group over a large enough field."""
    tower = spec.tower
    k0 = _min_defining_level(spec, h, d)
    need = _lcm(d * k0, tower.m)
    if need > ambient_cap:
        raise AmbientCapExceeded(
            f"Lang witness needs ambient level {need} (cap {ambient_cap})"
        )
    big = build_tower(tower.p, tower.base_degree, need)
    emb = get_embedding(tower, big)
    strategy = _strategy(spec)
    if strategy == "abelian":
        alpha = _abelian_lang(spec, big, emb, h, d)
    elif strategy in ("sp", "gl"):
        alpha, _ = _lang_matrix(spec, big, emb, h, d, similitude=(strategy == "gl"))
    elif strategy == "sph":
        alpha = _sph_lang(spec, big, emb, h, d)
    else:  # spz
        alpha = _spz_lang(spec, big, emb, h, d)
    return LangWitness(alpha=alpha, target=h, ambient_degree=need, tower=big, embedding=emb)


def _abelian_lang(spec: GroupSpec, big: Tower, emb: Embedding, h, d: int):
    """Spec-level witness search by enumeration of the (small) cyclic group.

    Used only for the abelian examples; abelian norms never need a witness.
    """
    if isinstance(spec, MulGroup):
        h_big = emb.embed(h)
        elems = big.level_elements(big.m)
        for x in elems:
            if x == big.zero:
                continue
            if big.mul(big.inv(x), big.frobenius(x, d)) == h_big:
                return x
        raise RuntimeError("no abelian witness at computed level")  # pragma: no cover
    h_big = tuple(emb.embed(x) for x in h)
    from .grouplib import TorusSL2

    assert isinstance(spec, TorusSL2)
    tor = TorusSL2(big, big.m)
    for x in tor.elements():
        if mat_mul(big, mat_inv(big, x, 2), tuple(big.frobenius(c, d) for c in x), 2) == h_big:
            return x
    raise RuntimeError("no abelian witness at computed level")  # pragma: no cover


def _sph_lang(spec: SpHGroup, big: Tower, emb: Embedding, h, d: int):
    n = spec.n
    s_h, (v_h, t_h) = h
    sp_big = SympGroup(big, n, big.m)
    alpha_s, s_h_big = _lang_matrix(spec.sp, big, emb, s_h, d, similitude=False)
    v_h_big = tuple(emb.embed(x) for x in v_h)
    t_h_big = emb.embed(t_h)
    # m = (σ^d a)^{-1} a;  σ^d(u) - m·u = v_h;  σ^d(z) - z = t_h + ½⟨m u, σ^d u⟩
    a_frob = tuple(big.frobenius(x, d) for x in alpha_s)
    mmat = mat_mul(big, mat_inv(big, a_frob, 2 * n), alpha_s, 2 * n)
    u = _solve_affine_semilinear_vec(big, d, mmat, v_h_big, 2 * n)
    mu_vec = mat_vec(big, mmat, u, 2 * n)
    u_frob = tuple(big.frobenius(x, d) for x in u)
    half = big.from_int((big.p + 1) // 2)
    c = big.add(t_h_big, big.mul(half, SympSpace(n).form(big, mu_vec, u_frob)))
    z = _solve_additive(big, d, c)
    alpha = (alpha_s, (u, z))
    sph_big = SpHGroup(big, n, big.m)
    chk = sph_big.mul(sph_big.inv(alpha), sph_big.frob(alpha, d))
    assert chk == (s_h_big, (v_h_big, t_h_big)), "Sp·H Lang witness verification failed"
    return alpha


def _spz_lang(spec: SpZGroup, big: Tower, emb: Embedding, h, d: int):
    n = spec.n
    s_h, (v_h, t_h) = h
    alpha_s, _ = _lang_matrix(spec.sp, big, emb, s_h, d, similitude=False)
    z = _solve_additive(big, d, emb.embed(t_h))
    zero_v = tuple(big.zero for _ in range(2 * n))
    alpha = (alpha_s, (zero_v, z))
    spz_big = SpZGroup(big, n, big.m)
    chk = spz_big.mul(spz_big.inv(alpha), spz_big.frob(alpha, d))
    assert chk == (tuple(emb.embed(x) for x in s_h), (zero_v, emb.embed(t_h)))
    return alpha


def gyoja_norm(cfg: NormConfig, spec: GroupSpec, g, ambient_cap: int = DEFAULT_AMBIENT_CAP,
               partition: Partition | None = None, cache: dict | None = None):
    """The norm of (σ^i, g); returns (element of G(F_d), class id or None).

    For i = 0 the map is the identity on ordinary classes by convention.
    """
    key = (cfg, spec.descriptor(), g)
    if cache is not None and key in cache:
        got = cache[key]
        return got if partition is None else (got[0], partition.index_of(got[0]))
    if cfg.i == 0:
        result = g
    elif spec.abelian:
        result = twisted_product(spec, cfg.i, g, cfg.mu)
        assert spec.frob(result, cfg.d) == result
    else:
        # The Lang target is the t-fold twisted product itself: with
        # σ^d(α) = α·P_t, the commutation P_t·σ^d(P_μ) = P_μ·P_t of powers of
        # (σ^i, g) forces σ^d-stability of the conjugated norm.
        target = twisted_product(spec, cfg.i, g, cfg.t)
        witness = lang_solve(spec, target, cfg.d, ambient_cap)
        big, emb = witness.tower, witness.embedding
        p_mu = twisted_product(spec, cfg.i, g, cfg.mu)
        result = _conjugate_in_big(spec, big, emb, witness.alpha, p_mu, cfg.d)
    cls = partition.index_of(result) if partition is not None else None
    if cache is not None:
        cache[key] = (result, None)
    return (result, cls)


def _conjugate_in_big(spec: GroupSpec, big: Tower, emb: Embedding, alpha, p_mu, d: int):
    strategy = _strategy(spec)
    if strategy in ("sp", "gl"):
        n2 = 2 * spec.n
        p_big = tuple(emb.embed(x) for x in p_mu)
        out = mat_mul(big, mat_mul(big, alpha, p_big, n2), mat_inv(big, alpha, n2), n2)
        assert all(big.frobenius(x, d) == x for x in out), "norm did not land at level d"
        return tuple(emb.pull_back(x) for x in out)
    # Sp·H or Sp×Z
    group_cls = SpZGroup if strategy == "spz" else SpHGroup
    big_spec = group_cls(big, spec.n, big.m)
    p_big = (tuple(emb.embed(x) for x in p_mu[0]),
             (tuple(emb.embed(x) for x in p_mu[1][0]), emb.embed(p_mu[1][1])))
    out = big_spec.mul(big_spec.mul(alpha, p_big), big_spec.inv(alpha))
    assert big_spec.frob(out, d) == out, "norm did not land at level d"
    return (tuple(emb.pull_back(x) for x in out[0]),
            (tuple(emb.pull_back(x) for x in out[1][0]), emb.pull_back(out[1][1])))


@dataclass
class BijectionReport:
    cfg: NormConfig
    twisted_count: int
    target_count: int
    mapping: list
    well_defined: bool
    injective: bool
    surjective: bool
    sigma_equivariant: bool

    @property
    def ok(self) -> bool:
        return (self.well_defined and self.injective and self.surjective
                and self.sigma_equivariant and self.twisted_count == self.target_count)

    def to_tsv(self) -> str:
        lines = ["twisted_rep\tnorm_class_rep\ttwisted_size\tnorm_class_size"]
        for rep, cls_rep, tw_size, cl_size in self.mapping:
            lines.append(f"{rep}\t{cls_rep}\t{tw_size}\t{cl_size}")
        return "\n".join(lines)


def verify_bijection(cfg: NormConfig, spec: GroupSpec, target_spec: GroupSpec,
                     ambient_cap: int = DEFAULT_AMBIENT_CAP, members_per_class: int = 2,
                     cache: dict | None = None) -> BijectionReport:
    """Check the class bijection σ^i ⋉ G(F') → classes of G(F_d)."""
    part_cache: dict = {}
    tw = twisted_classes(spec, cfg.i, part_cache)
    target = conjugacy_classes(target_spec, part_cache)
    norm_cache = cache if cache is not None else {}

    def norm_class(g):
        el, _ = gyoja_norm(cfg, spec, g, ambient_cap, cache=norm_cache)
        return target.index_of(el)

    assigned = [norm_class(rep) for rep in tw.reps]
    well_defined = True
    if members_per_class > 1:
        counts = [0] * len(tw.reps)
        for g in spec.elements():
            k = tw.index_of(g)
            if counts[k] >= members_per_class - 1 or g == tw.reps[k]:
                continue
            counts[k] += 1
            if norm_class(g) != assigned[k]:
                well_defined = False
    injective = len(set(assigned)) == len(assigned)
    surjective = set(assigned) == set(range(len(target)))
    equivariant = True
    for k, rep in enumerate(tw.reps):
        sig_rep = spec.frob(rep, 1)
        lhs = norm_class(sig_rep)
        n_el, _ = gyoja_norm(cfg, spec, rep, ambient_cap, cache=norm_cache)
        rhs = target.index_of(target_spec.frob(n_el, 1))
        if lhs != rhs:
            equivariant = False
    mapping = [
        (tw.reps[k], target.reps[assigned[k]], tw.sizes[k], target.sizes[assigned[k]])
        for k in range(len(tw.reps))
    ]
    return BijectionReport(cfg, len(tw), len(target), mapping, well_defined,
                           injective, surjective, equivariant)

import random

import pytest

from weilbc.cyclotomic import CycNum
from weilbc.errors import NotSymplectic, Singular
from weilbc.fieldtower import build_tower
from weilbc.grouplib import HeisGroup, SpHGroup, SympGroup, mat_mul, sp_act_heis
from weilbc.schrodinger import RepContext, siegel_factor


@pytest.fixture(scope="module")
def t92():
    return build_tower(3, 1, 2)


@pytest.fixture(scope="module")
def ctx1(t92):
    return RepContext(t92, 1, 1)


@pytest.fixture(scope="module")
def ctx2(t92):
    return RepContext(t92, 1, 2)


def test_basis_size(ctx1, ctx2):
    assert ctx1.dim == 3
    assert ctx2.dim == 9


def test_heis_central_element(ctx1, t92):
    op = ctx1.op_heis(((0, 0), 1))
    want = ctx1.identity_op().scale(t92.psi(1, 1))
    assert op == want


def test_heis_translation_trace_zero(ctx1):
    op = ctx1.op_heis(((0, 1), 0))  # pure X* translation
    assert op.trace() == CycNum.zero(3)
    # permutation: exactly one entry per row, none diagonal
    assert all(op.arr[k, k].tolist() == [0, 0] for k in range(3))


def test_heis_x_part_is_diagonal(ctx1, t92):
    op = ctx1.op_heis(((1, 0), 0))
    for i in range(3):
        for j in range(3):
            if i != j:
                assert op.arr[i, j].tolist() == [0, 0]
    # diagonal entries ψ(⟨y*, x⟩) with x = e_1
    for idx, y in enumerate(ctx1.points):
        pair = t92.neg(t92.mul(y[0], t92.one))
        assert op.entry(idx, idx) == t92.psi(pair, 1)


def test_unip_example_diagonal(ctx1):
    op = ctx1.op_unip((1,))
    z2 = CycNum.root_of_unity(3, 2)
    assert [op.entry(k, k) for k in range(3)] == [CycNum.one(3), z2, z2]
    assert op.trace() == CycNum.one(3) + 2 * z2


def test_unip_zero_is_identity(ctx1):
    assert ctx1.op_unip((0,)).is_identity()


def test_unip_requires_symmetric_block(t92):
    ctx = RepContext(t92, 2, 1)
    bad = (t92.zero, t92.one, t92.zero, t92.zero)  # not symmetric
    with pytest.raises(NotSymplectic):
        ctx.op_unip(bad)


def test_levi_examples(ctx1):
    assert ctx1.op_levi((1,)).is_identity()
    op = ctx1.op_levi((2,))
    assert op.trace() == CycNum.rational(3, -1)
    # monomial: one nonzero entry per row
    for i in range(3):
        nonzero = [j for j in range(3) if op.arr[i, j].any()]
        assert len(nonzero) == 1
    with pytest.raises(Singular):
        ctx1.op_levi((0,))


def test_weyl_square_is_minus_one(ctx1):
    w = ctx1.op_weyl()
    assert (w @ w) == ctx1.op_levi((2,))


def test_weyl_unitary_and_inverse(ctx1, t92):
    w = ctx1.op_weyl()
    assert w.is_unitary()
    sl = SympGroup(t92, 1, 1)
    winv = ctx1.build_rho(sl.inv(sl.weyl()))
    assert (w @ winv).is_identity()


def test_factorization_examples(t92):
    # upper triangular → unipotent (trivial Levi dropped)
    word = siegel_factor(t92, 1, 1, (1, 1, 0, 1))
    assert [tag for tag, _ in word] == ["unip"]
    word = siegel_factor(t92, 1, 1, (2, 1, 0, 2))
    assert [tag for tag, _ in word] == ["unip", "levi"]
    # the standard Weyl element factors through a Weyl generator
    sl = SympGroup(t92, 1, 1)
    word = siegel_factor(t92, 1, 1, sl.weyl())
    assert any(tag == "weyl" for tag, _ in word)
    # invertible corner example
    word = siegel_factor(t92, 1, 1, (1, 0, 1, 1))
    assert [tag for tag, _ in word] == ["unip", "weyl", "unip"]


def test_factorization_rejects_nonsymplectic(t92):
    with pytest.raises(NotSymplectic):
        siegel_factor(t92, 1, 1, (1, 1, 1, 1))


def test_factorization_certificates_exhaustive_sl2_f3(t92):
    sl = SympGroup(t92, 1, 1)
    for g in sl.elements():
        siegel_factor(t92, 1, 1, g)  # internal product check is the certificate


def test_factorization_singular_corner_sp4(t92):
    lower = (1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1)  # c = diag(1,0)
    word = siegel_factor(t92, 2, 1, lower)
    assert 3 <= len(word) <= 5
    assert sum(1 for tag, _ in word if tag == "weyl") == 2


def test_rho_identity_and_minus_one(ctx1, t92):
    sl = SympGroup(t92, 1, 1)
    assert ctx1.build_rho(sl.identity()).is_identity()
    assert ctx1.build_rho((2, 0, 0, 2)).trace() == CycNum.rational(3, -1)


def test_homomorphism_random_pairs(ctx2, t92):
    sl = SympGroup(t92, 1, 2)
    rng = random.Random(17)
    for _ in range(200):
        g1, g2 = sl.random(rng), sl.random(rng)
        assert ctx2.build_rho(mat_mul(t92, g1, g2, 2)) == ctx2.build_rho(g1) @ ctx2.build_rho(g2)


def test_homomorphism_sph(ctx2, t92):
    sph = SpHGroup(t92, 1, 2)
    rng = random.Random(18)
    for _ in range(60):
        a, b = sph.random(rng), sph.random(rng)
        assert ctx2.build_rho(sph.mul(a, b)) == ctx2.build_rho(a) @ ctx2.build_rho(b)


def test_unitarity_random(ctx2, t92):
    sph = SpHGroup(t92, 1, 2)
    rng = random.Random(19)
    for _ in range(25):
        assert ctx2.build_rho(sph.random(rng)).is_unitary()


def test_galois_operator(ctx2, t92):
    assert ctx2.op_galois(2).is_identity()  # I_σ^m = 1
    assert ctx2.op_galois(1).trace() == CycNum.rational(3, 3)  # q^n


def test_galois_intertwining(ctx2, t92):
    sph = SpHGroup(t92, 1, 2)
    rng = random.Random(20)
    I = ctx2.op_galois(1)
    Ii = ctx2.op_galois(-1)
    for _ in range(100):
        g = sph.random(rng)
        assert (I @ ctx2.build_rho(g)) @ Ii == ctx2.build_rho(sph.frob(g, 1))


def test_sp_action_on_heisenberg(ctx2, t92):
    sl = SympGroup(t92, 1, 2)
    h = HeisGroup(t92, 1, 2)
    rng = random.Random(21)
    for _ in range(50):
        s, x = sl.random(rng), h.random(rng)
        lhs = (ctx2.build_rho(s) @ ctx2.op_heis(x)) @ ctx2.build_rho(sl.inv(s))
        assert lhs == ctx2.op_heis(sp_act_heis(t92, s, x, 1))


def test_extended_trace_examples(ctx2, t92):
    sl = SympGroup(t92, 1, 2)
    # (0, g) restricts to tr ρ'
    for cand in sl.elements()[:50]:
        assert ctx2.extended_trace(0, cand) == ctx2.build_rho(cand).trace()
    # (1, 1) gives q^n
    assert ctx2.extended_trace(1, sl.identity()) == CycNum.rational(3, 3)


def test_extended_trace_is_twisted_class_function(ctx2, t92):
    sph = SpHGroup(t92, 1, 2)
    rng = random.Random(22)
    for _ in range(50):
        i = rng.randrange(2)
        g, h = sph.random(rng), sph.random(rng)
        assert ctx2.extended_trace(i, g) == ctx2.extended_trace(i, sph.twisted_conj(h, g, i))


def test_rho_memoized(ctx2, t92):
    sl = SympGroup(t92, 1, 2)
    g = sl.random(random.Random(1))
    assert ctx2.build_rho(g) is ctx2.build_rho(g)


def test_extended_trace_monomial_path_matches_product(ctx2, t92):
    sph = SpHGroup(t92, 1, 2)
    rng = random.Random(23)
    for _ in range(30):
        s, h = sph.random(rng)
        i = rng.randrange(2)
        fast = ctx2.extended_trace(i, (s, h))
        full = ((ctx2.build_rho(s) @ ctx2.op_heis(h)) @ ctx2.op_galois(i)).trace()
        assert fast == full


def test_weyl_det_basis_independence(t92):
    # ε'(det c) is well defined: conjugating the basis flips det by a square
    ctx = RepContext(t92, 2, 1)
    sp4 = SympGroup(t92, 2, 1)
    b = (1, 0, 0, 2)
    w = sp4.weyl(b)
    assert ctx.build_rho(w) == ctx.op_weyl(b)


def test_scaled_psi_still_a_representation(t92):
    ctx = RepContext(t92, 1, 2, scale=2)
    sl = SympGroup(t92, 1, 2)
    rng = random.Random(24)
    for _ in range(50):
        g1, g2 = sl.random(rng), sl.random(rng)
        assert ctx.build_rho(mat_mul(t92, g1, g2, 2)) == ctx.build_rho(g1) @ ctx.build_rho(g2)


def test_standard_weyl_factors_as_single_generator(t92):
    sl = SympGroup(t92, 1, 1)
    word = siegel_factor(t92, 1, 1, sl.weyl())
    assert word == [("weyl", (t92.one,))]


def test_identity_factors_trivially(t92):
    sl = SympGroup(t92, 1, 1)
    word = siegel_factor(t92, 1, 1, sl.identity())
    assert len(word) == 1

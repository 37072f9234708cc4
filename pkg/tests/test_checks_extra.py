"""Cross-checks that tie the verification machinery together."""

import random

from weilbc.checks import RunConfig, Workspace, run_check
from weilbc.cli import main
from weilbc.cyclotomic import CycNum
from weilbc.fieldtower import build_tower
from weilbc.grouplib import SpHGroup, SpZGroup, SympGroup, conjugacy_classes, mat_vec
from weilbc.normmap import choose_t, gyoja_norm
from weilbc.schrodinger import RepContext, gsp_character_values


def test_translation_model_trace_matches_coset_formula():
    """The permutation model on C[V(F')] computes the induced-trivial character."""
    t = build_tower(3, 1, 2)
    sph = SpHGroup(t, 1, 2)
    spz = SpZGroup(t, 1, 2)
    field = t.level_elements(2)
    points = [(a, b) for a in field for b in field]
    reps = [(sph.sp.identity(), (v, t.zero)) for v in points]
    rng = random.Random(31)
    for _ in range(40):
        i = rng.randrange(2)
        s = sph.sp.random(rng)
        v0 = rng.choice(points)
        tt = rng.choice(field)
        y = (s, (v0, tt))
        # permutation model: count v with σ^{-i}(s^{-1} v + v0) = v
        s_inv = sph.sp.inv(s)
        fixed = 0
        for v in points:
            w = tuple(t.add(a, b) for a, b in zip(mat_vec(t, s_inv, v, 2), v0))
            if tuple(t.frobenius(c, -i) for c in w) == v:
                fixed += 1
        # coset-fixed form of the induced character
        hits = 0
        for r in reps:
            z = sph.mul(sph.mul(sph.inv(r), y), sph.frob(r, i))
            if spz.contains(z):
                hits += 1
        assert fixed == hits


def test_gsp_character_vanishes_off_unit_determinant():
    """π_d is induced from Sp, so it vanishes where the similitude factor
    cannot be moved into Sp (for GL2: whenever det ≠ 1)."""
    t = build_tower(3, 1, 2)
    ctx1 = RepContext(t, 1, 1)
    gl = SympGroup(t, 1, 1, similitude=True)
    part = conjugacy_classes(gl)
    values = gsp_character_values(ctx1, part)
    from weilbc.grouplib import mat_det

    for rep in part.reps:
        if mat_det(t, rep, 2) != t.one:
            assert values[rep] == CycNum.zero(3)
    assert values[gl.identity()] == CycNum.rational(3, 6)  # (q-1)·q


def test_star_identity_with_scaled_psi():
    """(⋆) holds for the scaled pairing ψ_a, a ≠ 1, checked separately."""
    t = build_tower(3, 1, 2)
    sl = SympGroup(t, 1, 2)
    scale = 2
    ctx2 = RepContext(t, 1, 2, scale=scale)
    ctx1 = RepContext(t, 1, 1, scale=scale)
    cfg = choose_t(1, 2)
    rng = random.Random(33)
    cache = {}
    for _ in range(30):
        g = sl.random(rng)
        N, _ = gyoja_norm(cfg, sl, g, cache=cache)
        assert ctx2.extended_trace(1, g) == ctx1.build_rho(N).trace()


def test_group_too_large_surfaces_as_cli_error(capsys):
    rc = main(["star", "--p", "3", "--n", "2", "--m", "2", "--sample", "all"])
    err = capsys.readouterr().err
    assert rc == 2
    assert "GroupTooLarge" in err


def test_ambient_cap_surfaces_as_cli_error(capsys):
    rc = main(["star", "--p", "3", "--n", "1", "--m", "2", "--sample", "40", "--ambient-cap", "4"])
    err = capsys.readouterr().err
    assert rc == 2
    assert "AmbientCapExceeded" in err


def test_workspace_warm_populates_cache():
    cfg = RunConfig(p=3, n=1, m=2, pairs=((1, 1),), sample=4, seed=2)
    ws = Workspace(cfg)
    sl = SympGroup(ws.tower, 1, 2)
    elems = [sl.random(ws.rng("warm")) for _ in range(5)]
    ws.warm(elems)
    assert all(g in ws.ctx(2)._rho_cache for g in elems)


def test_support_check_zero_points_really_vanish():
    cfg = RunConfig(p=3, n=1, m=2, pairs=((1, 1),), sample=120, seed=11)
    report = run_check("support", cfg)
    assert report.ok
    offs = [c for c in report.cases if "[off conjugates]" in c.input]
    assert offs and all(c.lhs == CycNum.zero(3).to_text() for c in offs)

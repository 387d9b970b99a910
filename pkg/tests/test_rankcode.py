import numpy as np
import pytest

from mrdscatter.errors import CapExceededError, InvalidSubspaceError
from mrdscatter.field import field
from mrdscatter.linset import SubspaceU, is_scattered, ubs_valid, weight_distribution
from mrdscatter.qpoly import QPoly, ubs_poly
from mrdscatter.rankcode import (
    RankCode,
    adjoint_code,
    code_from_subspace,
    code_report,
    is_mrd,
    middle_nucleus,
    min_distance,
    singleton_bound,
    twisted_gabidulin,
)


def valid_bs(ctx, s=1):
    return [b for b in range(1, ctx.order) if ubs_valid(ctx, b, s)]


def brute_min_distance(C):
    mats = C.codeword_matrices()[1:]
    from mrdscatter.linalg import rank_mod_p
    return min(rank_mod_p(m, C.ctx.p) for m in mats) // C.ctx.h


def test_gabidulin_code():
    ctx = field(3, 3)
    C = code_from_subspace(SubspaceU.graph(QPoly.monomial(ctx, 1)))
    assert [g.coeffs for g in C.generators] == [QPoly.monomial(ctx, 1).coeffs,
                                               QPoly.identity(ctx).coeffs]
    assert C.dim_fq == 12 and C.size == 3**12
    assert min_distance(C) == 5 and is_mrd(C)


def test_identity_is_rejected():
    ctx = field(3, 3)
    with pytest.raises(InvalidSubspaceError):
        code_from_subspace(SubspaceU.graph(QPoly.identity(ctx)))


def test_ubs_code_dimension_and_distance():
    ctx = field(3, 3)
    scattered = non = None
    for b in valid_bs(ctx):
        U = SubspaceU.parametric(ctx, b, 1)
        if is_scattered(U):
            scattered = scattered or U
        else:
            non = non or U
        if scattered and non:
            break
    C = code_from_subspace(scattered)
    assert C.dim_fq == 12 and min_distance(C) == 5 and is_mrd(C)
    Cn = code_from_subspace(non)
    assert min_distance(Cn) == 4 == ctx.m - weight_distribution(non).max_weight
    assert not is_mrd(Cn)
    assert Cn.dim_fq < singleton_bound(Cn)


def test_projective_pairs_match_enumeration():
    rng = np.random.default_rng(0)
    for ctx in (field(2, 2), field(3, 2)):
        for _ in range(4):
            f = QPoly.random(ctx, rng)
            if all(c == 0 for c in f.coeffs[1:]):
                continue
            C = code_from_subspace(SubspaceU.graph(f))
            assert min_distance(C) == brute_min_distance(C)


def test_distance_is_m_minus_max_weight():
    for ctx in (field(2, 2), field(2, 3), field(3, 2)):
        for b in valid_bs(ctx)[:15]:
            U = SubspaceU.parametric(ctx, b, 1)
            C = code_from_subspace(U)
            assert min_distance(C) == ctx.m - weight_distribution(U).max_weight
            assert is_scattered(U) == (min_distance(C) == ctx.m - 1)
            assert C.dim_fq <= singleton_bound(C)


def test_single_generator_code_is_trivially_mrd():
    ctx = field(3, 2)
    C = RankCode(ctx, [QPoly.identity(ctx)])
    assert min_distance(C) == ctx.m and C.dim_fq == ctx.m and is_mrd(C)


def test_adjoint_code():
    ctx = field(3, 3)
    b = valid_bs(ctx)[0]
    C = code_from_subspace(SubspaceU.parametric(ctx, b, 1))
    A = adjoint_code(C)
    assert adjoint_code(A) == C
    assert A.params() == C.params()
    expected = RankCode(ctx, [QPoly.from_terms(ctx, {5: ctx.frob(b, 5), 2: 1}),
                              QPoly.identity(ctx)])
    assert A == expected


def test_twisted_gabidulin():
    ctx = field(3, 2)
    G = twisted_gabidulin(ctx, 0, 1, 1)
    assert G == code_from_subspace(SubspaceU.graph(QPoly.monomial(ctx, 1)))
    assert G.min_distance() == 3
    mu = next(mu for mu in range(1, ctx.order) if ctx.norm(mu, from_deg=4, to_deg=1) != 1)
    T = twisted_gabidulin(ctx, mu, 1, 1)
    assert T.dim_fq == 8
    assert brute_min_distance(T) == 3 and is_mrd(T)
    bad = next(mu for mu in range(1, ctx.order) if ctx.norm(mu, from_deg=4, to_deg=1) == 1)
    with pytest.raises(InvalidSubspaceError):
        twisted_gabidulin(ctx, bad, 1, 1)
    with pytest.raises(InvalidSubspaceError):
        twisted_gabidulin(ctx, 0, 1, 2)


def test_no_admissible_twist_over_f2():
    ctx = field(2, 2)
    assert all(ctx.norm(mu, from_deg=4, to_deg=1) == 1 for mu in range(1, ctx.order))


def test_twisted_gabidulin_is_fq_linear():
    ctx = field(3, 2)
    mu = next(mu for mu in range(1, ctx.order) if ctx.norm(mu, from_deg=4, to_deg=1) != 1)
    T = twisted_gabidulin(ctx, mu, 1, 1)
    a0, a1 = 7, 11
    member = QPoly.from_terms(ctx, {0: a0, 1: a1, 2: ctx.mul(mu, ctx.frob(a0, 1))})
    assert T.contains(member)
    assert T.contains(member.scale(2))
    assert T.contains(member + member.compose(QPoly.identity(ctx)))


def test_nucleus_strategies():
    ctx = field(2, 2)
    C = code_from_subspace(SubspaceU.graph(QPoly.monomial(ctx, 1)))
    closed = middle_nucleus(C)
    brute = middle_nucleus(C, "bruteforce")
    assert closed.size == brute.size == 16
    Z = np.array(brute.elements)
    assert sum(1 for z in Z if not z.any()) == 1
    keys = {z.tobytes() for z in Z}
    from mrdscatter.linalg import rank_mod_p
    for a in Z:
        if a.any():
            assert rank_mod_p(a, 2) == 4
        for b in Z[:6]:
            assert ((a + b) % 2).tobytes() in keys
            assert (a @ b % 2).tobytes() in keys
    # the scalar maps x -> alpha x are exactly the nucleus
    scal = {ctx.mul_matrix(a).tobytes() for a in range(ctx.order)}
    assert scal == keys


def test_nucleus_cap():
    ctx = field(3, 3)
    C = code_from_subspace(SubspaceU.graph(QPoly.monomial(ctx, 1)))
    with pytest.raises(CapExceededError):
        middle_nucleus(C, "bruteforce")


def test_code_report_fields():
    ctx = field(3, 3)
    rep = code_report(code_from_subspace(SubspaceU.graph(ubs_poly(ctx, valid_bs(ctx)[0], 1))))
    assert rep["params"]["m"] == 6 and rep["nucleus"]["size"] == 3**6
    assert set(rep) >= {"params", "mrd", "nucleus", "generators"}

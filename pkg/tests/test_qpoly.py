import numpy as np
import pytest

import oracles
from mrdscatter.field import field
from mrdscatter.linalg import (
    batch_rank_mod_p,
    field_det,
    field_rank,
    log_batch_det,
    log_batch_rank,
    LogOps,
    nullspace_mod_p,
    rank_mod_p,
)
from mrdscatter.qpoly import (
    QPoly,
    adjoint,
    compose,
    dickson_matrix,
    dickson_rank,
    evaluate,
    kernel_dim,
    minor,
    r_poly,
    submatrix_det_66,
    ubs_poly,
)


def test_evaluate_matches_term_by_term_oracle():
    ctx = field(2, 3, h=2)
    rng = np.random.default_rng(0)
    f = QPoly.random(ctx, rng)
    for x in rng.integers(0, ctx.order, 30).tolist():
        assert evaluate(f, x) == oracles.evaluate(ctx, f.coeffs, x)
    xs = np.arange(ctx.order)
    assert f.evaluate_many(xs).tolist() == [f(int(x)) for x in xs]


def test_identity_and_monomial():
    ctx = field(3, 3)
    assert QPoly.identity(ctx)(17) == 17
    assert QPoly.monomial(ctx, 1)(17) == ctx.pow(17, 3)
    assert QPoly.monomial(ctx, 6).coeffs == QPoly.identity(ctx).coeffs  # x^(q^m) = x


def test_compose_is_composition():
    ctx = field(3, 2)
    rng = np.random.default_rng(1)
    f, g = QPoly.random(ctx, rng), QPoly.random(ctx, rng)
    h = compose(f, g)
    for x in range(0, ctx.order, 7):
        assert h(x) == f(g(x))


def test_kernel_dim_matches_root_count():
    rng = np.random.default_rng(2)
    for ctx in (field(2, 2), field(3, 2), field(2, 3)):
        for _ in range(10):
            c = [ctx.random_element(rng) if rng.random() < 0.6 else 0 for _ in range(ctx.m)]
            f = QPoly(ctx, c)
            assert kernel_dim(f) == oracles.kernel_dim(ctx, f.coeffs)


def test_kernel_dim_examples():
    ctx = field(3, 3)
    assert kernel_dim(QPoly.zero(ctx)) == 6
    assert kernel_dim(QPoly.identity(ctx)) == 0
    # x^q - x vanishes exactly on F_q
    assert kernel_dim(QPoly.from_terms(ctx, {1: 1, 0: ctx.minus_one})) == 1
    # x^(q^2) - x vanishes on F_(q^2)
    assert kernel_dim(QPoly.from_terms(ctx, {2: 1, 0: ctx.minus_one})) == 2


def test_dickson_rank_equals_map_rank():
    rng = np.random.default_rng(3)
    for ctx in (field(2, 3), field(3, 2), field(2, 2, h=2)):
        for _ in range(20):
            c = [ctx.random_element(rng) if rng.random() < 0.5 else 0 for _ in range(ctx.m)]
            f = QPoly(ctx, c)
            assert dickson_rank(f) == ctx.m - kernel_dim(f)


def test_adjoint_is_trace_transpose():
    ctx = field(2, 3)
    rng = np.random.default_rng(4)
    f = QPoly.random(ctx, rng)
    fh = adjoint(f)
    for _ in range(40):
        x, y = ctx.random_element(rng), ctx.random_element(rng)
        assert ctx.trace(ctx.mul(x, f(y))) == ctx.trace(ctx.mul(fh(x), y))
    assert adjoint(fh) == f
    assert kernel_dim(fh) == kernel_dim(f)


def test_adjoint_of_ubs():
    ctx = field(3, 3)
    b = 5
    fh = adjoint(ubs_poly(ctx, b, 1))
    assert fh == QPoly.from_terms(ctx, {5: ctx.frob(b, 5), 2: 1})


def test_dickson_layout_and_minor_indices():
    ctx = field(3, 3)
    f = QPoly(ctx, [1, 2, 3, 4, 5, 6])
    D = dickson_matrix(f)
    assert D.rows[0] == f.coeffs
    assert D.rows[1][0] == ctx.frob(f.coeffs[5], 1)
    assert D.rows[2][3] == ctx.frob(f.coeffs[1], 2)
    with pytest.raises(IndexError):
        minor(D, 0, 1)
    with pytest.raises(IndexError):
        minor(D, 1, 7)
    sub = [r[1:] for r in D.rows[1:]]
    assert minor(D, 1, 1) == field_det(ctx, sub)
    with pytest.raises(ValueError):
        submatrix_det_66(D)


def test_minor_with_zero_m_drops_m_terms():
    ctx = field(3, 3)
    b = 11
    D = r_poly(ctx, 0, b, 1).dickson_matrix()
    fp = ctx.frob_power
    expected = ctx.sum([fp(b, [2]), ctx.neg(fp(b, [0, 2, 3])), ctx.neg(fp(b, [1, 2, 4])),
                        fp(b, [0, 1, 2, 3, 4])])
    assert minor(D, 6, 1) == expected


def test_rank_mod_p_and_nullspace():
    M = np.array([[1, 2, 0], [2, 4, 0], [0, 1, 1]])
    assert rank_mod_p(M, 5) == 2
    N = nullspace_mod_p(M, 5)
    assert N.shape == (1, 3)
    assert not (M @ N.T % 5).any()


def test_batch_rank_matches_single():
    rng = np.random.default_rng(5)
    A = rng.integers(0, 3, (200, 5, 5))
    A[:50, 4] = A[:50, 3]
    assert batch_rank_mod_p(A, 3).tolist() == [rank_mod_p(a, 3) for a in A]


def test_log_batch_matches_scalar_elimination():
    ctx = field(3, 2)
    rng = np.random.default_rng(6)
    mats = rng.integers(0, ctx.order, (60, 4, 4))
    mats[:20, 3] = mats[:20, 0]
    mats[20:30, :, 1] = 0
    L = LogOps(ctx).encode(mats)
    assert log_batch_rank(ctx, L).tolist() == [field_rank(ctx, m.tolist()) for m in mats]
    assert log_batch_det(ctx, L).tolist() == [field_det(ctx, m.tolist()) for m in mats]

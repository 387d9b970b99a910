"""Acceptance gate: each test checks one criterion within its runtime budget."""

import numpy as np
import pytest

import oracles
from mrdscatter.equivalence import (
    automorphism_group,
    brute_force_gamma_equiv,
    distinguish_thm63,
    prop51_equivalent,
    u1_subspace,
    u2_subspace,
)
from mrdscatter.experiments import (
    SearchJob,
    _norm_fiber,
    b_domain,
    conjecture75_count,
    decide,
    minor_identity_suite,
    search_scattered,
    theorem71_witness,
    theorem72_verify,
)
from mrdscatter.field import FieldSpec, field
from mrdscatter.linset import (
    SubspaceU,
    dual_parameters,
    dual_subspace,
    is_scattered,
    orbit_decomposition,
    ubs_max_weights,
    ubs_valid,
    weight_distribution,
    weight_map,
)
from mrdscatter.qpoly import QPoly, dickson_rank, kernel_dim
from mrdscatter.rankcode import (
    code_from_subspace,
    is_mrd,
    middle_nucleus,
    min_distance,
    singleton_bound,
)


def valid_bs(ctx, s=1):
    return [b for b in range(1, ctx.order) if ubs_valid(ctx, b, s)]


def random_fs(ctx, count, rng):
    return [QPoly.random(ctx, rng) for _ in range(count)]


def test_c01_no_scattered_b_at_q2(criterion):
    with criterion("C1 q=2 n=3 has no scattered U_{b,1}", 1):
        res = search_scattered(SearchJob(FieldSpec(2, 1, 3)))
        assert res.n_tested == 54
        assert res.n_scattered == 0


@pytest.mark.parametrize("q", [3, 4])
def test_c02_scattered_b_exist(criterion, q):
    p, h = {3: (3, 1), 4: (2, 2)}[q]
    with criterion(f"C2 q={q} n=3 has a scattered U_{{b,1}}", 10):
        res = search_scattered(SearchJob(FieldSpec(p, h, 3), certify="per-norm"))
        assert res.n_scattered >= 1
        assert res.norm_violations == []


def test_c03_thm71_witnesses(criterion):
    with criterion("C3 witnesses in F_{q^2} for q in {5, 7}", 30):
        for q in (5, 7):
            rep = theorem71_witness(q)
            assert rep.in_fq2
            ctx = field(q, 3)
            assert is_scattered(SubspaceU.parametric(ctx, rep.b, 1), "both")


def test_c04_thm72(criterion):
    with criterion("C4 b^2 = -1 gives scattered U_{b,1} over F_{q^8}, q in {3, 5, 7}", 120):
        for q in (3, 5, 7):
            rep = theorem72_verify(q)
            ctx = field(q, 4)
            assert ctx.mul(rep.b, rep.b) == ctx.minus_one
            assert rep.scattered


def test_c05_iff_criterion_n4(criterion):
    with criterion("C5 scattered iff b^(q^4+1) = -1 at n=4 (q=3 full, q=5 sampled)", 300):
        ctx = field(3, 4)
        res = search_scattered(SearchJob(FieldSpec(3, 1, 4)))
        expected = set(_norm_fiber(ctx, ctx.minus_one))
        assert len(expected) == 82
        assert set(res.scattered) == expected

        ctx5 = field(5, 4)
        rng = np.random.default_rng(0)
        fiber = _norm_fiber(ctx5, ctx5.minus_one)
        inside = rng.choice(fiber, 200, replace=False).tolist()
        outside = []
        while len(outside) < 200:
            b = int(rng.integers(1, ctx5.order))
            if ubs_valid(ctx5, b, 1) and ctx5.norm(b) != ctx5.minus_one and b not in outside:
                outside.append(b)
        assert all(v.scattered for v in decide(ctx5, inside, 1))
        assert not any(v.scattered for v in decide(ctx5, outside, 1))


def test_c06_conjecture_counts(criterion):
    with criterion("C6 norm-class counts 6, 21, 46 at q = 3, 4, 5", 900):
        got = {q: conjecture75_count(q).count for q in (3, 4, 5)}
        assert got == {3: 6, 4: 21, 5: 46}


def test_c07_minor_identities(criterion):
    with criterion("C7 closed-form minors match direct determinants", 10):
        results = minor_identity_suite(5, 3, samples=100) + minor_identity_suite(3, 4, samples=100)
        assert {r.name for r in results} == {"minor_6_1", "minor_6_5", "minor_8_2", "block_det_6x6"}
        for r in results:
            assert r.total == 100
            assert r.ok, r.counterexamples[:3]


def test_c08_max_weight_two(criterion):
    with criterion("C8 max point weight <= 2 for all valid (b, s), q in {2, 3}, n in {2, 3}", 120):
        for p in (2, 3):
            for n in (2, 3):
                ctx = field(p, n)
                for s in range(1, ctx.m):
                    bs = valid_bs(ctx, s)
                    if bs:
                        assert ubs_max_weights(ctx, bs, s).max() <= 2


def test_c09_adjoint_weight_maps(criterion):
    with criterion("C9 L_f and L_fhat have equal weight maps, 50 f per (q, m)", 60):
        rng = np.random.default_rng(9)
        for p in (2, 3):
            for n in (2, 3):
                ctx = field(p, n)
                for f in random_fs(ctx, 50, rng):
                    assert weight_map(SubspaceU.graph(f)) == weight_map(SubspaceU.graph(f.adjoint()))


def test_c10_duality(criterion):
    with criterion("C10 complement of U_f is U_fhat; dual of U_{b,1} is U_{b^(q^(2n-1)), 2n-1}", 60):
        ctx = field(2, 3)
        rng = np.random.default_rng(10)
        for f in random_fs(ctx, 20, rng):
            comp = oracles.complement(ctx, SubspaceU.graph(f).fq_basis())
            hat = {tuple(v) for v in SubspaceU.graph(f.adjoint()).vectors().tolist()}
            assert comp == hat
        for p in (2, 3):
            ctx = field(p, 3)
            for b in valid_bs(ctx):
                b2, s2 = dual_parameters(ctx, b, 1)
                assert (b2, s2) == (ctx.frob(b, ctx.m - 1), ctx.m - 1)
                assert dual_subspace(SubspaceU.parametric(ctx, b, 1)) == \
                    SubspaceU.parametric(ctx, b2, s2)


def test_c11_group_orders(criterion):
    with criterion("C11 stabilizer orders 7, 63, 3 at q=2 n=3", 600):
        ctx = field(2, 3)
        U = SubspaceU.parametric(ctx, valid_bs(ctx)[0], 1)
        brute = automorphism_group(U, "bruteforce")
        assert len(brute) == 7
        assert {g.key() for g in brute} == {g.key() for g in automorphism_group(U)}
        assert len(automorphism_group(u1_subspace(ctx), "bruteforce")) == 63
        assert len(automorphism_group(u2_subspace(ctx, 1), "bruteforce")) == 3
        rep = distinguish_thm63(U)
        assert (rep.order_u1, rep.order_u2, rep.order_ubs) == (63, 3, 7)
        assert rep.distinct


def test_c12_norm_criterion_vs_bruteforce(criterion):
    with criterion("C12 norm criterion equals brute-force equivalence at q=2 n=2", 300):
        ctx = field(2, 2)
        bs = valid_bs(ctx)
        subs = {b: SubspaceU.parametric(ctx, b, 1) for b in bs}
        for b in bs:
            for c in bs:
                assert prop51_equivalent(ctx, b, 1, c, 1) == brute_force_gamma_equiv(subs[b], subs[c])


def test_c13_mrd_bridge(criterion):
    with criterion("C13 C_f is a (6, 6, 3; 5) MRD code; d = m - max weight otherwise", 60):
        ctx = field(3, 3)
        verdicts = decide(ctx, valid_bs(ctx), 1)
        good = next(v.b for v in verdicts if v.scattered)
        bad = [v.b for v in verdicts if not v.scattered][:5]
        C = code_from_subspace(SubspaceU.parametric(ctx, good, 1))
        prm = C.params()
        assert (prm.m, prm.n_cols, prm.q, prm.d) == (6, 6, 3, 5)
        assert is_mrd(C) and C.dim_fq == singleton_bound(C)
        for b in bad:
            U = SubspaceU.parametric(ctx, b, 1)
            assert min_distance(code_from_subspace(U)) == 4 == ctx.m - weight_distribution(U).max_weight


def test_c14_nucleus(criterion):
    with criterion("C14 brute-force middle nucleus at m=4, q=2 is the 16 scalar maps", 60):
        ctx = field(2, 2)
        C = code_from_subspace(SubspaceU.graph(QPoly.monomial(ctx, 1)))
        rep = middle_nucleus(C, "bruteforce")
        assert rep.size == 16
        scalars = {ctx.mul_matrix(a).tobytes() for a in range(ctx.order)}
        assert {np.asarray(z).tobytes() for z in rep.elements} == scalars


def test_c15_property_suites(criterion):
    with criterion("C15 partition identity, adjoint involution, Dickson rank, orbits", 120):
        rng = np.random.default_rng(15)
        subspaces = []
        for p, n in ((2, 2), (2, 3), (3, 2), (3, 3)):
            ctx = field(p, n)
            subspaces += [SubspaceU.parametric(ctx, b, 1) for b in valid_bs(ctx)[::3]]
            subspaces += [SubspaceU.graph(f) for f in random_fs(ctx, 10, rng)]
            subspaces += [u1_subspace(ctx)]
        for U in subspaces:
            assert weight_distribution(U).vector_count(U.ctx.q) == U.ctx.order - 1

        ctxs = [field(2, 2), field(2, 3), field(3, 2), field(3, 3), field(2, 2, h=2)]
        for i in range(500):
            ctx = ctxs[i % len(ctxs)]
            c = [ctx.random_element(rng) if rng.random() < 0.5 else 0 for _ in range(ctx.m)]
            f = QPoly(ctx, c)
            assert f.adjoint().adjoint() == f
            assert dickson_rank(f) == ctx.m - kernel_dim(f)

        ctx = field(3, 3)
        for b in valid_bs(ctx):
            U = SubspaceU.parametric(ctx, b, 1)
            wm = weight_map(U)
            for orbit in orbit_decomposition(U):
                assert len(orbit.points) == (ctx.q**ctx.n - 1) // (ctx.q - 1)
                assert {wm[P] for P in orbit.points} == {orbit.weight}


@pytest.mark.slow
def test_max_weight_two_at_larger_q(criterion):
    with criterion("extra: max point weight <= 2 for q in {4, 5}, n in {2, 3}", 300):
        for spec in (FieldSpec(2, 2, 2), FieldSpec(2, 2, 3), FieldSpec(5, 1, 2), FieldSpec(5, 1, 3)):
            from mrdscatter.field import make_field
            ctx = make_field(spec)
            for s in range(1, ctx.m):
                bs = b_domain(ctx, s)
                if bs:
                    assert ubs_max_weights(ctx, bs, s).max() <= 2

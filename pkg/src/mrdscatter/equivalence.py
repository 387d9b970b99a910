"""Equivalence of subspaces under GL/ΓL(2, q^{2n}) and their automorphism groups.

The norm criterion decides equivalence of two U_{b,s} in closed form.  The
brute-force routines enumerate all of ΓL(2, q^{2n}) and only run on fields
with at most ``BRUTE_FORCE_CAP`` elements; they exist to check the closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import NamedTuple

import numpy as np

from .errors import CapExceededError, CertificationError, InvalidSubspaceError
from .field import FieldCtx
from .linset import ProjPoint, SubspaceU, dual_parameters, ubs_valid, weight_map
from .qpoly import QPoly

BRUTE_FORCE_CAP = 2**8


@dataclass(frozen=True)
class SemilinearMap2:
    """(x, y) -> (alpha x^σ + beta y^σ, gamma x^σ + delta y^σ) with σ: z -> z^{p^e}."""

    ctx: FieldCtx
    alpha: int
    beta: int
    gamma: int
    delta: int
    e: int = 0

    def __post_init__(self):
        c = self.ctx
        if c.mul(self.alpha, self.delta) == c.mul(self.beta, self.gamma):
            raise ValueError("singular matrix")

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        c = self.ctx
        xs, ys = c.frob_p(x, self.e), c.frob_p(y, self.e)
        return (c.add(c.mul(self.alpha, xs), c.mul(self.beta, ys)),
                c.add(c.mul(self.gamma, xs), c.mul(self.delta, ys)))

    def image(self, U: SubspaceU) -> SubspaceU:
        return SubspaceU.from_basis(self.ctx, [self(x, y) for x, y in U.fq_basis()])

    def stabilizes(self, U: SubspaceU) -> bool:
        return all(U.contains(*self(x, y)) for x, y in U.fq_basis())

    def key(self) -> tuple[int, int, int, int, int]:
        return (self.e, self.alpha, self.beta, self.gamma, self.delta)

    @classmethod
    def diag(cls, ctx: FieldCtx, a: int, d: int) -> "SemilinearMap2":
        return cls(ctx, a, 0, 0, d)


def _solve_power(ctx: FieldCtx, target: int, e: int) -> int:
    """Some a with a^e = target, or ValueError when target is not an e-th power."""
    N1 = ctx.order - 1
    if target == 0:
        raise ValueError("target must be non-zero")
    lt = _log(ctx, target)
    g = gcd(e, N1)
    if lt % g:
        raise ValueError(f"{target} is not a {e}-th power")
    k = (lt // g) * pow(e // g, -1, N1 // g) % (N1 // g)
    return ctx.pow(ctx.primitive, k)


def _log(ctx: FieldCtx, a: int) -> int:
    if ctx.has_tables:
        return int(ctx.log[a])
    # baby-step giant-step on the multiplicative group
    N1 = ctx.order - 1
    step = int(N1**0.5) + 1
    g = ctx.primitive
    baby, cur = {}, 1
    for j in range(step):
        baby.setdefault(cur, j)
        cur = ctx.mul(cur, g)
    giant = ctx.inv(ctx.pow(g, step))
    cur = a
    for i in range(step + 1):
        if cur in baby:
            return (i * step + baby[cur]) % N1
        cur = ctx.mul(cur, giant)
    raise ValueError("discrete log not found")


class Normalization(NamedTuple):
    b: int
    s: int
    phi: SemilinearMap2


def normalize_to_ubs(ctx: FieldCtx, alpha: int, beta: int, s: int,
                     target_b: int | None = None) -> Normalization:
    """Map U_f, f = alpha x^{q^s} + beta x^{q^{s+n}}, onto some U_{b,s} by a diagonal map.

    Without ``target_b`` the result is b = alpha/beta and phi(x, y) = (x, y/beta).
    With ``target_b`` (which must have N(target_b) = N(alpha)/N(beta)) phi is
    diag(a, a^{q^{s+n}}/beta) where a^{q^s (q^n - 1)} = target_b beta / alpha.
    The image phi(U_f) = U_{b,s} is checked before returning.
    """
    if alpha == 0 or beta == 0:
        raise InvalidSubspaceError("alpha * beta = 0 (pseudoregulus type)")
    if ctx.norm(alpha) == ctx.norm(beta):
        raise InvalidSubspaceError("N(alpha) = N(beta)")
    ratio = ctx.div(alpha, beta)
    if target_b is None:
        b = ratio
        phi = SemilinearMap2.diag(ctx, 1, ctx.inv(beta))
    else:
        b = target_b
        if ctx.norm(b) != ctx.norm(ratio):
            raise InvalidSubspaceError("target b has the wrong norm")
        e = ctx.q**s * (ctx.q**ctx.n - 1)
        a = _solve_power(ctx, ctx.div(b, ratio), e)
        phi = SemilinearMap2.diag(ctx, a, ctx.div(ctx.frob(a, s + ctx.n), beta))
    f = QPoly.from_terms(ctx, {s: alpha, s + ctx.n: beta})
    if phi.image(SubspaceU.graph(f)) != SubspaceU.parametric(ctx, b, s, allow_degenerate=True):
        raise CertificationError("normalization map does not send U_f onto U_{b,s}")
    return Normalization(b, s, phi)


def duality_map(ctx: FieldCtx, b: int, s: int) -> SemilinearMap2:
    """Linear map (x, y) -> (alpha y, beta x) sending U_{b,s} onto its dual.

    alpha^{q^n - 1} = -1/b^{q^n - 1} and beta = (b^{2q^n} alpha^{q^n} + alpha)^{q^{n-s}}.
    """
    n, q = ctx.n, ctx.q
    alpha = _solve_power(ctx, ctx.neg(ctx.inv(ctx.pow(b, q**n - 1))), q**n - 1)
    beta = ctx.frob(ctx.add(ctx.mul(ctx.pow(b, 2 * q**n), ctx.frob(alpha, n)), alpha), n - s)
    return SemilinearMap2(ctx, 0, alpha, beta, 0)


def reduce_s(ctx: FieldCtx, b: int, s: int) -> tuple[int, int]:
    """Replace (b, s) with s > n by the parameters of the equivalent dual, so that s < n."""
    if s > ctx.n:
        return dual_parameters(ctx, b, s)
    return b, s


def prop51_equivalent(ctx: FieldCtx, b: int, s: int, b2: int, s2: int) -> bool:
    """Norm criterion for ΓL(2, q^{2n})-equivalence of U_{b,s} and U_{b2,s2}, 1 <= s, s2 < n.

    Equivalent iff s = s2 and N(b2) = N(b)^σ, or s + s2 = n and N(b2) N(b)^σ = 1,
    for some automorphism σ: z -> z^{p^i} of F_{q^n}.  When n = 2 both
    alternatives apply to s = s2 = 1 and both are tested.
    """
    n = ctx.n
    for t in (s, s2):
        if not 1 <= t < n:
            raise InvalidSubspaceError(f"s={t} outside 1..{n - 1}; apply reduce_s first")
    for bb, ss in ((b, s), (b2, s2)):
        if not ubs_valid(ctx, bb, ss):
            raise InvalidSubspaceError(f"invalid parameters b={bb}, s={ss}")
    N, N2 = ctx.norm(b), ctx.norm(b2)
    conj = {ctx.frob_p(N, i) for i in range(n * ctx.h)}
    if s == s2 and N2 in conj:
        return True
    if s + s2 == n and any(ctx.mul(N2, c) == 1 for c in conj):
        return True
    return False


def equivalent(ctx: FieldCtx, b: int, s: int, b2: int, s2: int) -> bool:
    """prop51_equivalent after moving both parameter sets into 1 <= s < n."""
    return prop51_equivalent(ctx, *reduce_s(ctx, b, s), *reduce_s(ctx, b2, s2))


# --- automorphism groups ---

def closed_form_group(ctx: FieldCtx, s: int, deg: int) -> list[SemilinearMap2]:
    """{diag(a, a^{q^s}) : a in F_{q^deg}^*}."""
    return [SemilinearMap2.diag(ctx, a, ctx.frob(a, s))
            for a in ctx.subfield_elements(deg) if a]


def automorphism_group(U: SubspaceU, strategy: str = "closed") -> list[SemilinearMap2]:
    """Linear maps of GL(2, q^{2n}) fixing U.

    "closed" (parametric U only) returns diag(a, a^{q^s}), a in F_{q^n}^*, after
    checking that each element fixes U; "bruteforce" searches all of GL(2, q^{2n}).
    """
    if strategy == "closed":
        if U.kind != "parametric":
            raise InvalidSubspaceError("closed-form group needs a parametric U_{b,s}")
        group = closed_form_group(U.ctx, U.s, U.ctx.n)
        for g in group:
            if not g.stabilizes(U):
                raise CertificationError(f"{g} does not fix {U}")
        return group
    if strategy == "bruteforce":
        return _bruteforce_maps(U, U, exponents=[0])
    raise ValueError(f"unknown strategy {strategy!r}")


def _check_cap(ctx: FieldCtx) -> None:
    if ctx.order > BRUTE_FORCE_CAP:
        raise CapExceededError(f"brute force needs q^(2n) <= {BRUTE_FORCE_CAP}, got {ctx.order}")


def _to_graph_map(W: SubspaceU) -> tuple[SemilinearMap2, np.ndarray]:
    """A shear M with M(W) a graph, and the lookup table of that graph."""
    ctx = W.ctx
    N = ctx.order
    pts = weight_map(W)
    if ProjPoint.INFINITY not in pts:
        M = SemilinearMap2.diag(ctx, 1, 1)
    else:
        # (x, y) -> (x + t y, y) moves the point <(-t, 1)> to infinity
        t = next(t for t in range(1, N)
                 if ProjPoint(ctx.neg(ctx.inv(t))) not in pts)
        M = SemilinearMap2(ctx, 1, t, 0, 1)
    WM = M.image(W)
    vec = WM.vectors()
    table = np.zeros(N, dtype=np.int64)
    table[vec[:, 0]] = vec[:, 1]
    return M, table


def _bruteforce_maps(U: SubspaceU, W: SubspaceU, exponents, first_only: bool = False):
    """All φ in ΓL(2, q^{2n}) with field automorphism among ``exponents`` and φ(U) = W.

    For a graph target y = w(x) the conditions on a basis (x_j, y_j) of U^σ read
    gamma x_j + delta y_j = w(alpha x_j + beta y_j); both sides are tabulated
    over all pairs and joined.
    """
    ctx = U.ctx
    _check_cap(ctx)
    N = ctx.order
    M, table = _to_graph_map(W)
    Minv = _inverse(M)
    elems = np.arange(N, dtype=np.int64)
    basis = U.fq_basis()
    found = []
    for e in exponents:
        X = np.array([ctx.frob_p(x, e) for x, _ in basis], dtype=np.int64)
        Y = np.array([ctx.frob_p(y, e) for _, y in basis], dtype=np.int64)
        AX = ctx.vmul(elems[:, None], X[None, :])
        BY = ctx.vmul(elems[:, None], Y[None, :])
        S = ctx.vadd(AX[:, None, :], BY[None, :, :]).reshape(N * N, -1)
        lhs = table[S]
        index: dict[bytes, list[int]] = {}
        for k, row in enumerate(S):
            index.setdefault(row.tobytes(), []).append(k)
        for k1, row in enumerate(lhs):
            for k2 in index.get(row.tobytes(), ()):
                a, b = divmod(k1, N)
                c, d = divmod(k2, N)
                if ctx.mul(a, d) == ctx.mul(b, c):
                    continue
                phi = _compose(Minv, SemilinearMap2(ctx, a, b, c, d, e))
                found.append(phi)
                if first_only:
                    return found
    return sorted(found, key=SemilinearMap2.key)


def _inverse(M: SemilinearMap2) -> SemilinearMap2:
    c = M.ctx
    if M.e:
        raise ValueError("only linear maps are inverted here")
    det = c.sub(c.mul(M.alpha, M.delta), c.mul(M.beta, M.gamma))
    di = c.inv(det)
    return SemilinearMap2(c, c.mul(M.delta, di), c.neg(c.mul(M.beta, di)),
                          c.neg(c.mul(M.gamma, di)), c.mul(M.alpha, di))


def _compose(L: SemilinearMap2, phi: SemilinearMap2) -> SemilinearMap2:
    """L ∘ phi for a linear L."""
    c = L.ctx
    return SemilinearMap2(
        c,
        c.add(c.mul(L.alpha, phi.alpha), c.mul(L.beta, phi.gamma)),
        c.add(c.mul(L.alpha, phi.beta), c.mul(L.beta, phi.delta)),
        c.add(c.mul(L.gamma, phi.alpha), c.mul(L.delta, phi.gamma)),
        c.add(c.mul(L.gamma, phi.beta), c.mul(L.delta, phi.delta)),
        phi.e,
    )


def brute_force_gamma_equiv(U: SubspaceU, W: SubspaceU) -> bool:
    """Whether some φ in ΓL(2, q^{2n}) maps U onto W, by exhaustive search."""
    return bool(_bruteforce_maps(U, W, range(U.ctx.d), first_only=True))


def brute_force_equivalence_map(U: SubspaceU, W: SubspaceU) -> SemilinearMap2 | None:
    found = _bruteforce_maps(U, W, range(U.ctx.d), first_only=True)
    return found[0] if found else None


# --- reference subspaces and the group-order distinguisher ---

def u1_subspace(ctx: FieldCtx, s: int = 1) -> SubspaceU:
    """{(x, x^{q^s})}."""
    return SubspaceU.graph(QPoly.monomial(ctx, s))


def u2_subspace(ctx: FieldCtx, delta: int, s: int = 1) -> SubspaceU:
    """{(x, delta x^{q^s} + x^{q^{m-s}})}."""
    return SubspaceU.graph(QPoly.from_terms(ctx, {s: delta, ctx.m - s: 1}))


@dataclass
class GroupReport:
    q: int
    n: int
    order_u1: int
    order_u2: int
    order_ubs: int

    @property
    def distinct(self) -> bool:
        return len({self.order_u1, self.order_u2, self.order_ubs}) == 3

    def to_dict(self) -> dict:
        return {"q": self.q, "n": self.n, "order_U1": self.order_u1,
                "order_U2": self.order_u2, "order_Ubs": self.order_ubs,
                "inequivalent": self.distinct}


def distinguish_thm63(U: SubspaceU) -> GroupReport:
    """Compare the linear automorphism group orders of U_1, U_2 and U_{b,s}."""
    if U.kind != "parametric":
        raise InvalidSubspaceError("needs a parametric U_{b,s}")
    ctx = U.ctx
    if ctx.n <= 2:
        raise InvalidSubspaceError("the group orders only separate the families for n > 2")
    q, n = ctx.q, ctx.n
    report = GroupReport(q, n, q**(2 * n) - 1, q**2 - 1, len(automorphism_group(U)))
    if report.order_ubs != q**n - 1:
        raise CertificationError(f"group of {U} has order {report.order_ubs}")
    return report


# --- equivalence-class report ---

@dataclass
class EquivalenceClass:
    norms: list[int]
    representative: int
    size: int


def equivalence_classes(ctx: FieldCtx, s: int, bs=None) -> list[EquivalenceClass]:
    """Partition valid b (or the given ``bs``) into classes of equivalent U_{b,s}."""
    if bs is None:
        bs = [b for b in range(1, ctx.order) if ubs_valid(ctx, b, s)]
    rs = reduce_s(ctx, 1, s)[1]
    by_norm: dict[int, list[int]] = {}
    for b in bs:
        by_norm.setdefault(ctx.norm(reduce_s(ctx, b, s)[0]), []).append(b)
    classes: list[EquivalenceClass] = []
    done: set[int] = set()
    for nv in sorted(by_norm):
        if nv in done:
            continue
        rep = by_norm[nv][0]
        rb = reduce_s(ctx, rep, s)[0]
        members = [m for m in sorted(by_norm) if m not in done
                   and prop51_equivalent(ctx, rb, rs, reduce_s(ctx, by_norm[m][0], s)[0], rs)]
        done.update(members)
        classes.append(EquivalenceClass(members, rep, sum(len(by_norm[m]) for m in members)))
    return classes

"""Rank-metric codes whose codewords are q-polynomials over F_{q^m}.

A codeword x -> c(x) is an F_q-linear map of F_{q^m}; its rank is the rank of
that map.  Codes are stored as a list of generator q-polynomials together with
the field over which they are spanned ("qm": left multiples a * g(x) with
a in F_{q^m}, "q": F_q-span, "p": F_p-span).  Everything else is computed from
the F_p-span of the d x d matrices of the codewords.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import CapExceededError, InvalidSubspaceError
from .field import FieldCtx
from .linalg import batch_rank_mod_p, nullspace_mod_p, rank_mod_p, row_space_mod_p
from .linset import SubspaceU
from .qpoly import QPoly

ENUMERATION_CAP = 2**22
NUCLEUS_CAP = 2**24


@dataclass(frozen=True)
class CodeParams:
    m: int
    n_cols: int
    q: int
    d: int

    def __str__(self) -> str:
        return f"({self.m}, {self.n_cols}, {self.q}; {self.d})"


class RankCode:
    """The span of ``generators`` over F_{q^m}, F_q or F_p, depending on ``linearity``."""

    def __init__(self, ctx: FieldCtx, generators, linearity: str = "qm"):
        if linearity not in ("qm", "q", "p"):
            raise ValueError(f"unknown linearity {linearity!r}")
        self.ctx = ctx
        self.generators = list(generators)
        self.linearity = linearity
        self._span: np.ndarray | None = None
        self._d: int | None = None

    @property
    def m(self) -> int:
        return self.ctx.m

    def _scalars(self) -> list[int]:
        ctx = self.ctx
        if self.linearity == "qm":
            return [ctx.p**i for i in range(ctx.d)]
        if self.linearity == "q":
            return ctx.fp_basis_of_fq
        return [1]

    def fp_span(self) -> np.ndarray:
        """RREF basis over F_p of the code, each codeword flattened to d*d digits."""
        if self._span is None:
            ctx = self.ctx
            rows = [(g.matrix_fp() @ ctx.mul_matrix(a) % ctx.p).ravel()
                    for g in self.generators for a in self._scalars()]
            self._span = row_space_mod_p(np.array(rows, dtype=np.int64), ctx.p)
        return self._span

    @property
    def dim_fp(self) -> int:
        return self.fp_span().shape[0]

    @property
    def dim_fq(self) -> int:
        return self.dim_fp // self.ctx.h

    @property
    def size(self) -> int:
        return self.ctx.p**self.dim_fp

    def contains_matrix(self, L: np.ndarray) -> bool:
        ctx = self.ctx
        return rank_mod_p(np.vstack([self.fp_span(), L.ravel()]), ctx.p) == self.dim_fp

    def contains(self, f: QPoly) -> bool:
        return self.contains_matrix(f.matrix_fp())

    def __eq__(self, other) -> bool:
        if not isinstance(other, RankCode) or other.ctx is not self.ctx:
            return NotImplemented
        return np.array_equal(self.fp_span(), other.fp_span())

    def __hash__(self):
        return hash(self.fp_span().tobytes())

    def codeword_matrices(self) -> np.ndarray:
        """All codewords as F_p matrices, shape (size, d, d)."""
        ctx = self.ctx
        if self.size > ENUMERATION_CAP:
            raise CapExceededError(f"code of size {self.size} exceeds the enumeration cap")
        k = self.dim_fp
        coeffs = np.array(np.unravel_index(np.arange(self.size), (ctx.p,) * k)).T if k else \
            np.zeros((1, 0), dtype=np.int64)
        return (coeffs @ self.fp_span() % ctx.p).reshape(-1, ctx.d, ctx.d)

    def min_distance(self) -> int:
        if self._d is None:
            self._d = min_distance(self)
        return self._d

    def params(self) -> CodeParams:
        return CodeParams(self.m, self.m, self.ctx.q, self.min_distance())

    def __repr__(self) -> str:
        return f"RankCode(m={self.m}, {len(self.generators)} generators over {self.linearity})"


def code_from_subspace(U: SubspaceU) -> RankCode:
    """C_f = {a f(x) + c x : a, c in F_{q^m}} for U = U_f."""
    f = U.poly if U.is_graph_form else U.to_graph().poly
    if all(a == 0 for a in f.coeffs[1:]):
        raise InvalidSubspaceError("f is a scalar multiple of x; C_f would not have dimension 2m")
    return RankCode(U.ctx, [f, QPoly.identity(U.ctx)], "qm")


def _ranks_fq(ctx: FieldCtx, mats: np.ndarray, chunk: int = 1 << 15) -> np.ndarray:
    out = np.empty(mats.shape[0], dtype=np.int64)
    for i in range(0, mats.shape[0], chunk):
        out[i:i + chunk] = batch_rank_mod_p(mats[i:i + chunk], ctx.p)
    return out // ctx.h


def min_distance(C: RankCode) -> int:
    """Minimum rank of a non-zero codeword.

    For a two-generator F_{q^m}-code {a g0 + c g1} only the q^m + 1 projective
    representatives (0 : 1) and (1 : c) are checked, since left multiplication
    by a non-zero scalar does not change the rank.  Otherwise every codeword is
    enumerated.
    """
    ctx = C.ctx
    if C.dim_fp == 0:
        raise ValueError("empty code")
    if C.linearity == "qm" and len(C.generators) == 1:
        return C.generators[0].rank_fq()
    if C.linearity == "qm" and len(C.generators) == 2 and C.dim_fq == 2 * C.m:
        g0, g1 = C.generators
        L0, L1 = g0.matrix_fp(), g1.matrix_fp()
        best = g1.rank_fq()
        basis = np.stack([ctx.mul_matrix(ctx.p**i) for i in range(ctx.d)])
        chunk = 1 << 14
        for start in range(0, ctx.order, chunk):
            cs = np.arange(start, min(start + chunk, ctx.order))
            Mc = np.einsum("bi,ijk->bjk", ctx.to_digit_array(cs), basis) % ctx.p
            mats = (L0[None] + np.einsum("ij,bjk->bik", L1, Mc)) % ctx.p
            best = min(best, int(_ranks_fq(ctx, mats).min()))
        return best
    mats = C.codeword_matrices()[1:]
    return int(_ranks_fq(ctx, mats).min())


def singleton_bound(C: RankCode, d: int | None = None) -> int:
    """Largest F_q-dimension allowed for distance d: m (m - d + 1)."""
    d = C.min_distance() if d is None else d
    return C.m * (C.m - d + 1)


def is_mrd(C: RankCode) -> bool:
    return C.dim_fq == singleton_bound(C)


def adjoint_code(C: RankCode) -> RankCode:
    """The code spanned by the adjoints of the generators."""
    return RankCode(C.ctx, [g.adjoint() for g in C.generators], C.linearity)


def twisted_gabidulin(ctx: FieldCtx, mu: int, h_exp: int, s: int) -> RankCode:
    """{a0 x + a1 x^{q^s} + mu a0^{q^h} x^{q^{2s}} : a0, a1 in F_{q^m}}.

    mu must be 0 or have N_{q^m/q}(mu) != 1; for gcd(s, m) = 1 this is the same
    as the norm from F_{q^{sm}} down to F_{q^s} being different from 1.
    """
    m = ctx.m
    if gcd(s, m) != 1:
        raise InvalidSubspaceError(f"gcd(s={s}, m={m}) != 1")
    if mu != 0 and ctx.norm(mu, from_deg=m, to_deg=1) == 1:
        raise InvalidSubspaceError(f"N(mu) = 1 for mu={mu}")
    gens = []
    for i in range(ctx.d):
        w = ctx.p**i
        gens.append(QPoly.from_terms(ctx, {0: w, 2 * s: ctx.mul(mu, ctx.frob(w, h_exp))}))
        gens.append(QPoly.monomial(ctx, s, w))
    return RankCode(ctx, gens, "p")


# --- middle nucleus ---

@dataclass
class NucleusReport:
    strategy: str
    size: int
    elements: list | None = None

    def to_dict(self) -> dict:
        return {"strategy": self.strategy, "size": self.size}


def scalar_maps_in_nucleus(C: RankCode) -> bool:
    """Whether x -> alpha c(x) stays in C for every codeword c and alpha in F_{q^m}."""
    ctx = C.ctx
    span = C.fp_span().reshape(-1, ctx.d, ctx.d)
    for i in range(ctx.d):
        Ma = ctx.mul_matrix(ctx.p**i)
        for L in span:
            if not C.contains_matrix(L @ Ma % ctx.p):
                return False
    return True


def middle_nucleus(C: RankCode, strategy: str = "closed") -> NucleusReport:
    """{Z : Z C in C for all C in the code}, with Z acting after the codeword.

    "closed" checks that all q^m scalar maps lie in the nucleus and reports
    that many elements; "bruteforce" tries every m x m matrix over F_q (only for
    q prime and q^{m^2} <= NUCLEUS_CAP) and returns the matrices found.
    """
    ctx = C.ctx
    if strategy == "closed":
        if not scalar_maps_in_nucleus(C):
            raise ValueError("scalar maps do not preserve the code; no closed form applies")
        return NucleusReport("closed", ctx.q**ctx.m)
    if strategy != "bruteforce":
        raise ValueError(f"unknown strategy {strategy!r}")
    if ctx.h != 1 or ctx.q**(ctx.m**2) > NUCLEUS_CAP:
        raise CapExceededError("brute-force nucleus needs prime q and q^(m^2) <= 2^24")
    p, d = ctx.p, ctx.d
    H = nullspace_mod_p(C.fp_span(), p)  # parity checks on flattened codewords
    gens = C.fp_span().reshape(-1, d, d)
    total = p**(d * d)
    found = []
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        Z = np.array(np.unravel_index(idx, (p,) * (d * d))).T.reshape(-1, d, d)
        ok = np.ones(len(idx), dtype=bool)
        for L in gens:
            prod = np.einsum("ij,bjk->bik", L, Z) % p
            ok &= ~((prod.reshape(len(idx), -1) @ H.T % p).any(axis=1))
        found.extend(Z[ok])
    return NucleusReport("bruteforce", len(found), found)


def code_report(C: RankCode, nucleus_strategy: str = "closed") -> dict:
    params = C.params()
    nuc = middle_nucleus(C, nucleus_strategy)
    return {
        "params": {"m": params.m, "n": params.n_cols, "q": params.q, "d": params.d},
        "dim_fq": C.dim_fq,
        "mrd": is_mrd(C),
        "singleton_dim": singleton_bound(C),
        "nucleus": nuc.to_dict(),
        "generators": [g.to_list() for g in C.generators],
        "linearity": C.linearity,
    }

"""Linearized polynomials sum a_i x^{q^i} over F_{q^m}, m = 2n.

A ``QPoly`` is an F_q-linear endomorphism of F_{q^m}; coefficients are reduced
modulo x^{q^m} - x, so there are always exactly m of them.  Ranks and kernels
are computed on the F_p matrix of the map (``matrix_fp``); the Dickson matrix
gives the same rank over F_{q^m} and is what the minor identities live on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FieldCtx
from .linalg import field_det, field_rank, rank_mod_p


class QPoly:
    """f(x) = sum_i coeffs[i] * x^{q^i} over the big field of ``ctx``."""

    def __init__(self, ctx: FieldCtx, coeffs):
        m = ctx.m
        folded = [0] * m
        for i, a in enumerate(coeffs):
            folded[i % m] = ctx.add(folded[i % m], int(a))
        self.ctx = ctx
        self.coeffs = tuple(folded)

    @classmethod
    def zero(cls, ctx: FieldCtx) -> "QPoly":
        return cls(ctx, [0] * ctx.m)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "QPoly":
        return cls.monomial(ctx, 0, 1)

    @classmethod
    def monomial(cls, ctx: FieldCtx, i: int, a: int = 1) -> "QPoly":
        c = [0] * ctx.m
        c[i % ctx.m] = a
        return cls(ctx, c)

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: dict[int, int]) -> "QPoly":
        c = [0] * ctx.m
        for i, a in terms.items():
            c[i % ctx.m] = ctx.add(c[i % ctx.m], a)
        return cls(ctx, c)

    @classmethod
    def random(cls, ctx: FieldCtx, rng: np.random.Generator) -> "QPoly":
        return cls(ctx, [ctx.random_element(rng) for _ in range(ctx.m)])

    @property
    def m(self) -> int:
        return self.ctx.m

    def __eq__(self, other) -> bool:
        return (isinstance(other, QPoly) and other.ctx is self.ctx
                and other.coeffs == self.coeffs)

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        terms = [f"{a}*x^(q^{i})" for i, a in enumerate(self.coeffs) if a]
        return f"QPoly({' + '.join(terms) or '0'})"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def to_list(self) -> list[int]:
        return list(self.coeffs)

    def __call__(self, x: int) -> int:
        ctx = self.ctx
        return ctx.sum(ctx.mul(a, ctx.frob(x, i)) for i, a in enumerate(self.coeffs) if a)

    def evaluate_many(self, xs) -> np.ndarray:
        """Vectorised evaluation on an integer array of encodings."""
        ctx = self.ctx
        return ctx.from_digit_array(ctx.to_digit_array(xs) @ self.matrix_fp() % ctx.p)

    def __add__(self, other: "QPoly") -> "QPoly":
        return QPoly(self.ctx, [self.ctx.add(a, b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "QPoly":
        return QPoly(self.ctx, [self.ctx.neg(a) for a in self.coeffs])

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def scale(self, a: int) -> "QPoly":
        """The map x -> a * f(x)."""
        return QPoly(self.ctx, [self.ctx.mul(a, c) for c in self.coeffs])

    def compose(self, other: "QPoly") -> "QPoly":
        """The map x -> self(other(x))."""
        ctx, m = self.ctx, self.m
        out = [0] * m
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[(i + j) % m] = ctx.add(out[(i + j) % m], ctx.mul(a, ctx.frob(b, i)))
        return QPoly(ctx, out)

    def adjoint(self) -> "QPoly":
        """Adjoint with respect to (x, y) -> Tr_{q^m/q}(xy)."""
        ctx, m = self.ctx, self.m
        return QPoly(ctx, [ctx.frob(self.coeffs[(m - i) % m], i) for i in range(m)])

    def matrix_fp(self) -> np.ndarray:
        """d x d matrix over F_p acting on row vectors of digits."""
        cached = self.__dict__.get("_matrix_fp")
        if cached is not None:
            return cached
        ctx = self.ctx
        L = np.zeros((ctx.d, ctx.d), dtype=np.int64)
        for i, a in enumerate(self.coeffs):
            if a:
                L += ctx.frob_matrix(i) @ ctx.mul_matrix(a)
        L %= ctx.p
        self.__dict__["_matrix_fp"] = L
        return L

    def rank_fq(self) -> int:
        return rank_mod_p(self.matrix_fp(), self.ctx.p) // self.ctx.h

    def kernel_dim(self) -> int:
        """dim_{F_q} ker f = m - rank_{F_q} f."""
        return self.m - self.rank_fq()

    def dickson_matrix(self) -> "DicksonMatrix":
        ctx, m = self.ctx, self.m
        rows = tuple(tuple(ctx.frob(self.coeffs[(j - i) % m], i) for j in range(m))
                     for i in range(m))
        return DicksonMatrix(ctx, rows)

    def dickson_rank(self) -> int:
        return self.dickson_matrix().rank()


@dataclass(frozen=True)
class DicksonMatrix:
    """m x m matrix with (i, j) entry a_{(j-i) mod m}^{q^i}, 0-indexed."""

    ctx: FieldCtx
    rows: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def rank(self) -> int:
        return field_rank(self.ctx, self.rows)

    def det(self) -> int:
        return field_det(self.ctx, self.rows)

    def minor(self, i: int, j: int) -> int:
        """Determinant after deleting row i and column j (both 1-indexed)."""
        n = self.size
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexError(f"minor index ({i}, {j}) outside 1..{n}")
        sub = [r[:j - 1] + r[j:] for k, r in enumerate(self.rows) if k != i - 1]
        return field_det(self.ctx, sub)

    def submatrix_det(self, row_idx, col_idx) -> int:
        return field_det(self.ctx, [[self.rows[r][c] for c in col_idx] for r in row_idx])


# --- functional interface ---

def evaluate(f: QPoly, x: int) -> int:
    return f(x)


def compose(f: QPoly, g: QPoly) -> QPoly:
    return f.compose(g)


def adjoint(f: QPoly) -> QPoly:
    return f.adjoint()


def kernel_dim(f: QPoly) -> int:
    return f.kernel_dim()


def dickson_matrix(f: QPoly) -> DicksonMatrix:
    return f.dickson_matrix()


def dickson_rank(f: QPoly) -> int:
    return f.dickson_rank()


def minor(D: DicksonMatrix, i: int, j: int) -> int:
    return D.minor(i, j)


def submatrix_det_66(D: DicksonMatrix) -> int:
    """det of the 8x8 Dickson matrix with its first two columns and last two rows removed."""
    if D.size != 8:
        raise ValueError(f"expected an 8x8 Dickson matrix, got {D.size}x{D.size}")
    return D.submatrix_det(range(6), range(2, 8))


def ubs_poly(ctx: FieldCtx, b: int, s: int) -> QPoly:
    """b x^{q^s} + x^{q^{s+n}}."""
    return QPoly.from_terms(ctx, {s: b, s + ctx.n: 1})


def r_poly(ctx: FieldCtx, mval: int, b: int, s: int = 1) -> QPoly:
    """r_{m,b}(x) = m x + b x^{q^s} + x^{q^{s+n}}, whose kernel is the weight of <(1, -m)>."""
    return QPoly.from_terms(ctx, {0: mval, s: b, s + ctx.n: 1})

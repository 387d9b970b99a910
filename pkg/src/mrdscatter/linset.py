"""F_q-subspaces of rank 2n of F_{q^{2n}} x F_{q^{2n}} and their linear sets on PG(1, q^{2n}).

A point of the projective line is ``ProjPoint(v)`` for <(1, v)> or
``ProjPoint.INFINITY`` for <(0, 1)>.  The weight of a point is the F_q-dimension
of its intersection with U.  For graph subspaces U_f the weight of <(1, v)> is
dim ker(f(x) - v x), so every weight can be read off a single pass over the
values f(x)/x; this is the image-count path.  The Dickson path instead checks,
for every m, that the Dickson matrix of f(x) + m x has rank at least 2n - 1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from math import gcd

import numpy as np

from .errors import CapExceededError, CertificationError, InvalidSubspaceError
from .field import FieldCtx
from .linalg import LogOps, field_rank, log_batch_rank, nullspace_mod_p, rank_mod_p, row_space_mod_p
from .qpoly import QPoly, ubs_poly


@dataclass(frozen=True, order=True)
class ProjPoint:
    """<(1, slope)>, or <(0, 1)> when ``slope`` is None."""

    slope: int | None

    @property
    def is_infinity(self) -> bool:
        return self.slope is None

    def __repr__(self) -> str:
        return "ProjPoint(inf)" if self.slope is None else f"ProjPoint({self.slope})"


ProjPoint.INFINITY = ProjPoint(None)


@dataclass
class WeightDistribution:
    """Number of points of each weight in a linear set."""

    counts: dict[int, int] = dc_field(default_factory=dict)

    @property
    def size(self) -> int:
        return sum(self.counts.values())

    @property
    def max_weight(self) -> int:
        return max(self.counts, default=0)

    def vector_count(self, q: int) -> int:
        """Number of non-zero vectors covered: sum over points of q^w - 1."""
        return sum((q**w - 1) * c for w, c in self.counts.items())

    def to_dict(self) -> dict:
        return {"weights": [[w, self.counts[w]] for w in sorted(self.counts)],
                "size": self.size}

    @classmethod
    def from_dict(cls, data: dict) -> "WeightDistribution":
        return cls({int(w): int(c) for w, c in data["weights"]})


def ubs_valid(ctx: FieldCtx, b: int, s: int) -> bool:
    """Side conditions of U_{b,s}: b != 0, N_{q^{2n}/q^n}(b) != 1, gcd(s, n) = 1, 1 <= s < 2n."""
    return (b != 0 and 1 <= s <= ctx.m - 1 and gcd(s, ctx.n) == 1
            and ctx.norm(b) != 1)


class SubspaceU:
    """An F_q-subspace of rank 2n; parametric U_{b,s}, graph U_f, or an explicit basis."""

    def __init__(self, ctx: FieldCtx, kind: str, *, b=None, s=None, f=None, fp_rows=None):
        self.ctx = ctx
        self.kind = kind
        self.b, self.s, self._f = b, s, f
        self._fp_rows = fp_rows

    @classmethod
    def parametric(cls, ctx: FieldCtx, b: int, s: int, allow_degenerate: bool = False) -> "SubspaceU":
        """U_{b,s} = {(x, b x^{q^s} + x^{q^{s+n}})}.

        Rejects b = 0, N(b) = 1 and gcd(s, n) != 1 unless ``allow_degenerate``
        (the degenerate b are kept for negative tests only).
        """
        if not 1 <= s <= ctx.m - 1:
            raise InvalidSubspaceError(f"s={s} outside 1..{ctx.m - 1}")
        if not allow_degenerate:
            if gcd(s, ctx.n) != 1:
                raise InvalidSubspaceError(f"gcd(s={s}, n={ctx.n}) != 1")
            if b == 0:
                raise InvalidSubspaceError("b must be non-zero")
            if ctx.norm(b) == 1:
                raise InvalidSubspaceError(f"N(b) = 1 for b={b}")
        return cls(ctx, "parametric", b=b, s=s)

    @classmethod
    def graph(cls, f: QPoly) -> "SubspaceU":
        return cls(f.ctx, "graph", f=f)

    @classmethod
    def from_basis(cls, ctx: FieldCtx, pairs) -> "SubspaceU":
        """Span over F_q of 2n F_q-independent vectors (u, v)."""
        pairs = [(int(u), int(v)) for u, v in pairs]
        if len(pairs) != ctx.m:
            raise InvalidSubspaceError(f"expected {ctx.m} basis vectors, got {len(pairs)}")
        rows = _expand_fq(ctx, pairs)
        if rank_mod_p(rows, ctx.p) != ctx.d:
            raise InvalidSubspaceError("basis vectors are not F_q-independent")
        return cls(ctx, "basis", fp_rows=row_space_mod_p(rows, ctx.p))

    @classmethod
    def from_fp_rows(cls, ctx: FieldCtx, rows) -> "SubspaceU":
        rows = row_space_mod_p(rows, ctx.p)
        if rows.shape[0] != ctx.d:
            raise InvalidSubspaceError(f"F_p-dimension {rows.shape[0]}, expected {ctx.d}")
        return cls(ctx, "basis", fp_rows=rows)

    @property
    def poly(self) -> QPoly | None:
        """The q-polynomial f with U = U_f, or None for basis-form subspaces."""
        if self.kind == "parametric":
            if self._f is None:
                self._f = ubs_poly(self.ctx, self.b, self.s)
            return self._f
        return self._f

    @property
    def is_graph_form(self) -> bool:
        return self.kind in ("parametric", "graph")

    def fp_rows(self) -> np.ndarray:
        """Canonical F_p basis (RREF rows of length 2d: digits of u then of v)."""
        if self._fp_rows is None:
            ctx = self.ctx
            L = self.poly.matrix_fp()
            rows = np.concatenate([np.eye(ctx.d, dtype=np.int64), L], axis=1)
            self._fp_rows = row_space_mod_p(rows, ctx.p)
        return self._fp_rows

    def fq_basis(self) -> list[tuple[int, int]]:
        """An F_q-basis of U as pairs of encodings."""
        ctx = self.ctx
        if self.is_graph_form:
            f = self.poly
            return [(e, f(e)) for e in ctx.fq_basis]
        return _fq_basis_from_fp(ctx, self.fp_rows())

    def vectors(self) -> np.ndarray:
        """All q^{2n} vectors of U as an (N, 2) array of encodings."""
        ctx = self.ctx
        if ctx.order > ctx.spec.element_cap:
            raise CapExceededError("vector enumeration beyond element_cap")
        coeffs = ctx.to_digit_array(np.arange(ctx.order))
        vecs = coeffs @ self.fp_rows() % ctx.p
        return np.stack([ctx.from_digit_array(vecs[:, :ctx.d]),
                         ctx.from_digit_array(vecs[:, ctx.d:])], axis=1)

    def contains(self, u: int, v: int) -> bool:
        if self.is_graph_form:
            return self.poly(u) == v
        ctx = self.ctx
        row = np.array(ctx.digits(u) + ctx.digits(v), dtype=np.int64)
        return rank_mod_p(np.vstack([self.fp_rows(), row]), ctx.p) == ctx.d

    def __eq__(self, other) -> bool:
        """Equality as sets of vectors."""
        if not isinstance(other, SubspaceU) or other.ctx is not self.ctx:
            return NotImplemented
        return np.array_equal(self.fp_rows(), other.fp_rows())

    def __hash__(self):
        return hash(self.fp_rows().tobytes())

    def to_graph(self) -> "SubspaceU":
        """Rewrite as U_f when <(0, 1)> is not a point of the linear set."""
        if self.is_graph_form:
            return SubspaceU.graph(self.poly)
        ctx = self.ctx
        pairs = self.fq_basis()
        us = [u for u, _ in pairs]
        if rank_mod_p(_expand_fq(ctx, [(u, 0) for u in us])[:, :ctx.d], ctx.p) != ctx.d:
            raise InvalidSubspaceError("subspace meets <(0,1)>; it is not a graph")
        return SubspaceU.graph(qpoly_from_values(ctx, us, [v for _, v in pairs]))

    def __repr__(self) -> str:
        if self.kind == "parametric":
            return f"SubspaceU(b={self.b}, s={self.s})"
        if self.kind == "graph":
            return f"SubspaceU(graph {self._f})"
        return f"SubspaceU(basis, F_p-rank {self.fp_rows().shape[0]})"


def _expand_fq(ctx: FieldCtx, pairs) -> np.ndarray:
    """F_p rows spanning the F_q-span of the given pairs."""
    rows = []
    for u, v in pairs:
        for w in ctx.fp_basis_of_fq:
            rows.append(ctx.digits(ctx.mul(w, u)) + ctx.digits(ctx.mul(w, v)))
    return np.array(rows, dtype=np.int64).reshape(len(rows), 2 * ctx.d)


def _fq_basis_from_fp(ctx: FieldCtx, rows) -> list[tuple[int, int]]:
    basis: list[tuple[int, int]] = []
    for r in rows:
        cand = (ctx.from_digits(r[:ctx.d]), ctx.from_digits(r[ctx.d:]))
        if rank_mod_p(_expand_fq(ctx, basis + [cand]), ctx.p) == ctx.h * (len(basis) + 1):
            basis.append(cand)
    return basis


def qpoly_from_values(ctx: FieldCtx, xs, ys) -> QPoly:
    """The unique q-polynomial with f(xs[j]) = ys[j] on an F_q-basis xs."""
    m = ctx.m
    # Moore system: sum_i a_i x_j^{q^i} = y_j
    A = [[ctx.frob(x, i) for i in range(m)] + [y] for x, y in zip(xs, ys)]
    for c in range(m):
        k = next(i for i in range(c, m) if A[i][c] != 0)
        A[c], A[k] = A[k], A[c]
        inv = ctx.inv(A[c][c])
        A[c] = [ctx.mul(inv, a) for a in A[c]]
        for i in range(m):
            if i != c and A[i][c] != 0:
                fac = A[i][c]
                A[i] = [ctx.sub(a, ctx.mul(fac, b)) for a, b in zip(A[i], A[c])]
    return QPoly(ctx, [A[i][m] for i in range(m)])


# --- image-count kernels ---

@functools.lru_cache(maxsize=64)
def _ubs_exponents(ctx: FieldCtx, s: int) -> tuple[np.ndarray, np.ndarray]:
    # for x = g^k: log(x^{q^s - 1}) and log(x^{q^{s+n} - 1})
    N1 = ctx.order - 1
    k = np.arange(N1, dtype=np.int64)
    e1 = (pow(ctx.q, s % ctx.m, N1) - 1) % N1
    e2 = (pow(ctx.q, (s + ctx.n) % ctx.m, N1) - 1) % N1
    return k * e1 % N1, k * e2 % N1


def ubs_slope_logs(ctx: FieldCtx, bs, s: int) -> np.ndarray:
    """Logs of (b x^{q^s} + x^{q^{s+n}}) / x over all x = g^k != 0, for each b.

    Returns shape (len(bs), order - 1); a zero value is encoded as order - 1.
    """
    ops = LogOps(ctx)
    a1, a2 = _ubs_exponents(ctx, s)
    lb = ops.encode(np.atleast_1d(np.asarray(bs, dtype=np.int64)))
    t1 = ops.mul(lb[:, None], a1[None, :])
    return ops.add(t1, np.broadcast_to(a2, t1.shape))


def ubs_max_weights(ctx: FieldCtx, bs, s: int) -> np.ndarray:
    """Largest point weight of L_{b,s} for each b, from the multiplicities of f(x)/x."""
    bs = list(bs)
    table = _weight_of_count(ctx.q)
    out = np.empty(len(bs), dtype=np.int64)
    per = max(1, (1 << 22) // ctx.order)
    for i in range(0, len(bs), per):
        srt = np.sort(ubs_slope_logs(ctx, bs[i:i + per], s), axis=1)
        for j, row in enumerate(srt):
            cuts = np.flatnonzero(np.diff(row)) + 1
            runs = np.diff(np.concatenate(([0], cuts, [row.size])))
            out[i + j] = table[int(runs.max())]
    return out


def _graph_slopes_tables(f: QPoly) -> np.ndarray:
    ctx = f.ctx
    xs = ctx.exp
    fx = f.evaluate_many(xs)
    N1 = ctx.order - 1
    lv = np.where(fx == 0, N1, (ctx.log[fx] - np.arange(N1)) % N1)
    return LogOps(ctx).decode(lv)


def _powers_block(ctx: FieldCtx, g: int, size: int) -> np.ndarray:
    """Digits of g^0 .. g^{size-1}, built by doubling."""
    out = np.zeros((1, ctx.d), dtype=np.int64)
    out[0, 0] = 1
    while out.shape[0] < size:
        step = ctx.mul_matrix(ctx.pow(g, out.shape[0]))
        out = np.concatenate([out, out @ step % ctx.p])
    return out[:size]


def _graph_slopes_digits(f: QPoly, chunk: int = 1 << 16):
    """Yield chunks of f(x)/x over all x != 0 without log tables."""
    ctx = f.ctx
    g = ctx.primitive
    ginv = ctx.inv(g)
    total = ctx.order - 1
    chunk = min(chunk, total)
    X = _powers_block(ctx, g, chunk)
    Xi = _powers_block(ctx, ginv, chunk)
    step = ctx.mul_matrix(ctx.pow(g, chunk))
    step_inv = ctx.mul_matrix(ctx.pow(ginv, chunk))
    L = f.matrix_fp()
    done = 0
    while done < total:
        take = min(chunk, total - done)
        FX = X[:take] @ L % ctx.p
        yield ctx.from_digit_array(ctx.digit_mul(FX, Xi[:take]))
        done += take
        X = X @ step % ctx.p
        Xi = Xi @ step_inv % ctx.p


def slope_counts(U: SubspaceU) -> tuple[np.ndarray, int]:
    """(counts, at_infinity): non-zero vectors of U on each <(1, v)>, indexed by v, and on <(0,1)>."""
    ctx = U.ctx
    if U.is_graph_form:
        if ctx.has_tables:
            if U.kind == "parametric":
                vals = LogOps(ctx).decode(ubs_slope_logs(ctx, [U.b], U.s)[0])
            else:
                vals = _graph_slopes_tables(U.poly)
            return np.bincount(vals, minlength=ctx.order), 0
        counts = np.zeros(ctx.order, dtype=np.int64)
        for vals in _graph_slopes_digits(U.poly):
            counts += np.bincount(vals, minlength=ctx.order)
        return counts, 0
    vecs = U.vectors()
    u, v = vecs[:, 0], vecs[:, 1]
    inf = int(np.count_nonzero((u == 0) & (v != 0)))
    nz = u != 0
    slopes = ctx.vmul(v[nz], _vinv(ctx, u[nz]))
    return np.bincount(slopes, minlength=ctx.order), inf


def _vinv(ctx: FieldCtx, a: np.ndarray) -> np.ndarray:
    return ctx.exp[(-ctx.log[a]) % (ctx.order - 1)]


def _weight_of_count(q: int) -> dict[int, int]:
    out, w = {}, 0
    while q**w - 1 <= 10**18:
        out[q**w - 1] = w
        w += 1
        if w > 64:
            break
    return out


def weight_map(U: SubspaceU) -> dict[ProjPoint, int]:
    """Weight of every point of L_U (points of weight 0 omitted)."""
    counts, inf = slope_counts(U)
    table = _weight_of_count(U.ctx.q)
    out = {ProjPoint(int(v)): table[int(counts[v])] for v in np.nonzero(counts)[0]}
    if inf:
        out[ProjPoint.INFINITY] = table[inf]
    return out


def weight_distribution(U: SubspaceU) -> WeightDistribution:
    counts, inf = slope_counts(U)
    table = _weight_of_count(U.ctx.q)
    vals, mult = np.unique(counts[counts > 0], return_counts=True)
    dist: dict[int, int] = {}
    for c, k in zip(vals.tolist(), mult.tolist()):
        dist[table[c]] = dist.get(table[c], 0) + k
    if inf:
        dist[table[inf]] = dist.get(table[inf], 0) + 1
    return WeightDistribution(dist)


def point_weight(U: SubspaceU, P: ProjPoint) -> int:
    ctx = U.ctx
    if U.is_graph_form:
        if P.is_infinity:
            return 0
        return (U.poly - QPoly.monomial(ctx, 0, P.slope)).kernel_dim()
    if P.is_infinity:
        W = [(0, ctx.p**i) for i in range(ctx.d)]
    else:
        W = [(ctx.p**i, ctx.mul(ctx.p**i, P.slope)) for i in range(ctx.d)]
    Wrows = np.array([ctx.digits(a) + ctx.digits(b) for a, b in W], dtype=np.int64)
    both = np.vstack([U.fp_rows(), Wrows])
    dim = 2 * ctx.d - rank_mod_p(both, ctx.p)
    return dim // ctx.h


def max_size(ctx: FieldCtx) -> int:
    """(q^{2n} - 1)/(q - 1), the size of a scattered linear set of rank 2n."""
    return (ctx.order - 1) // (ctx.q - 1)


def dickson_rank_profile(f: QPoly, chunk: int = 1 << 14) -> np.ndarray:
    """Rank of the Dickson matrix of f(x) + m x for every m, indexed by the encoding of m."""
    ctx = f.ctx
    if not ctx.has_tables:
        raise CapExceededError("Dickson certification needs discrete-log tables")
    ops = LogOps(ctx)
    m, N1 = ctx.m, ctx.order - 1
    D = np.array(ops.encode(np.array(f.dickson_matrix().rows)), dtype=np.int64)
    qpows = np.array([pow(ctx.q, i, N1) for i in range(m)], dtype=np.int64)
    ranks = np.empty(ctx.order, dtype=np.int64)
    ranks[0] = field_rank(ctx, f.dickson_matrix().rows)
    diag = np.arange(m)
    for start in range(0, N1, chunk):
        k = np.arange(start, min(start + chunk, N1), dtype=np.int64)
        stack = np.broadcast_to(D, (k.size, m, m)).copy()
        mdiag = (k[:, None] * qpows[None, :]) % N1
        stack[:, diag, diag] = ops.add(stack[:, diag, diag], mdiag)
        ranks[ctx.exp[k]] = log_batch_rank(ctx, stack)
    return ranks


def is_scattered_dickson(U: SubspaceU) -> bool:
    if not U.is_graph_form:
        U = U.to_graph()
    return bool(dickson_rank_profile(U.poly).min() >= U.ctx.m - 1)


def is_scattered_image(U: SubspaceU) -> bool:
    counts, inf = slope_counts(U)
    return int(np.count_nonzero(counts)) + (1 if inf else 0) == max_size(U.ctx)


def is_scattered(U: SubspaceU, method: str = "image") -> bool:
    """Whether every point of L_U has weight 1.

    ``method``: "image" counts distinct f(x)/x, "dickson" checks Dickson ranks
    over all m, "both" runs the two and raises CertificationError on disagreement.
    """
    if method == "image":
        return is_scattered_image(U)
    if method == "dickson":
        return is_scattered_dickson(U)
    if method == "both":
        a, b = is_scattered_image(U), is_scattered_dickson(U)
        if a != b:
            raise CertificationError(f"image-count says {a}, Dickson path says {b} for {U}")
        return a
    raise ValueError(f"unknown method {method!r}")


def linear_set_size(U: SubspaceU) -> int:
    return weight_distribution(U).size


# --- duality ---

@functools.lru_cache(maxsize=32)
def _trace_gram(ctx: FieldCtx) -> np.ndarray:
    basis = [ctx.p**i for i in range(ctx.d)]
    return np.array([[ctx.absolute_trace(ctx.mul(a, b)) for b in basis] for a in basis],
                    dtype=np.int64)


def dual_subspace(U: SubspaceU) -> SubspaceU:
    """Orthogonal complement under (x,y),(u,v) -> Tr(xv - yu), as a basis-form subspace."""
    ctx = U.ctx
    T = _trace_gram(ctx)
    Z = np.zeros_like(T)
    G = np.block([[Z, T], [(-T) % ctx.p, Z]])
    rows = U.fp_rows() @ G % ctx.p
    return SubspaceU.from_fp_rows(ctx, nullspace_mod_p(rows, ctx.p))


def dual_parameters(ctx: FieldCtx, b: int, s: int) -> tuple[int, int]:
    """(b', s') with U_{b,s}^perp = U_{b',s'}: b' = b^{q^{2n-s}}, s' = 2n - s."""
    return ctx.frob(b, ctx.m - s), ctx.m - s


# --- orbits under diag(lambda, lambda^{q^s}), lambda in F_{q^n}^* ---

@dataclass(frozen=True)
class Orbit:
    points: frozenset
    weight: int


def orbit_decomposition(U: SubspaceU) -> list[Orbit]:
    """Orbits of the points of L_{b,s} under the group induced by diag(l, l^{q^s}), l in F_{q^n}^*."""
    if U.kind != "parametric":
        raise InvalidSubspaceError("orbit decomposition needs a parametric U_{b,s}")
    ctx = U.ctx
    weights = weight_map(U)
    mults = sorted({ctx.pow(lam, ctx.q**U.s - 1) for lam in ctx.subfield_elements(ctx.n) if lam})
    seen: set[ProjPoint] = set()
    orbits = []
    for P in sorted(weights, key=lambda P: (P.slope is None, P.slope or 0)):
        if P in seen:
            continue
        if P.is_infinity or P.slope == 0:
            pts = frozenset([P])
        else:
            pts = frozenset(ProjPoint(ctx.mul(h, P.slope)) for h in mults)
        ws = {weights.get(Q, 0) for Q in pts}
        if len(ws) != 1:
            raise CertificationError(f"weight not constant on the orbit of {P}: {ws}")
        seen |= pts
        orbits.append(Orbit(pts, ws.pop()))
    return orbits

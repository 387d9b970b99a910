"""Exact linear algebra over F_p and over the big field.

Three flavours:

* ``rref_mod_p`` / ``rank_mod_p`` / ``nullspace_mod_p``: dense integer matrices
  over the prime field, used for F_q-linear maps written on the F_p power basis.
* ``batch_rank_mod_p``: the same elimination vectorised over a stack of matrices.
* ``field_det`` / ``field_rank``: Gaussian elimination over F_{q^{2n}} with
  scalar context arithmetic (Dickson matrices and their minors), and
  ``log_batch_rank`` / ``log_batch_det``, which run the elimination on a stack
  of matrices held as discrete logarithms.
"""

from __future__ import annotations

import numpy as np

from .field import FieldCtx


def rref_mod_p(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p; returns (R, pivot columns)."""
    R = np.array(M, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = R[r] * pow(int(R[r, c]), p - 2, p) % p
        col = R[:, c].copy()
        col[r] = 0
        R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod_p(M, p: int) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref_mod_p(M, p)[1])


def row_space_mod_p(M, p: int) -> np.ndarray:
    """Canonical basis (non-zero RREF rows) of the row space."""
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return M.reshape(0, M.shape[-1] if M.ndim == 2 else 0)
    R, piv = rref_mod_p(M, p)
    return R[:len(piv)]


def nullspace_mod_p(M, p: int) -> np.ndarray:
    """Basis (as rows) of {v : M v = 0} over F_p."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    R, piv = rref_mod_p(M, p)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = (-R[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), cols)


def batch_rank_mod_p(A, p: int) -> np.ndarray:
    """Ranks over F_p of a stack of matrices of shape (B, r, c)."""
    A = np.array(A, dtype=np.int64) % p
    B, R, C = A.shape
    inv = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)
    rank = np.zeros(B, dtype=np.int64)
    rows = np.arange(R)
    for col in range(C):
        nz = (A[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = nz.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        piv = nz[idx].argmax(axis=1)
        r = rank[idx]
        prow = A[idx, piv].copy()
        A[idx, piv] = A[idx, r]
        A[idx, r] = prow
        prow = prow * inv[prow[:, col]][:, None] % p
        sub = A[idx]
        below = rows[None, :] > r[:, None]
        factor = np.where(below, sub[:, :, col], 0)
        A[idx] = (sub - factor[:, :, None] * prow[:, None, :]) % p
        rank[idx] += 1
        if (rank == min(R, C)).all():
            break
    return rank


# --- elimination over the big field, scalar arithmetic ---

def _field_eliminate(ctx: FieldCtx, rows):
    """Row-reduce a copy of ``rows``; returns (rank, det-or-None)."""
    M = [list(r) for r in rows]
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    det = 1
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if k is None:
            det = 0
            continue
        if k != r:
            M[r], M[k] = M[k], M[r]
            det = ctx.neg(det)
        pivot = M[r][c]
        det = ctx.mul(det, pivot)
        pinv = ctx.inv(pivot)
        for i in range(r + 1, nrows):
            if M[i][c] == 0:
                continue
            fac = ctx.mul(M[i][c], pinv)
            M[i] = [ctx.sub(a, ctx.mul(fac, b)) for a, b in zip(M[i], M[r])]
        r += 1
        if r == nrows:
            break
    if nrows != ncols or r < nrows:
        det = 0
    return r, det


def field_rank(ctx: FieldCtx, rows) -> int:
    """Rank over F_{q^{2n}} of a matrix given as a list of rows of encodings."""
    if not rows:
        return 0
    return _field_eliminate(ctx, rows)[0]


def field_det(ctx: FieldCtx, rows) -> int:
    """Determinant over F_{q^{2n}} of a square matrix."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    return _field_eliminate(ctx, rows)[1]


# --- elimination over the big field on log-encoded stacks ---

class LogOps:
    """Elementwise arithmetic on discrete logs; ``zero`` (= order - 1) encodes 0."""

    def __init__(self, ctx: FieldCtx):
        if not ctx.has_tables:
            raise ValueError("log-domain kernels need discrete-log tables")
        self.ctx = ctx
        self.mod = ctx.order - 1
        self.zero = ctx.order - 1
        self.zech = ctx.zech

    def encode(self, a) -> np.ndarray:
        return self.ctx.log[np.asarray(a, dtype=np.int64)]

    def decode(self, la) -> np.ndarray:
        la = np.asarray(la, dtype=np.int64)
        return np.where(la == self.zero, 0, self.ctx.exp[np.where(la == self.zero, 0, la)])

    def mul(self, a, b):
        return np.where((a == self.zero) | (b == self.zero), self.zero, (a + b) % self.mod)

    def neg(self, a):
        if self.ctx.p == 2:
            return a
        return np.where(a == self.zero, self.zero, (a + self.ctx.log_minus_one) % self.mod)

    def add(self, a, b):
        a, b = np.broadcast_arrays(a, b)
        z = self.zech[(b - a) % self.mod]
        out = np.where(z == self.zero, self.zero, (a + z) % self.mod)
        out = np.where(a == self.zero, b, out)
        return np.where(b == self.zero, a, out)


def _log_eliminate(ctx: FieldCtx, L, want_det: bool):
    ops = LogOps(ctx)
    Z = ops.zero
    A = np.array(L, dtype=np.int64)
    B, R, C = A.shape
    rank = np.zeros(B, dtype=np.int64)
    det = np.zeros(B, dtype=np.int64)  # log of the determinant, before the zero mask
    rows = np.arange(R)
    for col in range(C):
        nz = (A[:, :, col] != Z) & (rows[None, :] >= rank[:, None])
        has = nz.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        piv = nz[idx].argmax(axis=1)
        r = rank[idx]
        prow = A[idx, piv].copy()
        A[idx, piv] = A[idx, r]
        A[idx, r] = prow
        if want_det:
            swapped = piv != r
            det[idx] = (det[idx] + prow[:, col] + np.where(swapped, ctx.log_minus_one, 0)) % ops.mod
        pinv = (-prow[:, col]) % ops.mod
        sub = A[idx]
        below = (rows[None, :] > r[:, None]) & (sub[:, :, col] != Z)
        factor = np.where(below, ops.neg(ops.mul(sub[:, :, col], pinv[:, None])), Z)
        upd = ops.add(sub, ops.mul(factor[:, :, None], prow[:, None, :]))
        A[idx] = np.where(below[:, :, None], upd, sub)
        rank[idx] += 1
    return rank, det


def log_batch_rank(ctx: FieldCtx, L) -> np.ndarray:
    """Ranks of a stack (B, r, c) of matrices whose entries are discrete logs."""
    return _log_eliminate(ctx, L, want_det=False)[0]


def log_batch_det(ctx: FieldCtx, L) -> np.ndarray:
    """Determinants (as field encodings) of a stack of square log-encoded matrices."""
    L = np.asarray(L, dtype=np.int64)
    if L.shape[1] != L.shape[2]:
        raise ValueError("determinant of a non-square matrix")
    rank, det = _log_eliminate(ctx, L, want_det=True)
    ops = LogOps(ctx)
    return np.where(rank == L.shape[1], ops.decode(det), 0)

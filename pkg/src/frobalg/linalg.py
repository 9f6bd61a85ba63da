"""Row reduction over a FieldContext, on int64 arrays of field codes.

Pivots are always chosen leftmost-first, so the reduced row echelon form of a
span is canonical.
"""

from __future__ import annotations

import numpy as np

from .field import FieldContext

CHUNK = 512


def rref(ctx: FieldContext, A) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of A; returns (nonzero rows, pivot columns)."""
    A = np.array(A, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    m, n = A.shape
    pivots = []
    r = 0
    c = 0
    while r < m and c < n:
        live = np.flatnonzero(A[r:, c:].any(axis=0))
        if not len(live):
            break
        c += int(live[0])
        i = r + int(np.flatnonzero(A[r:, c])[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        lead = int(A[r, c])
        if lead != 1:
            A[r] = ctx.vmul(A[r], ctx.inv(lead))
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if len(hit):
            A[hit] = ctx.vsub(A[hit], ctx.vmul(col[hit, None], A[r][None, :]))
        pivots.append(c)
        r += 1
        c += 1
    return A[:r], np.array(pivots, dtype=np.int64)


class Echelon:
    """Incrementally maintained RREF of a growing span inside GF^n."""

    def __init__(self, ctx: FieldContext, n: int):
        self.ctx = ctx
        self.n = n
        self.rows = np.zeros((0, n), dtype=np.int64)
        self.pivots = np.zeros(0, dtype=np.int64)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def full(self) -> bool:
        return self.rank == self.n

    def reduce(self, X) -> np.ndarray:
        """Reduce each row of X against the current basis (zero at all pivots afterwards)."""
        X = np.asarray(X, dtype=np.int64)
        if not self.rank or not len(X):
            return X.copy()
        return self.ctx.vsub(X, self.ctx.matmul(X[:, self.pivots], self.rows))

    def absorb(self, X, chunk: int = CHUNK) -> None:
        X = np.asarray(X, dtype=np.int64)
        if X.ndim == 1:
            X = X[None, :]
        for start in range(0, len(X), chunk):
            if self.full:
                return
            self._absorb(X[start:start + chunk])

    def _absorb(self, X):
        X = self.reduce(X)
        X = X[X.any(axis=1)]
        if not len(X):
            return
        C, cp = rref(self.ctx, X)
        R = self.rows
        if len(R):
            R = self.ctx.vsub(R, self.ctx.matmul(R[:, cp], C))
        rows = np.vstack([R, C])
        piv = np.concatenate([self.pivots, cp])
        order = np.argsort(piv, kind="stable")
        self.rows, self.pivots = rows[order], piv[order]


def nullspace(ctx: FieldContext, M) -> np.ndarray:
    """Basis (as rows) of {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    R, piv = rref(ctx, M) if M.shape[0] else (np.zeros((0, n), dtype=np.int64), np.zeros(0, dtype=np.int64))
    free = np.setdiff1d(np.arange(n), piv)
    out = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        out[t, piv] = ctx.vneg(R[:, f])
    return out


def left_nullspace(ctx: FieldContext, M) -> np.ndarray:
    """Basis (as rows) of {x : x M = 0}."""
    return nullspace(ctx, np.asarray(M, dtype=np.int64).T)


def rank(ctx: FieldContext, M) -> int:
    M = np.asarray(M, dtype=np.int64)
    if not M.size:
        return 0
    return len(rref(ctx, M)[1])


class Block:
    """RREF of a span supported on the global columns ``cols``."""

    __slots__ = ("cols", "rows", "pivots")

    def __init__(self, cols, rows, pivots):
        self.cols = cols
        self.rows = rows
        self.pivots = pivots

    @property
    def dim(self):
        return len(self.pivots)


class Layer:
    """A subspace of one homogeneous component, stored as independent RREF blocks.

    Blocks live on disjoint column sets (the weight spaces when the subspace is
    f-invariant), so the union of their rows is the RREF of the whole subspace.
    """

    def __init__(self, ctx: FieldContext, degree: int, ncols: int, blocks: dict):
        self.ctx = ctx
        self.degree = degree
        self.ncols = ncols
        self.blocks = blocks

    @classmethod
    def zero(cls, ctx, degree, ncols, column_groups=None):
        groups = column_groups or {None: np.arange(ncols)}
        blocks = {
            key: Block(cols, np.zeros((0, len(cols)), dtype=np.int64), np.zeros(0, dtype=np.int64))
            for key, cols in groups.items()
        }
        return cls(ctx, degree, ncols, blocks)

    @classmethod
    def from_block_rows(cls, ctx, degree, ncols, column_groups: dict, block_rows: dict):
        """Echelonize rows given in block-local coordinates.

        ``block_rows[key]`` is an iterable of 2-d arrays over ``column_groups[key]``.
        """
        blocks = {}
        for key, cols in column_groups.items():
            ech = Echelon(ctx, len(cols))
            for chunk in block_rows.get(key, ()):
                if ech.full:
                    break
                ech.absorb(chunk)
            blocks[key] = Block(cols, ech.rows, ech.pivots)
        return cls(ctx, degree, ncols, blocks)

    @classmethod
    def from_rows(cls, ctx, degree, ncols, rows):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, ncols)
        groups = {None: np.arange(ncols)}
        return cls.from_block_rows(ctx, degree, ncols, groups, {None: [rows]})

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks.values())

    @property
    def pivots(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate([b.cols[b.pivots] for b in self.blocks.values()]))

    @property
    def nonpivots(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.ncols), self.pivots)

    def dense(self) -> np.ndarray:
        """Full RREF (rows sorted by pivot column)."""
        out = np.zeros((self.dim, self.ncols), dtype=np.int64)
        piv = []
        r = 0
        for b in self.blocks.values():
            out[r:r + b.dim][:, b.cols] = b.rows
            piv.extend(b.cols[b.pivots])
            r += b.dim
        return out[np.argsort(np.array(piv, dtype=np.int64), kind="stable")]

    def reduce(self, V) -> np.ndarray:
        """Reduce vectors (rows of V, global coordinates) modulo the subspace."""
        V = np.array(V, dtype=np.int64, copy=True)
        single = V.ndim == 1
        if single:
            V = V[None, :]
        for b in self.blocks.values():
            if not b.dim:
                continue
            sub = V[:, b.cols]
            V[:, b.cols] = self.ctx.vsub(sub, self.ctx.matmul(sub[:, b.pivots], b.rows))
        return V[0] if single else V

    def contains(self, V) -> bool:
        return not self.reduce(V).any()

    def same_span(self, other: "Layer") -> bool:
        return self.ncols == other.ncols and self.dim == other.dim and np.array_equal(self.dense(), other.dense())

    def pivot_row(self, col: int) -> np.ndarray:
        """Global RREF row whose pivot is ``col``."""
        for b in self.blocks.values():
            hit = np.flatnonzero(b.cols[b.pivots] == col)
            if len(hit):
                out = np.zeros(self.ncols, dtype=np.int64)
                out[b.cols] = b.rows[hit[0]]
                return out
        raise KeyError(col)

    def plus(self, other: "Layer") -> "Layer":
        """Sum of two subspaces of the same component."""
        if other.ncols != self.ncols:
            raise ValueError("layers of different components")
        if set(self.blocks) == set(other.blocks) and all(
            np.array_equal(self.blocks[k].cols, other.blocks[k].cols) for k in self.blocks
        ):
            groups = {k: b.cols for k, b in self.blocks.items()}
            rows = {k: [self.blocks[k].rows, other.blocks[k].rows] for k in self.blocks}
            return Layer.from_block_rows(self.ctx, self.degree, self.ncols, groups, rows)
        return Layer.from_rows(self.ctx, self.degree, self.ncols, np.vstack([self.dense(), other.dense()]))

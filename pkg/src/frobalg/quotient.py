"""The quotient L_p / (I_p + J_p).

Coset representatives in each degree are the non-pivot columns of the RREF of
T_k = I_k + J_k, so a vector is reduced by one pass against T_k and its
quotient coordinates are read off at those columns.  Quotient vectors over all
degrees are concatenated in degree order.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial

import numpy as np
from sympy import primerange

from .action import h_orbits
from .algebra import AlgebraElement, bracket_monomials
from .basis import degree_table, dimension_formula
from .field import ConstructionParams, find_parameters
from .ideals import GradedSubspace, bound_I, bound_J, extend, zero_layer
from .linalg import Layer, left_nullspace, rank

log = logging.getLogger(__name__)


class ClassCapExceeded(RuntimeError):
    """A quotient layer of degree p is nonzero (class would exceed p - 1)."""


@dataclass
class QuotientAlgebra:
    params: ConstructionParams
    I: GradedSubspace
    J: GradedSubspace
    T: dict[int, Layer]
    nilpotency_class: int | None
    truncated: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def ctx(self):
        return self.params.ctx

    @property
    def computed_degrees(self) -> list[int]:
        return sorted(self.T)

    def l(self, k: int) -> int:
        return dimension_formula(self.p, k)

    def dim(self, k: int) -> int:
        """Quotient dimension in degree k (0 beyond the class)."""
        if k in self.T:
            return self.T[k].ncols - self.T[k].dim
        if self.nilpotency_class is not None and k > self.nilpotency_class:
            return 0
        raise KeyError(f"degree {k} was not computed")

    def dims(self) -> list[int]:
        return [self.dim(k) for k in self.computed_degrees]

    @cached_property
    def degrees(self) -> list[int]:
        """Degrees with a nonzero quotient component."""
        return [k for k in self.computed_degrees if self.dim(k)]

    def reps(self, k: int) -> np.ndarray:
        return self.T[k].nonpivots

    @cached_property
    def offsets(self) -> dict[int, int]:
        out, pos = {}, 0
        for k in self.degrees:
            out[k] = pos
            pos += self.dim(k)
        return out

    @property
    def total_dim(self) -> int:
        return sum(self.dim(k) for k in self.degrees)

    def representatives(self) -> list[tuple[int, object]]:
        """(degree, basis monomial) for each quotient basis vector, in vector order."""
        out = []
        for k in self.degrees:
            table = degree_table(self.p, k, self.params.r)
            out.extend((k, table.elements[c]) for c in self.reps(k))
        return out

    def degree_slice(self, k: int) -> slice:
        o = self.offsets[k]
        return slice(o, o + self.dim(k))

    def unit_reductions(self, k: int) -> np.ndarray:
        """Row c = quotient coordinates of the basis monomial in column c of degree k."""
        return self._unit_reductions[k]

    @cached_property
    def _unit_reductions(self) -> dict[int, np.ndarray]:
        out = {}
        for k in self.degrees:
            layer = self.T[k]
            reps = self.reps(k)
            U = np.zeros((layer.ncols, len(reps)), dtype=np.int64)
            U[reps, np.arange(len(reps))] = 1
            for blk in layer.blocks.values():
                if not blk.dim:
                    continue
                piv_global = blk.cols[blk.pivots]
                full = np.zeros((blk.dim, layer.ncols), dtype=np.int64)
                full[:, blk.cols] = blk.rows
                U[piv_global] = self.ctx.vneg(full[:, reps])
            out[k] = U
        return out

    def reduce_vector(self, k: int, vec) -> np.ndarray:
        """Quotient coordinates (degree-k slice) of a dense degree-k vector."""
        if k not in self.offsets:
            return np.zeros(0, dtype=np.int64)
        return self.ctx.matmul(np.asarray(vec, dtype=np.int64)[None, :], self.unit_reductions(k))[0]

    def reduce_element(self, x: AlgebraElement) -> np.ndarray:
        out = np.zeros(self.total_dim, dtype=np.int64)
        for k in x.degrees():
            if k in self.offsets:
                out[self.degree_slice(k)] = self.reduce_vector(k, x.to_vector(k))
            elif k not in self.T and (self.nilpotency_class is None or k <= self.nilpotency_class):
                raise KeyError(f"degree {k} was not computed")
        return out

    def lift(self, vec) -> AlgebraElement:
        terms = {}
        for (k, b), c in zip(self.representatives(), vec):
            if c:
                terms[b] = int(c)
        return AlgebraElement(self.params, terms)

    # -- structure constants ------------------------------------------------

    @cached_property
    def structure_constants(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Arrays (a, b, d, c): [e_a, e_b] = sum of c * e_d over the records."""
        A, B, D, C = [], [], [], []
        reps = self.representatives()
        deg1 = [(n, b) for n, (k, b) in enumerate(reps) if k == 1]
        for na, ba in deg1:
            for nb, (kb, bb) in enumerate(reps):
                target = kb + 1
                if target not in self.offsets:
                    continue
                for first, second, idx_a, idx_b, flip in ((ba, bb, na, nb, False), (bb, ba, nb, na, True)):
                    if flip and kb == 1:
                        continue  # degree-1 pairs are already covered in both orders
                    sign, mono = bracket_monomials(first, second)
                    if not sign:
                        continue
                    table = degree_table(self.p, target, self.params.r)
                    coords = self.unit_reductions(target)[table.index[mono]]
                    if sign < 0:
                        coords = self.ctx.vneg(coords)
                    nz = np.flatnonzero(coords)
                    off = self.offsets[target]
                    A.extend([idx_a] * len(nz))
                    B.extend([idx_b] * len(nz))
                    D.extend((off + nz).tolist())
                    C.extend(coords[nz].tolist())
        arr = lambda xs: np.array(xs, dtype=np.int64)
        return arr(A), arr(B), arr(D), arr(C)

    def bracket(self, x, y) -> np.ndarray:
        """Bracket of two quotient vectors."""
        A, B, D, C = self.structure_constants
        ctx = self.ctx
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        vals = ctx.vmul(ctx.vmul(x[A], y[B]), C)
        return _scatter_sum(ctx, D, vals, self.total_dim)

    # -- induced automorphisms ------------------------------------------------

    def induced_matrix(self, k: int, which: str) -> np.ndarray:
        """Matrix of the induced f or h on degree k; row i is the image of e_i (right action)."""
        table = degree_table(self.p, k, self.params.r)
        reps = self.reps(k)
        if which == "f":
            d = self.params.omega_powers[table.weights[reps]]
            return np.diag(d).astype(np.int64)
        if which == "h":
            return self.unit_reductions(k)[table.h_perm[reps]]
        raise ValueError(which)

    def induced_full(self, which: str) -> np.ndarray:
        N = self.total_dim
        M = np.zeros((N, N), dtype=np.int64)
        for k in self.degrees:
            s = self.degree_slice(k)
            M[s, s] = self.induced_matrix(k, which)
        return M

    def fixed_space(self, k: int, which: str) -> np.ndarray:
        """Rows spanning the fixed vectors of the induced map in degree k."""
        M = self.induced_matrix(k, which)
        eye = np.eye(len(M), dtype=np.int64)
        return left_nullspace(self.ctx, self.ctx.vsub(M, eye))


def _scatter_sum(ctx, idx, vals, n):
    if ctx.is_prime_field:
        return np.rint(np.bincount(idx, weights=vals.astype(np.float64), minlength=n)).astype(np.int64) % ctx.order
    out = np.zeros(n, dtype=np.int64)
    if ctx.characteristic == 2:
        np.bitwise_xor.at(out, idx, vals)
        return out
    for i, v in zip(idx.tolist(), vals.tolist()):
        out[i] = ctx.add(int(out[i]), int(v))
    return out


def build_quotient(params: ConstructionParams, max_degree: int | None = None) -> QuotientAlgebra:
    """Compute T_k = I_k + J_k degree by degree until the quotient vanishes.

    The loop never goes past degree p: a nonzero quotient in degree p would
    contradict the class bound p - 1 and raises ClassCapExceeded.
    """
    p = params.p
    I = GradedSubspace(params, "I")
    J = GradedSubspace(params, "J")
    T: dict[int, Layer] = {}
    cls = None
    truncated = False
    k = 0
    while True:
        k += 1
        if max_degree is not None and k > max_degree:
            truncated = True
            break
        Tk = extend(I, k).plus(extend(J, k))
        T[k] = Tk
        log.debug("p=%d k=%d l=%d i=%d j=%d t=%d", p, k, Tk.ncols, I.dim(k), J.dim(k), Tk.dim)
        if Tk.dim == Tk.ncols:
            cls = k - 1
            break
        if k >= p:
            raise ClassCapExceeded(f"quotient for p={p} is nonzero in degree {k}")
    return QuotientAlgebra(params, I, J, T, cls, truncated)


def trivial_quotient(params: ConstructionParams, max_degree: int) -> QuotientAlgebra:
    """L_p itself (nothing factored out), truncated at ``max_degree``."""
    I = GradedSubspace(params, "I")
    J = GradedSubspace(params, "J")
    T = {k: zero_layer(params, k) for k in range(1, max_degree + 1)}
    return QuotientAlgebra(params, I, J, T, None, truncated=True)


def lower_bound(p: int, k: int) -> int:
    """l_{p,k} minus the closed-form bounds on i_{p,k} and j_{p,k}; may be negative."""
    return dimension_formula(p, k) - bound_I(p, k) - bound_J(p, k)


def lower_bound_leading_coefficient(k: int) -> Fraction:
    """Leading coefficient of lower_bound(p, k) as a polynomial in p of degree k.

    Taken as the k-th finite difference over k+1 consecutive integer points
    (all with k + p - 3 >= k - 1, where the binomial agrees with its polynomial) divided by k!.
    """
    pts = range(k + 3, 2 * k + 4)
    vals = [lower_bound(p, k) for p in pts]
    for _ in range(k):
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return Fraction(vals[0], factorial(k))


# -- checks -----------------------------------------------------------------


def verify_kernel_centralizer_trivial(q: QuotientAlgebra) -> bool:
    return all(len(q.fixed_space(k, "f")) == 0 for k in q.degrees)


def weight_zero_vanishes(q: QuotientAlgebra) -> bool:
    """Every weight-0 monomial reduces to zero modulo T."""
    for k in q.degrees:
        table = degree_table(q.p, k, q.params.r)
        zero_cols = np.flatnonzero(table.weights == 0)
        if q.unit_reductions(k)[zero_cols].any():
            return False
    return True


def _full_vectors(q, k, rows):
    out = np.zeros((len(rows), q.total_dim), dtype=np.int64)
    out[:, q.degree_slice(k)] = rows
    return out


def verify_complement_centralizer_abelian(q: QuotientAlgebra) -> bool:
    fixed = [v for k in q.degrees for v in _full_vectors(q, k, q.fixed_space(k, "h"))]
    for i, x in enumerate(fixed):
        for y in fixed[i + 1:]:
            if q.bracket(x, y).any():
                return False
    return True


def covering_table(q: QuotientAlgebra) -> list[tuple[int, int, int]]:
    """(k, dim of h-fixed quotient vectors, rank of reduced orbit sums) per degree."""
    out = []
    for k in q.degrees:
        table = degree_table(q.p, k, q.params.r)
        sums = np.zeros((0, table.size), dtype=np.int64)
        orbits = h_orbits(q.p, k, q.params.r)
        if orbits:
            sums = np.zeros((len(orbits), table.size), dtype=np.int64)
            for i, orbit in enumerate(orbits):
                sums[i, [table.index[b] for b in orbit]] = 1
        image = q.ctx.matmul(sums, q.unit_reductions(k))
        out.append((k, len(q.fixed_space(k, "h")), rank(q.ctx, image)))
    return out


def verify_covering(q: QuotientAlgebra) -> bool:
    return all(fixed == image for _, fixed, image in covering_table(q))


def induced_automorphism_report(q: QuotientAlgebra, rng, trials: int = 50) -> dict[str, bool]:
    """Hom property of the induced f and h on random pairs, and their orders."""
    ctx = q.ctx
    res = {}
    for which, order in (("f", q.p), ("h", q.p - 1)):
        M = q.induced_full(which)
        ok = True
        for _ in range(trials):
            x = rng.integers(0, ctx.order, q.total_dim)
            y = rng.integers(0, ctx.order, q.total_dim)
            lhs = ctx.matmul(q.bracket(x, y)[None, :], M)[0]
            rhs = q.bracket(ctx.matmul(x[None, :], M)[0], ctx.matmul(y[None, :], M)[0])
            if not np.array_equal(lhs, rhs):
                ok = False
                break
        res[f"induced_{which}_hom"] = ok
        res[f"induced_{which}_order"] = _matrix_order(ctx, M, order) == order
    return res


def _matrix_order(ctx, M, limit):
    eye = np.eye(len(M), dtype=np.int64)
    P = eye
    for n in range(1, limit + 1):
        P = ctx.matmul(P, M)
        if np.array_equal(P, eye):
            return n
    return None


# -- search -----------------------------------------------------------------


@dataclass(frozen=True)
class SearchResult:
    target: int
    mode: str
    p_max: int
    p: int | None
    value: int | None

    @property
    def found(self) -> bool:
        return self.p is not None


def _exact_class(p: int) -> int:
    return build_quotient(find_parameters(p)).nilpotency_class


def _workers() -> int:
    """Worker processes for exact search: FROBALG_THREADS, else 1.

    Quotient builds grow steeply in memory with p, so parallel builds are opt-in.
    """
    cap = os.environ.get("FROBALG_THREADS")
    if not cap:
        return 1
    return max(1, min(os.cpu_count() or 1, int(cap)))


def search_min_prime(n: int, mode: str = "bound", p_max: int = 50) -> SearchResult:
    """Least prime p <= p_max whose quotient provably (bound) or actually (exact) has class >= n."""
    if n < 1:
        raise ValueError("target class must be >= 1")
    primes = [int(p) for p in primerange(3, p_max + 1)]
    if mode == "bound":
        for p in primes:
            v = lower_bound(p, n)
            if v > 0:
                return SearchResult(n, mode, p_max, p, v)
        return SearchResult(n, mode, p_max, None, None)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    workers = _workers()
    if workers == 1:
        for p in primes:
            c = _exact_class(p)
            if c >= n:
                return SearchResult(n, mode, p_max, p, c)
        return SearchResult(n, mode, p_max, None, None)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for start in range(0, len(primes), workers):
            batch = primes[start:start + workers]
            for p, c in zip(batch, pool.map(_exact_class, batch)):
                if c >= n:
                    return SearchResult(n, mode, p_max, p, c)
    return SearchResult(n, mode, p_max, None, None)


def cross_field_audit(p: int, contexts) -> dict[str, list[int]]:
    """Quotient dimensions of L_p over each field; callers compare them."""
    from .field import params_for_field

    out = {}
    for ctx in contexts:
        q = build_quotient(params_for_field(p, ctx))
        out[ctx.describe()] = q.dims()
    distinct = {tuple(v) for v in out.values()}
    if len(distinct) > 1:
        log.warning("quotient dimensions for p=%d differ between fields: %s", p, out)
    return out

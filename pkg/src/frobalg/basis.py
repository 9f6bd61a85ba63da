"""Monomial basis of L_p.

Degree 1 is spanned by a_1..a_{p-1}, v_1..v_{p-1}; for k >= 2 the degree-k
component has basis [v_{i0}, a_{i1}, ..., a_{i(k-1)}] with i1 <= ... <= i(k-1).
A v-generator is stored as a bracket with an empty a-list so the bracket and
automorphism code never special-cases it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .field import InvalidParameter


@dataclass(frozen=True)
class AGen:
    i: int

    @property
    def degree(self) -> int:
        return 1

    def __str__(self):
        return f"a{self.i}"


@dataclass(frozen=True)
class VBracket:
    i0: int
    M: tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return 1 + len(self.M)

    def __str__(self):
        if not self.M:
            return f"v{self.i0}"
        return "[" + ",".join([f"v{self.i0}"] + [f"a{j}" for j in self.M]) + "]"


BasisElement = AGen | VBracket


def sort_key(b: BasisElement):
    if isinstance(b, AGen):
        return (1, 0, b.i, ())
    return (b.degree, 1, b.i0, b.M)


def _check(p, k=1):
    if p < 3:
        raise InvalidParameter(f"p = {p} must be >= 3")
    if k < 1:
        raise InvalidParameter(f"degree {k} must be >= 1")


def dimension_formula(p: int, k: int) -> int:
    if k == 1:
        return 2 * (p - 1)
    return (p - 1) * comb(k + p - 3, k - 1)


def _multisets(p, size):
    return itertools.combinations_with_replacement(range(1, p), size)


def enumerate_basis(p: int, k: int) -> list[BasisElement]:
    _check(p, k)
    return list(degree_table(p, k).elements)


def weight(b: BasisElement, p: int) -> int:
    if isinstance(b, AGen):
        return b.i % p
    return (b.i0 + sum(b.M)) % p


def basis_index(b: BasisElement, p: int) -> tuple[int, int]:
    return b.degree, degree_table(p, b.degree).index[b]


class DegreeTable:
    """Index bookkeeping for one homogeneous component.

    ``weights[c]`` is the weight of column c, ``h_perm[c]`` the column of its
    image under h, and ``shift(j)[c]`` the column of [b_c, a_j] one degree up
    (-1 where that bracket is zero).
    """

    def __init__(self, p: int, k: int, r: int):
        self.p, self.k, self.r = p, k, r
        if k == 1:
            elems = [AGen(i) for i in range(1, p)] + [VBracket(i) for i in range(1, p)]
        else:
            elems = [VBracket(i0, M) for i0 in range(1, p) for M in _multisets(p, k - 1)]
        self.elements = tuple(elems)
        self.index = {b: n for n, b in enumerate(elems)}
        self.size = len(elems)
        self.weights = np.array([weight(b, p) for b in elems], dtype=np.int64)
        self.h_perm = np.array([self.index[apply_h_monomial(b, p, r)] for b in elems], dtype=np.int64)
        self._shifts = {}
        self._weight_cols = None

    def __len__(self):
        return self.size

    def weight_columns(self) -> dict[int, np.ndarray]:
        if self._weight_cols is None:
            self._weight_cols = {w: np.flatnonzero(self.weights == w) for w in range(self.p)}
        return self._weight_cols

    def shift(self, j: int) -> np.ndarray:
        if j not in self._shifts:
            up = degree_table(self.p, self.k + 1, self.r)
            out = np.full(self.size, -1, dtype=np.int64)
            for c, b in enumerate(self.elements):
                if isinstance(b, VBracket):
                    out[c] = up.index[VBracket(b.i0, tuple(sorted(b.M + (j,))))]
            self._shifts[j] = out
        return self._shifts[j]


def apply_h_monomial(b: BasisElement, p: int, r: int) -> BasisElement:
    if isinstance(b, AGen):
        return AGen(r * b.i % p)
    return VBracket(r * b.i0 % p, tuple(sorted(r * j % p for j in b.M)))


@lru_cache(maxsize=None)
def _table(p, k, r):
    return DegreeTable(p, k, r)


def degree_table(p: int, k: int, r: int | None = None) -> DegreeTable:
    """Cached table; r defaults to the smallest primitive root mod p."""
    _check(p, k)
    if r is None:
        from .field import smallest_primitive_root

        r = smallest_primitive_root(p)
    return _table(p, k, r)

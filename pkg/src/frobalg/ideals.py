"""The ideals I_p and J_p of L_p, degree by degree.

I_p is generated by the kernel centralizer C(C_p) (the weight-0 monomials);
its degree-k layer is [I_(k-1), L_1] + C(C_p)_k.  J_p is the smallest
C_p C_(p-1)-invariant ideal containing [C(C_(p-1)), C(C_(p-1))]; its degree-k
layer is [J_(k-1), L_1] plus the weight parts of the brackets
[x, a_1 + ... + a_(p-1)] for x an h-orbit sum of degree k-1.

Both ideals are f-invariant, so every layer is stored as one RREF block per
weight.  Layers of degree >= 2 lie in the abelian ideal spanned by v-brackets,
so bracketing them with a v-generator gives zero; only the a_j shifts matter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .action import h_orbits
from .algebra import AlgebraElement, bracket, from_vector
from .basis import AGen, degree_table
from .field import ConstructionParams
from .linalg import Layer


def _weight_groups(params, k):
    return degree_table(params.p, k, params.r).weight_columns()


def zero_layer(params: ConstructionParams, k: int) -> Layer:
    table = degree_table(params.p, k, params.r)
    return Layer.zero(params.ctx, k, table.size, _weight_groups(params, k))


def echelonize(vectors: list[AlgebraElement], params: ConstructionParams, k: int) -> Layer:
    """RREF of the span of homogeneous degree-k elements (single ungraded block)."""
    table = degree_table(params.p, k, params.r)
    rows = []
    for x in vectors:
        if x.params != params:
            raise ValueError("vector built over different parameters")
        if x.degrees() - {k}:
            raise ValueError(f"vector {x} is not homogeneous of degree {k}")
        rows.append(x.to_vector(k))
    return Layer.from_rows(params.ctx, k, table.size, np.array(rows, dtype=np.int64).reshape(-1, table.size))


def layer_elements(params: ConstructionParams, layer: Layer) -> list[AlgebraElement]:
    return [from_vector(params, layer.degree, row) for row in layer.dense()]


def _local_index(cols, n):
    loc = np.full(n, -1, dtype=np.int64)
    loc[cols] = np.arange(len(cols))
    return loc


def _shifted_block_rows(params, prev: Layer, k: int) -> dict[int, list[np.ndarray]]:
    """Rows of [prev, a_j] for all j, grouped by weight block of degree k."""
    p = params.p
    if prev.degree != k - 1:
        raise ValueError("previous layer has the wrong degree")
    if prev.dim == 0:
        return {}
    if prev.degree == 1:
        # degree-1 layers of I and J are zero; anything else needs the v-brackets too
        raise ValueError("bracketing a nonzero degree-1 layer is not supported here")
    low = degree_table(p, k - 1, params.r)
    high = degree_table(p, k, params.r)
    groups = high.weight_columns()
    local = {w: _local_index(cols, high.size) for w, cols in groups.items()}
    out: dict[int, list[np.ndarray]] = {}
    for wsrc, blk in prev.blocks.items():
        if not blk.dim:
            continue
        if wsrc is None:
            raise ValueError("ungraded layer passed to the graded recursion")
        for j in range(1, p):
            target = (wsrc + j) % p
            dest = local[target][low.shift(j)[blk.cols]]
            rows = np.zeros((blk.dim, len(groups[target])), dtype=np.int64)
            rows[:, dest] = blk.rows
            out.setdefault(target, []).append(rows)
    return out


def _split_by_weight(params, k, vec) -> dict[int, np.ndarray]:
    groups = _weight_groups(params, k)
    parts = {}
    for w, cols in groups.items():
        part = vec[cols]
        if part.any():
            parts[w] = part[None, :]
    return parts


# -- I_p --------------------------------------------------------------------


def ideal_I_layer(params: ConstructionParams, k: int, previous: Layer | None = None) -> Layer:
    """Degree-k layer of I_p from the degree-(k-1) layer."""
    if k == 1:
        return zero_layer(params, 1)
    if previous is None:
        previous = zero_layer(params, k - 1)
    table = degree_table(params.p, k, params.r)
    groups = table.weight_columns()
    rows = _shifted_block_rows(params, previous, k)
    cent = groups[0]
    rows.setdefault(0, []).insert(0, np.eye(len(cent), dtype=np.int64))
    return Layer.from_block_rows(params.ctx, k, table.size, groups, rows)


def _reaches_zero(i0: int, M, p: int) -> bool:
    """Some nonempty sub-multiset S of M has i0 + sum(S) = 0 mod p (subset-sum DP)."""
    target = (-i0) % p
    reach = 0  # bitmask of residues hit by nonempty sub-multisets seen so far
    full = (1 << p) - 1
    for x in M:
        rotated = ((reach << x) | (reach >> (p - x))) & full
        reach |= rotated | (1 << (x % p))
        if reach >> target & 1:
            return True
    return False


def ideal_I_combinatorial(p: int, k: int) -> list:
    """Degree-k monomials lying in I_p, read off from index sums alone."""
    if k < 2:
        return []
    return [b for b in degree_table(p, k).elements if _reaches_zero(b.i0, b.M, p)]


def bound_I(p: int, k: int) -> int:
    if k == 1:
        return 0
    return (k - 1) * (p - 1) ** (k - 1)


# -- J_p --------------------------------------------------------------------


def derived_complement_generators(params: ConstructionParams, k: int) -> list[AlgebraElement]:
    """[x, a_1 + ... + a_(p-1)] for each h-orbit sum x of degree k - 1 (zeros dropped)."""
    if k < 2:
        return []
    p = params.p
    sum_a = AlgebraElement(params, {AGen(i): 1 for i in range(1, p)})
    out = []
    for orbit in h_orbits(p, k - 1, params.r):
        x = AlgebraElement(params, {b: 1 for b in orbit})
        g = bracket(x, sum_a)
        if g:
            out.append(g)
    return out


def _generator_vectors(params, k) -> list[np.ndarray]:
    """Dense form of derived_complement_generators(params, k)."""
    p, ctx = params.p, params.ctx
    if k == 2:
        # only the orbit sum v_1 + ... + v_(p-1) survives; [sum v, sum a] hits every monomial once
        return [np.ones(degree_table(p, 2, params.r).size, dtype=np.int64) % ctx.order]
    low = degree_table(p, k - 1, params.r)
    high = degree_table(p, k, params.r)
    out = []
    for orbit in h_orbits(p, k - 1, params.r):
        cols = np.array([low.index[b] for b in orbit], dtype=np.int64)
        counts = np.zeros(high.size, dtype=np.int64)
        for j in range(1, p):
            np.add.at(counts, low.shift(j)[cols], 1)
        vec = counts % ctx.characteristic
        if vec.any():
            out.append(vec)
    return out


def ideal_J_layer(params: ConstructionParams, k: int, previous: Layer | None = None) -> Layer:
    """Degree-k layer of J_p from the degree-(k-1) layer."""
    if k == 1:
        return zero_layer(params, 1)
    if previous is None:
        previous = zero_layer(params, k - 1)
    table = degree_table(params.p, k, params.r)
    groups = table.weight_columns()
    rows: dict[int, list[np.ndarray]] = {}
    for vec in _generator_vectors(params, k):
        for w, part in _split_by_weight(params, k, vec).items():
            rows.setdefault(w, []).append(part)
    for w, chunks in _shifted_block_rows(params, previous, k).items():
        rows.setdefault(w, []).extend(chunks)
    return Layer.from_block_rows(params.ctx, k, table.size, groups, rows)


def bound_J(p: int, k: int) -> int:
    if k == 1:
        return 0
    return p * sum((p - 1) ** (k - 2 - j) * comb(j + p - 2, j) for j in range(k - 1))


# -- graded containers -------------------------------------------------------


@dataclass
class GradedSubspace:
    params: ConstructionParams
    name: str
    layers: dict[int, Layer] = field(default_factory=dict)

    def dim(self, k: int) -> int:
        return self.layers[k].dim

    def dims(self) -> dict[int, int]:
        return {k: layer.dim for k, layer in sorted(self.layers.items())}

    def __getitem__(self, k: int) -> Layer:
        return self.layers[k]

    def top(self) -> int:
        return max(self.layers, default=0)


def compute_I(params: ConstructionParams, max_degree: int) -> GradedSubspace:
    out = GradedSubspace(params, "I")
    prev = None
    for k in range(1, max_degree + 1):
        prev = out.layers[k] = ideal_I_layer(params, k, prev)
    return out


def compute_J(params: ConstructionParams, max_degree: int) -> GradedSubspace:
    out = GradedSubspace(params, "J")
    prev = None
    for k in range(1, max_degree + 1):
        prev = out.layers[k] = ideal_J_layer(params, k, prev)
    return out


def extend(space: GradedSubspace, k: int) -> Layer:
    """Compute and store layer k (layer k-1 must already be present)."""
    step = ideal_I_layer if space.name == "I" else ideal_J_layer
    prev = space.layers.get(k - 1)
    layer = space.layers[k] = step(space.params, k, prev)
    return layer

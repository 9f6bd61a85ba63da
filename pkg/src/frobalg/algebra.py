"""Sparse elements of L_p and the metabelian bracket.

L_p is the semidirect sum of the abelian ideal spanned by the v-brackets and the
abelian subalgebra spanned by the a_i.  On basis monomials:

    [a_i, a_j] = 0,  [V, V'] = 0,  [[v_i0, a_M], a_j] = [v_i0, a_(M + j)]

with the a-list kept sorted (reordering the a-entries is an equality because
[a_i, a_j] = 0).
"""

from __future__ import annotations

import numpy as np

from .basis import AGen, BasisElement, VBracket, degree_table, sort_key
from .field import ConstructionParams, FieldElement


def bracket_monomials(x: BasisElement, y: BasisElement) -> tuple[int, BasisElement | None]:
    """[x, y] for basis monomials as (sign, monomial); sign 0 means the bracket vanishes."""
    if isinstance(x, VBracket) and isinstance(y, AGen):
        return 1, VBracket(x.i0, tuple(sorted(x.M + (y.i,))))
    if isinstance(x, AGen) and isinstance(y, VBracket):
        return -1, VBracket(y.i0, tuple(sorted(y.M + (x.i,))))
    return 0, None


class AlgebraElement:
    """Finite linear combination of basis monomials over the params' field.

    Coefficients are stored as integer field codes; zeros are never stored.
    """

    __slots__ = ("params", "terms")

    def __init__(self, params: ConstructionParams, terms=None):
        self.params = params
        ctx = params.ctx
        clean = {}
        for b, c in (terms or {}).items():
            if isinstance(c, FieldElement):
                c = c.code
            elif not isinstance(c, (int, np.integer)):
                raise TypeError(f"bad coefficient {c!r}")
            c = int(c) % ctx.order if ctx.is_prime_field else int(c)
            if c:
                clean[b] = c
        self.terms = clean

    @property
    def ctx(self):
        return self.params.ctx

    def _same(self, other):
        if not isinstance(other, AlgebraElement):
            raise TypeError("expected an AlgebraElement")
        if other.params != self.params:
            raise ValueError("elements built over different construction parameters")

    def _new(self, terms):
        out = AlgebraElement.__new__(AlgebraElement)
        out.params = self.params
        out.terms = {b: c for b, c in terms.items() if c}
        return out

    def __add__(self, other):
        self._same(other)
        ctx = self.ctx
        terms = dict(self.terms)
        for b, c in other.terms.items():
            terms[b] = ctx.add(terms.get(b, 0), c)
        return self._new(terms)

    def __neg__(self):
        ctx = self.ctx
        return self._new({b: ctx.neg(c) for b, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        code = c.code if isinstance(c, FieldElement) else self.ctx.from_int(int(c))
        ctx = self.ctx
        return self._new({b: ctx.mul(code, v) for b, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, b: BasisElement) -> FieldElement:
        return FieldElement(self.ctx, self.terms.get(b, 0))

    def degrees(self) -> set[int]:
        return {b.degree for b in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def bracket(self, other: "AlgebraElement") -> "AlgebraElement":
        return bracket(self, other)

    def support(self) -> list[BasisElement]:
        return sorted(self.terms, key=sort_key)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for b in self.support():
            c = self.ctx.render(self.terms[b])
            if c == "1":
                parts.append(str(b))
                continue
            if "+" in c:
                c = f"({c})"
            parts.append(f"{c}*{b}")
        return " + ".join(parts)

    def __repr__(self):
        return f"AlgebraElement({self})"

    def to_vector(self, k: int) -> np.ndarray:
        """Dense code vector of the degree-k component in canonical column order."""
        table = degree_table(self.params.p, k, self.params.r)
        vec = np.zeros(table.size, dtype=np.int64)
        for b, c in self.terms.items():
            if b.degree == k:
                vec[table.index[b]] = c
        return vec


def from_vector(params: ConstructionParams, k: int, vec) -> AlgebraElement:
    table = degree_table(params.p, k, params.r)
    vec = np.asarray(vec)
    return AlgebraElement(params, {table.elements[c]: int(vec[c]) for c in np.flatnonzero(vec)})


def monomial(params: ConstructionParams, b: BasisElement, coeff=1) -> AlgebraElement:
    code = coeff.code if isinstance(coeff, FieldElement) else params.ctx.from_int(int(coeff))
    return AlgebraElement(params, {b: code})


def gen_a(params: ConstructionParams, i: int) -> AlgebraElement:
    return monomial(params, AGen(i))


def gen_v(params: ConstructionParams, i: int) -> AlgebraElement:
    return monomial(params, VBracket(i))


def zero(params: ConstructionParams) -> AlgebraElement:
    return AlgebraElement(params)


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    x._same(y)
    ctx = x.ctx
    out: dict = {}
    for bx, cx in x.terms.items():
        for by, cy in y.terms.items():
            sign, b = bracket_monomials(bx, by)
            if not sign:
                continue
            c = ctx.mul(cx, cy)
            if sign < 0:
                c = ctx.neg(c)
            out[b] = ctx.add(out.get(b, 0), c)
    return x._new(out)


def linear_ops(x: AlgebraElement, y: AlgebraElement | None = None, c=None, op: str = "add") -> AlgebraElement:
    """add (x + y), scale (c * x) or negate (-x)."""
    if op == "add":
        return x + y
    if op == "scale":
        return x.scale(c)
    if op == "negate":
        return -x
    raise ValueError(f"unknown op {op!r}")


def homogeneous_component(x: AlgebraElement, k: int) -> AlgebraElement:
    return x._new({b: c for b, c in x.terms.items() if b.degree == k})


def random_element(params: ConstructionParams, rng, max_degree: int = 4, terms: int = 4) -> AlgebraElement:
    """Sparse random element with up to ``terms`` monomials of degree <= max_degree."""
    p = params.p
    out = {}
    for _ in range(int(rng.integers(1, terms + 1))):
        k = int(rng.integers(1, max_degree + 1))
        table = degree_table(p, k, params.r)
        b = table.elements[int(rng.integers(table.size))]
        out[b] = int(rng.integers(1, params.ctx.order))
    return AlgebraElement(params, out)

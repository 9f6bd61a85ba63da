"""Finite groups from nilpotent quotients via the truncated BCH product.

The series log(exp X exp Y) is generated from Dynkin's commutator form: a sum
over sequences of exponent pairs (r_i, s_i), each contributing the left-normed
bracket of the word X^r1 Y^s1 ... X^rn Y^sn with coefficient

    (-1)^(n-1) / (n * (sum r_i + s_i) * prod r_i! s_i!).

Words are normalised by antisymmetry of the first two letters, so every kept
term starts with "XY" (or is a single letter).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

from .quotient import QuotientAlgebra, build_quotient
from .field import find_parameters
from .linalg import left_nullspace


class UnsupportedField(ValueError):
    """The field characteristic is too small for the Lazard correspondence."""


@dataclass(frozen=True)
class BCHSeries:
    c: int
    terms: tuple[tuple[str, Fraction], ...]

    def degree(self, k: int) -> list[tuple[str, Fraction]]:
        return [(w, a) for w, a in self.terms if len(w) == k]

    def __str__(self):
        parts = []
        for w, a in self.terms:
            mono = w if len(w) == 1 else "[" + ",".join(w) + "]"
            parts.append(mono if a == 1 else f"({a}){mono}")
        return " + ".join(parts)


def _pair_sequences(c):
    """Sequences of (r, s) != (0, 0) with total degree <= c."""
    pairs = [(r, t - r) for t in range(1, c + 1) for r in range(t + 1)]

    def rec(seq, total):
        yield seq, total
        for r, s in pairs:
            if total + r + s <= c:
                yield from rec(seq + ((r, s),), total + r + s)

    for seq, total in rec((), 0):
        if seq:
            yield seq, total


def _normalise(word: str, coeff: Fraction):
    if len(word) == 1:
        return word, coeff
    if word[0] == word[1]:
        return None, 0
    if word[0] == "Y":
        return "XY" + word[2:], -coeff
    return word, coeff


@lru_cache(maxsize=None)
def generate_bch(c: int) -> BCHSeries:
    if c < 1:
        raise ValueError("truncation class must be >= 1")
    acc: dict[str, Fraction] = {}
    for seq, total in _pair_sequences(c):
        n = len(seq)
        denom = n * total
        for r, s in seq:
            denom *= factorial(r) * factorial(s)
        coeff = Fraction((-1) ** (n - 1), denom)
        word = "".join("X" * r + "Y" * s for r, s in seq)
        word, coeff = _normalise(word, coeff)
        if word is not None:
            acc[word] = acc.get(word, Fraction(0)) + coeff
    terms = tuple(sorted(((w, a) for w, a in acc.items() if a), key=lambda t: (len(t[0]), t[0])))
    return BCHSeries(c, terms)


# -- symbolic oracle in the free associative algebra ---------------------------


def _assoc_mul(a, b, c):
    out: dict[str, Fraction] = {}
    for u, x in a.items():
        for v, y in b.items():
            if len(u) + len(v) <= c:
                out[u + v] = out.get(u + v, 0) + x * y
    return {w: x for w, x in out.items() if x}


def _assoc_exp(letter, c):
    return {letter * n: Fraction(1, factorial(n)) for n in range(c + 1)}


def bch_oracle(c: int) -> dict[str, Fraction]:
    """log(exp X exp Y) truncated at degree c, as noncommutative polynomial coefficients."""
    prod = _assoc_mul(_assoc_exp("X", c), _assoc_exp("Y", c), c)
    z = {w: x for w, x in prod.items() if w}
    out: dict[str, Fraction] = {}
    power = {"": Fraction(1)}
    for n in range(1, c + 1):
        power = _assoc_mul(power, z, c)
        for w, x in power.items():
            out[w] = out.get(w, 0) + Fraction((-1) ** (n + 1), n) * x
    return {w: x for w, x in out.items() if x}


def expand_left_normed(word: str) -> dict[str, int]:
    """[w1, w2, ..., wm] expanded into associative words."""
    cur = {word[0]: 1}
    for letter in word[1:]:
        nxt: dict[str, int] = {}
        for u, x in cur.items():
            nxt[u + letter] = nxt.get(u + letter, 0) + x
            nxt[letter + u] = nxt.get(letter + u, 0) - x
        cur = {w: x for w, x in nxt.items() if x}
    return cur


def series_to_associative(series: BCHSeries) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for w, a in series.terms:
        for u, x in expand_left_normed(w).items():
            out[u] = out.get(u, 0) + a * x
    return {w: x for w, x in out.items() if x}


# -- the group ----------------------------------------------------------------


class GroupElement:
    """Element of Q_p: a coefficient vector over the quotient representatives."""

    __slots__ = ("vec",)

    def __init__(self, vec):
        v = np.array(vec, dtype=np.int64)
        v.setflags(write=False)
        self.vec = v

    def __eq__(self, other):
        return isinstance(other, GroupElement) and np.array_equal(self.vec, other.vec)

    def __hash__(self):
        return hash(self.vec.tobytes())

    def is_identity(self) -> bool:
        return not self.vec.any()

    def __repr__(self):
        return f"GroupElement({self.vec.tolist()})"


class QpGroup:
    """The group on the quotient's underlying set with x o y = BCH(x, y)."""

    def __init__(self, quotient: QuotientAlgebra, series: BCHSeries | None = None, strict: bool = True):
        ctx = quotient.ctx
        p = quotient.p
        if not ctx.is_prime_field or ctx.characteristic <= p:
            raise UnsupportedField(
                f"Lazard correspondence needs a prime field of characteristic > p = {p}, got {ctx.describe()}"
            )
        cls = quotient.nilpotency_class
        if cls is None:
            raise ValueError("quotient is truncated; its class is unknown")
        if series is None:
            series = generate_bch(max(cls, 1))
        if strict and series.c < cls:
            raise ValueError(f"series truncated at {series.c} below the class {cls}")
        self.quotient = quotient
        self.series = series
        self.ctx = ctx
        self.dim = quotient.total_dim
        self.terms = []
        for w, a in series.terms:
            if a.denominator % ctx.characteristic == 0:
                raise UnsupportedField(f"denominator {a.denominator} is not invertible in {ctx.describe()}")
            code = ctx.mul(ctx.from_int(a.numerator), ctx.inv(ctx.from_int(a.denominator)))
            self.terms.append((w, code))

    @property
    def order_exponent(self) -> int:
        """|Q_p| = q ** order_exponent."""
        return self.dim

    def identity(self) -> GroupElement:
        return GroupElement(np.zeros(self.dim, dtype=np.int64))

    def element(self, vec) -> GroupElement:
        return GroupElement(np.asarray(vec, dtype=np.int64) % self.ctx.order)

    def random_element(self, rng) -> GroupElement:
        return GroupElement(rng.integers(0, self.ctx.order, self.dim))

    def generators(self) -> list[GroupElement]:
        """Degree-1 representatives as group elements."""
        q = self.quotient
        out = []
        if 1 in q.offsets:
            for i in range(q.dim(1)):
                v = np.zeros(self.dim, dtype=np.int64)
                v[q.offsets[1] + i] = 1
                out.append(GroupElement(v))
        return out

    def mul(self, x: GroupElement, y: GroupElement) -> GroupElement:
        ctx = self.ctx
        letters = {"X": x.vec, "Y": y.vec}
        values: dict[str, np.ndarray | None] = {}

        def value(word):
            if word in values:
                return values[word]
            if len(word) == 1:
                v = letters[word]
            else:
                head = value(word[:-1])
                v = None if head is None else self.quotient.bracket(head, letters[word[-1]])
                if v is not None and not v.any():
                    v = None
            values[word] = v
            return v

        out = np.zeros(self.dim, dtype=np.int64)
        for w, code in self.terms:
            v = value(w)
            if v is not None:
                out = ctx.vadd(out, ctx.vmul(v, code))
        return GroupElement(out)

    def inverse(self, x: GroupElement) -> GroupElement:
        return GroupElement(self.ctx.vneg(x.vec))

    def power(self, x: GroupElement, n: int) -> GroupElement:
        out = self.identity()
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def commutator(self, x: GroupElement, y: GroupElement) -> GroupElement:
        """x^-1 y^-1 x y."""
        return self.mul(self.mul(self.inverse(x), self.inverse(y)), self.mul(x, y))

    def iterated_commutator(self, xs) -> GroupElement:
        xs = list(xs)
        out = xs[0]
        for y in xs[1:]:
            out = self.commutator(out, y)
        return out

    def lift_matrix(self, which: str) -> np.ndarray:
        return self.quotient.induced_full(which)

    def lift_automorphism(self, which: str, x: GroupElement) -> GroupElement:
        M = self._lift_cache.get(which)
        if M is None:
            M = self._lift_cache[which] = self.lift_matrix(which)
        return GroupElement(self.ctx.matmul(x.vec[None, :], M)[0])

    @property
    def _lift_cache(self):
        cache = self.__dict__.get("_lifts")
        if cache is None:
            cache = self.__dict__["_lifts"] = {}
        return cache


def bch_multiply(x: GroupElement, y: GroupElement, q: QuotientAlgebra, series: BCHSeries) -> GroupElement:
    return QpGroup(q, series).mul(x, y)


def lift_automorphism(group: QpGroup, which: str, x: GroupElement) -> GroupElement:
    return group.lift_automorphism(which, x)


# -- verification ---------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class GroupReport:
    p: int
    q: int
    order_exponent: int
    nilpotency_class: int
    series_class: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]


def _lie_witness(q: QuotientAlgebra, length: int):
    """Indices of degree-1 representatives with a nonzero left-normed Lie bracket."""
    n1 = q.dim(1) if 1 in q.offsets else 0
    units = []
    for i in range(n1):
        v = np.zeros(q.total_dim, dtype=np.int64)
        v[q.offsets[1] + i] = 1
        units.append(v)

    def dfs(seq, val):
        if len(seq) == length:
            return seq
        for i, u in enumerate(units):
            nxt = q.bracket(val, u)
            if nxt.any():
                found = dfs(seq + [i], nxt)
                if found:
                    return found
        return None

    for i, u in enumerate(units):
        found = dfs([i], u)
        if found:
            return found
    return None


def commutator_depth(group: QpGroup, rng, trials: int) -> tuple[bool, bool, str]:
    """(nontrivial at depth = class, trivial at depth = class + 1, detail)."""
    cls = group.quotient.nilpotency_class
    gens = group.generators()
    witness = _lie_witness(group.quotient, cls)
    nontrivial = witness is not None and not group.iterated_commutator([gens[i] for i in witness]).is_identity()
    total = len(gens) ** (cls + 1)
    if total <= trials:
        seqs = itertools.product(range(len(gens)), repeat=cls + 1)
        how = f"all {total} generator sequences"
    else:
        seqs = (tuple(rng.integers(0, len(gens), cls + 1)) for _ in range(trials))
        how = f"{trials} random generator sequences"
    trivial = all(group.iterated_commutator([gens[i] for i in s]).is_identity() for s in seqs)
    for _ in range(min(trials, 100)):
        xs = [group.random_element(rng) for _ in range(cls + 1)]
        if not group.iterated_commutator(xs).is_identity():
            trivial = False
            break
    detail = f"witness {witness} at depth {cls}; depth {cls + 1} checked on {how} and random elements"
    return nontrivial, trivial, detail


def verify_group(target, trials: int = 1000, seed: int = 0, series: BCHSeries | None = None) -> GroupReport:
    """Randomised exact checks of the group built from a quotient (or from a prime p in lazard mode)."""
    q = target if isinstance(target, QuotientAlgebra) else build_quotient(find_parameters(int(target)))
    rng = np.random.default_rng(seed)
    group = QpGroup(q, series, strict=series is None)
    ctx = group.ctx
    rep = GroupReport(q.p, ctx.order, group.dim, q.nilpotency_class, group.series.c)
    add = lambda name, ok, detail="": rep.checks.append(Check(name, bool(ok), detail))

    samples = [(group.random_element(rng), group.random_element(rng), group.random_element(rng)) for _ in range(trials)]
    bad = sum(group.mul(group.mul(x, y), z) != group.mul(x, group.mul(y, z)) for x, y, z in samples)
    add("group_associativity", bad == 0, f"{bad} failures in {trials} triples")

    e = group.identity()
    ok = all(group.mul(x, e) == x and group.mul(e, x) == x and group.mul(x, group.inverse(x)) == e for x, _, _ in samples)
    add("group_identity_inverse", ok)

    bad = sum(not group.power(x, ctx.order).is_identity() for x, _, _ in samples)
    add("group_exponent", bad == 0, f"x^{ctx.order} = 1 failed {bad} times in {trials}")

    for which in ("f", "h"):
        ok = all(
            group.lift_automorphism(which, group.mul(x, y))
            == group.mul(group.lift_automorphism(which, x), group.lift_automorphism(which, y))
            for x, y, _ in samples
        )
        add(f"lifted_{which}_automorphism", ok)

    M = group.lift_matrix("f")
    fixed_f = left_nullspace(ctx, ctx.vsub(M, np.eye(group.dim, dtype=np.int64)))
    add("lifted_f_fixed_points_trivial", len(fixed_f) == 0, f"fixed space dimension {len(fixed_f)}")

    M = group.lift_matrix("h")
    fixed_h = left_nullspace(ctx, ctx.vsub(M, np.eye(group.dim, dtype=np.int64)))
    ok_comm = ok_closed = True
    if len(fixed_h):
        for _ in range(trials):
            x = group.element(ctx.matmul(rng.integers(0, ctx.order, (1, len(fixed_h))), fixed_h)[0])
            y = group.element(ctx.matmul(rng.integers(0, ctx.order, (1, len(fixed_h))), fixed_h)[0])
            xy = group.mul(x, y)
            if xy != group.mul(y, x):
                ok_comm = False
            if group.lift_automorphism("h", xy) != xy:
                ok_closed = False
            if not (ok_comm and ok_closed):
                break
    add("lifted_h_fixed_points_commute", ok_comm, f"fixed space dimension {len(fixed_h)}")
    add("lifted_h_fixed_points_closed", ok_closed)

    nontrivial, trivial, detail = commutator_depth(group, rng, trials)
    add("commutator_depth_equals_class", nontrivial and trivial, detail)
    return rep

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frobalg.action import (
    apply_f,
    apply_h,
    apply_h_inverse,
    complement_centralizer_basis,
    h_orbit,
    h_orbits,
    kernel_centralizer_basis,
    verify_frobenius_relation,
    weight_decomposition,
)
from frobalg.algebra import AlgebraElement, bracket, gen_a, monomial, random_element, zero
from frobalg.basis import AGen, VBracket, dimension_formula, enumerate_basis, weight
from frobalg.field import ConstructionParams, find_parameters

PARAMS = {p: find_parameters(p) for p in (3, 5, 7, 11)}
PARAMS_NC = {p: find_parameters(p, "noncoprime") for p in (3, 5, 7)}
ALL = list(PARAMS.values()) + list(PARAMS_NC.values())


def test_f_examples():
    P = PARAMS[3]
    assert apply_f(gen_a(P, 2)) == 4 * gen_a(P, 2)
    x = monomial(P, VBracket(1, (2,)))
    assert apply_f(x) == x
    rng = np.random.default_rng(0)
    y = random_element(P, rng)
    assert apply_f(apply_f(apply_f(y))) == y


def test_h_examples():
    P = PARAMS[3]
    assert apply_h(monomial(P, VBracket(1, (1,)))) == monomial(P, VBracket(2, (2,)))
    assert apply_h(monomial(P, VBracket(2, (2,)))) == monomial(P, VBracket(1, (1,)))


@pytest.mark.parametrize("P", ALL, ids=lambda P: f"{P.p}-{P.ctx.describe()}")
def test_orders_on_random_elements(P):
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = random_element(P, rng)
        assert apply_f(x, P.p) == x
        assert apply_h(x, P.p - 1) == x
        assert apply_h_inverse(apply_h(x)) == x


@pytest.mark.parametrize("P", ALL, ids=lambda P: f"{P.p}-{P.ctx.describe()}")
def test_frobenius_relation_holds(P):
    assert verify_frobenius_relation(P)


@pytest.mark.parametrize("p,bad_r", [(5, 4), (7, 2), (7, 4), (11, 3)])
def test_frobenius_relation_rejects_non_primitive_r(p, bad_r):
    P = PARAMS.get(p) or find_parameters(p)
    assert not verify_frobenius_relation(ConstructionParams(P.p, P.ctx, P.omega, bad_r))


@pytest.mark.parametrize("P", ALL, ids=lambda P: f"{P.p}-{P.ctx.describe()}")
def test_automorphisms(P):
    rng = np.random.default_rng(7)
    for _ in range(300):
        x, y = random_element(P, rng), random_element(P, rng)
        xy = bracket(x, y)
        assert apply_f(xy) == bracket(apply_f(x), apply_f(y))
        assert apply_h(xy) == bracket(apply_h(x), apply_h(y))
        assert apply_h_inverse(apply_f(apply_h(x))) == apply_f(x, P.r)


def test_weight_decomposition_examples():
    P = PARAMS[3]
    x = monomial(P, VBracket(1, (1,))) + monomial(P, VBracket(1, (2,)))
    parts = weight_decomposition(x)
    assert parts == {2: monomial(P, VBracket(1, (1,))), 0: monomial(P, VBracket(1, (2,)))}
    assert weight_decomposition(zero(P)) == {}
    assert len(weight_decomposition(monomial(P, VBracket(2, (2,))))) == 1


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(ALL))
def test_weight_decomposition_is_eigensplitting(seed, P):
    rng = np.random.default_rng(seed)
    x = random_element(P, rng, terms=8)
    parts = weight_decomposition(x)
    total = zero(P)
    for j, part in parts.items():
        total = total + part
        assert apply_f(part) == part.scale(P.omega**j)
        # h maps weight j to weight r*j
        assert set(weight_decomposition(apply_h(part))) == {P.r * j % P.p}
    assert total == x


def test_kernel_centralizer_examples():
    assert [str(b) for b in kernel_centralizer_basis(3, 2)] == ["[v1,a2]", "[v2,a1]"]
    assert kernel_centralizer_basis(7, 1) == []
    assert [str(b) for b in kernel_centralizer_basis(5, 2)] == ["[v1,a4]", "[v2,a3]", "[v3,a2]", "[v4,a1]"]


def test_h_orbit_examples():
    assert [str(b) for b in h_orbit(VBracket(1, (1,)), 3)] == ["[v1,a1]", "[v2,a2]"]
    assert [str(b) for b in h_orbit(AGen(1), 5)] == ["a1", "a2", "a4", "a3"]


@pytest.mark.parametrize("p,k", [(p, k) for p in (3, 5, 7, 11) for k in range(1, min(p - 1, 5) + 1)])
def test_orbit_structure(p, k):
    orbits = h_orbits(p, k)
    assert all(len(o) == p - 1 == len(set(o)) for o in orbits)
    for o in orbits:
        firsts = [b.i if isinstance(b, AGen) else b.i0 for b in o]
        assert len(set(firsts)) == p - 1
    assert sum(len(o) for o in orbits) == dimension_formula(p, k)
    P = PARAMS[p]
    sums = complement_centralizer_basis(P, k)
    assert len(sums) == dimension_formula(p, k) // (p - 1)
    assert all(apply_h(s) == s for s in sums)
    supports = [frozenset(s.terms) for s in sums]
    assert len(set(supports)) == len(supports)
    assert all(a.isdisjoint(b) for i, a in enumerate(supports) for b in supports[i + 1:])


@pytest.mark.parametrize("p,k", [(p, k) for p in (3, 5, 7) for k in range(1, 5)])
def test_nonzero_weight_dimension_counts_orbits(p, k):
    P = PARAMS[p]
    nonzero = sum(1 for b in enumerate_basis(p, k) if weight(b, p))
    outside = [s for s in complement_centralizer_basis(P, k) if weight(next(iter(s.terms)), p)]
    assert nonzero == (p - 1) * len(outside)


def test_complement_centralizer_examples():
    P = PARAMS[3]
    got = [str(s) for s in complement_centralizer_basis(P, 1)]
    assert got == ["a1 + a2", "v1 + v2"]
    got = [str(s) for s in complement_centralizer_basis(P, 2)]
    assert got == ["[v1,a1] + [v2,a2]", "[v1,a2] + [v2,a1]"]
    assert len(complement_centralizer_basis(PARAMS[5], 2)) == 4


def test_f_fixes_exactly_weight_zero():
    P = PARAMS[5]
    for b in enumerate_basis(5, 3):
        x = monomial(P, b)
        assert (apply_f(x) == x) == (weight(b, 5) == 0)

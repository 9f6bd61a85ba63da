import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from frobalg.algebra import (
    AlgebraElement,
    bracket,
    gen_a,
    gen_v,
    homogeneous_component,
    linear_ops,
    monomial,
    random_element,
    zero,
)
from frobalg.basis import VBracket
from frobalg.field import find_parameters

P3 = find_parameters(3)
P5 = find_parameters(5)
P5NC = find_parameters(5, "noncoprime")
PARAMS = [P3, P5, P5NC, find_parameters(7)]


def test_bracket_examples():
    P = P5
    assert bracket(gen_a(P, 1), gen_a(P, 2)).is_zero()
    assert bracket(gen_v(P, 1), gen_a(P, 1)) == monomial(P, VBracket(1, (1,)))
    x = bracket(gen_v(P, 1), gen_a(P, 1))
    y = bracket(gen_v(P, 2), gen_a(P, 2))
    assert bracket(x, y).is_zero()
    assert bracket(monomial(P, VBracket(1, (2,))), gen_a(P, 1)) == monomial(P, VBracket(1, (1, 2)))
    assert bracket(gen_a(P, 3), gen_v(P, 1)) == -monomial(P, VBracket(1, (3,)))


def test_linear_ops_examples():
    P = find_parameters(3)
    x = gen_v(P, 1) + 3 * monomial(P, VBracket(1, (1,)))
    assert linear_ops(x, -x).is_zero()
    assert linear_ops(x, c=1, op="scale") == x
    assert linear_ops(linear_ops(gen_v(P, 1), c=2, op="scale"), c=3, op="scale") == 6 * gen_v(P, 1)
    assert linear_ops(x, op="negate") == -x


def test_homogeneous_component_examples():
    P = P3
    x = gen_v(P, 1) + monomial(P, VBracket(1, (1,)))
    assert homogeneous_component(x, 2) == monomial(P, VBracket(1, (1,)))
    assert homogeneous_component(x, 3).is_zero()
    assert homogeneous_component(zero(P), 4).is_zero()
    assert homogeneous_component(x, 1) + homogeneous_component(x, 2) == x


def test_rendering():
    P = P5
    x = 3 * monomial(P, VBracket(1, (1, 2))) + 5 * monomial(P, VBracket(2, (1, 1)))
    assert str(x) == "3*[v1,a1,a2] + 5*[v2,a1,a1]"


def test_zero_coefficients_pruned():
    P = P3
    x = AlgebraElement(P, {VBracket(1): 7})
    assert x.is_zero() and not x.terms


def test_mismatched_params():
    with pytest.raises(ValueError):
        gen_a(P3, 1) + gen_a(P5, 1)
    with pytest.raises(ValueError):
        bracket(gen_a(P5, 1), gen_a(P5NC, 1))


@pytest.mark.parametrize("P", PARAMS, ids=lambda P: P.ctx.describe())
def test_identities_seeded(P):
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        x, y, z, w = (random_element(P, rng) for _ in range(4))
        assert bracket(x, y) == -bracket(y, x)
        assert (bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y)).is_zero()
        assert bracket(bracket(x, y), bracket(z, w)).is_zero()


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from(PARAMS))
def test_grading(seed, P):
    rng = np.random.default_rng(seed)
    j, k = (int(d) for d in rng.integers(1, 4, 2))
    x = homogeneous_component(random_element(P, rng, max_degree=3, terms=6), j)
    y = homogeneous_component(random_element(P, rng, max_degree=3, terms=6), k)
    z = bracket(x, y)
    assert z.degrees() <= {j + k}


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from(PARAMS))
def test_a_insertion_order_irrelevant(seed, P):
    rng = np.random.default_rng(seed)
    p = P.p
    i0, j1, j2 = (int(t) for t in rng.integers(1, p, 3))
    base = bracket(gen_v(P, i0), gen_a(P, int(rng.integers(1, p))))
    one = bracket(bracket(base, gen_a(P, j1)), gen_a(P, j2))
    two = bracket(bracket(base, gen_a(P, j2)), gen_a(P, j1))
    assert one == two


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from(PARAMS))
def test_bilinearity(seed, P):
    rng = np.random.default_rng(seed)
    x, y, z = (random_element(P, rng) for _ in range(3))
    c = int(rng.integers(1, P.ctx.order))
    assert bracket(x + y, z) == bracket(x, z) + bracket(y, z)
    assert bracket(x.scale(c), z) == bracket(x, z).scale(c)

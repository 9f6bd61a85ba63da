import pytest
from hypothesis import given, settings, strategies as st

from frobalg.field import (
    FieldContext,
    InvalidParameter,
    NoRootOfUnity,
    field_arithmetic,
    find_parameters,
    format_poly,
    is_irreducible,
    make_extension_field,
    make_prime_field,
    root_of_unity,
    smallest_primitive_root,
)

import oracles


FIELDS = [make_prime_field(7), make_prime_field(11), make_extension_field(2, 4), make_extension_field(3, 2),
          make_extension_field(2, 3)]


def test_prime_field_construction():
    assert make_prime_field(7).order == 7
    assert make_prime_field(11).describe() == "GF(11)"
    with pytest.raises(InvalidParameter):
        make_prime_field(6)
    with pytest.raises(InvalidParameter):
        make_prime_field(1)


@pytest.mark.parametrize("s,e", [(2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 4), (5, 2), (2, 10)])
def test_extension_modulus_is_smallest_irreducible(s, e):
    ctx = make_extension_field(s, e)
    assert ctx.modulus == oracles.smallest_irreducible(s, e)
    assert is_irreducible(list(ctx.modulus), s)


def test_extension_examples():
    assert format_poly(make_extension_field(2, 4).modulus) == "x^4+x+1"
    assert format_poly(make_extension_field(2, 2).modulus) == "x^2+x+1"
    assert make_extension_field(2, 1).order == 2
    with pytest.raises(InvalidParameter):
        make_extension_field(4, 2)


def test_arithmetic_examples():
    f7 = make_prime_field(7)
    assert field_arithmetic(f7.element(3), f7.element(5), "mul") == f7.element(1)
    assert field_arithmetic(f7.element(3), None, "inv") == f7.element(5)
    f16 = make_extension_field(2, 4)
    x, x3 = f16.element([0, 1]), f16.element([0, 0, 0, 1])
    assert str(field_arithmetic(x, x3, "mul")) == "x+1"
    with pytest.raises(ZeroDivisionError):
        field_arithmetic(f7.zero(), None, "inv")


def test_gf16_multiplication_matches_carryless_oracle():
    f16 = make_extension_field(2, 4)
    modulus = sum(c << i for i, c in enumerate(f16.modulus))
    for a in range(16):
        for b in range(16):
            assert f16.mul(a, b) == oracles.gf2_mul(a, b, modulus, 4)


def test_root_of_unity_examples():
    assert str(root_of_unity(make_prime_field(7), 3)) == "2"
    assert str(root_of_unity(make_prime_field(11), 5)) == "4"
    with pytest.raises(NoRootOfUnity):
        root_of_unity(make_prime_field(7), 5)


@pytest.mark.parametrize("q,p", [(7, 3), (11, 5), (29, 7), (23, 11), (53, 13), (31, 5), (43, 7)])
def test_root_of_unity_matches_generator_oracle(q, p):
    g = oracles.smallest_generator(q)
    assert root_of_unity(make_prime_field(q), p).code == pow(g, (q - 1) // p, q)


def test_root_of_unity_is_deterministic():
    ctx = make_extension_field(2, 4)
    assert root_of_unity(ctx, 5) == root_of_unity(ctx, 5)
    assert root_of_unity(ctx, 5).multiplicative_order() == 5


def test_find_parameters_examples():
    P = find_parameters(3)
    assert (P.q, str(P.omega), P.r) == (7, "2", 2)
    P = find_parameters(5)
    assert (P.q, str(P.omega), P.r) == (11, "4", 2)
    P = find_parameters(5, "noncoprime")
    assert (P.ctx.s, P.ctx.e, P.r) == (2, 4, 2)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_find_parameters_against_oracle(p):
    P = find_parameters(p)
    q = oracles.lazard_q(p)
    assert P.q == q
    assert P.omega.code == pow(oracles.smallest_generator(q), (q - 1) // p, q)
    assert P.r == oracles.smallest_primitive_root(p) == smallest_primitive_root(p)
    assert P.ctx.characteristic > p


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_params_invariants(p):
    for mode in ("lazard", "noncoprime"):
        P = find_parameters(p, mode)
        w = P.omega
        assert w**p == P.ctx.one()
        assert all(w**j != P.ctx.one() for j in range(1, p))
        assert {pow(P.r, j, p) for j in range(p - 1)} == set(range(1, p))
        assert P.ctx.characteristic != p
        if mode == "noncoprime":
            assert (p - 1) % P.ctx.characteristic == 0


@pytest.mark.parametrize("p", [2, 4, 9, 1])
def test_find_parameters_rejects_bad_p(p):
    with pytest.raises(InvalidParameter):
        find_parameters(p)


def test_validate_rejects_non_primitive_r():
    P = find_parameters(7)
    bad = type(P)(P.p, P.ctx, P.omega, 2)  # 2 has order 3 mod 7
    with pytest.raises(InvalidParameter):
        bad.validate()


field_and_codes = st.sampled_from(FIELDS).flatmap(
    lambda ctx: st.tuples(st.just(ctx), *[st.integers(0, ctx.order - 1)] * 3)
)


@settings(max_examples=300, deadline=None)
@given(field_and_codes)
def test_field_axioms(data):
    ctx, a, b, c = data
    x, y, z = ctx.element(a), ctx.element(b), ctx.element(c)
    assert (x * y) * z == x * (y * z)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == ctx.zero()
    if x:
        assert x * x.inv() == ctx.one()


@settings(max_examples=100, deadline=None)
@given(field_and_codes)
def test_vector_ops_agree_with_scalar_ops(data):
    import numpy as np

    ctx, a, b, _ = data
    va, vb = np.array([a, b, 0]), np.array([b, a, a])
    assert ctx.vadd(va, vb).tolist() == [ctx.add(int(s), int(t)) for s, t in zip(va, vb)]
    assert ctx.vmul(va, vb).tolist() == [ctx.mul(int(s), int(t)) for s, t in zip(va, vb)]
    assert ctx.vsub(va, vb).tolist() == [ctx.sub(int(s), int(t)) for s, t in zip(va, vb)]


def test_matmul_matches_scalar_loop():
    import numpy as np

    rng = np.random.default_rng(0)
    for ctx in FIELDS:
        A = rng.integers(0, ctx.order, (4, 5))
        B = rng.integers(0, ctx.order, (5, 3))
        ref = np.zeros((4, 3), dtype=np.int64)
        for i in range(4):
            for j in range(3):
                acc = 0
                for t in range(5):
                    acc = ctx.add(acc, ctx.mul(int(A[i, t]), int(B[t, j])))
                ref[i, j] = acc
        assert np.array_equal(ctx.matmul(A, B), ref)


def test_context_rejects_bad_modulus():
    with pytest.raises(InvalidParameter):
        FieldContext(2, 2, (1, 1))

import numpy as np
import pytest

from frobalg.action import apply_f, apply_h, complement_centralizer_basis, weight_decomposition
from frobalg.algebra import AlgebraElement, bracket, gen_a, gen_v, monomial
from frobalg.basis import VBracket, degree_table, enumerate_basis
from frobalg.field import find_parameters
from frobalg.ideals import (
    _generator_vectors,
    bound_I,
    bound_J,
    compute_I,
    compute_J,
    derived_complement_generators,
    echelonize,
    ideal_I_combinatorial,
    ideal_I_layer,
    ideal_J_layer,
    layer_elements,
)
from frobalg.linalg import Layer
from frobalg.suite import ideal_checks

import oracles

P3, P5, P7 = (find_parameters(p) for p in (3, 5, 7))
P5NC = find_parameters(5, "noncoprime")


def test_echelonize_examples():
    P = P3
    x = monomial(P, VBracket(1, (2,)))
    assert echelonize([x, 2 * x], P, 2).dim == 1
    assert echelonize([], P, 2).dim == 0
    y = monomial(P, VBracket(1, (1,)))
    z = monomial(P, VBracket(2, (2,)))
    layer = echelonize([y, y + z], P, 2)
    assert layer.dim == 2
    table = degree_table(3, 2)
    assert layer.pivots.tolist() == [table.index[VBracket(1, (1,))], table.index[VBracket(2, (2,))]]
    with pytest.raises(ValueError):
        echelonize([y + gen_v(P, 1)], P, 2)


def test_I_layer_examples():
    assert ideal_I_layer(P3, 2).dim == 2
    assert ideal_I_layer(P5, 2).dim == 4
    for P in (P3, P5, P7):
        assert ideal_I_layer(P, 1).dim == 0


def test_I_combinatorial_examples():
    assert [str(b) for b in ideal_I_combinatorial(3, 2)] == ["[v1,a2]", "[v2,a1]"]
    assert ideal_I_combinatorial(3, 3) == enumerate_basis(3, 3)
    assert len(enumerate_basis(3, 3)) == 6
    assert [str(b) for b in ideal_I_combinatorial(5, 2)] == ["[v1,a4]", "[v2,a3]", "[v3,a2]", "[v4,a1]"]


@pytest.mark.parametrize("p,k", [(p, k) for p in (3, 5, 7) for k in range(2, 7)])
def test_I_combinatorial_matches_subset_oracle(p, k):
    got = set(ideal_I_combinatorial(p, k))
    want = {b for b in enumerate_basis(p, k) if oracles.in_I_by_subsets(b.i0, b.M, p)}
    assert got == want


@pytest.mark.parametrize("P", [P3, P5, P7, P5NC], ids=lambda P: f"{P.p}-{P.ctx.describe()}")
def test_I_dual_oracle(P):
    I = compute_I(P, 6)
    for k in range(2, 7):
        table = degree_table(P.p, k, P.r)
        rows = np.zeros((0, table.size), dtype=np.int64)
        mons = ideal_I_combinatorial(P.p, k)
        if mons:
            rows = np.zeros((len(mons), table.size), dtype=np.int64)
            rows[np.arange(len(mons)), [table.index[b] for b in mons]] = 1
        assert Layer.from_rows(P.ctx, k, table.size, rows).same_span(I[k])


def test_bound_examples():
    assert bound_I(5, 2) == 4
    assert bound_I(5, 3) == 32
    assert bound_I(7, 1) == 0
    assert bound_J(3, 2) == 3
    assert bound_J(5, 2) == 5
    assert bound_J(5, 3) == 40
    assert bound_J(7, 1) == 0


@pytest.mark.parametrize("p,k", [(p, k) for p in (3, 5, 7, 11, 13) for k in range(2, 8)])
def test_bounds_match_oracle_formula(p, k):
    assert bound_I(p, k) == (k - 1) * (p - 1) ** (k - 1)
    assert bound_J(p, k) == p * sum((p - 1) ** (k - 2 - j) * oracles.pascal(j + p - 2, j) for j in range(k - 1))


def test_derived_generators_examples():
    gens = derived_complement_generators(P3, 2)
    assert len(gens) == 1
    assert gens[0] == sum((monomial(P3, b) for b in enumerate_basis(3, 2)[1:]), monomial(P3, enumerate_basis(3, 2)[0]))
    for P in (P5, P7, P5NC):
        assert len(derived_complement_generators(P, 2)) == 1
    assert len(derived_complement_generators(P3, 3)) <= 2


@pytest.mark.parametrize("P", [P3, P5, P7, P5NC, find_parameters(7, "noncoprime")], ids=lambda P: f"{P.p}-{P.ctx.describe()}")
def test_dense_generators_match_sparse(P):
    for k in range(2, 5):
        dense = _generator_vectors(P, k)
        sparse = [g.to_vector(k) for g in derived_complement_generators(P, k)]
        assert len(dense) == len(sparse)
        for a, b in zip(dense, sparse):
            assert np.array_equal(a % P.ctx.order if P.ctx.is_prime_field else a, b)


def test_J_layer_examples():
    J2 = ideal_J_layer(P3, 2)
    assert J2.dim == 3
    m = lambda i0, j: monomial(P3, VBracket(i0, (j,)))
    want = echelonize([m(1, 1), m(1, 2) + m(2, 1), m(2, 2)], P3, 2)
    assert J2.same_span(want)
    # the closed form at (3, 3) is 3 * (2 * C(1, 0) + C(2, 1)) = 12
    assert bound_J(3, 3) == 12
    assert ideal_J_layer(P3, 3, J2).dim == 6 <= 9
    assert ideal_J_layer(P5, 1).dim == 0


def _closure_reference(P, K):
    """Smallest f,h-invariant ideal containing [C(h), C(h)], degree by degree, by brute force on sparse elements."""
    p = P.p
    sums = {k: complement_centralizer_basis(P, k) for k in range(1, K)}
    gens1 = [gen_a(P, i) for i in range(1, p)] + [gen_v(P, i) for i in range(1, p)]
    layers = {}
    prev: list[AlgebraElement] = []
    for k in range(2, K + 1):
        cand = []
        for i in range(1, k):
            for x in sums.get(i, []):
                for y in sums.get(k - i, []):
                    cand.append(bracket(x, y))
        for x in prev:
            for g in gens1:
                cand.append(bracket(x, g))
        cand = [c for c in cand if c]
        layer = echelonize(cand, P, k)
        while True:
            rows = layer_elements(P, layer)
            images = rows + [apply_f(r) for r in rows] + [apply_h(r) for r in rows]
            bigger = echelonize(images, P, k)
            if bigger.dim == layer.dim:
                break
            layer = bigger
        layers[k] = layer
        prev = layer_elements(P, layer)
    return layers


@pytest.mark.parametrize("P,K", [(P3, 4), (P5, 4), (P5NC, 4), (P7, 3)], ids=["3", "5", "5nc", "7"])
def test_J_matches_brute_force_closure(P, K):
    J = compute_J(P, K)
    ref = _closure_reference(P, K)
    for k in range(2, K + 1):
        assert J[k].same_span(ref[k]), k


@pytest.mark.parametrize("p,mode", [(3, "lazard"), (5, "lazard"), (5, "noncoprime"), (7, "lazard"), (7, "noncoprime"), (11, "lazard")])
def test_ideal_invariants(quotient, p, mode):
    q = quotient(p, mode)
    checks = {c.name: c for c in ideal_checks(q)}
    assert all(c.passed for c in checks.values()), [c.name for c in checks.values() if not c.passed]
    for k in q.computed_degrees:
        assert q.I.dim(k) <= bound_I(p, k)
        assert q.J.dim(k) <= bound_J(p, k)
    assert q.I.dim(2) == bound_I(p, 2) == p - 1


def test_j32_meets_bound(quotient):
    assert quotient(3).J.dim(2) == 3 == bound_J(3, 2)


def test_ideal_property_sparse_p5():
    J = compute_J(P5, 3)
    I = compute_I(P5, 3)
    gens1 = [gen_a(P5, i) for i in range(1, 5)] + [gen_v(P5, i) for i in range(1, 5)]
    for space in (I, J):
        for x in layer_elements(P5, space[2]):
            for g in gens1:
                y = bracket(x, g)
                if y:
                    assert space[3].contains(y.to_vector(3))


def test_generator_weight_parts_permuted_by_h():
    P = P5
    J3 = compute_J(P, 3)[3]
    for g in derived_complement_generators(P, 3):
        for j, part in weight_decomposition(g).items():
            image = apply_h(part)
            assert set(weight_decomposition(image)) == {P.r * j % P.p}
            assert J3.contains(image.to_vector(3))

"""Named invariant checks over one prime, shared by the CLI and the tests."""

from __future__ import annotations

from math import comb

import numpy as np

from .action import (
    apply_f,
    apply_h,
    apply_h_inverse,
    complement_centralizer_basis,
    h_orbits,
    verify_frobenius_relation,
)
from .algebra import bracket, random_element
from .basis import degree_table, dimension_formula
from .field import ConstructionParams, find_parameters
from .ideals import _generator_vectors, _split_by_weight, bound_I, bound_J, ideal_I_combinatorial
from .lazard import Check, bch_oracle, generate_bch, series_to_associative, verify_group
from .linalg import Layer
from .quotient import (
    ClassCapExceeded,
    QuotientAlgebra,
    build_quotient,
    induced_automorphism_report,
    lower_bound,
    verify_complement_centralizer_abelian,
    verify_covering,
    verify_kernel_centralizer_trivial,
    weight_zero_vanishes,
)

# degrees used for the purely combinatorial orbit checks
ORBIT_DEGREE_CAP = 5


def table_rows(q: QuotientAlgebra) -> list[dict]:
    """Per-degree dimension table of a quotient."""
    p = q.p
    rows = []
    for k in q.computed_degrees:
        lb = lower_bound(p, k) if k >= 2 else None
        rows.append(
            {
                "k": k,
                "l": dimension_formula(p, k),
                "i_dim": q.I.dim(k),
                "i_bound": bound_I(p, k),
                "j_dim": q.J.dim(k),
                "j_bound": bound_J(p, k),
                "t_dim": q.T[k].dim,
                "quot_dim": q.dim(k),
                "lower_bound": lb,
                "lower_bound_informative": lb is not None and lb > 0,
            }
        )
    return rows


def quotient_checks(q: QuotientAlgebra) -> list[Check]:
    """Bounds, subadditivity, lower bound and class cap for a built quotient."""
    rows = table_rows(q)
    out = []
    bad = [r["k"] for r in rows if r["i_dim"] > r["i_bound"]]
    out.append(Check("bound_I", not bad, f"violated at degrees {bad}" if bad else ""))
    bad = [r["k"] for r in rows if r["j_dim"] > r["j_bound"]]
    out.append(Check("bound_J", not bad, f"violated at degrees {bad}" if bad else ""))
    bad = [r["k"] for r in rows if r["quot_dim"] < max(0, r["l"] - r["i_dim"] - r["j_dim"])]
    out.append(Check("quotient_subadditivity", not bad, f"violated at degrees {bad}" if bad else ""))
    bad = [r["k"] for r in rows if r["lower_bound_informative"] and r["quot_dim"] < r["lower_bound"]]
    out.append(Check("quotient_lower_bound", not bad, f"violated at degrees {bad}" if bad else ""))
    cls = q.nilpotency_class
    out.append(Check("class_cap", cls is None or cls <= q.p - 1, f"class {cls}, cap {q.p - 1}"))
    return out


def _random_checks(params: ConstructionParams, rng, trials: int) -> list[Check]:
    draw = lambda: random_element(params, rng)
    anti = jac = meta = f_hom = h_hom = rel = 0
    for _ in range(trials):
        x, y, z, w = draw(), draw(), draw(), draw()
        xy = bracket(x, y)
        anti += xy != -bracket(y, x)
        jac += bool(bracket(xy, z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y))
        meta += bool(bracket(xy, bracket(z, w)))
        f_hom += apply_f(xy) != bracket(apply_f(x), apply_f(y))
        h_hom += apply_h(xy) != bracket(apply_h(x), apply_h(y))
        rel += apply_h_inverse(apply_f(apply_h(x))) != apply_f(x, params.r)
    msg = lambda n: f"{n} failures in {trials} trials"
    return [
        Check("algebra_antisymmetry", anti == 0, msg(anti)),
        Check("algebra_jacobi", jac == 0, msg(jac)),
        Check("algebra_metabelian", meta == 0, msg(meta)),
        Check("f_automorphism", f_hom == 0, msg(f_hom)),
        Check("h_automorphism", h_hom == 0, msg(h_hom)),
        Check("frobenius_relation_random", rel == 0, msg(rel)),
    ]


def orbit_checks(params: ConstructionParams, max_degree: int) -> list[Check]:
    p = params.p
    lengths_ok = count_ok = fixed_ok = True
    for k in range(1, max_degree + 1):
        orbits = h_orbits(p, k, params.r)
        lengths_ok &= all(len(o) == p - 1 and len(set(o)) == p - 1 for o in orbits)
        sums = complement_centralizer_basis(params, k)
        count_ok &= len(sums) * (p - 1) == dimension_formula(p, k)
        fixed_ok &= all(apply_h(s) == s for s in sums)
    span = f"degrees 1..{max_degree}"
    return [
        Check("orbit_lengths", lengths_ok, span),
        Check("complement_centralizer_count", count_ok, span),
        Check("complement_centralizer_fixed", fixed_ok, span),
    ]


def _monomial_layer(params, k, monomials) -> Layer:
    table = degree_table(params.p, k, params.r)
    rows = np.zeros((len(monomials), table.size), dtype=np.int64)
    for n, b in enumerate(monomials):
        rows[n, table.index[b]] = 1
    return Layer.from_rows(params.ctx, k, table.size, rows)


def _apply_f_rows(params, k, rows):
    table = degree_table(params.p, k, params.r)
    return params.ctx.vmul(rows, params.omega_powers[table.weights][None, :])


def _apply_h_rows(params, k, rows):
    table = degree_table(params.p, k, params.r)
    out = np.zeros_like(rows)
    out[:, table.h_perm] = rows
    return out


def ideal_checks(q: QuotientAlgebra) -> list[Check]:
    params, p = q.params, q.p
    degrees = q.computed_degrees
    out = []

    dual = all(
        _monomial_layer(params, k, ideal_I_combinatorial(p, k)).same_span(q.I[k]) for k in degrees if k >= 2
    )
    out.append(Check("ideal_I_dual_oracle", dual, f"degrees 2..{max(degrees)}"))
    if 2 in degrees:
        out.append(Check("ideal_I_degree_two", q.I.dim(2) == p - 1, f"i_2 = {q.I.dim(2)}"))

    bad = [
        k for k in degrees
        if k >= 2 and q.J.dim(k) > (p - 1) * q.J.dim(k - 1) + p * comb(k + p - 4, k - 2)
    ]
    out.append(Check("ideal_J_recursion", not bad, f"violated at {bad}" if bad else ""))

    for space in (q.I, q.J):
        inv_ok = True
        closed_ok = True
        for k in degrees:
            rows = space[k].dense()
            if not len(rows):
                continue
            inv_ok &= space[k].contains(_apply_f_rows(params, k, rows))
            inv_ok &= space[k].contains(_apply_h_rows(params, k, rows))
            if k + 1 in space.layers and k >= 2:
                up = degree_table(p, k + 1, params.r)
                low = degree_table(p, k, params.r)
                for j in range(1, p):
                    shifted = np.zeros((len(rows), up.size), dtype=np.int64)
                    shifted[:, low.shift(j)] = rows
                    closed_ok &= space[k + 1].contains(shifted)
        out.append(Check(f"ideal_{space.name}_invariant", bool(inv_ok)))
        out.append(Check(f"ideal_{space.name}_closed", bool(closed_ok)))

    perm_ok = True
    for k in degrees:
        if k < 2:
            continue
        for vec in _generator_vectors(params, k):
            for w, part in _split_by_weight(params, k, vec).items():
                full = np.zeros((1, len(vec)), dtype=np.int64)
                cols = degree_table(p, k, params.r).weight_columns()[w]
                full[0, cols] = part[0]
                image = _apply_h_rows(params, k, full)
                table = degree_table(p, k, params.r)
                target = (params.r * w) % p
                perm_ok &= not image[0, table.weights != target].any()
                perm_ok &= q.J[k].contains(image)
    out.append(Check("ideal_J_generator_weights_permuted", bool(perm_ok)))
    return out


def structure_checks(q: QuotientAlgebra, rng, trials: int) -> list[Check]:
    dims = [q.dim(k) for k in q.computed_degrees]
    first_zero = next((n for n, d in enumerate(dims) if d == 0), None)
    cutoff = first_zero is None or not any(dims[first_zero:])
    out = [
        Check("quotient_cutoff", cutoff, f"dims {dims}"),
        Check("weight_zero_vanishes", weight_zero_vanishes(q)),
        Check("kernel_centralizer_trivial", verify_kernel_centralizer_trivial(q)),
        Check("complement_centralizer_abelian", verify_complement_centralizer_abelian(q)),
    ]
    for name, ok in induced_automorphism_report(q, rng, min(trials, 200)).items():
        out.append(Check(name, ok))
    return out


def bch_checks(max_class: int = 6) -> list[Check]:
    bad = [c for c in range(1, max_class + 1) if series_to_associative(generate_bch(c)) != bch_oracle(c)]
    return [Check("bch_matches_oracle", not bad, f"classes 1..{max_class}" + (f", mismatch at {bad}" if bad else ""))]


def run_suite(
    p: int,
    seed: int = 0,
    trials: int = 1000,
    noncoprime: bool = False,
    params: ConstructionParams | None = None,
) -> tuple[QuotientAlgebra | None, list[Check], list[str]]:
    """Every invariant for one prime: returns (quotient, checks, notes)."""
    if params is None:
        params = find_parameters(p, "noncoprime" if noncoprime else "lazard")
    rng = np.random.default_rng(seed)
    notes: list[str] = []
    checks = [
        Check("params_valid", True, f"{params.ctx.describe()}, omega={params.omega}, r={params.r}"),
        Check("frobenius_relation", verify_frobenius_relation(params)),
    ]
    checks += _random_checks(params, rng, trials)
    checks += orbit_checks(params, min(p - 1, ORBIT_DEGREE_CAP))
    try:
        q = build_quotient(params)
    except ClassCapExceeded as exc:
        checks.append(Check("class_cap", False, str(exc)))
        return None, checks, notes
    checks += quotient_checks(q)
    checks += ideal_checks(q)
    checks += structure_checks(q, rng, trials)

    # covering over the chosen field and over the field of the other mode
    checks.append(Check(f"covering[{params.ctx.describe()}]", verify_covering(q)))
    other = find_parameters(p, "lazard" if noncoprime else "noncoprime")
    if other.ctx != params.ctx:
        checks.append(Check(f"covering[{other.ctx.describe()}]", verify_covering(build_quotient(other))))

    ctx = params.ctx
    if noncoprime:
        notes.append("group checks skipped (--noncoprime)")
    elif not ctx.is_prime_field or ctx.characteristic <= p:
        notes.append(f"group checks skipped: {ctx.describe()} does not have characteristic > p")
    else:
        checks += bch_checks(6)
        report = verify_group(q, trials=trials, seed=seed)
        checks += [Check("group_" + c.name.removeprefix("group_"), c.passed, c.detail) for c in report.checks]
    return q, checks, notes

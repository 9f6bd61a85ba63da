"""The Frobenius group C_p x| C_{p-1} acting on L_p.

f scales a monomial of weight j by omega^j; h multiplies every index by r mod p.
Maps act on the right: x^(fg) = (x^f)^g.
"""

from __future__ import annotations

from .algebra import AlgebraElement
from .basis import BasisElement, apply_h_monomial, degree_table, weight
from .field import ConstructionParams, smallest_primitive_root


def apply_f(x: AlgebraElement, times: int = 1) -> AlgebraElement:
    params = x.params
    ctx, p = params.ctx, params.p
    pw = params.omega_powers
    return x._new({b: ctx.mul(int(pw[weight(b, p) * times % p]), c) for b, c in x.terms.items()})


def _h_monomial_power(b, p, r, times):
    rr = pow(r, times % (p - 1), p)
    return apply_h_monomial(b, p, rr)


def apply_h(x: AlgebraElement, times: int = 1) -> AlgebraElement:
    """Apply h ``times`` times (negative values apply the inverse)."""
    p, r = x.params.p, x.params.r
    return x._new({_h_monomial_power(b, p, r, times): c for b, c in x.terms.items()})


def apply_h_inverse(x: AlgebraElement) -> AlgebraElement:
    return apply_h(x, -1)


def _degree_one(params):
    from .algebra import monomial

    return [monomial(params, b) for b in degree_table(params.p, 1, params.r).elements]


def map_order(phi, generators, limit: int) -> int | None:
    """Least n <= limit with phi^n = id on all generators."""
    current = list(generators)
    for n in range(1, limit + 1):
        current = [phi(g) for g in current]
        if current == list(generators):
            return n
    return None


def verify_frobenius_relation(params: ConstructionParams) -> bool:
    """f^(h^-1) = f^r on the generators, with f of order p and h of order p - 1.

    With right actions f^(h^-1) is "apply h, then f, then h^-1".  The relation alone
    holds for any unit r; the order of h is what pins down the Frobenius group.
    """
    p = params.p
    gens = _degree_one(params)
    for x in gens:
        if apply_h_inverse(apply_f(apply_h(x))) != apply_f(x, params.r):
            return False
    if map_order(apply_f, gens, p) != p:
        return False
    return map_order(apply_h, gens, p - 1) == p - 1


def weight_decomposition(x: AlgebraElement) -> dict[int, AlgebraElement]:
    """Split x into its f-eigencomponents: part j satisfies f(part) = omega^j part."""
    p = x.params.p
    parts: dict[int, dict] = {}
    for b, c in x.terms.items():
        parts.setdefault(weight(b, p), {})[b] = c
    return {j: x._new(t) for j, t in sorted(parts.items())}


def kernel_centralizer_basis(p: int, k: int) -> list[BasisElement]:
    """Weight-0 monomials of degree k: a basis of C_{L_p}(C_p) in that degree."""
    return [b for b in degree_table(p, k).elements if weight(b, p) == 0]


def h_orbit(b: BasisElement, p: int, r: int | None = None) -> list[BasisElement]:
    if r is None:
        r = smallest_primitive_root(p)
    orbit = [b]
    for _ in range(p - 2):
        orbit.append(apply_h_monomial(orbit[-1], p, r))
    return orbit


def h_orbits(p: int, k: int, r: int | None = None) -> list[list[BasisElement]]:
    """Orbits of h on the degree-k basis, each led by its least element."""
    table = degree_table(p, k, r)
    seen = set()
    out = []
    for b in table.elements:
        if b in seen:
            continue
        orbit = h_orbit(b, p, table.r)
        seen.update(orbit)
        out.append(orbit)
    return out


def complement_centralizer_basis(params: ConstructionParams, k: int) -> list[AlgebraElement]:
    """Orbit sums of h on the degree-k basis; they span C_{L_p}(C_{p-1}) in degree k."""
    one = params.ctx.from_int(1)
    return [AlgebraElement(params, {b: one for b in orbit}) for orbit in h_orbits(params.p, k, params.r)]

"""Graded metabelian Lie algebras with a Frobenius group of automorphisms, their
quotients, and the finite groups obtained from them by the BCH product."""

from .field import (
    ConstructionParams,
    FieldContext,
    FieldElement,
    InvalidParameter,
    NoRootOfUnity,
    field_arithmetic,
    find_parameters,
    make_extension_field,
    make_prime_field,
    root_of_unity,
)
from .basis import AGen, VBracket, basis_index, dimension_formula, enumerate_basis, weight
from .algebra import AlgebraElement, bracket, homogeneous_component, linear_ops
from .action import (
    apply_f,
    apply_h,
    complement_centralizer_basis,
    h_orbit,
    kernel_centralizer_basis,
    verify_frobenius_relation,
    weight_decomposition,
)
from .ideals import (
    bound_I,
    bound_J,
    derived_complement_generators,
    echelonize,
    ideal_I_combinatorial,
    ideal_I_layer,
    ideal_J_layer,
)
from .quotient import (
    QuotientAlgebra,
    build_quotient,
    lower_bound,
    search_min_prime,
    verify_complement_centralizer_abelian,
    verify_covering,
    verify_kernel_centralizer_trivial,
)
from .lazard import BCHSeries, GroupElement, QpGroup, bch_multiply, generate_bch, lift_automorphism, verify_group

__version__ = "0.1.0"

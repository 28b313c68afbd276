"""Indicator functions and contrast representations of fractional factorial designs.

Everything is exact: coefficients are ``fractions.Fraction`` throughout.
"""
from .contrast import (
    ContrastLabel,
    ContrastMatrix,
    ContrastRep,
    check_strength_contrast,
    check_strength_marginal,
    compatible_sizes,
    contrast_matrix,
    contrast_rep,
    contrast_rep_from_theta,
    expand_contrast,
    marginal,
    strength,
    strength_constraints,
    z_basis,
)
from .core import (
    DesignSpace,
    FactorSpec,
    FractionalDesign,
    build_space,
    fraction_from_points,
    interpolate,
    model_matrix,
    space_from_counts,
)
from .enumerate import IncompatibleSizeError, count_orthogonal, enumerate_orthogonal
from .matrix import ExactMatrix, SingularMatrixError, solve_exact
from .polynomial import (
    IndicatorPoly,
    Poly,
    check_relations,
    divisor_basis,
    emit_relations,
    fraction_of_indicator,
    indicator_of,
    is_indicator,
    reduce_mod_design,
    relation_system,
)
from .symmetry import (
    GroupElement,
    apply,
    canonical_form,
    classify,
    complement,
    group_order,
    mu_transform,
    symmetry_group,
    theta_transform,
)

__version__ = "0.1.0"

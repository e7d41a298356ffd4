"""Birational maps: the Bäcklund catalog, charts, symmetry checks, group closure."""

from .birational import (
    ORIGINAL,
    TRANSFORMED,
    BirationalMap,
    UnknownMapError,
    UnsupportedMapError,
    apply_point,
    check_symplectic,
    compose,
    identity_map,
    inverse,
    is_identity,
    param_permutation,
    pullback,
    verify_inverse,
)
from .catalog import (
    ALL_NAMES,
    BACKLUND_NAMES,
    CHART_NAMES,
    CONJUGATE_NAMES,
    SIGMA_NAMES,
    catalog_get,
    catalog_names,
    provenance_table,
)
from .group import RelationEntry, closure, map_order, materialize_group, parameter_group_order, relation_orders
from .verify import (
    CONJUGATION_WORDS,
    ConjugationResult,
    SymmetryReport,
    check_polynomiality,
    check_symmetry,
    conjugate_by_phi1,
    polynomial_in_chart,
    primed_system,
    transform_system,
    transformed_system,
    verify_eq6,
    verify_time_correction,
)

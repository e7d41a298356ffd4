"""Numeric flows: compiled fields, Dormand-Prince integration, consistency checks."""

from .checks import (
    OrderReport,
    PathIndependenceReport,
    TwoRouteReport,
    corrupted_system,
    exact_start,
    fornberg_weights,
    numeric_symmetry_residual,
    order_of_accuracy,
    path_independence,
    random_path_pair,
    two_route_consistency,
)
from .compiled import (
    DEFAULT_GUARD,
    CompiledSystem,
    SingularityError,
    compile_map,
    compile_system,
    denominator_factors,
    eval_field_numeric,
    singular_base_factors,
)
from .integrate import (
    DEFAULT_TOL,
    BasePath,
    IntegrationError,
    MaxStepsExceeded,
    NumericPoint,
    Sample,
    SingularityAbort,
    Trajectory,
    integrate,
    write_csv,
)

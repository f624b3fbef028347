"""Fusion rings, cyclic quotients, and principal graph folds."""

from .errors import (
    AmbiguousMatchingError,
    AssumptionError,
    InputError,
    NumericError,
    ObstructionRequiredError,
    OrbifusionError,
    SchemaError,
    UnsupportedStructureError,
    ValidationError,
)
from .rings import (
    DimensionTable,
    FormalSum,
    FusionRing,
    ValidationReport,
    classify_group,
    fp_dimensions,
    fuse,
    hom_dim,
    invertibles,
    require_valid,
    validate_ring,
)
from .orbifold import (
    AssumptionReport,
    ObstructionValue,
    ObstructionVerdict,
    OrbifoldInput,
    OrbifoldSectors,
    SymmetryAction,
    Verdict,
    check_assumptions,
    conjugacy_assignment,
    cyclic_action,
    global_dim_check,
    obstruction_bound,
    orbifold_sectors,
)
from .graphs import (
    BipartiteGraph,
    DynkinClass,
    fold_graph,
    induced_graph_symmetry,
    path_graph,
    pf_norm,
    recognize,
    validate_symmetry,
)
from .su3 import (
    admissible_weights,
    kac_walton,
    obstruction_m,
    parse_weight,
    simple_current,
    su3_ring,
    verlinde_table,
    weight_label,
)
from .kernels import numba_enabled

__version__ = "0.1.0"

__all__ = [
    "AmbiguousMatchingError",
    "AssumptionError",
    "AssumptionReport",
    "BipartiteGraph",
    "DimensionTable",
    "DynkinClass",
    "FormalSum",
    "FusionRing",
    "InputError",
    "NumericError",
    "ObstructionRequiredError",
    "ObstructionValue",
    "ObstructionVerdict",
    "OrbifoldInput",
    "OrbifoldSectors",
    "OrbifusionError",
    "SchemaError",
    "SymmetryAction",
    "UnsupportedStructureError",
    "ValidationError",
    "ValidationReport",
    "Verdict",
    "admissible_weights",
    "check_assumptions",
    "classify_group",
    "conjugacy_assignment",
    "cyclic_action",
    "fold_graph",
    "fp_dimensions",
    "fuse",
    "global_dim_check",
    "hom_dim",
    "induced_graph_symmetry",
    "invertibles",
    "kac_walton",
    "numba_enabled",
    "obstruction_bound",
    "obstruction_m",
    "orbifold_sectors",
    "parse_weight",
    "path_graph",
    "pf_norm",
    "recognize",
    "require_valid",
    "simple_current",
    "su3_ring",
    "validate_ring",
    "validate_symmetry",
    "verlinde_table",
    "weight_label",
]

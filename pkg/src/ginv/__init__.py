"""Sparse and row-sparse generalized inverses of real matrices."""
from .errors import (
    BoundViolation,
    ConfigError,
    ConvergenceError,
    DimensionError,
    GinvError,
    RankError,
    SizeCapError,
    ZeroMatrixError,
)
from .formulations import ProblemKind, ReducedProblem, Solution, Status, build, export_lp
from .localsearch import LsConfig, build_ah_symmetric, local_search
from .matcore import (
    SvdFactors,
    ToleranceConfig,
    mp_pseudoinverse,
    nonzero_rows,
    norm_0,
    norm_1,
    norm_21,
    property_residuals,
    svd,
)
from .solvers import (
    SolverConfig,
    column_variant,
    oracle_small,
    solve,
    solve_p21,
    solve_p21_l1,
    solve_p123,
    solve_p123_full,
)
from .structure import BlockGamma, block_residuals, gamma_from_H, h_from_z

__version__ = "0.1.0"

__all__ = [
    "BoundViolation",
    "ConfigError",
    "ConvergenceError",
    "DimensionError",
    "GinvError",
    "RankError",
    "SizeCapError",
    "ZeroMatrixError",
    "SvdFactors",
    "ToleranceConfig",
    "mp_pseudoinverse",
    "nonzero_rows",
    "norm_0",
    "norm_1",
    "norm_21",
    "property_residuals",
    "svd",
    "SolverConfig",
    "column_variant",
    "oracle_small",
    "solve",
    "solve_p21",
    "solve_p21_l1",
    "solve_p123",
    "solve_p123_full",
    "ProblemKind",
    "ReducedProblem",
    "Solution",
    "Status",
    "build",
    "export_lp",
    "LsConfig",
    "build_ah_symmetric",
    "local_search",
    "BlockGamma",
    "block_residuals",
    "gamma_from_H",
    "h_from_z",
]

"""Broad learning system with sparse output-weight training.

A flat random-feature network (feature nodes, enhancement nodes, analytic
ridge output weights) plus a sparse trainer that alternates hard
thresholding with least-squares refits on the surviving nodes. Ships with
two deterministic noisy system-identification benchmarks and a grid-runner
CLI.
"""

from ._backend import backend_name
from .config import ExperimentConfig, default_config, parse_config
from .datasets import (
    CstrParams,
    NoiseSpec,
    TimeSeriesDataset,
    add_noise,
    cstr_rhs,
    cstr_steady_state,
    export_csv,
    gen_cstr_dataset,
    gen_nonlinear_system,
    import_csv,
    simulate_cstr,
)
from .errors import (
    ConfigError,
    CsvFormatError,
    DomainError,
    EmptyActiveSetError,
    InstabilityError,
    NumericalError,
    SblsError,
    ShapeError,
    SingularMatrixError,
)
from .linalg import solve_least_squares, solve_ridge
from .metrics import ExperimentRecord, active_nodes, rmse, sparsity_ratio
from .network import (
    BlsHyperparams,
    BlsNetwork,
    assemble_system_matrix,
    enhance,
    init_network,
    map_features,
    predict,
    system_matrix,
    train_standard_bls,
)
from .runner import emit_tracking_trace, run_grid, timing_report
from .sparse import (
    SparseWeights,
    StlsConfig,
    best_subset_oracle,
    hard_threshold,
    project_active_set,
    select_threshold,
    train_lasso_ista,
    train_sbls,
)

__version__ = "0.1.0"

__all__ = [
    "BlsHyperparams",
    "BlsNetwork",
    "ConfigError",
    "CstrParams",
    "CsvFormatError",
    "DomainError",
    "EmptyActiveSetError",
    "ExperimentConfig",
    "ExperimentRecord",
    "InstabilityError",
    "NoiseSpec",
    "NumericalError",
    "SblsError",
    "ShapeError",
    "SingularMatrixError",
    "SparseWeights",
    "StlsConfig",
    "TimeSeriesDataset",
    "active_nodes",
    "add_noise",
    "assemble_system_matrix",
    "backend_name",
    "best_subset_oracle",
    "cstr_rhs",
    "cstr_steady_state",
    "default_config",
    "emit_tracking_trace",
    "enhance",
    "export_csv",
    "gen_cstr_dataset",
    "gen_nonlinear_system",
    "hard_threshold",
    "import_csv",
    "init_network",
    "map_features",
    "parse_config",
    "predict",
    "project_active_set",
    "rmse",
    "run_grid",
    "select_threshold",
    "simulate_cstr",
    "solve_least_squares",
    "solve_ridge",
    "sparsity_ratio",
    "system_matrix",
    "timing_report",
    "train_lasso_ista",
    "train_sbls",
    "train_standard_bls",
]

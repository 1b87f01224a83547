"""Low-discrepancy signings of symmetric matrix collections."""

from importlib.metadata import PackageNotFoundError, version

from .baselines import brute_force_min, monte_carlo_gaussian_norm, random_coloring, random_coloring_stats
from .concentration import (
    ConcentrationParams,
    bbvh_bound,
    chernoff_bound,
    concentration_params,
    gram_matrix,
    sigma_param,
    v_param,
)
from .errors import (
    ConvergenceError,
    InvalidInputError,
    NumericalError,
    ParseError,
    PartialColoringFailure,
    SpecbalError,
)
from .full import SolveFailure, SolveReport, endgame_exhaustive, solve, truncate_dimension
from .instance import (
    Instance,
    generate_block_diagonal,
    generate_diagonal_spencer,
    generate_low_rank_random,
    generate_lower_bound,
    read_instance,
    write_instance,
)
from .partial import PartialColoringConfig, ProjectionConfig, partial_color, project_to_body
from .subspace import bad_subspace, restricted_sigma_param, restricted_v_param

try:
    __version__ = version("specbal")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"

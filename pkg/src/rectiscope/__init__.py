"""Multiscale flatness and discrete curvature diagnostics for point clouds."""

__version__ = "0.1.0"

from .core import (
    AffineSubspace,
    Ball,
    BudgetError,
    DiscreteMeasure,
    InputError,
    Simplex,
    SpatialIndex,
    affine_hull,
    dist_to_affine,
    h_min,
    menger_curvature,
    range_query,
    simplex_volume,
)
from .beta import (
    BetaResult,
    ScaleConfig,
    ScaleProfile,
    beta2,
    beta2_centered,
    beta_p,
    jones_function,
)
from .curvature import (
    CurvatureEstimate,
    curv_exhaustive,
    curv_integrand,
    curv_monte_carlo,
    curv_profile,
)
from .density import (
    DensityProfile,
    chop,
    density_profile,
    min_pairwise_distance,
    upper_regularity_constant,
)
from .generators import GeneratorSpec, cantor4_cells, generate, weierstrass
from .secant import (
    SecantConfig,
    SecantFailure,
    SecantFrame,
    dist_vs_hmin_bound,
    find_secant_frame,
    theoretical_constants,
    verify_frame_conclusions,
)
from .verify import (
    InequalityReport,
    check_beta_vs_curv,
    check_holder_chain,
    check_jones_vs_curv,
    check_volume_identity,
    holder_sum_inequality,
)
from .cloudio import (
    load_measure,
    measure_hash,
    read_binary,
    read_csv,
    write_binary,
    write_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Numerical tools for the stratified geometry of density-matrix spaces.

States live in a fixed direct sum of complex matrix blocks. The library
classifies them by rank pattern and unitary orbit type, builds local conic
charts around any point of a rank stratum, decomposes direct-sum state
spaces as joins, and ships randomized suites that check the stratification
claims (frontier condition, Whitney condition (B)) numerically.
"""

from .errors import (
    AlphaTooLarge,
    AmbiguousClustering,
    AmbiguousRank,
    CoincidentPoints,
    DimensionTooLarge,
    EigenvalueOnContour,
    NotBlockDiagonal,
    NotHermitian,
    NotInAlgebra,
    NotInChartDomain,
    NotOrthonormal,
    NotPositive,
    NotUnitary,
    SchemaError,
    StratumLabError,
    TraceNotOne,
    ValidationError,
)
from .states import (
    AlgebraDescriptor,
    DensityMatrix,
    bloch_matrix,
    bloch_state,
    commutative_algebra,
    cone_algebra,
    cone_matrix,
    cone_state,
    full_algebra,
    is_psd_eigen,
    is_psd_sylvester,
    is_pure,
    maximally_mixed,
    simplex_state,
    state_functional,
    validate_density,
)
from .strata import (
    StratumCoords,
    StratumLabel,
    classify,
    frontier_leq,
    numerical_rank,
    retract_to_stratum,
    stratum_coords,
    stratum_dim,
    stratum_dim_label,
    stratum_from_coords,
    tangent_basis,
)
from .charts import (
    ChartConfig,
    ChartPoint,
    chart_config_for,
    chart_forward,
    chart_inverse,
    contour_projector,
    contour_small_part,
    in_chart_domain,
    small_spectral_projector,
    spectral_gap,
)
from .orbits import (
    OrbitSignature,
    adjoint_act,
    isotropy_dim,
    orbit_dim,
    orbit_signature,
    orbit_type_leq,
)
from .joins import (
    JOIN_RANK_NOTE,
    JoinPieceLabel,
    JoinPoint,
    convex_split,
    join_piece_label,
    join_state,
    make_join_point,
    rank_of_join,
    summand_algebras,
)
from .sampler import (
    approach_state,
    sample_algebra,
    sample_block_unitary,
    sample_hermitian,
    sample_hs,
    sample_rank,
    sample_unitary,
    sequence_toward,
    sequence_toward_label,
)
from .whitney import (
    FrontierReport,
    WhitneyReport,
    enumerate_labels,
    frontier_check,
    frontier_matrix,
    whitney_b_estimate,
    whitney_negative_control,
)
from .verify import (
    SUITES,
    suite_frontier,
    suite_join,
    suite_orbit_census,
    suite_projector_equiv,
    suite_whitney,
)
from .fileio import RunConfig, canonical_json, read_matrix, write_matrix

__version__ = "0.1.0"

__all__ = [
    "AlgebraDescriptor",
    "AlphaTooLarge",
    "AmbiguousClustering",
    "AmbiguousRank",
    "ChartConfig",
    "ChartPoint",
    "CoincidentPoints",
    "DensityMatrix",
    "DimensionTooLarge",
    "EigenvalueOnContour",
    "FrontierReport",
    "JOIN_RANK_NOTE",
    "JoinPieceLabel",
    "JoinPoint",
    "NotBlockDiagonal",
    "NotHermitian",
    "NotInAlgebra",
    "NotInChartDomain",
    "NotOrthonormal",
    "NotPositive",
    "NotUnitary",
    "OrbitSignature",
    "RunConfig",
    "SUITES",
    "SchemaError",
    "StratumCoords",
    "StratumLabel",
    "StratumLabError",
    "TraceNotOne",
    "ValidationError",
    "WhitneyReport",
    "adjoint_act",
    "approach_state",
    "bloch_matrix",
    "bloch_state",
    "canonical_json",
    "chart_config_for",
    "chart_forward",
    "chart_inverse",
    "classify",
    "commutative_algebra",
    "cone_algebra",
    "cone_matrix",
    "cone_state",
    "contour_projector",
    "contour_small_part",
    "convex_split",
    "enumerate_labels",
    "frontier_check",
    "frontier_leq",
    "frontier_matrix",
    "full_algebra",
    "in_chart_domain",
    "is_psd_eigen",
    "is_psd_sylvester",
    "is_pure",
    "isotropy_dim",
    "join_piece_label",
    "join_state",
    "make_join_point",
    "maximally_mixed",
    "numerical_rank",
    "orbit_dim",
    "orbit_signature",
    "orbit_type_leq",
    "rank_of_join",
    "read_matrix",
    "retract_to_stratum",
    "sample_algebra",
    "sample_block_unitary",
    "sample_hermitian",
    "sample_hs",
    "sample_rank",
    "sample_unitary",
    "sequence_toward",
    "sequence_toward_label",
    "simplex_state",
    "small_spectral_projector",
    "spectral_gap",
    "state_functional",
    "stratum_coords",
    "stratum_dim",
    "stratum_dim_label",
    "stratum_from_coords",
    "suite_frontier",
    "suite_join",
    "suite_orbit_census",
    "suite_projector_equiv",
    "suite_whitney",
    "summand_algebras",
    "tangent_basis",
    "validate_density",
    "whitney_b_estimate",
    "whitney_negative_control",
    "write_matrix",
]

from p3bundles.oracle.configs import (
    GeometryConfig,
    Line,
    MarkedPoint,
    SamplingFailed,
    config_hash,
    join_configs,
    partner_part,
    ruling_part,
    sample_conics,
    sample_modification,
    sample_ruling,
)
from p3bundles.oracle.sheaves import (
    OracleInternalError,
    h0_ideal,
    h1_ideal,
    ideal_cohomology,
    marked_point_evaluation_surjective,
    restriction_onto_lines_surjective,
    restriction_onto_points_surjective,
    quadric_restriction_onto_points_surjective,
    serre_cohomology,
    structure_cohomology,
)

__all__ = [
    "GeometryConfig",
    "Line",
    "MarkedPoint",
    "OracleInternalError",
    "SamplingFailed",
    "config_hash",
    "h0_ideal",
    "h1_ideal",
    "ideal_cohomology",
    "join_configs",
    "marked_point_evaluation_surjective",
    "partner_part",
    "quadric_restriction_onto_points_surjective",
    "restriction_onto_lines_surjective",
    "restriction_onto_points_surjective",
    "ruling_part",
    "sample_conics",
    "sample_modification",
    "sample_ruling",
    "serre_cohomology",
    "structure_cohomology",
]

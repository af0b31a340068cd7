from .hyperbolic import (
    bourdon_limit,
    bourdon_metric,
    hamenstadt_metric,
    hyp_distance,
    ideal_triangle_height,
    lemma_sincomp_check,
    orthogonal_frame_config,
    truncated_gromov_bourdon,
)
from .examples import admissible_parameter_scan, glued_quadrilateral, six_point_example

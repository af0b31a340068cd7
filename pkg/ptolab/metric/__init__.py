from .core import (
    canonical_four_point,
    check_metric_axioms,
    cross_ratio,
    involute,
    log_quasi_metric_constant,
    mobius_equivalent,
    quasi_metric_constant,
    quasi_metric_space,
    snowflake,
)
from .ptolemy import equality_intersection_angle, ptolemy_check, ptolemy_slack_batch
from .metrization import chain_metric, distortion_curve, estimate_critical_exponent, frink_bound_check
from .hyperbolicity import basepoint_change_identity_check, boundary_quasimetric, delta_at_basepoint, delta_global, gromov_product

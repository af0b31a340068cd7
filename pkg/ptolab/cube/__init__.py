from .combinatorics import hamming_distance, n_schedule, phi, scaling_map, slice_elements
from .diagonal import find_short_diagonal
from .experiment import snowflake_obstruction_experiment

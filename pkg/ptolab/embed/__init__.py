from .snowflake_map import ball_snowflake, line_snowflake, sample_l1_ball
from .sphere import (
    composite_embedding,
    embed_point,
    inverse_stereographic,
    inversion_check,
    mobius_check_map,
    pair_table,
    stereographic,
)

import numpy as np
import pytest

from ptolab.embed.snowflake_map import (
    as_l1_points,
    ball_snowflake,
    line_snowflake,
    measure_ball_constant,
    pairwise_l1,
    sample_l1_ball,
)
from ptolab.errors import PreconditionError
from ptolab.types import L1Point


def test_line_snowflake_is_exact_on_the_grid():
    N = 8
    t = -1.0 + (2.0 / N) * np.arange(N + 1)
    H = line_snowflake(t, N)
    assert H.shape == (N + 1, N)
    sq = np.sum((H[:, None, :] - H[None, :, :]) ** 2, axis=2)
    np.testing.assert_allclose(sq, np.abs(t[:, None] - t[None, :]), atol=1e-14)


def test_line_snowflake_fixes_zero():
    h = line_snowflake(0.0, 16)
    assert h.shape == (16,)
    assert not h.any()


def test_line_snowflake_domain():
    with pytest.raises(PreconditionError):
        line_snowflake(1.5, 8)
    with pytest.raises(PreconditionError):
        line_snowflake(0.0, 1)


def test_ball_snowflake_shapes():
    assert ball_snowflake(L1Point(coords=[0.25, -0.5]), 4).shape == (8,)
    assert ball_snowflake(np.array([0.25, -0.5]), 4).shape == (8,)
    assert ball_snowflake(np.zeros((3, 2)), 4).shape == (3, 8)


def test_points_outside_the_l1_ball():
    with pytest.raises(PreconditionError):
        as_l1_points([[0.75, 0.5]])
    with pytest.raises(PreconditionError):
        L1Point(coords=[0.75, 0.5])


def test_grid_points_give_constant_one():
    Z = np.array([[0.0, 0.0], [0.25, 0.5], [-0.5, 0.25], [0.0, -1.0], [1.0, 0.0]])
    c, ratios = measure_ball_constant(Z, 8)
    assert c == pytest.approx(1.0)
    assert ratios.size == 10
    np.testing.assert_allclose(pairwise_l1(Z)[0], [0.0, 0.75, 0.75, 1.0, 1.0])


def test_measure_on_chosen_pairs():
    Z = np.array([[0.0, 0.0], [0.5, 0.0], [0.5, 0.0]])
    c, ratios = measure_ball_constant(Z, 4, pairs=np.array([[0, 1], [1, 2]]))
    # the coincident pair is skipped
    assert ratios.size == 1
    assert c == pytest.approx(1.0)


def test_sample_l1_ball():
    Z = sample_l1_ball(500, 3, np.random.default_rng(0))
    assert Z.shape == (500, 3)
    assert np.abs(Z).sum(axis=1).max() <= 1.0 + 1e-12
    with pytest.raises(PreconditionError):
        sample_l1_ball(0, 3, np.random.default_rng(0))

"""Acceptance-size runs of the randomized experiments. Seeded, so reruns are identical."""
import itertools

import numpy as np
import pytest

from ptolab.cube.combinatorics import n_schedule, slice_elements
from ptolab.cube.diagonal import find_short_diagonal
from ptolab.cube.experiment import snowflake_obstruction_experiment
from ptolab.embed.snowflake_map import ball_snowflake, sample_l1_ball
from ptolab.embed.sphere import composite_embedding, inverse_stereographic, mobius_check_map, stereographic
from ptolab.engine.suites import run_suite
from ptolab.metric.core import check_metric_axioms, mobius_equivalent
from ptolab.metric.generators import kovalev_metric, path_metric
from ptolab.metric.metrization import distortion_curve
from ptolab.metric.ptolemy import ptolemy_check
from ptolab.models.examples import six_point_example
from ptolab.types import DistanceMatrix

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("name", ["model-ptolemy", "bourdon-limit", "sqrt-ptolemy", "frink",
                                  "involution", "hyperbolicity"])
def test_randomized_suite(name):
    result = run_suite(name, seed=2024)
    assert result.passed, f"{name}: {result.failures} failures, worst {result.worst}, {result.details}"


@pytest.mark.parametrize("a", [1.0, 1.01, 1.02, 1.05])
def test_six_point_example(a):
    D = six_point_example(a, a, a)
    assert check_metric_axioms(D).is_metric
    report = ptolemy_check(D, eq_tol=1e-9)
    assert report.satisfied
    assert report.equality_count == 3
    pairs = {frozenset(q) for q in report.equality_quadruples}
    expected = {frozenset({f"e{i}+", f"e{i}-", f"e{j}+", f"e{j}-"}) for i, j in itertools.combinations((1, 2, 3), 2)}
    assert pairs == expected

    mob = mobius_equivalent(D, six_point_example())
    if a == 1.0:
        assert mob.equivalent
    else:
        assert not mob.equivalent
        assert mob.value == pytest.approx(a * a, abs=1e-12)


def _random_slice_target(sl, rng) -> DistanceMatrix:
    X = rng.normal(size=(len(sl), 4))
    d = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=2)
    return DistanceMatrix(labels=sl.labels, d=0.5 * (d + d.T))


def test_cube_schedule_and_square_diagonal():
    """Random Euclidean targets on S_{5,2}: both strategies find a diagonal within sqrt(2) b."""
    assert n_schedule(3) == [2, 5, 26]
    sl = slice_elements(5, 2)
    rng = np.random.default_rng(7)
    for _ in range(200):
        target = _random_slice_target(sl, rng)
        inductive = find_short_diagonal(target, 2, strategy="inductive")
        brute = find_short_diagonal(target, 2, strategy="brute")
        assert inductive.qualifies and brute.qualifies
        assert brute.length <= inductive.length * (1 + 1e-12)


def test_cube_experiment_trends_against_large_q():
    exp = snowflake_obstruction_experiment(0.8, m_list=(1, 2, 3))
    assert [r.n for r in exp.rows] == [2, 5, 26]
    assert all(r.witness.qualifies for r in exp.rows)
    assert exp.verdict["lhs_decreasing"]
    assert exp.verdict["against_q_above_half"]


def test_composite_embedding():
    rng = np.random.default_rng(11)
    Z = sample_l1_ball(100, 3, rng)
    emb = composite_embedding(Z, 512)
    assert 0.47 <= emb.fitted_exponent <= 0.53
    assert emb.ptolemy.satisfied

    S = emb.sphere.coords
    assert np.abs(inverse_stereographic(stereographic(S)) - S).max() <= 1e-12
    planar = 0.25 * ball_snowflake(Z, 512)
    assert mobius_check_map(inverse_stereographic, planar, quadruples=1000, rng=rng) <= 1e-9


def test_kovalev_plateau_against_path_growth():
    """
    Kovalev segments stay bounded at s = 2 and 4 while the path family grows:
    linearly at s = 2 and like sqrt(n) at s = 1.5.
    """
    sizes = [25, 50, 100, 200]
    for s in (2.0, 4.0):
        c = [distortion_curve(kovalev_metric(n), [s]).c_values[0] for n in sizes]
        assert c[-1] <= 1.05 * max(c[:-1])

    for s, rate in ((2.0, 1.0), (1.5, 0.5)):
        c = [distortion_curve(path_metric(n), [s]).c_values[0] for n in sizes]
        for n, value in zip(sizes, c):
            assert value == pytest.approx(n ** (s - 1), rel=1e-9)
        assert c[-1] / c[0] == pytest.approx((sizes[-1] / sizes[0]) ** rate, rel=1e-9)

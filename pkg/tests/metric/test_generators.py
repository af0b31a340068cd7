import math

import numpy as np
import pytest

from ptolab.errors import PreconditionError
from ptolab.metric.core import check_metric_axioms
from ptolab.metric.generators import (
    cycle_metric,
    euclidean_matrix,
    hyperbolic_disk_net,
    kovalev_metric,
    l1_lattice_net,
    path_metric,
    random_ideal_config,
    random_metric,
    random_metric_batch,
    random_quasi_metric,
    random_tree_metric,
    random_ultrametric,
    star_metric,
)


def test_same_seed_same_matrix():
    a = random_metric(6, np.random.default_rng(42), kind="closure")
    b = random_metric(6, np.random.default_rng(42), kind="closure")
    np.testing.assert_array_equal(a.d, b.d)


def test_uniform_metric_entries_lie_in_one_two():
    D = random_metric(10, np.random.default_rng(0))
    off = D.d[~np.eye(10, dtype=bool)]
    assert off.min() >= 1.0 and off.max() <= 2.0


def test_unknown_random_kind():
    with pytest.raises(PreconditionError):
        random_metric(4, np.random.default_rng(0), kind="gaussian")


def test_metric_batch_is_a_stack_of_metrics():
    batch = random_metric_batch(50, 5, np.random.default_rng(1))
    assert batch.shape == (50, 5, 5)
    for j in range(5):
        assert np.all(batch[:, :, None, j] + batch[:, None, j, :] >= batch - 1e-12)


def test_quasi_metric_constant_is_capped():
    Q = random_quasi_metric(12, np.random.default_rng(3), max_K=1.5)
    assert Q.K <= 1.5 + 1e-12


def test_path_cycle_star_shapes():
    assert path_metric(4).labels == ("0", "1", "2", "3", "4")
    assert cycle_metric(6).value("v0", "v3") == 3.0
    assert cycle_metric(6).value("v0", "v5") == 1.0
    S = star_metric(3)
    assert S.labels == ("c", "l1", "l2", "l3")
    assert S.value("l1", "l2") == 2.0
    assert star_metric(3, with_center=False).value("l1", "l3") == 1.0
    with pytest.raises(PreconditionError):
        cycle_metric(2)


def test_kovalev_metric_values():
    D = kovalev_metric(10)
    assert D.value("0", "9") == pytest.approx(math.log(10.0))
    assert check_metric_axioms(D).is_metric


def test_ultrametric_inequality():
    D = random_ultrametric(9, np.random.default_rng(5))
    d = D.d
    for j in range(9):
        assert np.all(d <= np.maximum(d[:, j, None], d[None, j, :]) + 1e-12)


def test_tree_metric_has_requested_leaves():
    D = random_tree_metric(6, np.random.default_rng(2))
    assert D.n == 6
    assert check_metric_axioms(D).is_metric
    with pytest.raises(PreconditionError):
        random_tree_metric(1, np.random.default_rng(2))


@pytest.mark.parametrize("k, size", [(3, 63), (4, 129), (5, 231), (6, 377)])
def test_l1_lattice_net_sizes(k, size):
    assert l1_lattice_net(k, 3).n == size


def test_l1_lattice_net_distances():
    D = l1_lattice_net(2, 2)
    # (1/k) Z^2 inside the unit l1 ball: 13 points, opposite corners at distance 2
    assert D.n == 13
    assert D.d.max() == pytest.approx(2.0)


def test_euclidean_matrix_default_labels():
    D = euclidean_matrix([[0, 0], [3, 4]])
    assert D.labels == ("x0", "x1")
    assert D.value("x0", "x1") == 5.0


def test_hyperbolic_disk_net_center_distances():
    """Points on ring r sit at hyperbolic distance r from the center."""
    D = hyperbolic_disk_net(2.0, 2, 4)
    assert D.n == 9
    assert D.value("o", "r0s0") == pytest.approx(1.0)
    assert D.value("o", "r1s3") == pytest.approx(2.0)


def test_random_ideal_config_is_on_the_sphere():
    cfg = random_ideal_config(5, 3, np.random.default_rng(0))
    np.testing.assert_allclose(np.linalg.norm(cfg.ideal_points, axis=1), 1.0)
    assert cfg.labels == ("y1", "y2", "y3", "y4", "y5")
    assert cfg.n == 3

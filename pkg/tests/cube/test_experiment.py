import math

import numpy as np
import pytest

from ptolab.cube.combinatorics import slice_elements
from ptolab.cube.experiment import (
    build_instance,
    canonical_target,
    classical_mds,
    euclidean_snowflake_target,
    l1_slice_distances,
    obstruction_verdict,
    snowflake_constant,
    snowflake_obstruction_experiment,
)
from ptolab.errors import PreconditionError, ScheduleTooLargeError
from ptolab.metric.ptolemy import ptolemy_check
from ptolab.types import ObstructionRow


def test_l1_slice_distances_are_scaled_hamming():
    d = l1_slice_distances(slice_elements(4, 2))
    # 1100 vs 1010 differ in two places, 1100 vs 0011 in four; divided by m = 2
    assert d[0, 1] == pytest.approx(1.0)
    assert d[0, 5] == pytest.approx(2.0)


def test_classical_mds_recovers_planar_points():
    X = np.array([[0.0, 0.0], [3.0, 0.0], [0.0, 4.0], [1.0, 1.0]])
    sq = np.sum((X[:, None, :] - X[None, :, :]) ** 2, axis=2)
    Y = classical_mds(sq)
    assert Y.shape[1] == 2
    rec = np.sum((Y[:, None, :] - Y[None, :, :]) ** 2, axis=2)
    np.testing.assert_allclose(rec, sq, atol=1e-9)


def test_half_power_target_is_exact():
    """l1 on the slice is of negative type, so its square root embeds isometrically."""
    sl = slice_elements(5, 2)
    c, _ = snowflake_constant(euclidean_snowflake_target(sl, 0.5), sl, 0.5)
    assert c == pytest.approx(1.0, abs=1e-9)


def test_snowflake_constant_of_the_canonical_target():
    sl = slice_elements(5, 2)
    c, scaled = snowflake_constant(canonical_target(sl), sl, 1.0)
    # Euclidean vs l1 on I/2: ratios 1/sqrt2 (one swap) and 1/2 (two swaps)
    assert c == pytest.approx(math.sqrt(math.sqrt(2)))
    assert ptolemy_check(scaled).satisfied


def test_build_instance_from_the_schedule():
    inst = build_instance(2, 0.8)
    assert (inst.n, inst.m) == (5, 2)
    assert len(inst.slice) == 10
    assert inst.b >= inst.c * 2 ** 0.8 / 2 ** 0.8
    assert ptolemy_check(inst.target).satisfied


def test_build_instance_from_a_target_matrix():
    target = canonical_target(slice_elements(5, 2))
    inst = build_instance(2, 1.0, target)
    assert inst.n == 5
    with pytest.raises(PreconditionError):
        build_instance(1, 1.0, target)


def test_schedule_size_limit():
    with pytest.raises(ScheduleTooLargeError) as exc:
        build_instance(4, 0.8)
    assert exc.value.m == 4
    with pytest.raises(ScheduleTooLargeError):
        build_instance(3, 0.8, size_limit=100)


def test_unknown_target_builder():
    with pytest.raises(PreconditionError, match="Unknown target builder"):
        build_instance(2, 0.8, "spherical")


def test_obstruction_experiment_rows():
    exp = snowflake_obstruction_experiment(0.8, m_list=(1, 2))
    assert exp.q == 0.8
    assert [r.m for r in exp.rows] == [1, 2]
    assert [r.n for r in exp.rows] == [2, 5]
    for row in exp.rows:
        assert row.witness.qualifies
        assert row.best_diagonal <= row.diagonal_bound * (1 + 1e-9)
        assert row.constraint_slack == pytest.approx(row.constraint_lhs - row.constraint_rhs)
    assert exp.rows[0].constraint_lhs == pytest.approx(1.0)
    assert exp.rows[1].constraint_lhs == pytest.approx(math.sqrt(2) / 2 ** 0.8)
    assert exp.rows[1].required_c == pytest.approx(2 ** 0.15)
    assert exp.rows[0].implied_c == pytest.approx(1.0)
    for row in exp.rows:
        assert row.required_c * (1 - 1e-9) <= row.implied_c <= row.c * (1 + 1e-9)
    assert exp.verdict["lhs_decreasing"]
    assert exp.verdict["against_q_above_half"]


def test_obstruction_experiment_below_half():
    exp = snowflake_obstruction_experiment(0.4, m_list=(1, 2))
    assert not exp.verdict["against_q_above_half"]
    with pytest.raises(PreconditionError):
        snowflake_obstruction_experiment(0.0)


def _row(m, q, implied):
    return ObstructionRow(m=m, n=0, c=2.0, b=1.0, best_diagonal=1.0, diagonal_bound=1.0,
                          long_pair_lower_bound=1.0, constraint_lhs=math.sqrt(m) / m ** q,
                          constraint_rhs=0.25, required_c=m ** ((q - 0.5) / 2), implied_c=implied)


def test_verdict_follows_the_measured_distortion():
    q = 0.8
    growing = [_row(1, q, 1.0), _row(2, q, 1.2), _row(3, q, 1.3)]
    flat = [_row(1, q, 1.3), _row(2, q, 1.3), _row(3, q, 1.3)]
    short = [_row(1, q, 1.0), _row(2, q, 1.0), _row(3, q, 1.5)]

    assert obstruction_verdict(q, growing)["against_q_above_half"]
    # lhs is the same in all three; only the measurements differ
    assert obstruction_verdict(q, flat)["lhs_decreasing"]
    assert not obstruction_verdict(q, flat)["against_q_above_half"]
    assert not obstruction_verdict(q, short)["against_q_above_half"]
    assert not obstruction_verdict(0.4, [_row(1, 0.4, 1.0), _row(2, 0.4, 1.2)])["against_q_above_half"]


def test_canonical_builder_ignores_q():
    a = build_instance(2, 0.8, "canonical")
    b = build_instance(2, 0.5, "canonical")
    assert list(a.slice.labels) == list(b.slice.labels)
    # same points up to the rescaling fitted for each q
    np.testing.assert_allclose(a.target.d / a.target.d.max(), b.target.d / b.target.d.max(), rtol=1e-12)

import math

import numpy as np
import pytest

from ptolab.cube.combinatorics import slice_elements
from ptolab.cube.diagonal import find_short_diagonal, side_bound, slice_of_target
from ptolab.cube.experiment import canonical_target
from ptolab.errors import PreconditionError, StructuralError
from ptolab.types import DistanceMatrix


@pytest.fixture
def square_slice_target():
    return canonical_target(slice_elements(5, 2))


def test_side_bound_of_the_canonical_target(square_slice_target):
    b, pair = side_bound(square_slice_target, slice_elements(5, 2))
    assert b == pytest.approx(math.sqrt(2) / 2)
    assert pair is not None


def test_slice_is_recovered_from_labels(square_slice_target):
    sl = slice_of_target(square_slice_target)
    assert (sl.n, sl.m) == (5, 2)
    partial = square_slice_target.submatrix(square_slice_target.labels[:-1])
    with pytest.raises(StructuralError):
        slice_of_target(partial)


@pytest.mark.parametrize("strategy", ["inductive", "brute"])
def test_square_cube_diagonal(square_slice_target, strategy):
    w = find_short_diagonal(square_slice_target, 2, strategy=strategy)
    assert w.K == (1, 2, 3, 4)
    assert w.cube_endpoints == ((0, 0), (1, 1))
    assert w.endpoints == ((1, 0, 1, 0, 0), (0, 1, 0, 1, 0))
    assert w.length == pytest.approx(1.0)
    assert w.bound == pytest.approx(1.0)
    assert w.qualifies


def test_edge_for_m_one():
    target = canonical_target(slice_elements(2, 1))
    w = find_short_diagonal(target, 1)
    assert w.endpoints == ((1, 0), (0, 1))
    assert w.length == pytest.approx(math.sqrt(2))


def test_three_cube_in_the_schedule_slice():
    target = canonical_target(slice_elements(26, 3))
    w = find_short_diagonal(target, 3)
    assert w.qualifies
    assert w.length <= math.sqrt(3) * math.sqrt(2) / 3 * (1 + 1e-9)


def test_non_ptolemaic_target_is_refused(square_slice_target):
    squared = DistanceMatrix(labels=square_slice_target.labels, d=square_slice_target.d ** 2)
    with pytest.raises(PreconditionError, match="Ptolemy"):
        find_short_diagonal(squared, 2)


def test_declared_side_bound_is_checked(square_slice_target):
    with pytest.raises(PreconditionError, match="Side bound"):
        find_short_diagonal(square_slice_target, 2, b=0.5)


def test_wrong_m_and_strategy(square_slice_target):
    with pytest.raises(StructuralError):
        find_short_diagonal(square_slice_target, 1)
    with pytest.raises(PreconditionError, match="Unknown strategy"):
        find_short_diagonal(square_slice_target, 2, strategy="greedy")


def test_inductive_needs_the_schedule_size():
    target = canonical_target(slice_elements(4, 2))
    with pytest.raises(PreconditionError, match="n >= 5"):
        find_short_diagonal(target, 2)
    w = find_short_diagonal(target, 2, strategy="brute")
    assert w.length == pytest.approx(1.0)


def test_sampled_brute_search_is_reproducible(square_slice_target):
    a = find_short_diagonal(square_slice_target, 2, strategy="brute", sample=3, rng=np.random.default_rng(5))
    b = find_short_diagonal(square_slice_target, 2, strategy="brute", sample=3, rng=np.random.default_rng(5))
    assert a.K == b.K and a.length == b.length

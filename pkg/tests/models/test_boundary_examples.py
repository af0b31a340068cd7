import math

import numpy as np
import pytest

from ptolab.errors import PreconditionError
from ptolab.metric.ptolemy import ptolemy_check
from ptolab.models.examples import (
    SIX_POINT_LABELS,
    admissible_parameter_scan,
    glued_quadrilateral,
    six_point_example,
)
from ptolab.models.hyperbolic import bourdon_metric, orthogonal_frame_config


def test_glued_square_is_flat():
    a = math.sqrt(0.5)
    B = glued_quadrilateral(a, a)
    assert B.cone_angle == pytest.approx(2 * math.pi)
    report = ptolemy_check(B.matrix)
    assert report.satisfied
    assert report.equality_count == 1


def test_glued_quadrilateral_with_cone_excess():
    """Angles past the flat case give a cone angle above 2 pi and strict Ptolemy inequality."""
    B = glued_quadrilateral(0.8, 0.8)
    assert B.cone_angle > 2 * math.pi
    assert B.basepoint == "cone"
    report = ptolemy_check(B.matrix)
    assert report.satisfied
    assert report.equality_count == 0


@pytest.mark.parametrize("a, b", [(0.5, 0.5), (0.0, 1.0), (1.2, 0.5)])
def test_glued_quadrilateral_rejects_bad_sides(a, b):
    with pytest.raises(PreconditionError):
        glued_quadrilateral(a, b)


def test_six_point_example_at_one_is_the_orthogonal_frame():
    D = six_point_example()
    frame = bourdon_metric(orthogonal_frame_config(3)).matrix.reordered(SIX_POINT_LABELS)
    np.testing.assert_allclose(D.d, frame.d, atol=1e-15)


def test_six_point_example_rejects_non_metric_parameters():
    with pytest.raises(PreconditionError, match="triangle"):
        six_point_example(0.5, 1.0, 1.0)
    with pytest.raises(PreconditionError):
        six_point_example(0.0, 1.0, 1.0)


def test_parameter_scan_rows():
    rows = admissible_parameter_scan([0.5, 1.0], [1.0], [1.0])
    assert [(r.a, r.b, r.c) for r in rows] == [(0.5, 1.0, 1.0), (1.0, 1.0, 1.0)]
    bad, good = rows
    assert not bad.is_metric and bad.triangle_witness is not None
    assert not bad.admissible
    assert good.admissible
    assert good.triangle_witness is None and good.ptolemy_witness is None


def test_parameter_scan_near_one_stays_admissible():
    rows = admissible_parameter_scan([1.01, 1.02, 1.05])
    assert len(rows) == 27
    assert all(r.is_metric for r in rows)


def test_parameter_scan_range():
    with pytest.raises(PreconditionError, match="Scan values"):
        admissible_parameter_scan([0.4])

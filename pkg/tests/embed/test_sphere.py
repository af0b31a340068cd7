import itertools
import math

import numpy as np
import pytest

from ptolab.embed.snowflake_map import sample_l1_ball
from ptolab.embed.sphere import (
    composite_embedding,
    embed_point,
    inverse_stereographic,
    inversion,
    inversion_check,
    mobius_check_map,
    pair_table,
    pole,
    stereographic,
)
from ptolab.errors import PreconditionError
from ptolab.types import L1Point, SpherePoint


def _l1_grid(step: float, dim: int = 2) -> np.ndarray:
    k = int(round(1 / step))
    pts = [p for p in itertools.product(range(-k, k + 1), repeat=dim) if sum(map(abs, p)) <= k]
    return np.array(pts, dtype=float) * step


def test_stereographic_round_trip():
    Y = np.random.default_rng(0).normal(size=(20, 3))
    S = inverse_stereographic(Y)
    np.testing.assert_allclose(np.linalg.norm(S, axis=1), 1.0, atol=1e-14)
    np.testing.assert_allclose(stereographic(S), Y, atol=1e-10)


def test_the_pole_is_infinity():
    with pytest.raises(PreconditionError, match="pole"):
        stereographic(pole(2))
    assert stereographic(pole(2), extended=True) is None
    np.testing.assert_array_equal(inverse_stereographic(None, dim=2), [1.0, 0.0, 0.0])
    with pytest.raises(PreconditionError):
        inverse_stereographic(None)


def test_mixed_batch_with_the_pole():
    out = stereographic(np.array([[1.0, 0.0], [0.0, 1.0]]), extended=True)
    assert out[0] is None
    assert out[1] == pytest.approx([1.0])


def test_off_sphere_input():
    with pytest.raises(PreconditionError, match="unit sphere"):
        stereographic(np.array([0.5, 0.0, 0.0]))


def test_inversion_agrees_with_stereographic_projection():
    S = inverse_stereographic(np.random.default_rng(1).normal(size=(10, 2)))
    result = inversion_check(S)
    assert result.defect is not None and result.defect < 1e-12
    np.testing.assert_allclose(result.image[:, 1:], stereographic(S), atol=1e-12)


def test_inversion_without_the_standard_sphere_has_no_defect():
    result = inversion_check(np.array([0.0, 1.0]), r=2.0)
    assert result.defect is None
    with pytest.raises(PreconditionError):
        inversion(pole(2))


def test_stereographic_preserves_cross_ratios():
    Y = np.random.default_rng(2).normal(size=(30, 3))
    assert mobius_check_map(inverse_stereographic, Y, quadruples=500) < 1e-10


def test_a_cube_map_is_not_mobius():
    Y = np.random.default_rng(3).uniform(0.1, 2.0, size=(30, 2))
    assert mobius_check_map(lambda P: P ** 3, Y, quadruples=200) > 1e-3
    with pytest.raises(PreconditionError):
        mobius_check_map(inverse_stereographic, Y[:3])


def test_composite_embedding_on_grid_points():
    Z = _l1_grid(0.25)
    emb = composite_embedding(Z, 8)
    assert emb.ptolemy.satisfied
    assert len(emb.points) == len(emb.sphere) == Z.shape[0]
    np.testing.assert_allclose(np.linalg.norm(emb.sphere.coords, axis=1), 1.0, atol=1e-14)
    # |y| <= 1/4 keeps the chordal distortion of the projection within 17/16
    assert emb.constant <= math.sqrt(17 / 16) + 1e-12
    assert abs(emb.fitted_exponent - 0.5) < 0.1
    np.testing.assert_allclose(emb.bourdon.d, emb.chordal.d / 2)


def test_composite_embedding_of_random_points():
    Z = sample_l1_ball(40, 3, np.random.default_rng(7))
    emb = composite_embedding(Z, 64, threads=2)
    assert emb.ptolemy.satisfied
    assert emb.resolution == 64 and emb.scale == 0.25
    with pytest.raises(PreconditionError):
        composite_embedding(Z, 64, scale=0.0)


def test_sphere_point_goes_through_stereographic():
    p = SpherePoint(inverse_stereographic(np.array([0.3, -1.2])))
    assert p.dimension == 2
    np.testing.assert_allclose(stereographic(p), [0.3, -1.2], atol=1e-14)
    with pytest.raises(PreconditionError):
        SpherePoint([1.0, 1.0, 0.0])


def test_embed_point_matches_the_batch_embedding():
    Z = sample_l1_ball(5, 2, np.random.default_rng(4))
    emb = composite_embedding(Z, 32)
    p = embed_point(L1Point(Z[3]), 32)
    assert isinstance(p, SpherePoint)
    np.testing.assert_allclose(p.coords, emb.sphere.coords[3], atol=1e-15)
    with pytest.raises(PreconditionError, match="one point"):
        embed_point(Z, 32)


def test_pair_table_rows():
    Z = sample_l1_ball(6, 2, np.random.default_rng(8))
    emb = composite_embedding(Z, 32)
    rows = pair_table(emb, 5, np.random.default_rng(0))
    assert len(rows) == 5
    assert rows == pair_table(emb, 5, np.random.default_rng(0))
    idx = [(emb.chordal.index(i), emb.chordal.index(j)) for i, j, *_ in rows]
    assert idx == sorted(idx) and all(a < b for a, b in idx)
    for (i, j, l1, image, ratio), (a, b) in zip(rows, idx):
        assert l1 == emb.l1_distances[a, b]
        assert image == emb.chordal.d[a, b]
        assert ratio == pytest.approx(image / math.sqrt(l1))
    assert len(pair_table(emb, 100, np.random.default_rng(0))) == 15

from __future__ import annotations
import logging
from typing import Optional, Tuple, Union

import numpy as np

from ptolab.errors import PreconditionError
from ptolab.types import L1Point

log = logging.getLogger("Ptolab.Embed")

_RANGE_TOL = 1e-12


def line_snowflake(t, N: int) -> np.ndarray:
    """
    Cumulative-indicator profile on N cells of width w = 2/N over [-1, 1]:
    h_k(t) = sqrt(w) clip((t - (-1 + k w)) / w, 0, 1), shifted so that h(0) = 0.

    For grid points |h(t) - h(s)|^2 = |t - s| exactly. Scalars give shape (N,),
    arrays of shape (k,) give (k, N).
    """
    if N < 2:
        raise PreconditionError(f"Resolution must be at least 2, got N={N}")
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1 + _RANGE_TOL):
        raise PreconditionError(f"Line snowflake is defined on [-1, 1], got {float(np.max(np.abs(t)))}")
    w = 2.0 / N
    left = -1.0 + w * np.arange(N)

    def profile(x):
        return np.sqrt(w) * np.clip((x[..., None] - left) / w, 0.0, 1.0)

    return profile(t) - profile(np.zeros(()))


def as_l1_points(z) -> np.ndarray:
    if isinstance(z, L1Point):
        return z.coords[None, :]
    arr = np.atleast_2d(np.asarray(z, dtype=float))
    norms = np.abs(arr).sum(axis=1)
    if np.any(norms > 1 + _RANGE_TOL):
        raise PreconditionError(f"l1 norm {float(norms.max())} exceeds 1")
    return arr


def ball_snowflake(z: Union[L1Point, np.ndarray], N: int) -> np.ndarray:
    """(z_1, z_2, ...) -> (h(z_1), h(z_2), ...); a batch of shape (k, dim) gives (k, dim*N)."""
    Z = as_l1_points(z)
    out = line_snowflake(Z, N).reshape(Z.shape[0], Z.shape[1] * N)
    return out[0] if isinstance(z, L1Point) or np.ndim(z) == 1 else out


def pairwise_l1(Z: np.ndarray) -> np.ndarray:
    return np.abs(Z[:, None, :] - Z[None, :, :]).sum(axis=2)


def measure_ball_constant(Z: np.ndarray, N: int, pairs: Optional[np.ndarray] = None) -> Tuple[float, np.ndarray]:
    """
    Smallest c with (1/c)|zz'| <= |g(z)g(z')|^2 <= c|zz'| over the given index pairs
    (all pairs when None); returns c and the per-pair ratios.
    """
    Z = as_l1_points(Z)
    G = ball_snowflake(Z, N)
    if pairs is None:
        i, j = np.triu_indices(Z.shape[0], 1)
    else:
        i, j = pairs[:, 0], pairs[:, 1]
    l1 = np.abs(Z[i] - Z[j]).sum(axis=1)
    sq = ((G[i] - G[j]) ** 2).sum(axis=1)
    keep = l1 > 0
    ratio = sq[keep] / l1[keep]
    if ratio.size == 0:
        return 1.0, ratio
    c = float(max(ratio.max(), 1.0 / ratio.min()))
    log.debug(f"Ball snowflake constant over {ratio.size} pairs at N={N}: c={c:.6g}")
    return c, ratio


def sample_l1_ball(count: int, dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform samples of the l1 unit ball: Laplace directions scaled by u^{1/dim}."""
    if count < 1 or dim < 1:
        raise PreconditionError(f"Need count, dim >= 1, got count={count}, dim={dim}")
    x = rng.laplace(size=(count, dim))
    x /= np.abs(x).sum(axis=1, keepdims=True)
    r = rng.uniform(size=(count, 1)) ** (1.0 / dim)
    return x * r

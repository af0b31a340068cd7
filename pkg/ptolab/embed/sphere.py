from __future__ import annotations
import logging
import math
from typing import Callable, List, Optional, Union

import numpy as np

from ptolab.embed.snowflake_map import as_l1_points, ball_snowflake, pairwise_l1
from ptolab.errors import PreconditionError
from ptolab.metric.ptolemy import ptolemy_check
from ptolab.types import CompositeEmbedding, DistanceMatrix, InversionResult, L1Point, PointCloud, SpherePoint

log = logging.getLogger("Ptolab.Embed")

SPHERE_TOL = 1e-12
DEFAULT_SCALE = 0.25


def _as_rows(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_2d(arr), arr.ndim == 1


def stereographic(x, extended: bool = False):
    """
    Sphere -> R^n, x -> (x_1, ..., x_n) / (1 - x_0). The pole e_0 goes to
    infinity: None when `extended`, otherwise an error. Accepts a SpherePoint,
    one coordinate row or a (k, n+1) batch.
    """
    X, single = _as_rows(x)
    norms = np.linalg.norm(X, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise PreconditionError(f"Point is not on the unit sphere (norm {float(norms.max()):.12g})")
    at_pole = np.isclose(X[:, 0], 1.0, rtol=0.0, atol=SPHERE_TOL)
    if np.any(at_pole) and not extended:
        raise PreconditionError("The pole e0 maps to infinity; pass extended=True to allow it")
    den = np.where(at_pole, 1.0, 1.0 - X[:, 0])
    Y = X[:, 1:] / den[:, None]
    if single:
        return None if at_pole[0] else Y[0]
    return [None if p else y for p, y in zip(at_pole, Y)] if np.any(at_pole) else Y


def inverse_stereographic(y, dim: Optional[int] = None) -> np.ndarray:
    """R^n u {None} -> sphere, y -> ((|y|^2 - 1), 2y) / (|y|^2 + 1); None is the pole e_0."""
    if y is None:
        if dim is None:
            raise PreconditionError("The point at infinity needs an explicit dimension")
        return pole(dim)
    Y, single = _as_rows(y)
    r2 = np.sum(Y * Y, axis=1, keepdims=True)
    out = np.concatenate([r2 - 1.0, 2.0 * Y], axis=1) / (r2 + 1.0)
    return out[0] if single else out


def pole(dim: int) -> np.ndarray:
    e = np.zeros(dim + 1)
    e[0] = 1.0
    return e


def inversion(x, r: float = math.sqrt(2.0), center=None) -> np.ndarray:
    X, single = _as_rows(x)
    c = pole(X.shape[1] - 1) if center is None else np.asarray(center, dtype=float)
    diff = X - c
    nn = np.sum(diff * diff, axis=1, keepdims=True)
    if np.any(nn == 0):
        raise PreconditionError("Inversion is undefined at its center")
    out = c + r * r * diff / nn
    return out[0] if single else out


def inversion_check(x, r: float = math.sqrt(2.0), center=None) -> InversionResult:
    """
    Inversion in the sphere S_r(center). For points on the unit sphere with
    r = sqrt(2) and center e_0 the image lies in {x_0 = 0} and agrees with the
    stereographic projection; `defect` measures that agreement.
    """
    X, single = _as_rows(x)
    image = inversion(X, r, center)
    on_sphere = np.abs(np.linalg.norm(X, axis=1) - 1.0) <= 1e-9
    defect = None
    standard = center is None or np.allclose(center, pole(X.shape[1] - 1), rtol=0.0, atol=0.0)
    if standard and abs(r - math.sqrt(2.0)) <= 1e-15 and np.any(on_sphere):
        S = X[on_sphere]
        proj = stereographic(S)
        img = image[on_sphere]
        defect = float(max(np.abs(img[:, 0]).max(), np.abs(img[:, 1:] - proj).max()))
    return InversionResult(image=image[0] if single else image, defect=defect)


def _distances(P: np.ndarray, source: str) -> np.ndarray:
    if source == "l1":
        return pairwise_l1(P)
    return np.linalg.norm(P[:, None, :] - P[None, :, :], axis=2)


def mobius_check_map(
    fn: Callable[[np.ndarray], np.ndarray],
    samples,
    quadruples: int = 1000,
    rng: Optional[np.random.Generator] = None,
    source: str = "euclidean",
) -> float:
    """
    Max relative cross-ratio defect of `fn` over random quadruples of the samples.
    Distances are Euclidean in the image and `source` ("euclidean" or "l1") in
    the domain. Degenerate quadruples are skipped.
    """
    P = np.atleast_2d(np.asarray(samples, dtype=float))
    k = P.shape[0]
    if k < 4:
        raise PreconditionError(f"Need at least 4 samples, got {k}")
    rng = rng if rng is not None else np.random.default_rng(0)
    Q = np.atleast_2d(np.asarray(fn(P), dtype=float))
    d = _distances(P, source)
    e = _distances(Q, "euclidean")

    idx = np.array([rng.choice(k, 4, replace=False) for _ in range(quadruples)])
    i, j, a, b = idx.T

    def ratios(m):
        p, q, r = m[i, j] * m[a, b], m[i, a] * m[j, b], m[i, b] * m[j, a]
        return p, q, r

    p1, q1, r1 = ratios(d)
    p2, q2, r2 = ratios(e)
    ok = (q1 > 0) & (q2 > 0) & (p1 > 0) & (r1 > 0)
    if not np.any(ok):
        return 0.0
    x = np.abs((p2[ok] / q2[ok]) / (p1[ok] / q1[ok]) - 1.0)
    y = np.abs((r2[ok] / q2[ok]) / (r1[ok] / q1[ok]) - 1.0)
    return float(max(x.max(), y.max()))


def composite_embedding(
    z: Union[L1Point, np.ndarray],
    N: int,
    scale: float = DEFAULT_SCALE,
    threads: int = 1,
) -> CompositeEmbedding:
    """
    f = pi o (scale * g): the coordinatewise snowflake g followed by inverse
    stereographic projection onto the unit sphere. Reports the chordal image
    metric, a log-log fit of chordal distance against l1 distance, the
    snowflake constant of f against |zz'|^{1/2} and the Ptolemy check of the image.
    """
    if scale <= 0:
        raise PreconditionError(f"scale must be positive, got {scale}")
    Z = as_l1_points(z)
    k = Z.shape[0]
    S = inverse_stereographic(scale * ball_snowflake(Z, N))
    S = np.atleast_2d(S)
    labels = tuple(f"z{i}" for i in range(k))

    chord = np.linalg.norm(S[:, None, :] - S[None, :, :], axis=2)
    chord = 0.5 * (chord + chord.T)
    np.fill_diagonal(chord, 0.0)
    l1 = pairwise_l1(Z)

    iu = np.triu_indices(k, 1)
    x, y = l1[iu], chord[iu]
    keep = (x > 0) & (y > 0)
    exponent = None
    constant = 1.0
    if np.count_nonzero(keep) >= 2:
        exponent = float(np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)[0])
    if np.any(keep):
        ratio = y[keep] / np.sqrt(x[keep])
        constant = math.sqrt(float(ratio.max() / ratio.min()))

    chordal = DistanceMatrix(labels=labels, d=chord)
    report = ptolemy_check(chordal, threads=threads)
    if not report.satisfied:
        log.error(f"Sphere image fails Ptolemy on {report.worst_quadruple} (slack {report.worst_slack:.3e})")
    log.info(f"Composite embedding of {k} points at N={N}: exponent {exponent}, constant {constant:.6g}")
    return CompositeEmbedding(
        points=PointCloud(labels=labels, coords=Z, space="l1"),
        sphere=PointCloud(labels=labels, coords=S, space="sphere"),
        chordal=chordal,
        l1_distances=l1,
        fitted_exponent=exponent,
        constant=constant,
        ptolemy=report,
        resolution=N,
        scale=scale,
    )


def embed_point(z: Union[L1Point, np.ndarray], N: int, scale: float = DEFAULT_SCALE) -> SpherePoint:
    """f(z) for a single point of the l1 ball."""
    Z = as_l1_points(z)
    if Z.shape[0] != 1:
        raise PreconditionError(f"embed_point takes one point, got {Z.shape[0]}; use composite_embedding")
    return SpherePoint(inverse_stereographic(scale * ball_snowflake(Z, N))[0])


def pair_table(emb: CompositeEmbedding, count: int, rng: np.random.Generator) -> List[tuple]:
    """
    `count` distinct pairs drawn from `rng`, in index order: (label_i, label_j,
    l1 distance, chordal image distance, image / sqrt(l1)).
    """
    k = emb.chordal.n
    iu, ju = np.triu_indices(k, 1)
    if count < 1 or iu.size == 0:
        return []
    pick = np.sort(rng.choice(iu.size, size=min(count, iu.size), replace=False))
    labels = emb.chordal.labels
    rows = []
    for p in pick:
        i, j = int(iu[p]), int(ju[p])
        l1 = float(emb.l1_distances[i, j])
        image = float(emb.chordal.d[i, j])
        rows.append((labels[i], labels[j], l1, image, image / math.sqrt(l1) if l1 > 0 else math.nan))
    return rows

from __future__ import annotations
import logging
import math
from typing import Sequence

import numpy as np

from ptolab.errors import PreconditionError
from ptolab.metric.core import cross_ratio, involute
from ptolab.types import BourdonLimit, BourdonMetric, DistanceMatrix, HypModel, IdealConfig

log = logging.getLogger("Ptolab.Models")

_DOMAIN_TOL = 1e-9
_DUPLICATE_TOL = 1e-12


def minkowski(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """<u, v> = -u0 v0 + u1 v1 + ... along the last axis."""
    return -u[..., 0] * v[..., 0] + np.sum(u[..., 1:] * v[..., 1:], axis=-1)


def _check_ball(x: np.ndarray) -> None:
    r = np.linalg.norm(x, axis=-1)
    if np.any(r >= 1.0):
        raise PreconditionError(f"Point outside the open unit ball (norm {float(np.max(r)):.12g})")


def _check_hyperboloid(u: np.ndarray) -> None:
    q = minkowski(u, u)
    scale = np.maximum(1.0, u[..., 0] ** 2)
    if np.any(u[..., 0] <= 0) or np.any(np.abs(q + 1.0) > _DOMAIN_TOL * scale):
        raise PreconditionError("Point is not on the upper sheet of the hyperboloid <u,u> = -1")


def ball_to_hyperboloid(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    _check_ball(x)
    r2 = np.sum(x * x, axis=-1, keepdims=True)
    return np.concatenate([1.0 + r2, 2.0 * x], axis=-1) / (1.0 - r2)


def hyperboloid_to_ball(u) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    _check_hyperboloid(u)
    return u[..., 1:] / (1.0 + u[..., :1])


def hyp_distance(u, v, model: HypModel = HypModel.POINCARE_BALL) -> float:
    """Hyperbolic distance, written with asinh so small and large distances both keep full precision."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise PreconditionError(f"Point dimensions differ: {u.shape} vs {v.shape}")
    model = HypModel(model)
    if model is HypModel.HYPERBOLOID:
        _check_hyperboloid(u)
        _check_hyperboloid(v)
        w = u - v
        return float(2.0 * math.asinh(0.5 * math.sqrt(max(0.0, float(minkowski(w, w))))))
    _check_ball(u)
    _check_ball(v)
    num = float(np.linalg.norm(u - v))
    den = math.sqrt((1.0 - float(u @ u)) * (1.0 - float(v @ v)))
    return 2.0 * math.asinh(num / den)


def ball_distance_matrix(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    _check_ball(X)
    diff = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=2)
    s = 1.0 - np.sum(X * X, axis=1)
    return 2.0 * np.arcsinh(diff / np.sqrt(np.outer(s, s)))


def move_to_origin(x, a) -> np.ndarray:
    """
    Ball isometry sending a to the origin. Works on interior points and on
    boundary points (unit vectors stay unit vectors).
    """
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    _check_ball(a)
    aa = float(a @ a)
    if aa == 0.0:
        return x.copy()
    diff = x - a
    dd = np.sum(diff * diff, axis=-1, keepdims=True)
    xa = x @ a
    xx = np.sum(x * x, axis=-1)
    den = np.asarray(1.0 - 2.0 * xa + xx * aa)[..., None]
    return ((1.0 - aa) * diff - dd * a) / den


def ball_basepoint(config: IdealConfig) -> np.ndarray:
    """Basepoint of the config expressed in the ball model."""
    if config.model is HypModel.HYPERBOLOID:
        p = hyperboloid_to_ball(config.basepoint)
    else:
        p = config.basepoint
        _check_ball(p)
    if p.shape != (config.n,):
        raise PreconditionError(f"Basepoint has dimension {p.shape}, ideal points live in dimension {config.n}")
    return p


def ideal_triangle_height(theta: float, t: float) -> float:
    """h_t with cosh h_t = cosh^2 t - sinh^2 t cos(theta), i.e. sinh(h_t / 2) = sinh(t) sin(theta / 2)."""
    if not (0.0 < theta <= math.pi + 1e-15):
        raise PreconditionError(f"Angle must lie in (0, pi], got {theta}")
    if t < 0:
        raise PreconditionError(f"t must be nonnegative, got {t}")
    return 2.0 * math.asinh(math.sinh(t) * math.sin(theta / 2.0))


def bourdon_limit(theta: float, t_max: float = 20.0, steps: int = 20) -> BourdonLimit:
    """The sequence (e^{h_t} e^{-2t})^{1/2} for t up to t_max, and its value at t_max as the limit estimate."""
    if steps < 1:
        raise PreconditionError(f"steps must be positive, got {steps}")
    ts = np.linspace(t_max / steps, t_max, steps).tolist()
    values = [math.exp(ideal_triangle_height(theta, t) / 2.0 - t) for t in ts]
    est = values[-1]
    return BourdonLimit(theta=float(theta), t_values=ts, values=values, estimate=est,
                        defect=abs(est - math.sin(theta / 2.0)))


def _directions_at_origin(config: IdealConfig) -> np.ndarray:
    p = ball_basepoint(config)
    xi = move_to_origin(config.ideal_points, p)
    return xi / np.linalg.norm(xi, axis=1, keepdims=True)


def bourdon_metric(config: IdealConfig) -> BourdonMetric:
    """
    rho_o(y_i, y_j) = sin(theta/2) for the angle theta at the basepoint.

    The basepoint is moved to the origin, where the chordal half-distance of
    the moved boundary points is exactly sin(theta/2).
    """
    xi = _directions_at_origin(config)
    rho = 0.5 * np.linalg.norm(xi[:, None, :] - xi[None, :, :], axis=2)
    np.fill_diagonal(rho, 0.0)
    off = rho + np.eye(len(xi))
    if np.any(off <= _DUPLICATE_TOL):
        i, j = np.argwhere(off <= _DUPLICATE_TOL)[0]
        raise PreconditionError(f"Duplicate ideal directions {config.labels[i]} and {config.labels[j]}")
    np.minimum(rho, 1.0, out=rho)
    return BourdonMetric(matrix=DistanceMatrix(labels=config.labels, d=rho),
                         basepoint=tuple(ball_basepoint(config).tolist()))


def truncated_gromov_bourdon(config: IdealConfig, t: float = 20.0) -> DistanceMatrix:
    """e^{-(y_i(t)|y_j(t))_o} for the points at distance t from o on the rays towards the ideal points."""
    if t <= 0:
        raise PreconditionError(f"t must be positive, got {t}")
    xi = _directions_at_origin(config)
    rays = np.column_stack([np.full(len(xi), math.cosh(t)), math.sinh(t) * xi])
    k = len(xi)
    d = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            d[i, j] = d[j, i] = hyp_distance(rays[i], rays[j], HypModel.HYPERBOLOID)
    gp = t - 0.5 * d
    out = np.exp(-gp)
    np.fill_diagonal(out, 0.0)
    return DistanceMatrix(labels=config.labels, d=out)


def lemma_sincomp_check(config: IdealConfig, reference: BourdonMetric) -> float:
    """
    Slack of sin(theta_o(y1,y2)/2) sin(theta_o(y3,y4)/2) <= |y1y2||y3y4| / (|y1y3||y2y4|)
    with |.| the reference metric. The slack vanishes when o lies on both diagonals.
    """
    if len(config.labels) != 4:
        raise PreconditionError(f"Need exactly 4 ideal points, got {len(config.labels)}")
    rho = bourdon_metric(config).matrix
    y1, y2, y3, y4 = config.labels
    lhs = rho.value(y1, y2) * rho.value(y3, y4)
    rhs = cross_ratio(reference.matrix, y1, y2, y3, y4)
    return rhs - lhs


def hamenstadt_metric(B: BourdonMetric, omega) -> DistanceMatrix:
    return involute(B.matrix, omega)


def directions_at_angles(angles: Sequence[float], dim: int = 2) -> np.ndarray:
    """Unit vectors in the first coordinate plane of R^dim at the given angles."""
    if dim < 2:
        raise PreconditionError(f"dim must be at least 2, got {dim}")
    a = np.asarray(angles, dtype=float)
    out = np.zeros((a.size, dim))
    out[:, 0] = np.cos(a)
    out[:, 1] = np.sin(a)
    return out


def orthogonal_frame_config(dim: int = 3) -> IdealConfig:
    """The 2*dim directions +-e_i at the origin, labelled e1+, ..., e1-, ..."""
    eye = np.eye(dim)
    labels = [f"e{i + 1}+" for i in range(dim)] + [f"e{i + 1}-" for i in range(dim)]
    return IdealConfig(model=HypModel.POINCARE_BALL, basepoint=np.zeros(dim),
                       ideal_points=np.vstack([eye, -eye]), labels=tuple(labels))

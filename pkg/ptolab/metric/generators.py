from __future__ import annotations
import itertools
import logging
import math
from typing import Optional, Sequence

import numpy as np

from ptolab.errors import PreconditionError
from ptolab.metric.core import quasi_metric_space
from ptolab.metric.metrization import shortest_paths
from ptolab.types import DistanceMatrix, HypModel, IdealConfig, QuasiMetricSpace

log = logging.getLogger("Ptolab.Core")


def _labels(n: int, prefix: str = "p"):
    return tuple(f"{prefix}{i}" for i in range(n))


def _symmetric_uniform(n: int, rng: np.random.Generator, low: float, high: float) -> np.ndarray:
    w = rng.uniform(low, high, size=(n, n))
    w = np.triu(w, 1)
    return w + w.T


def random_metric(n: int, rng: np.random.Generator, kind: str = "uniform") -> DistanceMatrix:
    """
    Random metric on n points.

    kind="uniform": off-diagonal entries drawn from [1, 2], a metric by construction.
    kind="closure": shortest-path closure of weights drawn from (0.05, 1].
    """
    if n < 1:
        raise PreconditionError(f"Need at least one point, got n={n}")
    if kind == "uniform":
        d = _symmetric_uniform(n, rng, 1.0, 2.0)
    elif kind == "closure":
        d = shortest_paths(_symmetric_uniform(n, rng, 0.05, 1.0))
    else:
        raise PreconditionError(f"Unknown random metric kind '{kind}'")
    return DistanceMatrix(labels=_labels(n), d=d)


def random_metric_batch(count: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """(count, n, n) stack of closure metrics, relaxed all at once."""
    w = rng.uniform(0.05, 1.0, size=(count, n, n))
    w = np.triu(w, 1)
    d = w + np.swapaxes(w, 1, 2)
    for k in range(n):
        np.minimum(d, d[:, :, k, None] + d[:, None, k, :], out=d)
    return d


def random_quasi_metric(n: int, rng: np.random.Generator, max_K: float = 2.0) -> QuasiMetricSpace:
    """Random symmetric kernel, raised to the power that brings its constant down to max_K."""
    if max_K < 1:
        raise PreconditionError(f"max_K must be >= 1, got {max_K}")
    D = DistanceMatrix(labels=_labels(n), d=_symmetric_uniform(n, rng, 0.05, 1.0))
    Q = quasi_metric_space(D)
    if Q.K > max_K:
        s = math.log(max_K) / math.log(Q.K) if max_K > 1 else 0.0
        if s <= 0:
            raise PreconditionError("max_K = 1 asks for an ultrametric; use random_ultrametric")
        Q = quasi_metric_space(DistanceMatrix(labels=D.labels, d=D.d ** s))
    return Q


def path_metric(n: int) -> DistanceMatrix:
    """Path graph on {0, ..., n} with unit steps."""
    x = np.arange(n + 1, dtype=float)
    return DistanceMatrix(labels=tuple(str(i) for i in range(n + 1)), d=np.abs(x[:, None] - x[None, :]))


def cycle_metric(n: int) -> DistanceMatrix:
    if n < 3:
        raise PreconditionError(f"Cycle needs at least 3 vertices, got {n}")
    i = np.arange(n)
    gap = np.abs(i[:, None] - i[None, :])
    return DistanceMatrix(labels=_labels(n, "v"), d=np.minimum(gap, n - gap).astype(float))


def star_metric(k: int, with_center: bool = True) -> DistanceMatrix:
    """Star tree with unit edges: center 'c' and leaves l1..lk (leaves alone form an ultrametric)."""
    leaves = tuple(f"l{i + 1}" for i in range(k))
    d = np.full((k, k), 2.0)
    np.fill_diagonal(d, 0.0)
    if not with_center:
        return DistanceMatrix(labels=leaves, d=d / 2.0)
    full = np.ones((k + 1, k + 1))
    full[1:, 1:] = d
    full[0, 0] = 0.0
    return DistanceMatrix(labels=("c",) + leaves, d=full)


def kovalev_metric(n: int) -> DistanceMatrix:
    """d(m, k) = log(1 + |m - k|) on {0, ..., n}."""
    x = np.arange(n + 1, dtype=float)
    return DistanceMatrix(labels=tuple(str(i) for i in range(n + 1)),
                          d=np.log1p(np.abs(x[:, None] - x[None, :])))


def random_ultrametric(n: int, rng: np.random.Generator) -> DistanceMatrix:
    """Random agglomerative merges at increasing heights; the merge height is the distance."""
    clusters = [[i] for i in range(n)]
    d = np.zeros((n, n))
    height = 0.0
    while len(clusters) > 1:
        height += rng.uniform(0.1, 1.0)
        a, b = sorted(rng.choice(len(clusters), size=2, replace=False))
        ca, cb = clusters[a], clusters[b]
        d[np.ix_(ca, cb)] = height
        d[np.ix_(cb, ca)] = height
        clusters[a] = ca + cb
        del clusters[b]
    return DistanceMatrix(labels=_labels(n, "u"), d=d)


def random_tree_metric(leaves: int, rng: np.random.Generator) -> DistanceMatrix:
    """
    Leaf-to-leaf distances of a random weighted tree grown by edge subdivision:
    each new leaf splits a random existing edge and hangs off the split point.
    """
    if leaves < 2:
        raise PreconditionError(f"A tree metric needs at least 2 leaves, got {leaves}")
    edges = [(0, 1, rng.uniform(0.5, 1.5))]
    leaf_nodes = [0, 1]
    node = 2
    for _ in range(leaves - 2):
        u, v, w = edges.pop(int(rng.integers(len(edges))))
        cut = rng.uniform(0.1, 0.9) * w
        mid, leaf = node, node + 1
        node += 2
        edges += [(u, mid, cut), (mid, v, w - cut), (mid, leaf, rng.uniform(0.5, 1.5))]
        leaf_nodes.append(leaf)

    adj = np.full((node, node), np.inf)
    np.fill_diagonal(adj, 0.0)
    for u, v, w in edges:
        adj[u, v] = adj[v, u] = w
    dist = shortest_paths(adj)
    return DistanceMatrix(labels=_labels(leaves, "t"), d=dist[np.ix_(leaf_nodes, leaf_nodes)])


def l1_lattice_net(k: int, dim: int) -> DistanceMatrix:
    """All x in (1/k)Z^dim with |x|_1 <= 1, under the l1 distance."""
    pts = [p for p in itertools.product(range(-k, k + 1), repeat=dim) if sum(map(abs, p)) <= k]
    X = np.array(pts, dtype=float) / k
    d = np.abs(X[:, None, :] - X[None, :, :]).sum(axis=2)
    return DistanceMatrix(labels=_labels(len(pts), "z"), d=d)


def euclidean_matrix(points, labels: Optional[Sequence[str]] = None) -> DistanceMatrix:
    X = np.atleast_2d(np.asarray(points, dtype=float))
    d = np.linalg.norm(X[:, None, :] - X[None, :, :], axis=2)
    return DistanceMatrix(labels=tuple(labels) if labels else _labels(len(X), "x"), d=d)


def hyperbolic_disk_net(radius: float, rings: int, spokes: int) -> DistanceMatrix:
    """Polar net of the hyperbolic plane: the center plus `rings` circles of `spokes` points up to `radius`."""
    from ptolab.models.hyperbolic import ball_distance_matrix

    pts = [np.zeros(2)]
    labels = ["o"]
    for r_i, r in enumerate(np.linspace(radius / rings, radius, rings)):
        e = math.tanh(r / 2.0)
        for k in range(spokes):
            ang = 2 * math.pi * k / spokes
            pts.append(e * np.array([math.cos(ang), math.sin(ang)]))
            labels.append(f"r{r_i}s{k}")
    return DistanceMatrix(labels=tuple(labels), d=ball_distance_matrix(np.array(pts)))


def random_ideal_config(count: int, dim: int, rng: np.random.Generator,
                        basepoint: Optional[np.ndarray] = None) -> IdealConfig:
    """`count` uniformly random boundary directions of the dim-dimensional ball model."""
    v = rng.normal(size=(count, dim))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    base = np.zeros(dim) if basepoint is None else np.asarray(basepoint, dtype=float)
    return IdealConfig(model=HypModel.POINCARE_BALL, basepoint=base, ideal_points=v)

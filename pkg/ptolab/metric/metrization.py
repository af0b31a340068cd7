from __future__ import annotations
import logging
from typing import List, Optional, Sequence

import numpy as np

from ptolab.errors import PreconditionError
from ptolab.metric.core import quasi_metric_space
from ptolab.system.workers import parallel_map
from ptolab.types import (
    ChainMetricResult,
    CriticalExponentEstimate,
    DistanceMatrix,
    DistortionCurve,
    QuasiMetricSpace,
)

log = logging.getLogger("Ptolab.Metrize")

FRINK_MAX_K = 2.0
FRINK_BOUND = 4.0


def default_s_grid() -> List[float]:
    return np.geomspace(0.25, 4.0, 25).tolist()


def shortest_paths(w: np.ndarray) -> np.ndarray:
    """Floyd-Warshall on a dense weight matrix, one vectorized relaxation per pivot."""
    dist = np.array(w, dtype=float, copy=True)
    for k in range(dist.shape[0]):
        np.minimum(dist, dist[:, k, None] + dist[None, k, :], out=dist)
    return dist


def _distortion(rho: np.ndarray, ca: np.ndarray):
    n = rho.shape[0]
    if n < 2:
        return 1.0, None
    ratio = rho / np.where(ca > 0, ca, np.inf)
    np.fill_diagonal(ratio, 1.0)
    flat = int(np.argmax(ratio))
    i, j = divmod(flat, n)
    return float(max(1.0, ratio[i, j])), (min(i, j), max(i, j))


def chain_metric(Q: QuasiMetricSpace | DistanceMatrix) -> ChainMetricResult:
    """Chain-approach metric: infimum of chain sums, realized as all-pairs shortest paths."""
    D = Q.matrix if isinstance(Q, QuasiMetricSpace) else Q
    ca = shortest_paths(D.d)
    distortion, pair = _distortion(D.d, ca)
    witness = (D.labels[pair[0]], D.labels[pair[1]]) if pair else None
    return ChainMetricResult(ca=DistanceMatrix(labels=D.labels, d=ca), distortion=distortion, witness_pair=witness)


def frink_bound_check(Q: QuasiMetricSpace | DistanceMatrix) -> bool:
    """True iff the chain metric of a 2-quasi-metric is within factor 4 and separates points."""
    if isinstance(Q, DistanceMatrix):
        Q = quasi_metric_space(Q)
    if Q.K > FRINK_MAX_K + 1e-12:
        raise PreconditionError(f"Frink metrization needs K <= 2, got K = {Q.K:.6g}")
    result = chain_metric(Q)
    n = Q.n
    off = result.ca.d[~np.eye(n, dtype=bool)]
    ok = result.distortion <= FRINK_BOUND + 1e-12 and bool(np.all(off > 0))
    if not ok:
        log.warning(f"Frink bound failed: distortion {result.distortion:.6g} at {result.witness_pair}")
    return ok


def _curve_point(rho: np.ndarray, s: float):
    rs = rho ** s
    return _distortion(rs, shortest_paths(rs))


def distortion_curve(
    Q: QuasiMetricSpace | DistanceMatrix,
    s_grid: Sequence[float] | None = None,
    threads: int = 1,
) -> DistortionCurve:
    D = Q.matrix if isinstance(Q, QuasiMetricSpace) else Q
    s_values = [float(s) for s in (default_s_grid() if s_grid is None else s_grid)]
    if any(s <= 0 for s in s_values):
        raise PreconditionError("Exponent grid must be positive")

    points = parallel_map(lambda s: _curve_point(D.d, s), s_values, threads)
    c_values = [c for c, _ in points]
    pairs = [(D.labels[p[0]], D.labels[p[1]]) if p else None for _, p in points]
    curve = DistortionCurve(s_values=s_values, c_values=c_values, witness_pairs=pairs, size=D.n)

    # nondecreasing in s past s = 1 is observed, not guaranteed
    tail = [(s, c) for s, c in zip(s_values, c_values) if s >= 1.0]
    for (s0, c0), (s1, c1) in zip(tail, tail[1:]):
        if c1 < c0 * (1 - 1e-12):
            msg = f"distortion decreases from s={s0:.4g} ({c0:.6g}) to s={s1:.4g} ({c1:.6g})"
            curve.findings.append(msg)
            log.info(f"Finding (n={D.n}): {msg}")
    return curve


def estimate_critical_exponent(
    family: Sequence[QuasiMetricSpace | DistanceMatrix],
    s_grid: Sequence[float] | None = None,
    divergence_threshold: float = 1.1,
    threads: int = 1,
) -> CriticalExponentEstimate:
    """
    Heuristic bracket for the critical exponent from a growing family.

    At an exponent s the family diverges when the distortion is nondecreasing
    along the family and the last member's distortion is at least
    `divergence_threshold` times the first member's. `upper` is the smallest
    diverging s; `lower` is the largest non-diverging grid value below it.
    upper=None stands for an infinite exponent (no divergence on the grid).
    """
    if len(family) < 2:
        raise PreconditionError("Critical exponent estimate needs a family of at least 2 spaces")
    mats = [m.matrix if isinstance(m, QuasiMetricSpace) else m for m in family]
    sizes = [m.n for m in mats]
    if sizes != sorted(sizes):
        raise PreconditionError(f"Family must be ordered by size, got {sizes}")
    grid = [float(s) for s in (default_s_grid() if s_grid is None else s_grid)]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise PreconditionError("Exponent grid must be strictly increasing")

    curves = [distortion_curve(m, grid, threads=threads) for m in mats]
    table = np.array([c.c_values for c in curves])  # (members, grid)

    upper: Optional[float] = None
    lower: Optional[float] = None
    for col, s in enumerate(grid):
        seq = table[:, col]
        monotone = bool(np.all(np.diff(seq) >= -1e-12 * seq[:-1]))
        if monotone and seq[-1] >= divergence_threshold * seq[0]:
            upper = s
            break
        lower = s

    est = CriticalExponentEstimate(lower=lower, upper=upper, sizes=sizes, curves=curves,
                                   divergence_threshold=divergence_threshold)
    hi = "inf" if upper is None else f"{upper:.4g}"
    log.info(f"Critical exponent bracket (heuristic): [{lower}, {hi}] over sizes {sizes}")
    return est

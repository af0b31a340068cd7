from __future__ import annotations
import logging
import math

import numpy as np

from ptolab.metric.core import log_quasi_metric_constant
from ptolab.system.workers import parallel_map
from ptolab.types import DistanceMatrix, GlobalDeltaReport, GromovReport, QuasiMetricSpace

log = logging.getLogger("Ptolab.Hyper")

DOUBLING_TOL = 1e-9
# exp(-LOG_RANGE) and exp(LOG_RANGE) stay normal floats
LOG_RANGE = 700.0


def gromov_product(D: DistanceMatrix, o, x, y) -> float:
    io, ix, iy = D.index(o), D.index(x), D.index(y)
    d = D.d
    return 0.5 * float(d[io, ix] + d[io, iy] - d[ix, iy])


def gromov_matrix(D: DistanceMatrix, o) -> np.ndarray:
    """G[x, y] = (x|y)_o for all pairs."""
    row = D.d[D.index(o)]
    return 0.5 * (row[:, None] + row[None, :] - D.d)


def _delta_from_products(G: np.ndarray):
    """Max over triples x<y<z of (second smallest - smallest) of G[x,y], G[x,z], G[y,z]."""
    n = G.shape[0]
    best, arg = 0.0, None
    if n < 3:
        return best, arg
    for x in range(n - 2):
        a = G[x, :, None]   # (x|y)
        b = G[x, None, :]   # (x|z)
        c = G               # (y|z)
        lo = np.minimum(np.minimum(a, b), c)
        hi = np.maximum(np.maximum(a, b), c)
        deficiency = (a + b + c - hi - lo) - lo
        mask = np.zeros((n, n), dtype=bool)
        mask[x + 1:, x + 1:] = np.triu(np.ones((n - x - 1, n - x - 1), dtype=bool), 1)
        deficiency = np.where(mask, deficiency, -np.inf)
        flat = int(np.argmax(deficiency))
        val = float(deficiency.flat[flat])
        if val > best:
            best, arg = val, (x, *divmod(flat, n))
    return best, arg


def delta_at_basepoint(D: DistanceMatrix, o) -> GromovReport:
    delta, arg = _delta_from_products(gromov_matrix(D, o))
    quad = (str(o), *(D.labels[i] for i in arg)) if arg else None
    return GromovReport(basepoint=str(o), delta=delta, worst_quadruple=quad)


def delta_global(D: DistanceMatrix, threads: int = 1) -> GlobalDeltaReport:
    """Max of the basepoint deltas, plus a check of delta(o') <= 2 delta(o) for all pairs."""
    reports = parallel_map(lambda o: delta_at_basepoint(D, o), list(D.labels), threads)
    per = {r.basepoint: r.delta for r in reports}
    worst = max(reports, key=lambda r: r.delta) if reports else None

    violations = []
    for r in reports:
        for r2 in reports:
            if r2.delta > 2.0 * r.delta + DOUBLING_TOL:
                violations.append((r.basepoint, r2.basepoint))
    if violations:
        log.error(f"Basepoint doubling bound fails on {len(violations)} pairs, first {violations[0]}; "
                  f"input is probably not a metric")

    return GlobalDeltaReport(
        delta_global=worst.delta if worst else 0.0,
        delta_per_basepoint=per,
        worst=worst,
        doubling_ok=not violations,
        doubling_violations=violations,
    )


def boundary_quasimetric(D: DistanceMatrix, o) -> QuasiMetricSpace:
    """
    Finite proxy of the boundary quasi-metric exp(-(x|y)_o), diagonal forced to 0.

    K comes from the Gromov products directly, so it is exact however large they
    are. The stored matrix is the quasi-metric times exp(log_scale), shifted so
    the largest product does not underflow; products spread wider than
    2 LOG_RANGE are clamped in the matrix only, with a warning.
    """
    G = gromov_matrix(D, o)
    logK = log_quasi_metric_constant(-G)
    K = math.exp(logK) if logK < 709.0 else math.inf

    off = ~np.eye(D.n, dtype=bool)
    if not off.any():
        return QuasiMetricSpace(matrix=DistanceMatrix(labels=D.labels, d=np.zeros((D.n, D.n))), K=K)
    lo, hi = float(G[off].min()), float(G[off].max())
    shift = max(0.0, hi - LOG_RANGE)
    if hi - lo > 2 * LOG_RANGE:
        log.warning(f"Gromov products at {o} span {hi - lo:.6g}; matrix entries clamped, K = exp({logK:.6g}) is exact")
        G = np.minimum(G, lo + 2 * LOG_RANGE)
        shift = lo + LOG_RANGE
    rho = np.exp(shift - G)
    np.fill_diagonal(rho, 0.0)
    return QuasiMetricSpace(matrix=DistanceMatrix(labels=D.labels, d=rho), K=K, log_scale=shift)


def basepoint_change_identity_check(D: DistanceMatrix, o, o2) -> float:
    """Max |(x|y)_o' - (|oo'| + (x|y)_o - (x|o')_o - (y|o')_o)| over all pairs."""
    G = gromov_matrix(D, o)
    G2 = gromov_matrix(D, o2)
    j = D.index(o2)
    rhs = D.d[D.index(o), j] + G - G[:, j, None] - G[None, j, :]
    defect = float(np.abs(G2 - rhs).max())
    if defect > 1e-12 * max(1.0, float(D.d.max())):
        log.warning(f"Basepoint change identity defect {defect:.3e} between {o} and {o2}")
    return defect


def k_bound_holds(D: DistanceMatrix, o, tol: float = 1e-9) -> bool:
    """K of the boundary quasi-metric at o is at most exp(delta(o))."""
    K = boundary_quasimetric(D, o).K
    return K <= math.exp(delta_at_basepoint(D, o).delta) + tol

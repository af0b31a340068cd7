from __future__ import annotations
import logging
import math

import numpy as np

from ptolab.errors import PreconditionError, StructuralError
from ptolab.metric.ptolemy import DEFAULT_TOL, pairing_products, quadruple_blocks
from ptolab.types import (
    DistanceMatrix,
    FourPointNormalForm,
    MetricAxiomsReport,
    MobiusReport,
    QuasiMetricSpace,
)

log = logging.getLogger("Ptolab.Core")


def check_metric_axioms(D: DistanceMatrix, tol: float = DEFAULT_TOL, limit: int | None = None) -> MetricAxiomsReport:
    """
    Triangle inequality scan. A violation (a, b, c) means d(a,c) > d(a,b) + d(b,c) + tol,
    with b the intermediate point and a before c in label order.
    """
    d = D.d
    n = D.n
    labels = D.labels
    violations = []
    worst = math.inf

    for j in range(n):
        slack = d[:, j, None] + d[None, j, :] - d
        slack[j, :] = np.inf
        slack[:, j] = np.inf
        np.fill_diagonal(slack, np.inf)
        worst = min(worst, float(slack.min()))
        if limit is not None and len(violations) >= limit:
            continue
        for i, k in np.argwhere(np.triu(slack < -tol, 1)):
            violations.append((labels[i], labels[j], labels[k]))

    if limit is not None:
        violations = violations[:limit]
    if not math.isfinite(worst):
        worst = 0.0
    return MetricAxiomsReport(is_metric=worst >= -tol, violations=violations, worst_slack=worst, tol=tol)


def quasi_metric_constant(D: DistanceMatrix) -> float:
    """Smallest K with d(i,k) <= K max(d(i,j), d(j,k)) over all triples."""
    d = D.d
    K = 1.0
    for j in range(D.n):
        denom = np.maximum(d[:, j, None], d[None, j, :])
        denom[j, j] = 1.0
        K = max(K, float((d / denom).max()))
    return K


def log_quasi_metric_constant(L: np.ndarray) -> float:
    """log K of the quasi-metric exp(L); the diagonal of L is ignored."""
    L = np.array(L, dtype=float)
    np.fill_diagonal(L, -np.inf)
    logK = 0.0
    for j in range(L.shape[0]):
        denom = np.maximum(L[:, j, None], L[None, j, :])
        denom[j, j] = 0.0
        logK = max(logK, float((L - denom).max()))
    return logK


def quasi_metric_space(D: DistanceMatrix) -> QuasiMetricSpace:
    return QuasiMetricSpace(matrix=D, K=quasi_metric_constant(D))


def snowflake(D: DistanceMatrix, q: float) -> DistanceMatrix:
    if q <= 0:
        raise PreconditionError(f"Snowflake exponent must be positive, got q={q}")
    if q > 1:
        log.warning(f"q={q} > 1: the snowflaked matrix is only guaranteed to be a quasi-metric")
    return DistanceMatrix(labels=D.labels, d=D.d ** q)


def involute(D: DistanceMatrix, z) -> DistanceMatrix:
    """d_z(a, b) = d(a, b) / (d(a, z) d(b, z)) on the points other than z."""
    iz = D.index(z)
    if D.n < 3:
        raise PreconditionError(f"Involution needs at least 3 points, got {D.n}")
    keep = [i for i in range(D.n) if i != iz]
    dz = D.d[iz, keep]
    if np.any(dz <= 0):
        raise PreconditionError(f"Some point is at distance 0 from {z}")
    out = D.d[np.ix_(keep, keep)] / np.outer(dz, dz)
    return DistanceMatrix(labels=tuple(D.labels[i] for i in keep), d=out)


def cross_ratio(D: DistanceMatrix, i, j, k, l) -> float:
    """d(i,j) d(k,l) / (d(i,k) d(j,l))."""
    a, b, c, e = (D.index(x) for x in (i, j, k, l))
    if len({a, b, c, e}) < 4:
        raise PreconditionError(f"Cross ratio needs four distinct points, got {(i, j, k, l)}")
    den = D.d[a, c] * D.d[b, e]
    if den == 0:
        raise PreconditionError(f"Zero denominator in cross ratio of {(i, j, k, l)}")
    return float(D.d[a, b] * D.d[c, e] / den)


def mobius_equivalent(D: DistanceMatrix, other: DistanceMatrix, tol: float = DEFAULT_TOL) -> MobiusReport:
    """
    Compare all cross ratios of D and `other` (same label set, any order).

    Per sorted quadruple (i, j, k, l) the two independent ratios
    cross_ratio(i, j, k, l) = p/q and cross_ratio(i, l, k, j) = r/q are compared;
    every other cross ratio of the quadruple is a product of these.
    The witness is the first ordered quadruple whose ratios differ by more
    than `tol` relatively; its value in D and in `other` are reported.
    """
    if set(D.labels) != set(other.labels):
        missing = sorted(set(D.labels) ^ set(other.labels))
        raise StructuralError(f"Label sets differ: {missing[:8]}")
    o = other.reordered(D.labels)
    d, e = D.d, o.d

    worst = 0.0
    witness = None
    for i, j, k, l in quadruple_blocks(D.n):
        p1 = pairing_products(d, i, j, k, l)
        p2 = pairing_products(e, i, j, k, l)
        x = np.column_stack([p1[:, 0] / p1[:, 1], p1[:, 2] / p1[:, 1]])
        y = np.column_stack([p2[:, 0] / p2[:, 1], p2[:, 2] / p2[:, 1]])
        defect = np.abs(y / x - 1.0)
        worst = max(worst, float(defect.max()))
        if witness is None:
            bad = np.argwhere(defect > tol)
            if bad.size:
                row, which = bad[0]
                ii, jj, kk, ll = (int(v[row]) for v in (i, j, k, l))
                order = (ii, jj, kk, ll) if which == 0 else (ii, ll, kk, jj)
                witness = (tuple(D.labels[v] for v in order), float(x[row, which]), float(y[row, which]))

    if witness is None:
        return MobiusReport(equivalent=True, max_relative_defect=worst)
    quad, val, other_val = witness
    log.debug(f"Cross ratios differ on {quad}: {val!r} vs {other_val!r}")
    return MobiusReport(equivalent=False, witness=quad, value=val, other_value=other_val,
                        max_relative_defect=worst)


def canonical_four_point(D: DistanceMatrix) -> FourPointNormalForm:
    """
    Normal form (a, b, 1) of a four-point space up to Moebius equivalence.

    Opposite pairs are multiplied out (a' = sqrt(a1 a2) etc.), the points are
    renumbered so that the largest product sits on the diagonals w1w3, w2w4,
    and everything is divided by c'.
    """
    if D.n != 4:
        raise PreconditionError(f"Four-point normal form needs exactly 4 points, got {D.n}")
    w = D.labels

    def products(order):
        d = D.submatrix(order).d
        return (math.sqrt(d[0, 1] * d[2, 3]), math.sqrt(d[1, 2] * d[3, 0]), math.sqrt(d[0, 2] * d[1, 3]))

    a_, b_, c_ = products(w)
    if c_ >= max(a_, b_):
        order = w
    elif a_ >= b_:
        order = (w[0], w[2], w[1], w[3])
    else:
        order = (w[0], w[1], w[3], w[2])

    a_, b_, c_ = products(order)
    return FourPointNormalForm(a=a_ / c_, b=b_ / c_, c=1.0, order=tuple(order), scale=c_)

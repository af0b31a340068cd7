"""
Explicit four- and six-point boundary configurations.

Proof note on the six-point example: for a = b = c = 1 the matrix is the
Bourdon metric of the orthogonal frame +-e1, +-e2, +-e3 in H^3. For values
close to but different from 1 every coordinate-pair quadruple still has
Ptolemy equality, so in a CAT(-1) space each pair of geodesics e_i^+ e_i^-
would have to meet, and at a right angle since a = b on each of those
quadruples. Three pairwise orthogonal geodesics meeting pairwise would bound
a geodesic triangle with three right angles, which a CAT(-1) space cannot
contain (the intersection points are distinct because the cross ratio
b^2 != 1 separates the configuration from the frame). The argument is
recorded here; nothing below attempts to certify it numerically.
"""
from __future__ import annotations
import itertools
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from ptolab.errors import PreconditionError
from ptolab.metric.core import check_metric_axioms
from ptolab.metric.ptolemy import DEFAULT_TOL, first_violation
from ptolab.types import BourdonMetric, DistanceMatrix, SixPointScanRow

log = logging.getLogger("Ptolab.Models")

SIX_POINT_LABELS = ("e1+", "e2+", "e3+", "e1-", "e2-", "e3-")
SCAN_RANGE = (0.5, 2.0)


def glued_quadrilateral(a: float, b: float) -> BourdonMetric:
    """
    Boundary metric at the cone point of four glued ideal triangles with
    angles alpha, beta, alpha, beta, where sin(alpha/2) = a and sin(beta/2) = b.

    Sides follow the pattern a, b, a, b around y1..y4 and both diagonals are 1.
    """
    if not (0 < a <= 1 and 0 < b <= 1):
        raise PreconditionError(f"Need 0 < a, b <= 1, got a={a}, b={b}")
    if a * a + b * b < 1.0 - 1e-12:
        raise PreconditionError(f"a^2 + b^2 = {a * a + b * b:.12g} < 1: the quadrilateral is not Ptolemaic")
    alpha = 2.0 * math.asin(a)
    beta = 2.0 * math.asin(b)
    d = np.array([
        [0.0, a, 1.0, b],
        [a, 0.0, b, 1.0],
        [1.0, b, 0.0, a],
        [b, 1.0, a, 0.0],
    ])
    log.debug(f"Glued quadrilateral a={a} b={b}, cone angle {2 * (alpha + beta):.12g}")
    return BourdonMetric(matrix=DistanceMatrix(labels=("y1", "y2", "y3", "y4"), d=d),
                         basepoint="cone", cone_angle=2.0 * (alpha + beta))


def _six_point_matrix(a: float, b: float, c: float) -> DistanceMatrix:
    # pair (i, i+1) uses x: |e_i^+ e_{i+1}^t| = x/sqrt2, |e_i^- e_{i+1}^t| = 1/(x sqrt2)
    idx = {lab: k for k, lab in enumerate(SIX_POINT_LABELS)}
    d = np.full((6, 6), np.nan)
    np.fill_diagonal(d, 0.0)
    for i in range(3):
        d[idx[f"e{i + 1}+"], idx[f"e{i + 1}-"]] = d[idx[f"e{i + 1}-"], idx[f"e{i + 1}+"]] = 1.0
    r2 = math.sqrt(2.0)
    for i, x in enumerate((a, b, c)):
        j = (i + 1) % 3
        for s in "+-":
            val = x / r2 if s == "+" else 1.0 / (x * r2)
            for t in "+-":
                p, q = idx[f"e{i + 1}{s}"], idx[f"e{j + 1}{t}"]
                d[p, q] = d[q, p] = val
    return DistanceMatrix(labels=SIX_POINT_LABELS, d=d)


def six_point_example(a: float = 1.0, b: float = 1.0, c: float = 1.0) -> DistanceMatrix:
    if min(a, b, c) <= 0:
        raise PreconditionError(f"Parameters must be positive, got {(a, b, c)}")
    D = _six_point_matrix(a, b, c)
    axioms = check_metric_axioms(D, limit=1)
    if not axioms.is_metric:
        raise PreconditionError(f"Six-point example with a={a}, b={b}, c={c} violates the triangle "
                                f"inequality on {axioms.violations[0]}")
    return D


def admissible_parameter_scan(
    a_values: Sequence[float],
    b_values: Optional[Sequence[float]] = None,
    c_values: Optional[Sequence[float]] = None,
    tol: float = DEFAULT_TOL,
) -> List[SixPointScanRow]:
    """Metric and Ptolemy status of the six-point example over a grid, with the first witness of each failure."""
    b_values = a_values if b_values is None else b_values
    c_values = a_values if c_values is None else c_values
    lo, hi = SCAN_RANGE
    for v in itertools.chain(a_values, b_values, c_values):
        if not (lo <= v <= hi):
            raise PreconditionError(f"Scan values must lie in [{lo}, {hi}], got {v}")

    rows = []
    for a, b, c in itertools.product(a_values, b_values, c_values):
        D = _six_point_matrix(a, b, c)
        axioms = check_metric_axioms(D, tol=tol, limit=1)
        bad = first_violation(D, tol=tol)
        rows.append(SixPointScanRow(
            a=float(a), b=float(b), c=float(c),
            is_metric=axioms.is_metric,
            ptolemaic=bad is None,
            triangle_witness=axioms.violations[0] if axioms.violations else None,
            ptolemy_witness=bad,
        ))
    ok = sum(r.admissible for r in rows)
    log.info(f"Six-point scan: {ok}/{len(rows)} grid points admissible")
    return rows

from __future__ import annotations
import logging
import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ptolab.system.workers import chunk_ranges, parallel_map
from ptolab.errors import PreconditionError
from ptolab.types import DistanceMatrix, EqualityAngle, PtolemyReport, Quadruple

log = logging.getLogger("Ptolab.Core")

DEFAULT_TOL = 1e-9
DEFAULT_EQ_TOL = 1e-7
MAX_LISTED_EQUALITIES = 100_000


@lru_cache(maxsize=8)
def _lex_triples(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """All j<k<l triples of range(n) in lexicographic order, plus the row where each j starts."""
    blocks = []
    starts = np.zeros(n + 1, dtype=np.int64)
    for j in range(n):
        kk, ll = np.triu_indices(n - j - 1, 1)
        blocks.append(np.column_stack([np.full(kk.size, j), kk + j + 1, ll + j + 1]))
        starts[j + 1] = starts[j] + kk.size
    tri = np.concatenate(blocks).astype(np.int64) if blocks else np.empty((0, 3), dtype=np.int64)
    tri.setflags(write=False)
    return tri, starts


def quadruple_blocks(n: int, firsts: Sequence[int] | None = None):
    """Yield (i, j, k, l) index arrays, one block per first index, in lexicographic order."""
    tri, starts = _lex_triples(n)
    for i in (range(n) if firsts is None else firsts):
        rows = tri[starts[i + 1]:]
        if rows.size == 0:
            continue
        yield np.full(rows.shape[0], i), rows[:, 0], rows[:, 1], rows[:, 2]


def pairing_products(d: np.ndarray, i, j, k, l) -> np.ndarray:
    """(B, 3) stack of p = d_ij d_kl, q = d_ik d_jl, r = d_il d_jk."""
    return np.column_stack([d[i, j] * d[k, l], d[i, k] * d[j, l], d[i, l] * d[j, k]])


def _slack(products: np.ndarray) -> np.ndarray:
    s = np.sort(products, axis=1)
    return s[:, 0] + s[:, 1] - s[:, 2]


def ptolemy_slack_batch(d: np.ndarray) -> np.ndarray:
    """Pairing slack of a (B, 4, 4) stack of four-point matrices."""
    d = np.asarray(d, dtype=float)
    if d.ndim != 3 or d.shape[1:] != (4, 4):
        raise PreconditionError(f"Expected a (B, 4, 4) stack, got {d.shape}")
    prods = np.stack([
        d[:, 0, 1] * d[:, 2, 3],
        d[:, 0, 2] * d[:, 1, 3],
        d[:, 0, 3] * d[:, 1, 2],
    ], axis=1)
    return _slack(prods)


def _scan(d: np.ndarray, firsts: range, eq_tol: float):
    worst = math.inf
    worst_q = None
    equalities: List[Tuple[int, int, int, int]] = []
    eq_count = 0
    checked = 0
    for i, j, k, l in quadruple_blocks(d.shape[0], firsts):
        slack = _slack(pairing_products(d, i, j, k, l))
        checked += slack.size
        pos = int(np.argmin(slack))
        if slack[pos] < worst:
            worst = float(slack[pos])
            worst_q = (int(i[pos]), int(j[pos]), int(k[pos]), int(l[pos]))
        hits = np.flatnonzero(np.abs(slack) <= eq_tol)
        eq_count += hits.size
        room = MAX_LISTED_EQUALITIES - len(equalities)
        for h in hits[:max(room, 0)]:
            equalities.append((int(i[h]), int(j[h]), int(k[h]), int(l[h])))
    return worst, worst_q, equalities, eq_count, checked


def ptolemy_check(
    D: DistanceMatrix,
    tol: float = DEFAULT_TOL,
    eq_tol: float = DEFAULT_EQ_TOL,
    threads: int = 1,
) -> PtolemyReport:
    """
    Check max(p, q, r) <= (sum of the other two) + tol for every unordered quadruple.

    The worst quadruple is the one with the smallest slack; ties go to the
    lexicographically first quadruple, independently of the thread count.
    """
    n = D.n
    if n < 4:
        return PtolemyReport(satisfied=True, tol=tol, eq_tol=eq_tol)

    d = D.d
    parts = chunk_ranges(n - 3, max(1, threads) * 4) if threads > 1 else [range(n - 3)]
    results = parallel_map(lambda r: _scan(d, r, eq_tol), parts, threads)

    worst, worst_q = math.inf, None
    equalities: List[Tuple[int, int, int, int]] = []
    eq_count = checked = 0
    for w, wq, eqs, cnt, chk in results:
        if w < worst:
            worst, worst_q = w, wq
        equalities.extend(eqs)
        eq_count += cnt
        checked += chk
    if eq_count > len(equalities):
        log.info(f"{eq_count} equality quadruples found; listing the first {MAX_LISTED_EQUALITIES}")
    equalities = equalities[:MAX_LISTED_EQUALITIES]

    lab = D.labels
    report = PtolemyReport(
        satisfied=worst >= -tol,
        worst_quadruple=tuple(lab[x] for x in worst_q) if worst_q else None,
        worst_slack=worst,
        equality_quadruples=[tuple(lab[x] for x in q) for q in equalities],
        equality_count=eq_count,
        quadruples_checked=checked,
        tol=tol,
        eq_tol=eq_tol,
    )
    if not report.satisfied:
        log.debug(f"Ptolemy violated on {report.worst_quadruple} (slack {worst:.3e})")
    return report


def equality_intersection_angle(
    D: DistanceMatrix, quadruple: Quadruple, eq_tol: float = DEFAULT_EQ_TOL
) -> EqualityAngle:
    """
    Diagonal intersection angle of a Ptolemy-equality quadruple (y1, y2, y3, y4).

    The diagonals are y1y3 and y2y4. With a^2 = |y1y2||y3y4| / |y1y3||y2y4| and
    b^2 = |y2y3||y4y1| / |y1y3||y2y4| equality means a^2 + b^2 = 1, and the
    diagonals meet at angle alpha with sin^2(alpha/2) = a^2.
    """
    y1, y2, y3, y4 = (D.index(x) for x in quadruple)
    if len({y1, y2, y3, y4}) < 4:
        raise PreconditionError(f"Quadruple {quadruple} has repeated points")
    d = D.d
    diag = d[y1, y3] * d[y2, y4]
    a2 = d[y1, y2] * d[y3, y4] / diag
    b2 = d[y2, y3] * d[y4, y1] / diag
    if abs(a2 + b2 - 1.0) > eq_tol:
        raise PreconditionError(
            f"{quadruple} is not a Ptolemy equality with diagonals {quadruple[0]}{quadruple[2]}, "
            f"{quadruple[1]}{quadruple[3]} (a^2 + b^2 = {a2 + b2:.12g})"
        )
    alpha = 2.0 * math.asin(min(1.0, math.sqrt(a2)))
    return EqualityAngle(alpha=alpha, a_squared=float(a2), b_squared=float(b2),
                         orthogonal=abs(a2 - b2) <= eq_tol)


def first_violation(D: DistanceMatrix, tol: float = DEFAULT_TOL) -> Optional[Quadruple]:
    """Lexicographically first quadruple breaking the inequality, or None."""
    d = D.d
    for i, j, k, l in quadruple_blocks(D.n):
        bad = np.flatnonzero(_slack(pairing_products(d, i, j, k, l)) < -tol)
        if bad.size:
            h = bad[0]
            return tuple(D.labels[int(x[h])] for x in (i, j, k, l))
    return None

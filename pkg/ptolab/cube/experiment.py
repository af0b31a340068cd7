from __future__ import annotations
import logging
import math
from typing import Callable, Dict, Sequence, Union

import numpy as np

from ptolab.cube.combinatorics import n_schedule, slice_bit_matrix, slice_elements, slice_size
from ptolab.cube.diagonal import find_short_diagonal, side_bound, slice_of_target
from ptolab.errors import PreconditionError, ScheduleTooLargeError
from ptolab.types import CubeInstance, DistanceMatrix, ObstructionExperiment, ObstructionRow, Slice

log = logging.getLogger("Ptolab.Cube")

MAX_SLICE_SIZE = 10_000

TargetBuilder = Callable[[Slice, float], DistanceMatrix]


def l1_slice_distances(sl: Slice) -> np.ndarray:
    """l1 distances of the scaled points I/m, i.e. d_H(I, J)/m."""
    X = slice_bit_matrix(sl)
    return (2 * (sl.m - X @ X.T)).astype(float) / sl.m


def classical_mds(sq: np.ndarray) -> np.ndarray:
    """Coordinates whose Euclidean distances best match `sq` (squared distances); negative eigenvalues dropped."""
    n = sq.shape[0]
    J = np.eye(n) - np.full((n, n), 1.0 / n)
    gram = -0.5 * J @ sq @ J
    vals, vecs = np.linalg.eigh(0.5 * (gram + gram.T))
    keep = vals > 1e-12 * max(1.0, float(vals.max(initial=0.0)))
    return vecs[:, keep] * np.sqrt(vals[keep])


def _euclidean(coords: np.ndarray) -> np.ndarray:
    # Gram form, no (n, n, dim) temporary
    sq = np.sum(coords * coords, axis=1)
    d = np.sqrt(np.clip(sq[:, None] + sq[None, :] - 2.0 * coords @ coords.T, 0.0, None))
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return d


def canonical_target(sl: Slice) -> DistanceMatrix:
    """The points I/m with their Euclidean distances."""
    X = slice_bit_matrix(sl).astype(float) / sl.m
    return DistanceMatrix(labels=sl.labels, d=_euclidean(X))


def euclidean_snowflake_target(sl: Slice, q: float) -> DistanceMatrix:
    """Euclidean realization of (l1 distance)^q on the scaled slice via classical scaling."""
    if q <= 0:
        raise PreconditionError(f"q must be positive, got {q}")
    if len(sl) == 1:
        return DistanceMatrix(labels=sl.labels, d=np.zeros((1, 1)))
    coords = classical_mds(l1_slice_distances(sl) ** (2 * q))
    return DistanceMatrix(labels=sl.labels, d=_euclidean(coords))


def snowflake_constant(target: DistanceMatrix, sl: Slice, q: float) -> tuple[float, DistanceMatrix]:
    """
    Smallest c with (1/c)|IJ|^q <= |Phi(I)Phi(J)| <= c|IJ|^q after the best rescaling of Phi,
    returned with the rescaled target.
    """
    order = [target.index(lab) for lab in sl.labels]
    d = target.d[np.ix_(order, order)]
    base = l1_slice_distances(sl) ** q
    off = ~np.eye(len(sl), dtype=bool)
    if not off.any():
        return 1.0, target
    ratio = d[off] / base[off]
    rmin, rmax = float(ratio.min()), float(ratio.max())
    scaled = DistanceMatrix(labels=sl.labels, d=d / math.sqrt(rmin * rmax))
    return math.sqrt(rmax / rmin), scaled


TARGET_BUILDERS: Dict[str, TargetBuilder] = {
    "canonical": lambda sl, q: canonical_target(sl),
    "euclidean-snowflake": euclidean_snowflake_target,
}


def build_instance(m: int, q: float, target: Union[str, DistanceMatrix] = "euclidean-snowflake",
                   size_limit: int = MAX_SLICE_SIZE) -> CubeInstance:
    """Slice S_{n_m, m}, its target with the measured snowflake constant, and the side bound b = c 2^q / m^q."""
    if isinstance(target, DistanceMatrix):
        sl = slice_of_target(target)
        if sl.m != m:
            raise PreconditionError(f"Target file is indexed by S_{{{sl.n},{sl.m}}}, not m={m}")
        n = sl.n
        D = target
    else:
        n = n_schedule(m)[-1]
        size = slice_size(n, m)
        if size > size_limit:
            raise ScheduleTooLargeError(m, n, size, size_limit)
        builder = TARGET_BUILDERS.get(target)
        if builder is None:
            raise PreconditionError(f"Unknown target builder '{target}' (known: {sorted(TARGET_BUILDERS)})")
        sl = slice_elements(n, m)
        D = builder(sl, q)

    c, D = snowflake_constant(D, sl, q)
    b = c * 2 ** q / m ** q
    measured, _ = side_bound(D, sl)
    b = max(b, measured)
    return CubeInstance(n=n, m=m, slice=sl, target=D, b=b, c=c)


def obstruction_verdict(q: float, rows: Sequence[ObstructionRow]) -> Dict[str, bool]:
    """
    Verdict over the measured rows. The case against q > 1/2 holds when every
    witness meets its bound, the distortion forced by the measured side and
    diagonal lengths reaches m^((q - 1/2)/2) and it grows along the schedule.
    """
    lhs = [r.constraint_lhs for r in rows]
    slack = [r.constraint_slack for r in rows]
    implied = [r.implied_c for r in rows]
    forced = all(r.witness is None or r.witness.qualifies for r in rows) and all(
        r.implied_c >= r.required_c * (1 - 1e-9) for r in rows)
    growing = len(implied) > 1 and implied[-1] > implied[0] * (1 + 1e-9)
    return {
        "all_satisfied": all(s >= -1e-9 for s in slack),
        "lhs_decreasing": all(b < a for a, b in zip(lhs, lhs[1:])),
        "slack_decreasing": all(b < a for a, b in zip(slack, slack[1:])),
        "implied_c_growing": growing,
        "against_q_above_half": q > 0.5 and forced and growing,
    }

def snowflake_obstruction_experiment(
    q: float,
    m_list: Sequence[int] = (1, 2, 3),
    target_builder: Union[str, Callable[[int], DistanceMatrix]] = "euclidean-snowflake",
    strategy: str = "inductive",
    threads: int = 1,
    size_limit: int = MAX_SLICE_SIZE,
) -> ObstructionExperiment:
    """
    For each m: build a Ptolemaic target on S_{n_m, m}, measure c, find a short
    diagonal and compare the long-pair bound 2^q/c with sqrt(m) b. The implied
    constraint is sqrt(m)/m^q >= 1/c^2.
    """
    if q <= 0:
        raise PreconditionError(f"q must be positive, got {q}")
    rows = []
    for m in m_list:
        target = target_builder(m) if callable(target_builder) else target_builder
        inst = build_instance(m, q, target, size_limit=size_limit)
        witness = find_short_diagonal(inst.target, m, b=inst.b, strategy=strategy, threads=threads)
        side, _ = side_bound(inst.target, inst.slice)
        # sides force c >= side (m/2)^q and the diagonal forces c >= 2^q / diagonal
        implied = math.sqrt(side * m ** q / witness.length) if witness.length > 0 else math.inf
        row = ObstructionRow(
            m=m,
            n=inst.n,
            c=inst.c,
            b=inst.b,
            best_diagonal=witness.length,
            diagonal_bound=witness.bound,
            long_pair_lower_bound=2 ** q / inst.c,
            constraint_lhs=math.sqrt(m) / m ** q,
            constraint_rhs=1.0 / inst.c ** 2,
            required_c=m ** ((q - 0.5) / 2),
            measured_side=side,
            implied_c=implied,
            witness=witness,
        )
        log.info(f"m={m} n={inst.n}: c={inst.c:.6g} b={inst.b:.6g} diagonal={witness.length:.6g} "
                 f"slack={row.constraint_slack:.6g} implied c={implied:.6g}")
        rows.append(row)

    return ObstructionExperiment(q=q, rows=rows, verdict=obstruction_verdict(q, rows))

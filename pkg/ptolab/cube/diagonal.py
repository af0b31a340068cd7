from __future__ import annotations
import itertools
import logging
import math
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ptolab.cube.combinatorics import (
    bits_label,
    complement,
    label_bits,
    multi_indices,
    n_schedule,
    phi,
    pigeonhole_count,
    slice_bit_matrix,
    slice_elements,
)
from ptolab.errors import PreconditionError, StructuralError
from ptolab.metric.ptolemy import ptolemy_check, ptolemy_slack_batch
from ptolab.system.workers import parallel_map
from ptolab.types import BitIndex, DiagonalWitness, DistanceMatrix, MultiIndex, Slice

log = logging.getLogger("Ptolab.Cube")

REL_TOL = 1e-9
# full quadruple scan of the target only below this many quadruples
FULL_PTOLEMY_LIMIT = 2_000_000

Embedding = Callable[[BitIndex], BitIndex]


def slice_of_target(target: DistanceMatrix) -> Slice:
    """Recover (n, m) from bit-string labels and check they are exactly S_{n,m}."""
    bits = [label_bits(lab) for lab in target.labels]
    n = len(bits[0])
    if any(len(b) != n for b in bits):
        raise StructuralError("Target labels have different lengths")
    m = sum(bits[0])
    sl = slice_elements(n, m)
    if set(bits) != set(sl.elements):
        raise StructuralError(f"Target labels are not the slice S_{{{n},{m}}} ({len(bits)} labels, "
                              f"{len(sl)} expected)")
    return sl


def side_bound(target: DistanceMatrix, sl: Slice) -> Tuple[float, Optional[Tuple[str, str]]]:
    """Largest target distance over pairs at Hamming distance 2, with the pair attaining it."""
    X = slice_bit_matrix(sl)
    order = [target.index(lab) for lab in sl.labels]
    d = target.d[np.ix_(order, order)]
    mask = np.triu((X @ X.T) == sl.m - 1, 1)
    if not mask.any():
        return 0.0, None
    vals = np.where(mask, d, -np.inf)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    return float(vals[i, j]), (sl.labels[i], sl.labels[j])


class _Lookup:
    """Distance lookup on a target indexed by S_{n,m}, with Ptolemy checks on the quadruples actually used."""

    def __init__(self, target: DistanceMatrix, check_used: bool):
        self.target = target
        self.index = {lab: i for i, lab in enumerate(target.labels)}
        self.check_used = check_used
        self.checked = 0

    def dist(self, I: BitIndex, J: BitIndex) -> float:
        return float(self.target.d[self.index[bits_label(I)], self.index[bits_label(J)]])

    def require_ptolemy(self, pts: List[BitIndex]) -> None:
        if not self.check_used:
            return
        idx = [self.index[bits_label(p)] for p in pts]
        sub = self.target.d[np.ix_(idx, idx)][None, :, :]
        slack = float(ptolemy_slack_batch(sub)[0])
        self.checked += 1
        scale = float(sub.max()) ** 2
        if slack < -REL_TOL * scale:
            raise PreconditionError(f"Target violates Ptolemy on {[bits_label(p) for p in pts]} "
                                    f"(slack {slack:.3e}); the diagonal bound does not apply")


def _canonical_cube(m: int) -> List[BitIndex]:
    return [(0,) + rest for rest in itertools.product((0, 1), repeat=m - 1)]


def _brute(look: _Lookup, n: int, m: int, sample: Optional[int], rng) -> Tuple[MultiIndex, BitIndex, float]:
    cube = _canonical_cube(m)
    if sample is None:
        Ks = multi_indices(n, m)
    else:
        rng = rng if rng is not None else np.random.default_rng(0)
        Ks = sorted({tuple(sorted(int(k) + 1 for k in rng.choice(n, 2 * m, replace=False))) for _ in range(sample)})
    best = (None, None, math.inf)
    for K in Ks:
        for a in cube:
            length = look.dist(phi(K, a, n), phi(K, complement(a), n))
            if length < best[2]:
                best = (tuple(K), a, length)
    return best


def _inductive(look: _Lookup, level: int, ns: List[int], embed: Embedding, threads: int):
    """
    Replays the induction: returns (K', a, length) for the level-cube sitting in S_{n_level, level}
    through `embed`, with length^2 <= level * b^2 whenever the target is Ptolemaic.
    """
    if level == 1:
        a = (0,)
        return (1, 2), a, look.dist(embed((1, 0)), embed((0, 1)))

    n_prev = ns[level - 2]
    p = pigeonhole_count(level, n_prev)

    def lift(i: int) -> Embedding:
        tail = tuple(1 if k == i else 0 for k in range(p))
        return lambda I: embed(tuple(I) + tail)

    # top level fans out; deeper levels run inline
    subs = parallel_map(lambda i: _inductive(look, level - 1, ns, lift(i), 1), list(range(p)),
                        threads if level == len(ns) else 1)

    seen: Dict[Tuple[MultiIndex, BitIndex], int] = {}
    pairs = []
    for i, (K_sub, a, _) in enumerate(subs):
        key = (K_sub, a)
        if key in seen:
            pairs.append((K_sub, a, seen[key], i))
        else:
            seen[key] = i
    if not pairs:
        raise RuntimeError(f"No repeated diagonal among {p} lifts at level {level}")
    K_sub, a, i1, i2 = min(pairs)

    K = tuple(K_sub) + (n_prev + i1 + 1, n_prev + i2 + 1)
    ab = complement(a)

    def y(bits: BitIndex) -> BitIndex:
        return embed(phi(K, bits, ns[level - 1]))

    a0, a1, b0, b1 = y(a + (0,)), y(a + (1,)), y(ab + (0,)), y(ab + (1,))
    look.require_ptolemy([a0, b0, a1, b1])
    first = look.dist(a0, b1)
    second = look.dist(b0, a1)
    if first <= second:
        return K, a + (0,), first
    return K, a + (1,), second


def find_short_diagonal(
    target: DistanceMatrix,
    m: int,
    b: Optional[float] = None,
    strategy: str = "inductive",
    threads: int = 1,
    sample: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> DiagonalWitness:
    """
    Multiindex K and a complementary pair (I, I') of {0,1}^m whose images under
    the target have length <= sqrt(m) b.

    `inductive` follows the proof: canonical lifts, pigeonhole over
    (multiindex, diagonal) and the four-point Ptolemy step. `brute` scans all
    multiindices (or `sample` random ones) and returns the shortest diagonal.
    """
    sl = slice_of_target(target)
    n = sl.n
    if sl.m != m:
        raise StructuralError(f"Target is indexed by S_{{{n},{sl.m}}}, not m={m}")
    if n < 2 * m:
        raise PreconditionError(f"n={n} is too small for a {m}-cube (need n >= {2 * m})")

    measured, worst_pair = side_bound(target, sl)
    if b is None:
        b = measured
    elif measured > b * (1 + REL_TOL):
        raise PreconditionError(f"Side bound broken: pair {worst_pair} has distance {measured:.12g} > b = {b:.12g}")

    full = math.comb(len(sl), 4) <= FULL_PTOLEMY_LIMIT
    if full:
        report = ptolemy_check(target, tol=REL_TOL * float(target.d.max()) ** 2, threads=threads)
        if not report.satisfied:
            raise PreconditionError(f"Target violates Ptolemy on {report.worst_quadruple} "
                                    f"(slack {report.worst_slack:.3e})")
    look = _Lookup(target, check_used=not full)

    if strategy == "brute":
        if n < n_schedule(m)[-1]:
            log.warning(f"n={n} is below the schedule value {n_schedule(m)[-1]}; no diagonal bound is guaranteed")
        K, a, length = _brute(look, n, m, sample, rng)
    elif strategy == "inductive":
        ns = n_schedule(m)
        if n < ns[-1]:
            raise PreconditionError(f"Inductive search needs n >= {ns[-1]} for m={m}, got n={n}")
        pad = (0,) * (n - ns[-1])
        K, a, length = _inductive(look, m, ns, lambda I: tuple(I) + pad, threads)
    else:
        raise PreconditionError(f"Unknown strategy '{strategy}' (expected 'inductive' or 'brute')")

    if not full:
        log.info(f"Ptolemy precondition checked on the {look.checked} quadruples used")
    ab = complement(a)
    witness = DiagonalWitness(
        K=tuple(K),
        cube_endpoints=(a, ab),
        endpoints=(phi(K, a, n), phi(K, ab, n)),
        length=length,
        bound=math.sqrt(m) * b,
        strategy=strategy,
    )
    if not witness.qualifies:
        log.warning(f"{strategy} diagonal {length:.12g} exceeds sqrt(m) b = {witness.bound:.12g}")
    return witness

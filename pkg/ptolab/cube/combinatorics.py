from __future__ import annotations
import itertools
import logging
import math
from functools import lru_cache
from typing import Iterator, List, Optional, Sequence

import numpy as np

from ptolab.errors import PreconditionError, StructuralError
from ptolab.types import BitIndex, L1Point, MultiIndex, Slice

log = logging.getLogger("Ptolab.Cube")


def bits_label(bits: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def label_bits(label: str) -> BitIndex:
    if not label or any(ch not in "01" for ch in label):
        raise StructuralError(f"'{label}' is not a 0/1 index")
    return tuple(int(ch) for ch in label)


def hamming_distance(I: Sequence[int], J: Sequence[int]) -> int:
    if len(I) != len(J):
        raise PreconditionError(f"Index lengths differ: {len(I)} vs {len(J)}")
    return sum(1 for x, y in zip(I, J) if x != y)


def complement(I: Sequence[int]) -> BitIndex:
    return tuple(1 - int(x) for x in I)


@lru_cache(maxsize=16)
def slice_elements(n: int, m: int) -> Slice:
    """S_{n,m}: all 0/1 vectors of length n with exactly m ones, in lexicographic order of their supports."""
    if not (0 <= m <= n):
        raise PreconditionError(f"Need 0 <= m <= n, got n={n}, m={m}")
    elems = []
    for support in itertools.combinations(range(n), m):
        bits = [0] * n
        for k in support:
            bits[k] = 1
        elems.append(tuple(bits))
    return Slice(n=n, m=m, elements=tuple(elems))


def slice_size(n: int, m: int) -> int:
    return math.comb(n, m)


def validate_multi_index(K: Sequence[int], n: int, m: int) -> MultiIndex:
    K = tuple(int(k) for k in K)
    if len(K) != 2 * m:
        raise PreconditionError(f"Multiindex {K} must have 2m = {2 * m} entries")
    if any(b <= a for a, b in zip(K, K[1:])) or (K and (K[0] < 1 or K[-1] > n)):
        raise PreconditionError(f"Multiindex {K} must be strictly increasing within 1..{n}")
    return K


def multi_indices(n: int, m: int) -> Iterator[MultiIndex]:
    return itertools.combinations(range(1, n + 1), 2 * m)


def phi(K: Sequence[int], I: Sequence[int], n: Optional[int] = None) -> BitIndex:
    """
    phi_K(i_1, ..., i_m) = sum_j phi_{k_{2j-1} k_{2j}}(i_j), where phi_{ab}(0) = e_a and phi_{ab}(1) = e_b.
    K is 1-based; n defaults to the last entry of K.
    """
    m = len(I)
    n = int(K[-1]) if n is None else n
    K = validate_multi_index(K, n, m)
    out = [0] * n
    for j, bit in enumerate(I):
        if bit not in (0, 1):
            raise PreconditionError(f"Cube index {tuple(I)} is not a 0/1 vector")
        out[K[2 * j + int(bit)] - 1] = 1
    return tuple(out)


def n_schedule(m: int) -> List[int]:
    """n_1 = 2 and n_k = n_{k-1} + 2^{k-1} C(n_{k-1}, 2k-2) + 1, exact integers."""
    if m < 1:
        raise PreconditionError(f"m must be >= 1, got {m}")
    ns = [2]
    for k in range(2, m + 1):
        ns.append(ns[-1] + pigeonhole_count(k, ns[-1]))
    return ns


def pigeonhole_count(k: int, n_prev: int) -> int:
    """p = 2^{k-1} C(n_{k-1}, 2k-2) + 1 lifts guarantee a repeated (multiindex, diagonal) pair."""
    return 2 ** (k - 1) * math.comb(n_prev, 2 * k - 2) + 1


def scaling_map(I: Sequence[int]) -> L1Point:
    """I -> I/m, a point on the unit sphere of l1."""
    bits = np.asarray(I, dtype=float)
    m = bits.sum()
    if m == 0:
        raise PreconditionError("The zero index is not in any slice with m >= 1")
    return L1Point(coords=bits / m)


def slice_bit_matrix(sl: Slice) -> np.ndarray:
    return np.array(sl.elements, dtype=np.int64).reshape(len(sl), sl.n)

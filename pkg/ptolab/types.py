from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ptolab.errors import PreconditionError, StructuralError, UnknownLabelError

BitIndex = Tuple[int, ...]
MultiIndex = Tuple[int, ...]
Quadruple = Tuple[str, str, str, str]
Triple = Tuple[str, str, str]

# relative slack allowed when symmetrizing parsed or computed matrices
_SYMMETRY_RTOL = 1e-12


def _as_float_matrix(d) -> np.ndarray:
    try:
        arr = np.array(d, dtype=float)
    except (TypeError, ValueError) as e:
        raise StructuralError(f"Distance entries are not numeric: {e}") from e
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise StructuralError(f"Distance matrix must be square, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    labels: Tuple[str, ...]
    d: np.ndarray
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        arr = _as_float_matrix(self.d)
        n = arr.shape[0]

        if n < 1:
            raise StructuralError("Distance matrix needs at least one point")
        if len(labels) != n:
            raise StructuralError(f"{len(labels)} labels for a {n}x{n} matrix")
        if len(set(labels)) != n:
            dupes = sorted({x for x in labels if labels.count(x) > 1})
            raise StructuralError(f"Duplicate labels: {dupes}")
        if not np.all(np.isfinite(arr)):
            raise StructuralError("Distance matrix contains non-finite entries")
        if np.any(arr < 0):
            i, j = np.argwhere(arr < 0)[0]
            raise StructuralError(f"Negative distance d({labels[i]},{labels[j]}) = {arr[i, j]}")

        scale = max(1.0, float(np.abs(arr).max()))
        asym = np.abs(arr - arr.T)
        if asym.max() > _SYMMETRY_RTOL * scale:
            i, j = np.unravel_index(int(np.argmax(asym)), asym.shape)
            raise StructuralError(
                f"Distance matrix is not symmetric at ({labels[i]},{labels[j]}): "
                f"{arr[i, j]} vs {arr[j, i]}"
            )
        arr = 0.5 * (arr + arr.T)

        if np.any(np.diag(arr) != 0):
            i = int(np.argmax(np.diag(arr) != 0))
            raise StructuralError(f"Nonzero diagonal entry at {labels[i]}: {arr[i, i]}")
        off = arr + np.eye(n)
        if np.any(off <= 0):
            i, j = np.argwhere(off <= 0)[0]
            raise StructuralError(f"Distinct points {labels[i]} and {labels[j]} are at distance 0")

        arr.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "d", arr)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise UnknownLabelError(label, self.labels) from None

    def value(self, a, b) -> float:
        return float(self.d[self.index(a), self.index(b)])

    def submatrix(self, labels: Sequence[str]) -> "DistanceMatrix":
        idx = [self.index(x) for x in labels]
        return DistanceMatrix(labels=tuple(self.labels[i] for i in idx), d=self.d[np.ix_(idx, idx)])

    def reordered(self, labels: Sequence[str]) -> "DistanceMatrix":
        """Same space, rows ordered as `labels` (which must be a permutation of ours)."""
        if sorted(map(str, labels)) != sorted(self.labels):
            raise StructuralError("Label sets differ; cannot align matrices")
        return self.submatrix(labels)

    def scaled(self, factor: float) -> "DistanceMatrix":
        if factor <= 0:
            raise PreconditionError(f"Scale factor must be positive, got {factor}")
        return DistanceMatrix(labels=self.labels, d=self.d * factor)

    def to_dict(self) -> Dict[str, Any]:
        return {"labels": list(self.labels), "d": self.d.tolist()}

    def __repr__(self):
        return f"DistanceMatrix(n={self.n}, labels={list(self.labels[:6])}{'...' if self.n > 6 else ''})"


@dataclass(frozen=True, eq=False)
class QuasiMetricSpace:
    matrix: DistanceMatrix
    K: float
    # matrix holds the quasi-metric multiplied by exp(log_scale)
    log_scale: float = 0.0

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.matrix.labels

    @property
    def n(self) -> int:
        return self.matrix.n


@dataclass
class MetricAxiomsReport:
    is_metric: bool
    violations: List[Triple] = field(default_factory=list)
    worst_slack: float = 0.0
    tol: float = 1e-9


@dataclass
class PtolemyReport:
    satisfied: bool
    worst_quadruple: Optional[Quadruple] = None
    worst_slack: float = 0.0
    equality_quadruples: List[Quadruple] = field(default_factory=list)
    equality_count: int = 0
    quadruples_checked: int = 0
    tol: float = 1e-9
    eq_tol: float = 1e-7

    def __repr__(self):
        return (f"PtolemyReport(satisfied={self.satisfied}, worst={self.worst_quadruple}, "
                f"slack={self.worst_slack:.3g}, equalities={len(self.equality_quadruples)})")


@dataclass
class MobiusReport:
    equivalent: bool
    witness: Optional[Quadruple] = None
    value: Optional[float] = None
    other_value: Optional[float] = None
    max_relative_defect: float = 0.0

    def __bool__(self) -> bool:
        return self.equivalent


@dataclass
class FourPointNormalForm:
    a: float
    b: float
    c: float
    order: Quadruple
    scale: float

    def as_matrix(self) -> DistanceMatrix:
        """Metric d' on the renumbered labels: sides a, b, a, b and both diagonals c."""
        a, b, c = self.a, self.b, self.c
        d = np.array([
            [0.0, a, c, b],
            [a, 0.0, b, c],
            [c, b, 0.0, a],
            [b, c, a, 0.0],
        ])
        return DistanceMatrix(labels=self.order, d=d)


@dataclass
class ChainMetricResult:
    ca: DistanceMatrix
    distortion: float
    witness_pair: Optional[Tuple[str, str]] = None


@dataclass
class DistortionCurve:
    s_values: List[float]
    c_values: List[float]
    witness_pairs: List[Optional[Tuple[str, str]]] = field(default_factory=list)
    findings: List[str] = field(default_factory=list)
    size: int = 0


@dataclass
class CriticalExponentEstimate:
    lower: Optional[float]
    upper: Optional[float]
    sizes: List[int] = field(default_factory=list)
    curves: List[DistortionCurve] = field(default_factory=list)
    divergence_threshold: float = 0.0
    heuristic: bool = True

    @property
    def infinite(self) -> bool:
        return self.upper is None

    @property
    def curvature_bound(self) -> Tuple[float, float]:
        """K_u = -s0^2 evaluated at both bracket ends, (from upper, from lower)."""
        hi = -np.inf if self.upper is None else -(self.upper ** 2)
        lo = -np.inf if self.lower is None else -(self.lower ** 2)
        return float(hi), float(lo)


@dataclass
class GromovReport:
    basepoint: str
    delta: float
    worst_quadruple: Optional[Quadruple] = None


@dataclass
class GlobalDeltaReport:
    delta_global: float
    delta_per_basepoint: Dict[str, float] = field(default_factory=dict)
    worst: Optional[GromovReport] = None
    doubling_ok: bool = True
    doubling_violations: List[Tuple[str, str]] = field(default_factory=list)


class HypModel(str, Enum):
    POINCARE_BALL = "poincare_ball"
    HYPERBOLOID = "hyperboloid"


@dataclass(eq=False)
class IdealConfig:
    model: HypModel
    basepoint: np.ndarray
    ideal_points: np.ndarray
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        self.model = HypModel(self.model)
        self.basepoint = np.asarray(self.basepoint, dtype=float)
        pts = np.atleast_2d(np.asarray(self.ideal_points, dtype=float))
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-9):
            raise PreconditionError(f"Ideal points must be unit vectors, norms {norms.round(12).tolist()}")
        self.ideal_points = pts / norms[:, None]
        if not self.labels:
            self.labels = tuple(f"y{i + 1}" for i in range(len(pts)))
        self.labels = tuple(str(x) for x in self.labels)
        if len(self.labels) != len(pts):
            raise StructuralError(f"{len(self.labels)} labels for {len(pts)} ideal points")

    @property
    def n(self) -> int:
        """Dimension of the hyperbolic space."""
        return self.ideal_points.shape[1]


@dataclass(eq=False)
class BourdonMetric:
    matrix: DistanceMatrix
    basepoint: Any = None
    cone_angle: Optional[float] = None


@dataclass
class EqualityAngle:
    alpha: float
    a_squared: float
    b_squared: float
    orthogonal: bool


@dataclass(frozen=True)
class Slice:
    n: int
    m: int
    elements: Tuple[BitIndex, ...]

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple("".join(map(str, e)) for e in self.elements)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass
class DiagonalWitness:
    K: MultiIndex
    cube_endpoints: Tuple[BitIndex, BitIndex]
    endpoints: Tuple[BitIndex, BitIndex]
    length: float
    bound: float
    strategy: str

    @property
    def qualifies(self) -> bool:
        return self.length <= self.bound * (1 + 1e-9)


@dataclass(eq=False)
class CubeInstance:
    n: int
    m: int
    slice: Slice
    target: DistanceMatrix
    b: float
    c: float = 1.0


@dataclass
class ObstructionRow:
    m: int
    n: int
    c: float
    b: float
    best_diagonal: float
    diagonal_bound: float
    long_pair_lower_bound: float
    constraint_lhs: float
    constraint_rhs: float
    required_c: float
    measured_side: float = float("nan")
    implied_c: float = float("nan")
    witness: Optional[DiagonalWitness] = None

    @property
    def constraint_slack(self) -> float:
        return self.constraint_lhs - self.constraint_rhs


@dataclass
class ObstructionExperiment:
    q: float
    rows: List[ObstructionRow] = field(default_factory=list)
    verdict: Dict[str, Any] = field(default_factory=dict)


@dataclass(eq=False)
class L1Point:
    coords: np.ndarray

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=float).ravel()
        norm = float(np.abs(self.coords).sum())
        if norm > 1 + 1e-12:
            raise PreconditionError(f"l1 norm {norm} exceeds 1")

    @property
    def dimension(self) -> int:
        return self.coords.size


@dataclass(eq=False)
class SpherePoint:
    coords: np.ndarray

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=float).ravel()
        norm = float(np.linalg.norm(self.coords))
        if abs(norm - 1.0) > 1e-12:
            raise PreconditionError(f"Sphere point has norm {norm}")

    def __array__(self, dtype=None, copy=None):
        return self.coords if dtype is None else self.coords.astype(dtype)

    @property
    def dimension(self) -> int:
        """n for a point of S^n."""
        return self.coords.size - 1


@dataclass(eq=False)
class PointCloud:
    labels: Tuple[str, ...]
    coords: np.ndarray
    space: str = "euclidean"

    def __post_init__(self):
        self.coords = np.atleast_2d(np.asarray(self.coords, dtype=float))
        self.labels = tuple(str(x) for x in self.labels)
        if len(self.labels) != self.coords.shape[0]:
            raise StructuralError(f"{len(self.labels)} labels for {self.coords.shape[0]} points")

    def __len__(self) -> int:
        return self.coords.shape[0]


@dataclass
class BourdonLimit:
    theta: float
    t_values: List[float]
    values: List[float]
    estimate: float
    defect: float


@dataclass
class SixPointScanRow:
    a: float
    b: float
    c: float
    is_metric: bool
    ptolemaic: bool
    triangle_witness: Optional[Triple] = None
    ptolemy_witness: Optional[Quadruple] = None

    @property
    def admissible(self) -> bool:
        return self.is_metric and self.ptolemaic


@dataclass(eq=False)
class InversionResult:
    image: np.ndarray
    defect: Optional[float] = None


@dataclass(eq=False)
class CompositeEmbedding:
    points: PointCloud
    sphere: PointCloud
    chordal: DistanceMatrix
    l1_distances: np.ndarray
    fitted_exponent: Optional[float]
    constant: float
    ptolemy: PtolemyReport
    resolution: int = 0
    scale: float = 0.25

    @property
    def bourdon(self) -> DistanceMatrix:
        """Bourdon metric at the origin of the infinite-dimensional model: half the chordal metric."""
        return self.chordal.scaled(0.5)


@dataclass
class CheckFinding:
    name: str
    passed: bool
    summary: str = ""
    details: Dict[str, Any] = field(default_factory=dict)

    def __repr__(self):
        return f"CheckFinding({self.name}, passed={self.passed})"


@dataclass
class CheckSelection:
    findings: List[CheckFinding] = field(default_factory=list)
    passed: bool = True
    alerts: List[str] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)


@dataclass
class SuiteResult:
    name: str
    count: int
    failures: int
    worst: float
    seed: int
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

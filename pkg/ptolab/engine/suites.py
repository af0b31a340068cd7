from __future__ import annotations
import itertools
import logging
import math
from typing import Callable, Dict

import numpy as np

from ptolab.errors import PreconditionError
from ptolab.metric.core import check_metric_axioms, involute
from ptolab.metric.generators import (
    random_ideal_config,
    random_metric,
    random_metric_batch,
    random_quasi_metric,
    random_tree_metric,
)
from ptolab.metric.hyperbolicity import (
    basepoint_change_identity_check,
    boundary_quasimetric,
    delta_at_basepoint,
    delta_global,
)
from ptolab.metric.metrization import FRINK_BOUND, chain_metric
from ptolab.metric.ptolemy import ptolemy_check, ptolemy_slack_batch
from ptolab.models.hyperbolic import bourdon_limit, bourdon_metric
from ptolab.types import DistanceMatrix, HypModel, IdealConfig, SuiteResult

log = logging.getLogger("Ptolab.Engine")

SuiteFn = Callable[..., SuiteResult]

DEFAULT_COUNTS = {
    "sqrt-ptolemy": 100_000,
    "frink": 10_000,
    "involution": 10_000,
    "model-ptolemy": 10_000,
    "hyperbolicity": 1_000,
    "bourdon-limit": 100,
}


def _finish(name: str, count: int, failures: int, worst: float, seed: int, **details) -> SuiteResult:
    result = SuiteResult(name=name, count=count, failures=failures, worst=float(worst), seed=seed, details=details)
    level = logging.INFO if result.passed else logging.ERROR
    log.log(level, f"Suite {name}: {failures}/{count} failures, worst {worst:.6g} (seed {seed})")
    return result


def sqrt_ptolemy_suite(count: int, seed: int = 0, tol: float = 1e-12, threads: int = 1) -> SuiteResult:
    """The square root of a random 4-point metric satisfies Ptolemy."""
    rng = np.random.default_rng(seed)
    batch = 10_000
    worst = math.inf
    failures = 0
    done = 0
    while done < count:
        size = min(batch, count - done)
        d = np.sqrt(random_metric_batch(size, 4, rng))
        slack = ptolemy_slack_batch(d)
        failures += int(np.count_nonzero(slack < -tol))
        worst = min(worst, float(slack.min()))
        done += size
    return _finish("sqrt-ptolemy", count, failures, worst, seed, tol=tol)


def frink_suite(count: int, seed: int = 0, max_n: int = 50, threads: int = 1) -> SuiteResult:
    """Chain metric of a random 2-quasi-metric is a metric within factor 4 of it."""
    if max_n < 3:
        raise PreconditionError(f"max_n must be at least 3, got {max_n}")
    rng = np.random.default_rng(seed)
    worst = 1.0
    failures = 0
    not_metric = 0
    for _ in range(count):
        n = int(rng.integers(3, max_n + 1))
        Q = random_quasi_metric(n, rng, max_K=2.0)
        result = chain_metric(Q)
        worst = max(worst, result.distortion)
        is_metric = check_metric_axioms(result.ca, limit=1).is_metric
        if not is_metric:
            not_metric += 1
        if result.distortion > FRINK_BOUND + 1e-12 or not is_metric:
            failures += 1
    return _finish("frink", count, failures, worst, seed, max_n=max_n, not_metric=not_metric)


def _ptolemy_brute(D: DistanceMatrix, tol: float) -> bool:
    d = D.d
    for i, j, k, l in itertools.combinations(range(D.n), 4):
        p, q, r = d[i, j] * d[k, l], d[i, k] * d[j, l], d[i, l] * d[j, k]
        if max(p, q, r) > p + q + r - max(p, q, r) + tol:
            return False
    return True


def involution_suite(count: int, seed: int = 0, n: int = 5, tol: float = 1e-9, threads: int = 1) -> SuiteResult:
    """
    d_z is a metric for every z exactly when Ptolemy holds, cross-checked
    against a loop over all quadruples. Samples whose Ptolemy slack sits
    within a few tolerances of zero are counted as borderline, not failures.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    borderline = 0
    ptolemaic = 0
    worst = 0.0
    for idx in range(count):
        D = random_metric(n, rng, kind="uniform" if idx % 2 == 0 else "closure")
        involution_ok = all(check_metric_axioms(involute(D, z), tol=tol, limit=1).is_metric for z in D.labels)
        report = ptolemy_check(D, tol=tol, threads=threads)
        brute_ok = _ptolemy_brute(D, tol)
        ptolemaic += int(report.satisfied)
        if involution_ok == report.satisfied == brute_ok:
            continue
        if abs(report.worst_slack) <= 10 * tol:
            borderline += 1
            continue
        failures += 1
        worst = max(worst, abs(report.worst_slack))
        log.debug(f"Involution/Ptolemy disagreement at sample {idx}: involution={involution_ok}, "
                  f"ptolemy={report.satisfied}, brute={brute_ok}")
    return _finish("involution", count, failures, worst, seed, n=n, ptolemaic=ptolemaic, borderline=borderline)


# unit vectors are concyclic on the sphere exactly when they are coplanar
CONCYCLIC_BAND = 1e-2


def concyclic_gap(points: np.ndarray) -> float:
    """Smallest over largest singular value of the centered points; 0 exactly when they are coplanar."""
    pts = np.asarray(points, dtype=float)
    s = np.linalg.svd(pts - pts.mean(axis=0), compute_uv=False)
    return float(s[-1] / s[0]) if s[0] > 0 else 0.0


def _concyclic_directions(rng: np.random.Generator, k: int = 4) -> np.ndarray:
    """k points on a random circle of the unit 2-sphere."""
    normal = rng.normal(size=3)
    normal /= np.linalg.norm(normal)
    u = np.cross(normal, rng.normal(size=3))
    u /= np.linalg.norm(u)
    v = np.cross(normal, u)
    c = rng.uniform(-0.9, 0.9)
    phi = rng.uniform(0.0, 2 * math.pi, size=k)
    r = math.sqrt(1 - c * c)
    return c * normal + r * (np.cos(phi)[:, None] * u + np.sin(phi)[:, None] * v)


def model_ptolemy_suite(count: int, seed: int = 0, tol: float = 1e-9, eq_tol: float = 1e-7, threads: int = 1) -> SuiteResult:
    """
    Bourdon metrics of random 4-point ideal configurations in H^2 and H^3 satisfy
    Ptolemy, with equality exactly for concyclic boundary points (always in H^2).
    Every other H^3 sample is planted on a circle; basepoints are random. A random H^3
    sample that Ptolemy reports as an equality while its boundary points lie within
    CONCYCLIC_BAND of a plane is counted as borderline, not as a mismatch.
    """
    rng = np.random.default_rng(seed)
    failures = violations = mismatches = borderline = 0
    worst = math.inf
    for idx in range(count):
        dim = 2 if idx % 2 == 0 else 3
        planted = dim == 3 and idx % 4 == 3
        base = rng.normal(size=dim)
        base *= rng.uniform(0.0, 0.9) / np.linalg.norm(base)
        if planted:
            config = IdealConfig(model=HypModel.POINCARE_BALL, basepoint=base, ideal_points=_concyclic_directions(rng))
        else:
            config = random_ideal_config(4, dim, rng, basepoint=base)
        try:
            B = bourdon_metric(config)
        except PreconditionError:
            log.debug(f"Skipping degenerate configuration at sample {idx}")
            continue
        report = ptolemy_check(B.matrix, tol=tol, eq_tol=eq_tol)
        worst = min(worst, report.worst_slack)
        expect_equality = dim == 2 or planted
        bad = False
        if not report.satisfied:
            violations += 1
            bad = True
        found_equality = report.equality_count > 0
        if found_equality != expect_equality:
            if found_equality and concyclic_gap(config.ideal_points) < CONCYCLIC_BAND:
                borderline += 1
                log.debug(f"Near-concyclic sample {idx}: slack {report.worst_slack:.3e}")
            else:
                mismatches += 1
                bad = True
        failures += int(bad)
    return _finish("model-ptolemy", count, failures, worst, seed, violations=violations,
                   equality_mismatches=mismatches, borderline=borderline)


def hyperbolicity_suite(count: int, seed: int = 0, threads: int = 1) -> SuiteResult:
    """
    Random metrics: delta(o') <= 2 delta(o), K of the boundary quasi-metric at most
    e^delta, and the basepoint change identity. Every tenth sample is a tree metric,
    which must have delta = 0.
    """
    rng = np.random.default_rng(seed)
    failures = 0
    worst_identity = 0.0
    tree_worst = 0.0
    counts = {"doubling": 0, "k_bound": 0, "identity": 0, "tree": 0}
    for idx in range(count):
        if idx % 10 == 9:
            D = random_tree_metric(int(rng.integers(4, 10)), rng)
            delta = delta_global(D, threads=threads).delta_global
            tree_worst = max(tree_worst, delta)
            if delta > 1e-12:
                counts["tree"] += 1
                failures += 1
            continue

        D = random_metric(int(rng.integers(4, 10)), rng, kind="closure")
        bad = False
        if not delta_global(D, threads=threads).doubling_ok:
            counts["doubling"] += 1
            bad = True
        o, o2 = rng.choice(D.labels, size=2, replace=False)
        K = boundary_quasimetric(D, o).K
        if K > math.exp(delta_at_basepoint(D, o).delta) + 1e-9:
            counts["k_bound"] += 1
            bad = True
        defect = basepoint_change_identity_check(D, o, o2)
        worst_identity = max(worst_identity, defect)
        if defect > 1e-12:
            counts["identity"] += 1
            bad = True
        failures += int(bad)
    return _finish("hyperbolicity", count, failures, worst_identity, seed, tree_delta=tree_worst, **counts)


def bourdon_limit_suite(count: int, seed: int = 0, t_max: float = 20.0, tol: float = 1e-6, threads: int = 1) -> SuiteResult:
    """(e^{h_t} e^{-2t})^{1/2} approaches sin(theta/2) at t_max for random angles in (0.05, pi]."""
    rng = np.random.default_rng(seed)
    thetas = np.sort(rng.uniform(0.05, math.pi, size=count))
    defects = [bourdon_limit(float(th), t_max=t_max).defect for th in thetas]
    worst = max(defects, default=0.0)
    failures = sum(1 for d in defects if d > tol)
    return _finish("bourdon-limit", count, failures, worst, seed, t_max=t_max, tol=tol)


SUITES: Dict[str, SuiteFn] = {
    "sqrt-ptolemy": sqrt_ptolemy_suite,
    "frink": frink_suite,
    "involution": involution_suite,
    "model-ptolemy": model_ptolemy_suite,
    "hyperbolicity": hyperbolicity_suite,
    "bourdon-limit": bourdon_limit_suite,
}


def run_suite(name: str, count: int | None = None, seed: int = 0, threads: int = 1) -> SuiteResult:
    fn = SUITES.get(name)
    if fn is None:
        raise PreconditionError(f"Unknown suite '{name}' (known: {sorted(SUITES)})")
    n = DEFAULT_COUNTS[name] if count is None else count
    if n < 1:
        raise PreconditionError(f"Suite count must be positive, got {n}")
    return fn(n, seed=seed, threads=threads)

from __future__ import annotations
import logging
from typing import Iterable, Optional

from ptolab.checks.base import Context
from ptolab.checks.four_point import FourPointNormalFormCheck
from ptolab.checks.involution import InvolutionCheck
from ptolab.checks.metric_axioms import MetricAxiomsCheck
from ptolab.checks.ptolemy import PtolemyCheck
from ptolab.checks.quasi_constant import QuasiConstantCheck
from ptolab.errors import PreconditionError
from ptolab.system.config import default_eq_tol, default_tol
from ptolab.types import CheckSelection, DistanceMatrix

log = logging.getLogger("Ptolab.Engine")

PIPELINE = [
    MetricAxiomsCheck(),         # 1. Triangle inequality
    QuasiConstantCheck(),        # 2. Quasi-metric constant K (informational)
    PtolemyCheck(),              # 3. Ptolemy over all quadruples
    InvolutionCheck(),           # 4. d_z metric for every z
    FourPointNormalFormCheck(),  # 5. (a, b, 1) normal form, 4 points only
]

DEFAULT_CHECKS = ("metric", "ptolemy")


def build_context(
    matrix: DistanceMatrix,
    tol: Optional[float] = None,
    eq_tol: Optional[float] = None,
    threads: int = 1,
    involution_limit: Optional[int] = None,
) -> Context:
    if involution_limit is not None and involution_limit < 1:
        raise PreconditionError(f"involution_limit must be positive, got {involution_limit}")
    return Context(
        matrix=matrix,
        tol=default_tol() if tol is None else tol,
        eq_tol=default_eq_tol() if eq_tol is None else eq_tol,
        threads=max(1, threads),
        involution_limit=involution_limit,
    )


def run_checks(
    matrix: DistanceMatrix,
    names: Optional[Iterable[str]] = None,
    tol: Optional[float] = None,
    eq_tol: Optional[float] = None,
    threads: int = 1,
    involution_limit: Optional[int] = None,
) -> CheckSelection:
    """
    Run the named checks in pipeline order. `involution_limit` caps the centers
    z tried by the involution check (the first labels in order).
    """
    wanted = list(DEFAULT_CHECKS if names is None else names)
    known = {c.name for c in PIPELINE}
    unknown = sorted(set(wanted) - known)
    if unknown:
        raise PreconditionError(f"Unknown checks {unknown} (known: {sorted(known)})")

    ctx = build_context(matrix, tol, eq_tol, threads, involution_limit)

    for check in PIPELINE:
        if check.name not in wanted:
            continue
        try:
            check.apply(ctx)
        except Exception as e:
            log.error(f"Check '{check.name}' failed on {matrix!r}: {e}", exc_info=True)
            ctx.alerts.append(f"Internal Error: Check {check.name} failed: {e}")

    findings = list(ctx.findings.values())
    ctx.meta["alerts"] = ctx.alerts
    ctx.meta["labels"] = list(matrix.labels)
    ctx.meta["tol"] = ctx.tol
    ctx.meta["eq_tol"] = ctx.eq_tol

    return CheckSelection(
        findings=findings,
        passed=all(f.passed for f in findings) and not ctx.alerts,
        alerts=ctx.alerts,
        meta=ctx.meta,
    )

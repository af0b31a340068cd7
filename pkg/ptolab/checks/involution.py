from __future__ import annotations

from ptolab.checks.base import CheckBase, Context
from ptolab.metric.core import check_metric_axioms, involute
from ptolab.types import CheckFinding


class InvolutionCheck(CheckBase):
    """d_z is a metric for every z; equivalent to the Ptolemy inequality on the whole space."""
    name = "involution"

    def apply(self, ctx: Context) -> None:
        D = ctx.matrix
        if D.n < 3:
            ctx.findings[self.name] = CheckFinding(self.name, True, "fewer than 3 points, nothing to check")
            return
        labels = D.labels if ctx.involution_limit is None else D.labels[:ctx.involution_limit]
        failing = {}
        for z in labels:
            report = check_metric_axioms(involute(D, z), tol=ctx.tol, limit=1)
            if not report.is_metric:
                failing[z] = report.violations[0]
        passed = not failing
        summary = (f"d_z is a metric for all {len(labels)} centers" if passed
                   else f"d_z fails the triangle inequality for {len(failing)} centers")
        ctx.findings[self.name] = CheckFinding(
            name=self.name, passed=passed, summary=summary,
            details={"failing_centers": failing, "centers_checked": len(labels)},
        )

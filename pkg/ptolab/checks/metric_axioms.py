from __future__ import annotations

from ptolab.checks.base import CheckBase, Context
from ptolab.metric.core import check_metric_axioms
from ptolab.types import CheckFinding

MAX_LISTED_VIOLATIONS = 1000


class MetricAxiomsCheck(CheckBase):
    name = "metric"

    def apply(self, ctx: Context) -> None:
        report = check_metric_axioms(ctx.matrix, tol=ctx.tol, limit=MAX_LISTED_VIOLATIONS)
        summary = ("triangle inequality holds" if report.is_metric
                   else f"{len(report.violations)} triangle violations, first {report.violations[0]}")
        ctx.findings[self.name] = CheckFinding(
            name=self.name,
            passed=report.is_metric,
            summary=summary,
            details={"worst_slack": report.worst_slack, "violations": report.violations, "tol": report.tol},
        )
        ctx.meta["is_metric"] = report.is_metric

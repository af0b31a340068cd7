from __future__ import annotations

from ptolab.checks.base import CheckBase, Context
from ptolab.metric.ptolemy import ptolemy_check
from ptolab.types import CheckFinding


class PtolemyCheck(CheckBase):
    name = "ptolemy"

    def apply(self, ctx: Context) -> None:
        report = ptolemy_check(ctx.matrix, tol=ctx.tol, eq_tol=ctx.eq_tol, threads=ctx.threads)
        if report.satisfied:
            summary = f"Ptolemy holds on {report.quadruples_checked} quadruples, {report.equality_count} equalities"
        else:
            summary = f"Ptolemy violated on {report.worst_quadruple} (slack {report.worst_slack:.3e})"
        ctx.findings[self.name] = CheckFinding(
            name=self.name,
            passed=report.satisfied,
            summary=summary,
            details={
                "worst_quadruple": report.worst_quadruple,
                "worst_slack": report.worst_slack,
                "equality_quadruples": report.equality_quadruples,
                "equality_count": report.equality_count,
                "quadruples_checked": report.quadruples_checked,
            },
        )
        ctx.meta["ptolemy_report"] = report

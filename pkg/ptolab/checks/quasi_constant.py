from __future__ import annotations

from ptolab.checks.base import CheckBase, Context
from ptolab.metric.core import quasi_metric_constant
from ptolab.types import CheckFinding


class QuasiConstantCheck(CheckBase):
    """Informational: reports K and never fails."""
    name = "quasi"

    def apply(self, ctx: Context) -> None:
        K = quasi_metric_constant(ctx.matrix)
        ctx.findings[self.name] = CheckFinding(
            name=self.name,
            passed=True,
            summary=f"quasi-metric constant K = {K:.12g}",
            details={"K": K, "frink_applicable": K <= 2.0 + 1e-12},
        )

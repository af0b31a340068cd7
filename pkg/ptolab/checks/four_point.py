from __future__ import annotations

from ptolab.checks.base import CheckBase, Context
from ptolab.metric.core import canonical_four_point, mobius_equivalent
from ptolab.types import CheckFinding


class FourPointNormalFormCheck(CheckBase):
    name = "normal-form"

    def apply(self, ctx: Context) -> None:
        if ctx.matrix.n != 4:
            return
        nf = canonical_four_point(ctx.matrix)
        mob = mobius_equivalent(ctx.matrix, nf.as_matrix(), tol=1e-9)
        s = nf.a ** 2 + nf.b ** 2
        ctx.findings[self.name] = CheckFinding(
            name=self.name,
            passed=bool(mob),
            summary=f"normal form a={nf.a:.12g}, b={nf.b:.12g}, a^2 + b^2 = {s:.12g}",
            details={"a": nf.a, "b": nf.b, "order": nf.order, "scale": nf.scale,
                     "a2_plus_b2": s, "mobius_defect": mob.max_relative_defect},
        )

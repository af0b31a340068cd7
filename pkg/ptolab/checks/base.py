from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ptolab.types import CheckFinding, DistanceMatrix


@dataclass
class Context:
    matrix: DistanceMatrix
    tol: float
    eq_tol: float
    threads: int = 1
    involution_limit: Optional[int] = None
    findings: Dict[str, CheckFinding] = field(default_factory=dict)
    alerts: List[str] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)


class CheckBase:
    name: str = "CheckBase"

    def apply(self, ctx: Context) -> None:
        raise NotImplementedError
